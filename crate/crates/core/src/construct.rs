//! Constructions of orthogonal quantum Latin squares and cubes.
//!
//! Every constructor verifies its inputs at the given tolerance and returns
//! [`Error::VerificationFailed`] when they do not have the required property.

use std::collections::BTreeMap;

use crate::classical::{verify_classical, ClassicalProperty, LatinDesign};
use crate::linalg::{is_unitary, tensor, ComplexMatrix, ComplexVector};
use crate::qdesign::{
    conjugate, embed_classical, verify_hsoqls, verify_imoqls, verify_moqlc, verify_moqls,
    verify_qls, verify_soqls, QuantumGrid,
};
use crate::{Arity, Error, Result};

/// `U = Σᵢ |i⟩⟨i| ⊗ Uᵢ`, stored block by block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockUnitary {
    inner_dim: usize,
    blocks: Vec<ComplexMatrix>,
}

impl BlockUnitary {
    pub fn new(blocks: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let inner_dim = blocks
            .first()
            .ok_or_else(|| Error::InvalidParameter("block unitary needs at least one block".into()))?
            .rows();
        for (i, b) in blocks.iter().enumerate() {
            if b.rows() != inner_dim || b.cols() != inner_dim {
                return Err(Error::DimensionMismatch {
                    expected: inner_dim,
                    found: b.rows().max(b.cols()),
                });
            }
            if !is_unitary(b, tol)? {
                return Err(Error::NotUnitary(format!("block {i}")));
            }
        }
        Ok(Self { inner_dim, blocks })
    }

    /// Every block is the normalized discrete Fourier matrix of order `inner_dim`.
    pub fn dft(outer_dim: usize, inner_dim: usize) -> Self {
        Self {
            inner_dim,
            blocks: vec![ComplexMatrix::dft(inner_dim); outer_dim],
        }
    }

    pub fn outer_dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn inner_dim(&self) -> usize {
        self.inner_dim
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// The full `d₁d₂ × d₁d₂` matrix.
    pub fn assemble(&self) -> ComplexMatrix {
        let (n, m) = (self.outer_dim(), self.inner_dim);
        let mut u = ComplexMatrix::zeros(n * m, n * m);
        for (i, b) in self.blocks.iter().enumerate() {
            for r in 0..m {
                for c in 0..m {
                    u.set(i * m + r, i * m + c, b.get(r, c));
                }
            }
        }
        u
    }

    /// True when no block is within `tol` of the identity.
    pub fn is_non_identity(&self, tol: f64) -> bool {
        let id = ComplexMatrix::identity(self.inner_dim);
        self.blocks
            .iter()
            .all(|b| b.max_abs_diff(&id).is_ok_and(|dev| dev > tol))
    }

    fn apply_block(&self, i: usize, v: &ComplexVector) -> ComplexVector {
        self.blocks[i].apply(v).expect("block dimension checked on construction")
    }
}

/// Chooses, for every outer address, whether the block unitary acts (`true`)
/// or the identity does (`false`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauPattern {
    arity: Arity,
    order: usize,
    entries: Vec<bool>,
}

impl TauPattern {
    pub fn all(arity: Arity, order: usize, use_u: bool) -> Self {
        Self {
            arity,
            order,
            entries: vec![use_u; arity.cell_count(order)],
        }
    }

    pub fn new(arity: Arity, order: usize, entries: Vec<bool>) -> Result<Self> {
        if entries.len() != arity.cell_count(order) {
            return Err(Error::DimensionMismatch {
                expected: arity.cell_count(order),
                found: entries.len(),
            });
        }
        Ok(Self {
            arity,
            order,
            entries,
        })
    }

    /// Pattern with `U` at the listed addresses and `𝕀` elsewhere.
    pub fn from_u_cells(arity: Arity, order: usize, cells: &[&[usize]]) -> Result<Self> {
        let mut p = Self::all(arity, order, false);
        for addr in cells {
            if addr.len() != arity.rank() || addr.iter().any(|&c| c >= order) {
                return Err(Error::InvalidParameter(format!("address {addr:?} out of range")));
            }
            p.entries[arity.index(order, addr)] = true;
        }
        Ok(p)
    }

    /// `U` wherever the first coordinate lies in the upper half `⌈d/2⌉..d`.
    pub fn default_for(arity: Arity, order: usize) -> Self {
        let half = order.div_ceil(2);
        let entries = (0..arity.cell_count(order))
            .map(|x| arity.address(order, x)[0] >= half)
            .collect();
        Self {
            arity,
            order,
            entries,
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn uses_u(&self, address: &[usize]) -> bool {
        self.entries[self.arity.index(self.order, address)]
    }

    /// Neither all-`𝕀` nor all-`U`.
    pub fn is_mixed(&self) -> bool {
        self.entries.iter().any(|&e| e) && self.entries.iter().any(|&e| !e)
    }
}

/// Errors unless every pattern mixes `𝕀` and `U` blocks, which is what the
/// lifted constructions need to leave the classical class.
pub fn require_mixed(patterns: &[TauPattern]) -> Result<()> {
    match patterns.iter().position(|p| !p.is_mixed()) {
        Some(s) => Err(Error::InvalidParameter(format!(
            "pattern {s} uses the same block everywhere"
        ))),
        None => Ok(()),
    }
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::VerificationFailed(what.into()))
    }
}

fn same_count(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

fn product_grid(a: &QuantumGrid, b: &QuantumGrid) -> Result<QuantumGrid> {
    let (d1, d2) = (a.order(), b.order());
    let arity = a.arity();
    QuantumGrid::from_fn(arity, d1 * d2, a.cell_dim() * b.cell_dim(), |addr| {
        let outer: Vec<usize> = addr.iter().map(|c| c / d2).collect();
        let inner: Vec<usize> = addr.iter().map(|c| c % d2).collect();
        tensor(
            a.cell(&outer).expect("complete grid"),
            b.cell(&inner).expect("complete grid"),
        )
    })
}

/// Square `s` of the result has cell `((i,m),(j,n)) = A_s(i,j) ⊗ B_s(m,n)`
/// at index `(i·d₂ + m, j·d₂ + n)`.
pub fn moqls_direct_product(
    a: &[QuantumGrid],
    b: &[QuantumGrid],
    tol: f64,
) -> Result<Vec<QuantumGrid>> {
    same_count(a.len(), b.len())?;
    check(verify_moqls(a, tol)?, "first input is not a MOQLS")?;
    check(verify_moqls(b, tol)?, "second input is not a MOQLS")?;
    a.iter().zip(b).map(|(x, y)| product_grid(x, y)).collect()
}

/// Cubewise product `((i,f),(j,g),(k,h)) ↦ A(i,j,k) ⊗ B(f,g,h)`.
pub fn moqlc_direct_product(
    a: &[QuantumGrid],
    b: &[QuantumGrid],
    tol: f64,
) -> Result<Vec<QuantumGrid>> {
    same_count(a.len(), b.len())?;
    check(verify_moqlc(a, tol)?, "first input is not a MOQLC")?;
    check(verify_moqlc(b, tol)?, "second input is not a MOQLC")?;
    a.iter().zip(b).map(|(x, y)| product_grid(x, y)).collect()
}

fn lifted(
    outer: &[LatinDesign],
    inner: &[LatinDesign],
    u: &BlockUnitary,
    patterns: &[TauPattern],
) -> Result<Vec<QuantumGrid>> {
    same_count(outer.len(), inner.len())?;
    same_count(outer.len(), patterns.len())?;
    let (d1, d2) = (outer[0].order(), inner[0].order());
    if u.outer_dim() != d1 || u.inner_dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: u.outer_dim() * u.inner_dim(),
        });
    }
    let arity = outer[0].arity();
    if let Some(p) = patterns.iter().find(|p| p.arity != arity || p.order != d1) {
        return Err(Error::InvalidParameter(format!(
            "pattern of order {} does not match outer order {d1}",
            p.order
        )));
    }
    outer
        .iter()
        .zip(inner)
        .zip(patterns)
        .map(|((l, k), pat)| {
            QuantumGrid::from_fn(arity, d1 * d2, d1 * d2, |addr| {
                let o: Vec<usize> = addr.iter().map(|c| c / d2).collect();
                let i: Vec<usize> = addr.iter().map(|c| c % d2).collect();
                let sym = l.get(&o).expect("complete design");
                let ket = ComplexVector::basis(d2, k.get(&i).expect("complete design"));
                let ket = if pat.uses_u(&o) { u.apply_block(sym, &ket) } else { ket };
                tensor(&ComplexVector::basis(d1, sym), &ket)
            })
        })
        .collect()
}

/// Square `s` has block `(i,j)` equal to `|l^s_{ij}⟩ ⊗ τ K^s`, where `τ` is
/// `U_{l^s_{ij}}` when `patterns[s]` selects `U` at `(i,j)` and `𝕀` otherwise.
pub fn moqls_from_mols(
    outer: &[LatinDesign],
    inner: &[LatinDesign],
    u: &BlockUnitary,
    patterns: &[TauPattern],
) -> Result<Vec<QuantumGrid>> {
    for set in [outer, inner] {
        check(
            set.len() >= 2
                && set.iter().all(|s| s.arity() == Arity::Square)
                && verify_classical(set, ClassicalProperty::MolsPairwise)?,
            "inputs must be mutually orthogonal Latin squares",
        )?;
    }
    lifted(outer, inner, u, patterns)
}

/// Cube analogue of [`moqls_from_mols`]; both cube sets need Property (B).
pub fn moqlc_from_molc(
    outer: &[LatinDesign],
    inner: &[LatinDesign],
    u: &BlockUnitary,
    patterns: &[TauPattern],
) -> Result<Vec<QuantumGrid>> {
    for set in [outer, inner] {
        check(
            set.iter().all(|s| s.arity() == Arity::Cube)
                && verify_classical(set, ClassicalProperty::MolcWithB)?,
            "inputs must be mutually orthogonal Latin cubes with Property (B)",
        )?;
    }
    lifted(outer, inner, u, patterns)
}

/// Embeds `v ∈ ℂ^{|V|}` into `span{e_x : x ∈ V}`.
fn embed_into(v: &ComplexVector, indices: &[usize], dim: usize) -> ComplexVector {
    let mut out = vec![crate::linalg::ZERO; dim];
    for (&x, &z) in indices.iter().zip(v.iter()) {
        out[x] = z;
    }
    out.into()
}

/// Puts `fillers[h]`, embedded into `span(V_h)`, on the empty block `V_h × V_h`.
///
/// Holes without a filler are kept.
pub fn fill_holes(
    g: &QuantumGrid,
    fillers: &BTreeMap<usize, QuantumGrid>,
    tol: f64,
) -> Result<QuantumGrid> {
    if g.arity() != Arity::Square {
        return Err(Error::Malformed("fill_holes needs a square".into()));
    }
    let d = g.order();
    let mut cells = g.cells().to_vec();
    let mut kept = Vec::new();
    for (h, hole) in g.holes().iter().enumerate() {
        let Some(f) = fillers.get(&h) else {
            kept.push(hole.clone());
            continue;
        };
        if f.order() != hole.len() || f.cell_dim() != hole.len() {
            return Err(Error::DimensionMismatch {
                expected: hole.len(),
                found: f.order(),
            });
        }
        check(verify_qls(f, tol)?, &format!("filler for hole {h} is not a QLS"))?;
        for (a, &r) in hole.iter().enumerate() {
            for (b, &c) in hole.iter().enumerate() {
                let v = f.cell(&[a, b]).expect("complete filler");
                cells[r * d + c] = Some(embed_into(v, hole, d));
            }
        }
    }
    if let Some(&h) = fillers.keys().find(|&&h| h >= g.holes().len()) {
        return Err(Error::HoleMismatch(format!("no hole {h} to fill")));
    }
    QuantumGrid::new(Arity::Square, d, d, cells, kept)
}

/// Fills hole `i = {i·d₁, …, (i+1)·d₁ − 1}` of an HSOQLS(d₁ⁿ) with
/// `|i⟩ ⊗ U_i Φ` for an SOQLS Φ of order d₁.
pub fn soqls_fill(
    hsols: &QuantumGrid,
    sols: &QuantumGrid,
    u: &BlockUnitary,
    tol: f64,
) -> Result<QuantumGrid> {
    let d1 = sols.order();
    let n = hsols.holes().len();
    let contiguous = hsols
        .holes()
        .iter()
        .enumerate()
        .all(|(i, h)| h.iter().copied().eq(i * d1..(i + 1) * d1));
    if n == 0 || n * d1 != hsols.order() || !contiguous {
        return Err(Error::HoleMismatch(format!(
            "holes must be the consecutive blocks of size {d1}"
        )));
    }
    if u.outer_dim() != n || u.inner_dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: n * d1,
            found: u.outer_dim() * u.inner_dim(),
        });
    }
    if !u.is_non_identity(tol) {
        return Err(Error::InvalidParameter("every block must differ from the identity".into()));
    }
    check(verify_hsoqls(hsols, tol)?, "first input is not an HSOQLS")?;
    check(verify_soqls(sols, tol)?, "second input is not an SOQLS")?;
    let fillers = (0..n)
        .map(|i| {
            let cells = sols
                .cells()
                .iter()
                .map(|c| c.as_ref().map(|v| u.apply_block(i, v)))
                .collect();
            Ok((i, QuantumGrid::new(Arity::Square, d1, d1, cells, Vec::new())?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    fill_holes(hsols, &fillers, tol)
}

/// Index map `(i, l) ↦ i·m + l` lifted to holes.
fn weighted_holes(holes: &[Vec<usize>], m: usize) -> Vec<Vec<usize>> {
    holes
        .iter()
        .map(|h| h.iter().flat_map(|&i| (0..m).map(move |l| i * m + l)).collect())
        .collect()
}

fn weighted_grid(
    outer: &QuantumGrid,
    m: usize,
    cell: impl Fn(usize, usize, usize, usize) -> ComplexVector,
) -> Result<QuantumGrid> {
    let n = outer.order();
    let d = n * m;
    let cells = (0..d * d)
        .map(|x| {
            let (r, c) = (x / d, x % d);
            let (i, l, j, k) = (r / m, r % m, c / m, c % m);
            outer.cell(&[i, j]).map(|psi| tensor(psi, &cell(i, j, l, k)))
        })
        .collect();
    QuantumGrid::new(Arity::Square, d, d, cells, weighted_holes(outer.holes(), m))
}

/// `Ψ^s(i,j) ⊗ Φ^s(l,k)` at `(i·m + l, j·m + k)`, with holes `V_i ⊗ ℂ^m`.
pub fn weighting(
    hmols: &[QuantumGrid],
    moqls: &[QuantumGrid],
    tol: f64,
) -> Result<Vec<QuantumGrid>> {
    same_count(hmols.len(), moqls.len())?;
    check(verify_imoqls(hmols, tol)?, "first input is not an incomplete MOQLS")?;
    check(verify_moqls(moqls, tol)?, "second input is not a MOQLS")?;
    let m = moqls[0].order();
    hmols
        .iter()
        .zip(moqls)
        .map(|(psi, phi)| {
            weighted_grid(psi, m, |_, _, l, k| phi.cell(&[l, k]).expect("complete").clone())
        })
        .collect()
}

/// HSOQLS((hm)ⁿ) with cell `Ψ(i,j) ⊗ Φ¹(l,k)` when `i ≤ j` and
/// `Ψ(i,j) ⊗ conj(Φ²)(k,l)` otherwise.
pub fn hsoqls_product(
    hsoqls: &QuantumGrid,
    pair: (&QuantumGrid, &QuantumGrid),
    tol: f64,
) -> Result<QuantumGrid> {
    check(verify_hsoqls(hsoqls, tol)?, "first input is not an HSOQLS")?;
    let (phi1, phi2) = (pair.0.clone(), conjugate(pair.1));
    check(
        verify_moqls(&[pair.0.clone(), pair.1.clone()], tol)?,
        "second input is not a MOQLS pair",
    )?;
    weighted_grid(hsoqls, phi1.order(), |i, j, l, k| {
        if i <= j {
            phi1.cell(&[l, k]).expect("complete").clone()
        } else {
            phi2.cell(&[k, l]).expect("complete").clone()
        }
    })
}

/// Quantum embeddings of classical designs, for feeding classical inputs
/// into the grid-level constructors.
pub fn embed_all(designs: &[LatinDesign]) -> Vec<QuantumGrid> {
    designs.iter().map(embed_classical).collect()
}
