//! Quantum Latin squares and cubes, their incomplete variants, and verifiers.
//!
//! A [`QuantumGrid`] holds one unit vector per address. Squares may carry
//! holes: disjoint index subsets `V_i` of the computational basis, with every
//! cell of `V_i × V_i` empty. Verifiers return a [`Verdict`] naming the first
//! violated condition; the `verify_*` wrappers reduce it to a boolean.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::classical::{normalize_hole_list, plane_indices, LatinDesign};
use crate::linalg::{first_gram_violation, ComplexVector, SparseVector};
use crate::{Arity, Error, Result, Verdict};

/// Grid of unit vectors (or holes) indexed by square or cube addresses.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGrid {
    arity: Arity,
    order: usize,
    cell_dim: usize,
    cells: Vec<Option<ComplexVector>>,
    holes: Vec<Vec<usize>>,
}

/// Pair of cells whose overlap is neither 0 nor 1 in modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub value: f64,
}

impl QuantumGrid {
    pub fn new(
        arity: Arity,
        order: usize,
        cell_dim: usize,
        cells: Vec<Option<ComplexVector>>,
        holes: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if order == 0 || cell_dim == 0 {
            return Err(Error::Malformed("order and cell dimension must be positive".into()));
        }
        let expected = arity.cell_count(order);
        if cells.len() != expected {
            return Err(Error::Malformed(format!(
                "expected {expected} cells, found {}",
                cells.len()
            )));
        }
        if let Some(v) = cells.iter().flatten().find(|v| v.dim() != cell_dim) {
            return Err(Error::DimensionMismatch {
                expected: cell_dim,
                found: v.dim(),
            });
        }
        let holes = normalize_hole_list(&holes, order)?;
        if !holes.is_empty() && (arity != Arity::Square || cell_dim != order) {
            return Err(Error::Malformed(
                "holes are only supported on squares with cells in ℂ^d".into(),
            ));
        }
        let grid = Self {
            arity,
            order,
            cell_dim,
            cells,
            holes,
        };
        for (idx, cell) in grid.cells.iter().enumerate() {
            let addr = arity.address(order, idx);
            if grid.is_hole_address(&addr) != cell.is_none() {
                return Err(Error::Malformed(format!(
                    "cell {addr:?} disagrees with the declared holes"
                )));
            }
        }
        Ok(grid)
    }

    /// Complete grid filled by `f(address)`.
    pub fn from_fn(
        arity: Arity,
        order: usize,
        cell_dim: usize,
        f: impl Fn(&[usize]) -> ComplexVector,
    ) -> Result<Self> {
        let cells = (0..arity.cell_count(order))
            .map(|x| Some(f(&arity.address(order, x))))
            .collect();
        Self::new(arity, order, cell_dim, cells, Vec::new())
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cell_dim(&self) -> usize {
        self.cell_dim
    }

    pub fn cells(&self) -> &[Option<ComplexVector>] {
        &self.cells
    }

    pub fn holes(&self) -> &[Vec<usize>] {
        &self.holes
    }

    pub fn cell(&self, address: &[usize]) -> Option<&ComplexVector> {
        self.cells[self.arity.index(self.order, address)].as_ref()
    }

    pub fn hole_of(&self, i: usize) -> Option<usize> {
        self.holes.iter().position(|h| h.contains(&i))
    }

    fn is_hole_address(&self, addr: &[usize]) -> bool {
        self.hole_of(addr[0])
            .is_some_and(|h| addr.iter().all(|c| self.holes[h].contains(c)))
    }

    /// True when the holes partition `0..order`.
    pub fn holes_partition(&self) -> bool {
        self.holes.iter().map(Vec::len).sum::<usize>() == self.order
    }

    pub(crate) fn sparse_cells(&self) -> Vec<Option<SparseVector>> {
        self.cells
            .par_iter()
            .map(|c| c.as_ref().map(SparseVector::from_dense))
            .collect()
    }

    pub(crate) fn with_cells(&self, cells: Vec<Option<ComplexVector>>) -> Self {
        Self {
            cells,
            ..self.clone()
        }
    }
}

/// Replaces symbol `l` by the basis vector `e_l`; holes carry over.
pub fn embed_classical(design: &LatinDesign) -> QuantumGrid {
    let d = design.order();
    QuantumGrid {
        arity: design.arity(),
        order: d,
        cell_dim: d,
        cells: design
            .cells()
            .iter()
            .map(|c| c.map(|s| ComplexVector::basis(d, s)))
            .collect(),
        holes: design.holes().to_vec(),
    }
}

/// Entrywise complex conjugate.
pub fn conjugate(g: &QuantumGrid) -> QuantumGrid {
    g.with_cells(g.cells.iter().map(|c| c.as_ref().map(ComplexVector::conj)).collect())
}

/// Swaps the two coordinates of a square.
pub fn transpose(g: &QuantumGrid) -> Result<QuantumGrid> {
    if g.arity != Arity::Square {
        return Err(Error::Malformed("transpose needs a square".into()));
    }
    let d = g.order;
    Ok(g.with_cells((0..d * d).map(|x| g.cells[(x % d) * d + x / d].clone()).collect()))
}

pub fn conj_transpose(g: &QuantumGrid) -> Result<QuantumGrid> {
    transpose(&conjugate(g))
}

/// `⟨cell(a)|cell(b)⟩`.
pub fn cell_overlap(g: &QuantumGrid, a: &[usize], b: &[usize]) -> Result<Complex64> {
    let fetch = |addr: &[usize]| -> Result<SparseVector> {
        if addr.len() != g.arity.rank() || addr.iter().any(|&c| c >= g.order) {
            return Err(Error::Malformed(format!("address {addr:?} out of range")));
        }
        g.cell(addr)
            .map(SparseVector::from_dense)
            .ok_or_else(|| Error::Malformed(format!("address {addr:?} is a hole")))
    };
    Ok(fetch(a)?.inner(&fetch(b)?))
}

struct Line {
    label: String,
    fixed: usize,
    cells: Vec<usize>,
}

fn lines(arity: Arity, d: usize) -> Vec<Line> {
    let mut out = Vec::new();
    match arity {
        Arity::Square => {
            for i in 0..d {
                out.push(Line {
                    label: format!("row {i}"),
                    fixed: i,
                    cells: (0..d).map(|j| i * d + j).collect(),
                });
                out.push(Line {
                    label: format!("column {i}"),
                    fixed: i,
                    cells: (0..d).map(|j| j * d + i).collect(),
                });
            }
        }
        Arity::Cube => {
            for a in 0..d {
                for b in 0..d {
                    out.push(Line {
                        label: format!("row ({a}, {b}, ·)"),
                        fixed: a,
                        cells: (0..d).map(|x| (a * d + b) * d + x).collect(),
                    });
                    out.push(Line {
                        label: format!("column ({a}, ·, {b})"),
                        fixed: a,
                        cells: (0..d).map(|x| (a * d + x) * d + b).collect(),
                    });
                    out.push(Line {
                        label: format!("file (·, {a}, {b})"),
                        fixed: a,
                        cells: (0..d).map(|x| (x * d + a) * d + b).collect(),
                    });
                }
            }
        }
    }
    out
}

/// Checks that the filled cells of every line form an orthonormal basis of
/// `ℂ^d ⊖ V_i`, where `V_i` is the hole the line passes through (if any).
fn check_lines(g: &QuantumGrid, sp: &[Option<SparseVector>], tol: f64) -> Verdict {
    let found = lines(g.arity, g.order).into_par_iter().find_map_first(|line| {
        let hole: &[usize] = match g.hole_of(line.fixed) {
            Some(h) => &g.holes[h],
            None => &[],
        };
        let members: Vec<usize> = line.cells.iter().copied().filter(|&x| sp[x].is_some()).collect();
        let expected = g.cell_dim - hole.len();
        if members.len() != expected {
            return Some(Verdict::fail(
                format!("{} has {} cells, expected {expected}", line.label, members.len()),
                (expected as f64 - members.len() as f64).abs(),
            ));
        }
        for &x in &members {
            let leak = sp[x].as_ref().map_or(0.0, |v| v.mass_on(hole)).sqrt();
            if !(leak <= tol) {
                return Some(Verdict::fail(
                    format!(
                        "{}: cell {:?} has weight in its hole",
                        line.label,
                        g.arity.address(g.order, x)
                    ),
                    leak,
                ));
            }
        }
        let vs: Vec<&SparseVector> = members.iter().filter_map(|&x| sp[x].as_ref()).collect();
        first_gram_violation(vs.len(), tol, |a, b| vs[a].inner(vs[b])).map(|(a, b, dev)| {
            Verdict::fail(
                format!(
                    "{}: ⟨{:?}|{:?}⟩ deviates from δ",
                    line.label,
                    g.arity.address(g.order, members[a]),
                    g.arity.address(g.order, members[b])
                ),
                dev,
            )
        })
    });
    found.unwrap_or(Verdict::Pass)
}

/// Checks that `{⊗_s cell_s(x)}` over the given addresses is an orthonormal
/// basis of the hole complement `⊗ℂ^d ⊖ ⊕ V_i^{⊗n}`.
fn check_superimposed(
    grids: &[&QuantumGrid],
    sps: &[&[Option<SparseVector>]],
    addresses: &[usize],
    tol: f64,
    what: &str,
) -> Verdict {
    let g0 = grids[0];
    let holes = &g0.holes;
    let members: Vec<usize> = addresses
        .iter()
        .copied()
        .filter(|&x| sps.iter().all(|sp| sp[x].is_some()))
        .collect();
    let n = sps.len() as u32;
    let space = g0.cell_dim.pow(n) - holes.iter().map(|h| h.len().pow(n)).sum::<usize>();
    if members.len() != space {
        return Verdict::fail(
            format!("{what}: {} superimposed cells for a space of dimension {space}", members.len()),
            (space as f64 - members.len() as f64).abs(),
        );
    }
    for &x in &members {
        for h in holes {
            let leak: f64 = sps
                .iter()
                .map(|sp| sp[x].as_ref().map_or(0.0, |v| v.mass_on(h)).sqrt())
                .product();
            if !(leak <= tol) {
                return Verdict::fail(
                    format!(
                        "{what}: superimposed cell {:?} has weight in a hole block",
                        g0.arity.address(g0.order, x)
                    ),
                    leak,
                );
            }
        }
    }
    let entry = |a: usize, b: usize| -> Complex64 {
        let (xa, xb) = (members[a], members[b]);
        sps.iter()
            .map(|sp| match (&sp[xa], &sp[xb]) {
                (Some(u), Some(v)) => u.inner(v),
                _ => Complex64::new(0.0, 0.0),
            })
            .product()
    };
    match first_gram_violation(members.len(), tol, entry) {
        None => Verdict::Pass,
        Some((a, b, dev)) => Verdict::fail(
            format!(
                "{what}: superimposed cells {:?} and {:?} are not orthonormal",
                g0.arity.address(g0.order, members[a]),
                g0.arity.address(g0.order, members[b])
            ),
            dev,
        ),
    }
}

fn require_shape(g: &QuantumGrid, arity: Arity, allow_holes: bool) -> Result<()> {
    if g.arity != arity {
        return Err(Error::Malformed(format!("expected a {arity:?}, found a {:?}", g.arity)));
    }
    if g.cell_dim != g.order {
        return Err(Error::Malformed(format!(
            "cells of dimension {} in a grid of order {}",
            g.cell_dim, g.order
        )));
    }
    if !allow_holes && !g.holes.is_empty() {
        return Err(Error::Malformed("grid has holes".into()));
    }
    Ok(())
}

fn require_compatible(gs: &[QuantumGrid], min: usize) -> Result<()> {
    if gs.len() < min {
        return Err(Error::Malformed(format!("need at least {min} grids, got {}", gs.len())));
    }
    let g0 = &gs[0];
    for g in gs {
        if g.order != g0.order || g.cell_dim != g0.cell_dim {
            return Err(Error::DimensionMismatch {
                expected: g0.order,
                found: g.order,
            });
        }
        if g.holes != g0.holes {
            return Err(Error::HoleMismatch("grids declare different holes".into()));
        }
    }
    Ok(())
}

fn all_addresses(g: &QuantumGrid) -> Vec<usize> {
    (0..g.cells.len()).collect()
}

pub fn check_qls(g: &QuantumGrid, tol: f64) -> Result<Verdict> {
    require_shape(g, Arity::Square, false)?;
    Ok(check_lines(g, &g.sparse_cells(), tol))
}

/// Every row and column is an orthonormal basis of ℂ^d.
pub fn verify_qls(g: &QuantumGrid, tol: f64) -> Result<bool> {
    Ok(check_qls(g, tol)?.passed())
}

pub fn check_iqls(g: &QuantumGrid, tol: f64) -> Result<Verdict> {
    require_shape(g, Arity::Square, true)?;
    Ok(check_lines(g, &g.sparse_cells(), tol))
}

/// Incomplete QLS: lines through hole `V_i` span `ℂ^d ⊖ V_i`, other lines span ℂ^d.
pub fn verify_iqls(g: &QuantumGrid, tol: f64) -> Result<bool> {
    Ok(check_iqls(g, tol)?.passed())
}

fn check_pairs(gs: &[QuantumGrid], sps: &[Vec<Option<SparseVector>>], tol: f64) -> Verdict {
    let addresses = all_addresses(&gs[0]);
    for a in 0..gs.len() {
        for b in a + 1..gs.len() {
            let v = check_superimposed(
                &[&gs[a], &gs[b]],
                &[&sps[a], &sps[b]],
                &addresses,
                tol,
                &format!("grids {a} and {b}"),
            );
            if !v.passed() {
                return v;
            }
        }
    }
    Verdict::Pass
}

fn check_each(
    gs: &[QuantumGrid],
    sps: &[Vec<Option<SparseVector>>],
    tol: f64,
) -> Verdict {
    for (s, (g, sp)) in gs.iter().zip(sps).enumerate() {
        if let Verdict::Fail(mut v) = check_lines(g, sp, tol) {
            v.condition = format!("grid {s}: {}", v.condition);
            return Verdict::Fail(v);
        }
    }
    Verdict::Pass
}

pub fn check_moqls(gs: &[QuantumGrid], tol: f64) -> Result<Verdict> {
    require_compatible(gs, 2)?;
    for g in gs {
        require_shape(g, Arity::Square, false)?;
    }
    let sps: Vec<_> = gs.iter().map(QuantumGrid::sparse_cells).collect();
    Ok(check_each(gs, &sps, tol).and_then(|| Ok(check_pairs(gs, &sps, tol)))?)
}

/// Each grid is a QLS and every pair superimposes to an orthonormal basis of ℂ^d ⊗ ℂ^d.
pub fn verify_moqls(gs: &[QuantumGrid], tol: f64) -> Result<bool> {
    Ok(check_moqls(gs, tol)?.passed())
}

pub fn check_imoqls(gs: &[QuantumGrid], tol: f64) -> Result<Verdict> {
    require_compatible(gs, 2)?;
    for g in gs {
        require_shape(g, Arity::Square, true)?;
    }
    let sps: Vec<_> = gs.iter().map(QuantumGrid::sparse_cells).collect();
    Ok(check_each(gs, &sps, tol).and_then(|| Ok(check_pairs(gs, &sps, tol)))?)
}

/// Incomplete MOQLS: each grid an IQLS, pairs spanning the hole complement.
pub fn verify_imoqls(gs: &[QuantumGrid], tol: f64) -> Result<bool> {
    Ok(check_imoqls(gs, tol)?.passed())
}

pub fn check_soqls(g: &QuantumGrid, tol: f64) -> Result<Verdict> {
    require_shape(g, Arity::Square, false)?;
    let pair = [g.clone(), transpose(g)?];
    check_moqls(&pair, tol)
}

/// A QLS orthogonal to its transpose.
pub fn verify_soqls(g: &QuantumGrid, tol: f64) -> Result<bool> {
    Ok(check_soqls(g, tol)?.passed())
}

pub fn check_hsoqls(g: &QuantumGrid, tol: f64) -> Result<Verdict> {
    require_shape(g, Arity::Square, true)?;
    if g.holes.is_empty() || !g.holes_partition() {
        return Ok(Verdict::fail("holes do not partition the index set", 0.0));
    }
    let pair = [g.clone(), conj_transpose(g)?];
    check_imoqls(&pair, tol)
}

/// Holes partition the index set and the grid is incomplete-orthogonal to its conjugate transpose.
pub fn verify_hsoqls(g: &QuantumGrid, tol: f64) -> Result<bool> {
    Ok(check_hsoqls(g, tol)?.passed())
}

/// The diagonal cells form an orthonormal basis.
pub fn diagonal_basis_check(g: &QuantumGrid, tol: f64) -> Result<bool> {
    require_shape(g, Arity::Square, false)?;
    let d = g.order;
    let diag: Vec<SparseVector> = (0..d)
        .filter_map(|i| g.cells[i * d + i].as_ref().map(SparseVector::from_dense))
        .collect();
    Ok(first_gram_violation(d, tol, |a, b| diag[a].inner(&diag[b])).is_none())
}

/// First pair of cells (in address order) whose overlap modulus is farther
/// than `tol` from both 0 and 1.
pub fn classicality_witness(g: &QuantumGrid, tol: f64) -> Option<Witness> {
    let sp = g.sparse_cells();
    let n = sp.len();
    (0..n).into_par_iter().find_map_first(|x| {
        let u = sp[x].as_ref()?;
        (x + 1..n).find_map(|y| {
            let v = sp[y].as_ref()?;
            let m = u.inner(v).norm();
            (m > tol && (1.0 - m).abs() > tol).then(|| Witness {
                first: g.arity.address(g.order, x),
                second: g.arity.address(g.order, y),
                value: m,
            })
        })
    })
}

pub fn check_qlc(g: &QuantumGrid, tol: f64) -> Result<Verdict> {
    require_shape(g, Arity::Cube, false)?;
    Ok(check_lines(g, &g.sparse_cells(), tol))
}

/// Every row, column and file of the cube is an orthonormal basis of ℂ^d.
pub fn verify_qlc(g: &QuantumGrid, tol: f64) -> Result<bool> {
    Ok(check_qlc(g, tol)?.passed())
}

pub fn check_moqlc(gs: &[QuantumGrid], tol: f64) -> Result<Verdict> {
    require_compatible(gs, 3)?;
    for g in gs {
        require_shape(g, Arity::Cube, false)?;
    }
    let sps: Vec<_> = gs.iter().map(QuantumGrid::sparse_cells).collect();
    let verdict = check_each(gs, &sps, tol);
    if !verdict.passed() {
        return Ok(verdict);
    }
    let d = gs[0].order;
    let all = all_addresses(&gs[0]);
    let t = gs.len();
    for a in 0..t {
        for b in a + 1..t {
            for c in b + 1..t {
                let v = check_superimposed(
                    &[&gs[a], &gs[b], &gs[c]],
                    &[&sps[a], &sps[b], &sps[c]],
                    &all,
                    tol,
                    &format!("cubes {a}, {b}, {c}"),
                );
                if !v.passed() {
                    return Ok(v);
                }
            }
        }
    }
    let planes: Vec<(usize, usize, usize, usize)> = (0..t)
        .flat_map(|a| (a + 1..t).map(move |b| (a, b)))
        .flat_map(|(a, b)| (0..3).flat_map(move |axis| (0..d).map(move |p| (a, b, axis, p))))
        .collect();
    let found = planes.into_par_iter().find_map_first(|(a, b, axis, p)| {
        let cells = plane_indices(d, axis, p);
        let v = check_superimposed(
            &[&gs[a], &gs[b]],
            &[&sps[a], &sps[b]],
            &cells,
            tol,
            &format!("cubes {a}, {b}, plane {p} across axis {axis}"),
        );
        (!v.passed()).then_some(v)
    });
    Ok(found.unwrap_or(Verdict::Pass))
}

/// Each grid a QLC; every triple superimposes to a basis of ℂ^{d³}; every pair
/// of corresponding planes of any two cubes is an orthogonal pair of squares.
pub fn verify_moqlc(gs: &[QuantumGrid], tol: f64) -> Result<bool> {
    Ok(check_moqlc(gs, tol)?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{mols_prime_power, oa_strength3_rs, oa_to_molc};

    const TOL: f64 = 1e-9;

    fn cyclic(d: usize) -> QuantumGrid {
        embed_classical(&LatinDesign::square_from_fn(d, |i, j| (i + j) % d).unwrap())
    }

    #[test]
    fn cyclic_square_is_a_qls_but_not_self_orthogonal() {
        let g = cyclic(3);
        assert!(verify_qls(&g, TOL).unwrap());
        assert!(!verify_soqls(&g, TOL).unwrap());
        assert_eq!(transpose(&g).unwrap(), g);
    }

    #[test]
    fn repeated_vector_in_a_row_fails() {
        let mut cells = cyclic(3).cells().to_vec();
        cells[1] = cells[0].clone();
        let g = cyclic(3).with_cells(cells);
        let verdict = check_qls(&g, TOL).unwrap();
        assert!(!verdict.passed());
        assert!(verdict.violation().unwrap().condition.contains("row 0"));
    }

    #[test]
    fn two_copies_are_not_orthogonal() {
        let g = cyclic(4);
        assert!(!verify_moqls(&[g.clone(), g], TOL).unwrap());
    }

    #[test]
    fn embedded_mols_are_orthogonal() {
        let squares: Vec<_> = mols_prime_power(3).unwrap().iter().map(embed_classical).collect();
        assert!(verify_moqls(&squares, TOL).unwrap());
        let reversed: Vec<_> = squares.iter().rev().cloned().collect();
        assert!(verify_moqls(&reversed, TOL).unwrap());
    }

    #[test]
    fn conj_transpose_is_an_involution() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let g = QuantumGrid::from_fn(Arity::Square, 2, 2, |a| {
            let s = if a[0] == a[1] { 1.0 } else { -1.0 };
            vec![Complex64::new(h, 0.0), Complex64::new(0.0, s * h)].into()
        })
        .unwrap();
        assert!(verify_qls(&g, TOL).unwrap());
        let twice = conj_transpose(&conj_transpose(&g).unwrap()).unwrap();
        assert_eq!(twice, g);
        assert_ne!(conjugate(&g), g);
    }

    #[test]
    fn embedded_cubes_form_moqlc() {
        let cubes: Vec<_> = oa_to_molc(&oa_strength3_rs(4).unwrap())
            .unwrap()
            .iter()
            .map(embed_classical)
            .collect();
        assert!(verify_qlc(&cubes[0], TOL).unwrap());
        assert!(verify_moqlc(&cubes, TOL).unwrap());
        let copies = vec![cubes[0].clone(), cubes[0].clone(), cubes[0].clone()];
        assert!(!verify_moqlc(&copies, TOL).unwrap());
        assert!(verify_moqlc(&cubes[..2], TOL).is_err());
    }

    #[test]
    fn repeated_vector_in_a_file_fails() {
        let cube = embed_classical(&LatinDesign::cube_from_fn(3, |i, j, k| (i + j + k) % 3).unwrap());
        assert!(verify_qlc(&cube, TOL).unwrap());
        let mut cells = cube.cells().to_vec();
        cells[9] = cells[0].clone();
        assert!(!verify_qlc(&cube.with_cells(cells), TOL).unwrap());
    }

    #[test]
    fn classical_grids_have_no_witness() {
        assert!(classicality_witness(&cyclic(5), TOL).is_none());
    }

    #[test]
    fn equal_diagonal_cells_fail_the_diagonal_check() {
        let g = cyclic(4);
        assert!(!diagonal_basis_check(&g, TOL).unwrap());
        let sq = embed_classical(&crate::classical::sols_prime_power(4, 2).unwrap());
        assert!(diagonal_basis_check(&sq, TOL).unwrap());
    }

    #[test]
    fn iqls_rejects_cells_leaking_into_the_hole() {
        let l = crate::classical::hsols_unit_holes(4).unwrap();
        let g = embed_classical(&l);
        assert!(verify_iqls(&g, TOL).unwrap());
        assert!(verify_hsoqls(&g, TOL).unwrap());
        // Row 0 passes through hole {0}; put e_0 into one of its cells.
        let mut cells = g.cells().to_vec();
        cells[1] = Some(ComplexVector::basis(4, 0));
        assert!(!verify_iqls(&g.with_cells(cells), TOL).unwrap());
    }

    #[test]
    fn hole_mismatch_is_an_error() {
        let a = embed_classical(&crate::classical::hsols_unit_holes(4).unwrap());
        let b = cyclic(4);
        assert!(matches!(verify_imoqls(&[a, b], TOL), Err(Error::HoleMismatch(_))));
    }

    #[test]
    fn grid_constructor_validates_holes() {
        let cells = cyclic(3).cells().to_vec();
        assert!(QuantumGrid::new(Arity::Square, 3, 3, cells.clone(), vec![vec![1]]).is_err());
        assert!(QuantumGrid::new(Arity::Square, 3, 2, cells, vec![]).is_err());
    }
}
