//! Quantum orthogonal arrays, generalized orthogonal grids, and k-uniform states.
//!
//! Amplitude vectors use the big-endian party order: party 0 is the most
//! significant base-d digit of an index.

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::linalg::{first_gram_violation, reduced_sum, PartySplit, SparseVector, ONE, ZERO};
use crate::qdesign::{verify_moqlc, verify_moqls, QuantumGrid};
use crate::{Arity, Error, Result, Verdict, DEFAULT_TOL};

/// Hermiticity bound for reduced operators assembled during verification.
const HERMITIAN_TOL: f64 = 1e-12;

fn full_dim(parties: usize, local_dim: usize) -> Result<usize> {
    local_dim
        .checked_pow(parties as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("{local_dim}^{parties} overflows")))
}

fn require_unit(v: &SparseVector, what: &str) -> Result<()> {
    let dev = (v.norm() - 1.0).abs();
    if dev <= DEFAULT_TOL {
        Ok(())
    } else {
        Err(Error::Malformed(format!("{what} has norm off by {dev:e}")))
    }
}

/// `r` pure states on `N` parties of local dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOrthogonalArray {
    parties: usize,
    local_dim: usize,
    strength: usize,
    rows: Vec<SparseVector>,
}

impl QuantumOrthogonalArray {
    pub fn new(
        parties: usize,
        local_dim: usize,
        strength: usize,
        rows: Vec<SparseVector>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Malformed("array needs at least one row".into()));
        }
        if strength == 0 || strength > parties {
            return Err(Error::InvalidParameter(format!(
                "strength {strength} not in 1..={parties}"
            )));
        }
        let dim = full_dim(parties, local_dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.dim(),
                });
            }
            require_unit(row, &format!("row {i}"))?;
        }
        Ok(Self {
            parties,
            local_dim,
            strength,
            rows,
        })
    }

    pub fn runs(&self) -> usize {
        self.rows.len()
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    /// Same array with rows sorted by their leading nonzero index.
    pub fn sorted_rows(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| r.entries().first().map(|e| e.0));
        Self { rows, ..self.clone() }
    }
}

/// Unit vector on `N` parties of local dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    parties: usize,
    local_dim: usize,
    amplitudes: SparseVector,
}

impl PureState {
    pub fn new(parties: usize, local_dim: usize, amplitudes: SparseVector) -> Result<Self> {
        let dim = full_dim(parties, local_dim)?;
        if amplitudes.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amplitudes.dim(),
            });
        }
        require_unit(&amplitudes, "state")?;
        Ok(Self {
            parties,
            local_dim,
            amplitudes,
        })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &SparseVector {
        &self.amplitudes
    }
}

/// Grid whose cells are `t`-party vectors in `(ℂ^d)^{⊗t}`, possibly entangled.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedGrid {
    grid: QuantumGrid,
    parties: usize,
}

impl GeneralizedGrid {
    pub fn new(grid: QuantumGrid, parties: usize) -> Result<Self> {
        if parties == 0 || full_dim(parties, grid.order())? != grid.cell_dim() {
            return Err(Error::NotAPower {
                dim: grid.cell_dim(),
                local_dim: grid.order(),
            });
        }
        if !grid.holes().is_empty() {
            return Err(Error::Malformed("generalized grids have no holes".into()));
        }
        Ok(Self { grid, parties })
    }

    pub fn grid(&self) -> &QuantumGrid {
        &self.grid
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn arity(&self) -> Arity {
        self.grid.arity()
    }
}

fn reduction_verdict(
    label: impl FnOnce() -> String,
    pairs: &[(&SparseVector, &SparseVector)],
    split: &PartySplit,
    target: Complex64,
    tol: f64,
) -> Result<Verdict> {
    let r = reduced_sum(pairs, split, target)?;
    if let Some(h) = r.hermiticity.filter(|h| !(*h <= HERMITIAN_TOL)) {
        return Ok(Verdict::fail(format!("{}: reduced operator not Hermitian", label()), h));
    }
    if !(r.deviation <= tol) {
        return Ok(Verdict::fail(label(), r.deviation));
    }
    Ok(Verdict::Pass)
}

fn sum_rows(rows: &[SparseVector]) -> Result<SparseVector> {
    let terms = rows.iter().flat_map(|r| r.entries().iter().copied()).collect();
    SparseVector::new(rows[0].dim(), terms)
}

fn first_failure(
    tasks: impl IndexedParallelIterator<Item = Result<Verdict>>,
) -> Result<Verdict> {
    tasks
        .find_map_first(|v| match v {
            Ok(Verdict::Pass) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(Verdict::Pass))
}

pub fn check_qoa(q: &QuantumOrthogonalArray, tol: f64) -> Result<Verdict> {
    let (n, d, k) = (q.parties, q.local_dim, q.strength);
    let sum = sum_rows(&q.rows)?;
    let target = Complex64::new(q.runs() as f64 / d.pow(k as u32) as f64, 0.0);
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    first_failure(subsets.into_par_iter().map(|keep| {
        let split = PartySplit::new(n, d, &keep)?;
        reduction_verdict(
            || format!("parties {keep:?}: Σ Tr|φ_i⟩⟨φ_j| ≠ (r/d^k)𝕀"),
            &[(&sum, &sum)],
            &split,
            target,
            tol,
        )
    }))
}

/// For every k-subset S of parties, `Σ_{i,j} Tr_{S^c} |φ_i⟩⟨φ_j| = (r/d^k) 𝕀`.
///
/// The double sum equals the reduction of `|Σφ_i⟩⟨Σφ_j|`, which is what gets computed.
pub fn verify_qoa(q: &QuantumOrthogonalArray, tol: f64) -> Result<bool> {
    Ok(check_qoa(q, tol)?.passed())
}

/// `(1/√r) Σ_i φ_i`; the rows must be orthonormal.
pub fn state_from_qoa(q: &QuantumOrthogonalArray, tol: f64) -> Result<PureState> {
    let rows = &q.rows;
    if let Some((a, b, dev)) = first_gram_violation(rows.len(), tol, |a, b| rows[a].inner(&rows[b])) {
        return Err(Error::VerificationFailed(format!(
            "rows {a} and {b} are not orthonormal (deviation {dev:e})"
        )));
    }
    let sum = sum_rows(rows)?;
    let r = q.runs() as f64;
    let dev = (sum.norm() - r.sqrt()).abs();
    if !(dev <= tol) {
        return Err(Error::VerificationFailed(format!(
            "norm of the row sum is off from √r by {dev:e}"
        )));
    }
    PureState::new(
        q.parties,
        q.local_dim,
        sum.scale(Complex64::new(1.0 / r.sqrt(), 0.0)),
    )
}

pub fn check_k_uniform(s: &PureState, k: usize, tol: f64) -> Result<Verdict> {
    let n = s.parties;
    if k == 0 || k > n / 2 {
        return Err(Error::InvalidParameter(format!("k = {k} not in 1..={}", n / 2)));
    }
    let target = Complex64::new(1.0 / s.local_dim.pow(k as u32) as f64, 0.0);
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let amps = &s.amplitudes;
    first_failure(subsets.into_par_iter().map(|keep| {
        let split = PartySplit::new(n, s.local_dim, &keep)?;
        reduction_verdict(
            || format!("reduction to parties {keep:?} is not maximally mixed"),
            &[(amps, amps)],
            &split,
            target,
            tol,
        )
    }))
}

/// Every reduction to `k` parties equals `𝕀/d^k`.
pub fn verify_k_uniform(s: &PureState, k: usize, tol: f64) -> Result<bool> {
    Ok(check_k_uniform(s, k, tol)?.passed())
}

/// Splits each row into `|address⟩ ⊗ cell` where the address is the first
/// `rank` parties.
fn qoa_to_generalized(
    q: &QuantumOrthogonalArray,
    arity: Arity,
    tol: f64,
) -> Result<GeneralizedGrid> {
    let (d, rank) = (q.local_dim, arity.rank());
    if q.strength != rank || q.parties <= rank || q.runs() != arity.cell_count(d) {
        return Err(Error::InvalidParameter(format!(
            "expected a QOA({}, t+{rank}, {d}, {rank}) with t ≥ 1",
            arity.cell_count(d)
        )));
    }
    let t = q.parties - rank;
    let cell_dim = d.pow(t as u32);
    let mut cells = vec![None; arity.cell_count(d)];
    for (i, row) in q.rows.iter().enumerate() {
        let peak = row
            .entries()
            .iter()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map_or(0, |e| e.0 / cell_dim);
        let outside: f64 = row
            .entries()
            .iter()
            .filter(|e| e.0 / cell_dim != peak)
            .map(|e| e.1.norm_sqr())
            .sum();
        if !(outside.sqrt() <= tol) {
            return Err(Error::Malformed(format!(
                "row {i} is not supported on a single address block"
            )));
        }
        if cells[peak].is_some() {
            return Err(Error::Malformed(format!(
                "address {:?} occurs twice",
                arity.address(d, peak)
            )));
        }
        let cell: Vec<(usize, Complex64)> = row
            .entries()
            .iter()
            .filter(|e| e.0 / cell_dim == peak)
            .map(|&(x, z)| (x % cell_dim, z))
            .collect();
        cells[peak] = Some(SparseVector::new(cell_dim, cell)?.to_dense());
    }
    let grid = QuantumGrid::new(arity, d, cell_dim, cells, Vec::new())?;
    GeneralizedGrid::new(grid, t)
}

/// Rows `|address⟩ ⊗ cell(address)` in address order, without verification.
pub fn generalized_to_qoa(g: &GeneralizedGrid) -> Result<QuantumOrthogonalArray> {
    let grid = &g.grid;
    let (d, rank) = (grid.order(), grid.arity().rank());
    let rows = grid
        .cells()
        .iter()
        .enumerate()
        .map(|(x, c)| {
            let cell = SparseVector::from_dense(c.as_ref().expect("complete grid"));
            SparseVector::basis(d.pow(rank as u32), x).tensor(&cell)
        })
        .collect();
    QuantumOrthogonalArray::new(rank + g.parties, d, rank, rows)
}

/// A QOA(d², t+2, d, 2) whose first two parties hold classical addresses.
pub fn qoa_to_gmoqls(q: &QuantumOrthogonalArray, tol: f64) -> Result<GeneralizedGrid> {
    qoa_to_generalized(q, Arity::Square, tol)
}

/// A QOA(d³, t+3, d, 3) whose first three parties hold classical addresses.
pub fn qoa_to_gmoqlc(q: &QuantumOrthogonalArray, tol: f64) -> Result<GeneralizedGrid> {
    qoa_to_generalized(q, Arity::Cube, tol)
}

pub fn gmoqls_to_qoa(g: &GeneralizedGrid, tol: f64) -> Result<QuantumOrthogonalArray> {
    if !verify_gmoqls(g, tol)? {
        return Err(Error::VerificationFailed("grid is not a GMOQLS".into()));
    }
    generalized_to_qoa(g)
}

pub fn gmoqlc_to_qoa(g: &GeneralizedGrid, tol: f64) -> Result<QuantumOrthogonalArray> {
    if !verify_gmoqlc(g, tol)? {
        return Err(Error::VerificationFailed("grid is not a GMOQLC".into()));
    }
    generalized_to_qoa(g)
}

/// Checks the grid-side conditions: for every set `A` of kept address axes
/// and set `P` of kept cell parties with `|A| + |P| = rank`, and every pair of
/// partial addresses `x_A, x'_A`,
/// `Σ_y Tr_{P^c} |ψ_{x_A y}⟩⟨ψ_{x'_A y}| = δ_{x_A x'_A} 𝕀_{d^|P|}`.
/// With `P = ∅` this is orthonormality of the cells.
pub fn check_generalized(g: &GeneralizedGrid, tol: f64) -> Result<Verdict> {
    let grid = &g.grid;
    let (d, t, rank) = (grid.order(), g.parties, grid.arity().rank());
    let cells: Vec<SparseVector> = grid
        .cells()
        .par_iter()
        .map(|c| SparseVector::from_dense(c.as_ref().expect("complete grid")))
        .collect();
    if let Some((a, b, dev)) = first_gram_violation(cells.len(), tol, |a, b| cells[a].inner(&cells[b])) {
        let addr = |x| grid.arity().address(d, x);
        return Ok(Verdict::fail(
            format!("cells {:?} and {:?} are not orthonormal", addr(a), addr(b)),
            dev,
        ));
    }
    // For each kept-axes set, the cell indices sharing each partial address,
    // listed in the same order of free coordinates.
    let axis_sets: Vec<Vec<usize>> = (0..rank).powerset().filter(|a| a.len() < rank).collect();
    let groups: Vec<Vec<Vec<usize>>> = axis_sets
        .iter()
        .map(|axes| {
            let mut by_key = vec![Vec::new(); d.pow(axes.len() as u32)];
            for c in 0..cells.len() {
                let addr = grid.arity().address(d, c);
                by_key[axes.iter().fold(0, |acc, &ax| acc * d + addr[ax])].push(c);
            }
            by_key
        })
        .collect();
    let mut tasks = Vec::new();
    for (s, axes) in axis_sets.iter().enumerate() {
        for parties in (0..t).combinations(rank - axes.len()) {
            let fixed = groups[s].len();
            for x in 0..fixed {
                for y in x..fixed {
                    tasks.push((s, parties.clone(), x, y));
                }
            }
        }
    }
    first_failure(tasks.into_par_iter().map(|(s, parties, x, y)| {
        let split = PartySplit::new(t, d, &parties)?;
        let pairs: Vec<(&SparseVector, &SparseVector)> = groups[s][x]
            .iter()
            .zip(&groups[s][y])
            .map(|(&a, &b)| (&cells[a], &cells[b]))
            .collect();
        let target = if x == y { ONE } else { ZERO };
        reduction_verdict(
            || {
                format!(
                    "kept axes {:?} at {x} vs {y}, kept cell parties {parties:?}",
                    axis_sets[s]
                )
            },
            &pairs,
            &split,
            target,
            tol,
        )
    }))
}

fn require_arity(g: &GeneralizedGrid, arity: Arity) -> Result<()> {
    if g.arity() == arity {
        Ok(())
    } else {
        Err(Error::Malformed(format!("expected a {arity:?} grid")))
    }
}

pub fn verify_gmoqls(g: &GeneralizedGrid, tol: f64) -> Result<bool> {
    require_arity(g, Arity::Square)?;
    Ok(check_generalized(g, tol)?.passed())
}

pub fn verify_gmoqlc(g: &GeneralizedGrid, tol: f64) -> Result<bool> {
    require_arity(g, Arity::Cube)?;
    Ok(check_generalized(g, tol)?.passed())
}

/// Cells `⊗_s cell_s(x)` of a list of grids sharing one order.
pub fn product_cells(gs: &[QuantumGrid]) -> Result<GeneralizedGrid> {
    let g0 = gs
        .first()
        .ok_or_else(|| Error::Malformed("need at least one grid".into()))?;
    if let Some(g) = gs.iter().find(|g| g.order() != g0.order() || g.arity() != g0.arity()) {
        return Err(Error::DimensionMismatch {
            expected: g0.order(),
            found: g.order(),
        });
    }
    if gs.iter().any(|g| g.cell_dim() != g.order() || !g.holes().is_empty()) {
        return Err(Error::Malformed("product cells need complete grids over ℂ^d".into()));
    }
    let d = g0.order();
    let grid = QuantumGrid::from_fn(g0.arity(), d, d.pow(gs.len() as u32), |addr| {
        gs.iter()
            .map(|g| SparseVector::from_dense(g.cell(addr).expect("complete grid")))
            .reduce(|a, b| a.tensor(&b))
            .expect("non-empty")
            .to_dense()
    })?;
    GeneralizedGrid::new(grid, gs.len())
}

/// QOA(d², t+2, d, 2) with rows `|ij⟩ ⊗ ⊗_s cell_s(i,j)`.
pub fn moqls_to_qoa(gs: &[QuantumGrid], tol: f64) -> Result<QuantumOrthogonalArray> {
    if !verify_moqls(gs, tol)? {
        return Err(Error::VerificationFailed("input is not a MOQLS".into()));
    }
    generalized_to_qoa(&product_cells(gs)?)
}

/// QOA(d³, t+3, d, 3) with rows `|ijk⟩ ⊗ ⊗_s cell_s(i,j,k)`.
pub fn moqlc_to_qoa(gs: &[QuantumGrid], tol: f64) -> Result<QuantumOrthogonalArray> {
    if !verify_moqlc(gs, tol)? {
        return Err(Error::VerificationFailed("input is not a MOQLC".into()));
    }
    generalized_to_qoa(&product_cells(gs)?)
}
