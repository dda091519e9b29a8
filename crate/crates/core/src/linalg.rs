//! Complex linear algebra for design cells and multipartite states.
//!
//! Dense vectors and matrices carry grid cells and unitaries. Multipartite
//! rows and states, which are mostly zero, use [`SparseVector`]. Both implement
//! [`Amplitudes`] so partial traces accept either.
//!
//! Party 0 is the most significant digit of an amplitude index.

use std::ops::Index;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![ZERO; dim],
        }
    }

    /// Computational basis vector `e_index`.
    ///
    /// # Panics
    ///
    /// Panics if `index >= dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.entries[index] = ONE;
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.entries.iter()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn conj(&self) -> Self {
        self.entries.iter().map(|z| z.conj()).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.entries.iter().map(|z| z * c).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }
}

impl FromIterator<Complex64> for ComplexVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Vector stored as sorted `(index, amplitude)` pairs.
///
/// Rows of quantum orthogonal arrays and the states built from them have
/// `d^N` amplitudes of which only a handful are nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, Complex64)>,
}

impl SparseVector {
    /// Builds a sparse vector; duplicate indices are summed and exact zeros dropped.
    pub fn new(dim: usize, mut entries: Vec<(usize, Complex64)>) -> Result<Self> {
        if let Some(&(i, _)) = entries.iter().find(|(i, _)| *i >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: i + 1,
            });
        }
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
        for (i, z) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += z,
                _ => merged.push((i, z)),
            }
        }
        merged.retain(|e| e.1 != ZERO);
        Ok(Self {
            dim,
            entries: merged,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        Self {
            dim,
            entries: vec![(index, ONE)],
        }
    }

    pub fn from_dense(v: &ComplexVector) -> Self {
        Self {
            dim: v.dim(),
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, z)| (i, *z))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> ComplexVector {
        let mut v = vec![ZERO; self.dim];
        for &(i, z) in &self.entries {
            v[i] = z;
        }
        v.into()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Complex64)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map(|k| self.entries[k].1)
            .unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩` by merging the two supports.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = ZERO;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1.conj() * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for &(i, a) in &self.entries {
            for &(j, b) in &other.entries {
                entries.push((i * other.dim + j, a * b));
            }
        }
        Self {
            dim: self.dim * other.dim,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(self.dim, entries)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(i, z)| (i, z * c))
            .filter(|e| e.1 != ZERO)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, z)| (i, z.conj())).collect(),
        }
    }

    /// Squared norm of the projection onto the given basis indices.
    pub(crate) fn mass_on(&self, indices: &[usize]) -> f64 {
        self.entries
            .iter()
            .filter(|(i, _)| indices.contains(i))
            .map(|e| e.1.norm_sqr())
            .sum()
    }
}

/// Anything exposing an amplitude vector through its nonzero entries.
pub trait Amplitudes {
    fn dim(&self) -> usize;
    fn nonzeros(&self) -> impl Iterator<Item = (usize, Complex64)> + '_;
}

impl Amplitudes for ComplexVector {
    fn dim(&self) -> usize {
        self.entries.len()
    }

    fn nonzeros(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(i, z)| (i, *z))
    }
}

impl Amplitudes for SparseVector {
    fn dim(&self) -> usize {
        self.dim
    }

    fn nonzeros(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.entries.iter().copied()
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(rows * cols, entries.len())?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Normalized discrete Fourier matrix `F[j][k] = ω^{jk}/√n`, `ω = e^{2πi/n}`.
    pub fn dft(n: usize) -> Self {
        let scale = 1.0 / (n as f64).sqrt();
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let angle = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                m.entries[j * n + k] = Complex64::from_polar(scale, angle);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.cols + c] = z;
    }

    pub fn add_at(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.cols + c] += z;
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.entries[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self::new(self.rows, self.cols, entries)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    m.entries[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_dim(self.cols, v.dim())?;
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        let mut m = Self::zeros(self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..r2 {
                    for l in 0..c2 {
                        m.set(i * r2 + k, j * c2 + l, a * other.get(k, l));
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Entrywise max-norm of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max-norm of `self − self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }
}

/// Party layout of a multipartite amplitude vector and the parties kept by a partial trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartySplit {
    parties: usize,
    local_dim: usize,
    keep: Vec<usize>,
    // Per party: whether it is kept, and its place value within its group.
    slots: Vec<(bool, usize)>,
    kept_dim: usize,
    traced_dim: usize,
}

impl PartySplit {
    pub fn new(parties: usize, local_dim: usize, keep: &[usize]) -> Result<Self> {
        if parties == 0 || local_dim == 0 {
            return Err(Error::InvalidSplit(
                "parties and local dimension must be positive".into(),
            ));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(Error::InvalidSplit(format!("repeated party in {keep:?}")));
        }
        if let Some(&p) = sorted.iter().find(|&&p| p >= parties) {
            return Err(Error::InvalidSplit(format!(
                "party {p} out of range for {parties} parties"
            )));
        }
        if local_dim.checked_pow(parties as u32).is_none() {
            return Err(Error::InvalidSplit("state dimension overflows".into()));
        }
        let mut slots = vec![(false, 0); parties];
        let (mut kw, mut tw) = (1, 1);
        for p in (0..parties).rev() {
            if sorted.binary_search(&p).is_ok() {
                slots[p] = (true, kw);
                kw *= local_dim;
            } else {
                slots[p] = (false, tw);
                tw *= local_dim;
            }
        }
        Ok(Self {
            parties,
            local_dim,
            keep: sorted,
            slots,
            kept_dim: kw,
            traced_dim: tw,
        })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn kept_dim(&self) -> usize {
        self.kept_dim
    }

    pub fn traced_dim(&self) -> usize {
        self.traced_dim
    }

    /// `d^N`, the dimension of the full amplitude vector.
    pub fn full_dim(&self) -> usize {
        self.kept_dim * self.traced_dim
    }

    /// Splits a full amplitude index into (kept index, traced index).
    pub fn split(&self, mut index: usize) -> (usize, usize) {
        let (mut kept, mut traced) = (0, 0);
        for &(is_kept, weight) in self.slots.iter().rev() {
            let digit = index % self.local_dim;
            index /= self.local_dim;
            if is_kept {
                kept += digit * weight;
            } else {
                traced += digit * weight;
            }
        }
        (kept, traced)
    }
}

/// Tensor product `u ⊗ v` with `result[i·dim(v)+j] = u[i]·v[j]`.
pub fn tensor(u: &ComplexVector, v: &ComplexVector) -> ComplexVector {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * b))
        .collect()
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Result<Complex64> {
    check_dim(u.dim(), v.dim())?;
    Ok(u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// True iff `‖M†M − 𝕀‖_max ≤ tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let gram = m.adjoint().mul(m)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(m.rows))? <= tol)
}

/// True iff the vectors form an orthonormal basis: `|⟨v_a|v_b⟩ − δ_ab| ≤ tol`.
pub fn gram_is_identity(vs: &[ComplexVector], tol: f64) -> Result<bool> {
    let dim = vs.first().map_or(0, ComplexVector::dim);
    if let Some(bad) = vs.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    if vs.len() != dim {
        return Err(Error::BasisCount {
            count: vs.len(),
            dim,
        });
    }
    let sparse: Vec<SparseVector> = vs.iter().map(SparseVector::from_dense).collect();
    Ok(first_gram_violation(sparse.len(), tol, |a, b| sparse[a].inner(&sparse[b])).is_none())
}

/// `Tr_{parties ∉ keep} |u⟩⟨v|` as a `d^|keep| × d^|keep|` matrix.
///
/// Amplitudes are grouped by their traced index, which is the sparse form of
/// `A_u·A_v†` for the (kept × traced) reshapes `A_u`, `A_v`.
pub fn partial_cross_trace<A, B>(u: &A, v: &B, split: &PartySplit) -> Result<ComplexMatrix>
where
    A: Amplitudes + ?Sized,
    B: Amplitudes + ?Sized,
{
    let n = split.kept_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for_each_cross_term(u, v, split, |r, c, z| out.add_at(r, c, z))?;
    Ok(out)
}

/// Calls `f(kept_u, kept_v, u·v̄)` for every pair of amplitudes sharing a traced index.
pub(crate) fn for_each_cross_term<A, B, F>(u: &A, v: &B, split: &PartySplit, mut f: F) -> Result<()>
where
    A: Amplitudes + ?Sized,
    B: Amplitudes + ?Sized,
    F: FnMut(usize, usize, Complex64),
{
    let full = split.full_dim();
    for dim in [u.dim(), v.dim()] {
        if dim != full {
            return Err(Error::NotAPower {
                dim,
                local_dim: split.local_dim(),
            });
        }
    }
    let grouped = |a: &A| -> Vec<(usize, usize, Complex64)> {
        let mut g: Vec<_> = a
            .nonzeros()
            .map(|(i, z)| {
                let (k, t) = split.split(i);
                (t, k, z)
            })
            .collect();
        g.sort_unstable_by_key(|e| (e.0, e.1));
        g
    };
    let us = grouped(u);
    let vs: Vec<(usize, usize, Complex64)> = {
        let mut g: Vec<_> = v
            .nonzeros()
            .map(|(i, z)| {
                let (k, t) = split.split(i);
                (t, k, z.conj())
            })
            .collect();
        g.sort_unstable_by_key(|e| (e.0, e.1));
        g
    };
    let (mut i, mut j) = (0, 0);
    while i < us.len() && j < vs.len() {
        let (tu, tv) = (us[i].0, vs[j].0);
        if tu < tv {
            i += 1;
        } else if tv < tu {
            j += 1;
        } else {
            let iend = i + us[i..].iter().take_while(|e| e.0 == tu).count();
            let jend = j + vs[j..].iter().take_while(|e| e.0 == tu).count();
            for a in &us[i..iend] {
                for b in &vs[j..jend] {
                    f(a.1, b.1, a.2 * b.2);
                }
            }
            i = iend;
            j = jend;
        }
    }
    Ok(())
}

/// Largest kept dimension for which [`reduced_sum`] assembles the operator
/// and reports its Hermiticity deviation.
pub(crate) const ASSEMBLE_LIMIT: usize = 1024;

/// Outcome of comparing a summed reduced operator with a multiple of 𝕀.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ReducedSum {
    pub deviation: f64,
    /// `None` when the operator was too large to assemble.
    pub hermiticity: Option<f64>,
}

/// Compares `R = Σ_s Tr_{traced} |u_s⟩⟨v_s|` with `target·𝕀` in the max norm.
///
/// `R` is produced one row at a time from the kept-major layout of the `u_s`
/// and the traced-major layout of the `v_s`, so memory is O(nnz + kept_dim)
/// per worker and the full operator is only built below [`ASSEMBLE_LIMIT`].
pub(crate) fn reduced_sum(
    pairs: &[(&SparseVector, &SparseVector)],
    split: &PartySplit,
    target: Complex64,
) -> Result<ReducedSum> {
    let full = split.full_dim();
    for (u, v) in pairs {
        for dim in [u.dim(), v.dim()] {
            if dim != full {
                return Err(Error::NotAPower {
                    dim,
                    local_dim: split.local_dim(),
                });
            }
        }
    }
    let n = split.kept_dim();
    let td = split.traced_dim() as u128;
    let mut rows: Vec<(usize, u128, Complex64)> = Vec::new();
    let mut cols: Vec<(u128, usize, Complex64)> = Vec::new();
    for (s, (u, v)) in pairs.iter().enumerate() {
        let base = s as u128 * td;
        rows.extend(u.entries().iter().map(|&(i, z)| {
            let (k, t) = split.split(i);
            (k, base + t as u128, z)
        }));
        cols.extend(v.entries().iter().map(|&(i, z)| {
            let (k, t) = split.split(i);
            (base + t as u128, k, z.conj())
        }));
    }
    rows.par_sort_unstable_by_key(|e| (e.0, e.1));
    cols.par_sort_unstable_by_key(|e| (e.0, e.1));

    let row_groups: Vec<&[(usize, u128, Complex64)]> = rows.chunk_by(|a, b| a.0 == b.0).collect();
    let col_keys: Vec<u128> = cols.iter().map(|e| e.0).collect();
    let assemble = n <= ASSEMBLE_LIMIT;

    let per_row: Vec<(f64, Option<(usize, Vec<Complex64>)>)> = row_groups
        .par_iter()
        .map_init(
            || (vec![ZERO; n], Vec::<usize>::new(), vec![false; n]),
            |(acc, touched, seen), group| {
                let a = group[0].0;
                for &(_, key, z) in group.iter() {
                    let lo = col_keys.partition_point(|&k| k < key);
                    let hi = lo + col_keys[lo..].partition_point(|&k| k == key);
                    for &(_, b, w) in &cols[lo..hi] {
                        acc[b] += z * w;
                        if !seen[b] {
                            seen[b] = true;
                            touched.push(b);
                        }
                    }
                }
                let mut dev = if seen[a] { 0.0 } else { target.norm() };
                for &b in touched.iter() {
                    let t = if b == a { target } else { ZERO };
                    dev = dev.max((acc[b] - t).norm());
                }
                let row = assemble.then(|| (a, acc.clone()));
                for &b in touched.iter() {
                    acc[b] = ZERO;
                    seen[b] = false;
                }
                touched.clear();
                (dev, row)
            },
        )
        .collect();

    let mut deviation = per_row.iter().map(|r| r.0).fold(0.0, f64::max);
    if row_groups.len() < n && target != ZERO {
        deviation = deviation.max(target.norm());
    }
    let hermiticity = assemble.then(|| {
        let mut m = ComplexMatrix::zeros(n, n);
        for (a, row) in per_row.into_iter().filter_map(|r| r.1) {
            for (b, z) in row.into_iter().enumerate() {
                m.set(a, b, z);
            }
        }
        m.hermiticity_deviation()
    });
    Ok(ReducedSum {
        deviation,
        hermiticity,
    })
}

/// First `(a, b, deviation)` with `a ≤ b` where `|entry(a,b) − δ_ab| > tol`.
pub(crate) fn first_gram_violation<F>(n: usize, tol: f64, entry: F) -> Option<(usize, usize, f64)>
where
    F: Fn(usize, usize) -> Complex64 + Sync,
{
    (0..n).into_par_iter().find_map_first(|a| {
        (a..n).find_map(|b| {
            let target = if a == b { ONE } else { ZERO };
            let dev = (entry(a, b) - target).norm();
            (!(dev <= tol)).then_some((a, b, dev))
        })
    })
}

/// Haar-distributed unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    let v: ComplexVector = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = v.norm();
    v.scale(Complex64::new(1.0 / n, 0.0))
}

/// Random unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in v.iter_mut().zip(c) {
                *x -= proj * a;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            m.set(r, c, *z);
        }
    }
    m
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_of_basis_vectors() {
        let t = tensor(&ComplexVector::basis(2, 0), &ComplexVector::basis(2, 1));
        assert_eq!(t, ComplexVector::basis(4, 1));
        let t = tensor(&ComplexVector::basis(3, 0), &ComplexVector::basis(2, 1));
        assert_eq!(t, ComplexVector::basis(6, 1));
    }

    #[test]
    fn random_tensor_is_unit() {
        let mut rng = StdRng::seed_from_u64(7);
        let u = random_unit_vector(3, &mut rng);
        let v = random_unit_vector(4, &mut rng);
        let norm = tensor(&u, &v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let mut rng = StdRng::seed_from_u64(11);
        let u = random_unit_vector(5, &mut rng);
        let v = random_unit_vector(5, &mut rng);
        let alpha = c(0.3, -1.7);
        let lhs = inner(&u, &v.scale(alpha)).unwrap();
        let rhs = alpha * inner(&u, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        let lhs = inner(&u.scale(alpha), &v).unwrap();
        let rhs = alpha.conj() * inner(&u, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((inner(&u, &u).unwrap() - ONE).norm() < 1e-12);
    }

    #[test]
    fn inner_rejects_mismatched_dimensions() {
        let err = inner(&ComplexVector::zeros(2), &ComplexVector::zeros(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn unitarity() {
        assert!(is_unitary(&ComplexMatrix::identity(5), 1e-12).unwrap());
        assert!(is_unitary(&ComplexMatrix::dft(6), 1e-12).unwrap());
        let skew = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(!is_unitary(&skew, 1e-9).unwrap());
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(is_unitary(&rect, 1e-9), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn dft_columns_form_a_basis() {
        let f = ComplexMatrix::dft(3);
        let cols: Vec<_> = (0..3).map(|j| f.column(j)).collect();
        assert!(gram_is_identity(&cols, 1e-12).unwrap());
    }

    #[test]
    fn repeated_vector_is_not_a_basis() {
        let vs = vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 0)];
        assert!(!gram_is_identity(&vs, 1e-9).unwrap());
        let short = vec![ComplexVector::basis(2, 0)];
        assert!(matches!(
            gram_is_identity(&short, 1e-9),
            Err(Error::BasisCount { count: 1, dim: 2 })
        ));
    }

    #[test]
    fn streamed_reduction_matches_the_assembled_one() {
        let mut rng = StdRng::seed_from_u64(7);
        let split = PartySplit::new(3, 3, &[0, 2]).unwrap();
        let u = SparseVector::from_dense(&random_unit_vector(27, &mut rng));
        let v = SparseVector::from_dense(&random_unit_vector(27, &mut rng));
        let direct = partial_cross_trace(&u, &v, &split)
            .unwrap()
            .add(&partial_cross_trace(&v, &v, &split).unwrap())
            .unwrap();
        let target = c(0.3, 0.1);
        let expected = direct
            .max_abs_diff(&ComplexMatrix::identity(9).scale(target))
            .unwrap();
        let got = reduced_sum(&[(&u, &v), (&v, &v)], &split, target).unwrap();
        assert!((got.deviation - expected).abs() < 1e-12);
        assert!(got.hermiticity.is_some());
    }

    #[test]
    fn streamed_reduction_of_a_product_state() {
        let split = PartySplit::new(2, 2, &[1]).unwrap();
        let e = SparseVector::basis(4, 0);
        let r = reduced_sum(&[(&e, &e)], &split, c(0.5, 0.0)).unwrap();
        assert!((r.deviation - 0.5).abs() < 1e-15);
        assert_eq!(r.hermiticity, Some(0.0));
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexVector::from_real(&[h, 0.0, 0.0, h]);
        let split = PartySplit::new(2, 2, &[0]).unwrap();
        let rho = partial_cross_trace(&bell, &bell, &split).unwrap();
        let target = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(rho.max_abs_diff(&target).unwrap() < 1e-15);
    }

    #[test]
    fn product_state_reduces_to_its_factor() {
        let psi = tensor(&ComplexVector::basis(2, 0), &ComplexVector::basis(2, 1));
        let split = PartySplit::new(2, 2, &[1]).unwrap();
        let rho = partial_cross_trace(&psi, &psi, &split).unwrap();
        let mut target = ComplexMatrix::zeros(2, 2);
        target.set(1, 1, ONE);
        assert_eq!(rho, target);
    }

    #[test]
    fn cross_trace_trace_equals_inner_product() {
        let mut rng = StdRng::seed_from_u64(3);
        let u = random_unit_vector(8, &mut rng);
        let v = random_unit_vector(8, &mut rng);
        let expected = inner(&v, &u).unwrap();
        for keep in [vec![], vec![0], vec![1], vec![2], vec![0, 2], vec![0, 1, 2]] {
            let split = PartySplit::new(3, 2, &keep).unwrap();
            let rho = partial_cross_trace(&u, &v, &split).unwrap();
            assert!((rho.trace() - expected).norm() < 1e-12, "keep {keep:?}");
        }
    }

    #[test]
    fn split_is_big_endian() {
        let split = PartySplit::new(3, 3, &[0, 2]).unwrap();
        // Index 2·9 + 1·3 + 0 has digits (2, 1, 0).
        assert_eq!(split.split(21), (2 * 3, 1));
        assert_eq!(split.kept_dim(), 9);
        assert_eq!(split.traced_dim(), 3);
    }

    #[test]
    fn cross_trace_rejects_wrong_dimension() {
        let split = PartySplit::new(2, 2, &[0]).unwrap();
        let v = ComplexVector::zeros(3);
        assert!(matches!(
            partial_cross_trace(&v, &v, &split),
            Err(Error::NotAPower { dim: 3, local_dim: 2 })
        ));
    }

    #[test]
    fn split_rejects_bad_parties() {
        assert!(PartySplit::new(2, 2, &[2]).is_err());
        assert!(PartySplit::new(2, 2, &[1, 1]).is_err());
    }

    #[test]
    fn sparse_and_dense_agree() {
        let mut rng = StdRng::seed_from_u64(5);
        let u = random_unit_vector(9, &mut rng);
        let v = random_unit_vector(9, &mut rng);
        let (su, sv) = (SparseVector::from_dense(&u), SparseVector::from_dense(&v));
        assert!((su.inner(&sv) - inner(&u, &v).unwrap()).norm() < 1e-14);
        assert_eq!(su.to_dense(), u);
        let t = su.tensor(&sv).to_dense();
        assert!(tensor(&u, &v)
            .iter()
            .zip(t.iter())
            .all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn sparse_constructor_merges_and_checks_range() {
        let s = SparseVector::new(4, vec![(3, ONE), (1, ONE), (3, ONE), (2, ZERO)]).unwrap();
        assert_eq!(s.entries(), &[(1, ONE), (3, c(2.0, 0.0))]);
        assert!(SparseVector::new(2, vec![(2, ONE)]).is_err());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = StdRng::seed_from_u64(1);
        for n in 1..6 {
            assert!(is_unitary(&random_unitary(n, &mut rng), 1e-12).unwrap());
        }
    }
}
