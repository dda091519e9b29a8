//! Orthogonal arrays and their correspondence with MOLS and MOLC.

use itertools::Itertools;
use rayon::prelude::*;

use super::field::gf_make;
use super::latin::{ClassicalProperty, LatinDesign, verify_classical};
use crate::{Arity, Error, Result};

/// An `r × N` array over `levels` symbols of the given strength.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalArray {
    levels: usize,
    strength: usize,
    rows: Vec<Vec<usize>>,
}

impl OrthogonalArray {
    pub fn new(levels: usize, strength: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let factors = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || factors == 0 || levels == 0 {
            return Err(Error::Malformed("array must be non-empty".into()));
        }
        if rows.iter().any(|r| r.len() != factors) {
            return Err(Error::Malformed("rows differ in length".into()));
        }
        if rows.iter().flatten().any(|&s| s >= levels) {
            return Err(Error::Malformed(format!("symbol outside 0..{levels}")));
        }
        if strength == 0 || strength > factors {
            return Err(Error::Malformed(format!(
                "strength {strength} not in 1..={factors}"
            )));
        }
        Ok(Self {
            levels,
            strength,
            rows,
        })
    }

    pub fn runs(&self) -> usize {
        self.rows.len()
    }

    pub fn factors(&self) -> usize {
        self.rows[0].len()
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Index λ = r / d^k.
    pub fn index(&self) -> Option<usize> {
        let cells = self.levels.checked_pow(self.strength as u32)?;
        (self.runs() % cells == 0).then(|| self.runs() / cells)
    }
}

/// Checks that every k-column subarray contains each k-tuple exactly λ times.
pub fn verify_oa(oa: &OrthogonalArray) -> Result<bool> {
    let lambda = oa.index().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{} runs not divisible by {}^{}",
            oa.runs(),
            oa.levels,
            oa.strength
        ))
    })?;
    let d = oa.levels;
    let subsets: Vec<Vec<usize>> = (0..oa.factors()).combinations(oa.strength).collect();
    Ok(subsets.par_iter().all(|cols| {
        let mut counts = vec![0usize; d.pow(cols.len() as u32)];
        for row in &oa.rows {
            counts[cols.iter().fold(0, |acc, &c| acc * d + row[c])] += 1;
        }
        counts.iter().all(|&n| n == lambda)
    }))
}

/// Rows `(i, j, L¹(i,j), …, L^t(i,j))` of a set of MOLS.
pub fn mols_to_oa(squares: &[LatinDesign]) -> Result<OrthogonalArray> {
    require(
        !squares.is_empty()
            && squares.iter().all(|s| s.arity() == Arity::Square && s.holes().is_empty())
            && verify_classical(squares, ClassicalProperty::MolsPairwise)?,
        "input squares are not mutually orthogonal Latin squares",
    )?;
    let d = squares[0].order();
    let rows = (0..d * d)
        .map(|x| {
            let (i, j) = (x / d, x % d);
            let mut row = vec![i, j];
            row.extend(squares.iter().map(|s| s.get(&[i, j]).unwrap_or(0)));
            row
        })
        .collect();
    OrthogonalArray::new(d, 2, rows)
}

/// Reads columns 0 and 1 as the address and the rest as squares.
pub fn oa_to_mols(oa: &OrthogonalArray) -> Result<Vec<LatinDesign>> {
    require(
        oa.strength == 2 && oa.index() == Some(1) && oa.factors() >= 3 && verify_oa(oa)?,
        "array is not an OA(d², t+2, d, 2)",
    )?;
    let d = oa.levels;
    (2..oa.factors())
        .map(|c| {
            let mut cells = vec![None; d * d];
            for row in &oa.rows {
                cells[row[0] * d + row[1]] = Some(row[c]);
            }
            LatinDesign::new(Arity::Square, d, cells, Vec::new())
        })
        .collect()
}

/// Strength-3 array from the Reed–Solomon code whose coefficient columns are
/// the conic `{(1, e, e²)} ∪ {(0, 0, 1)}`, plus the nucleus `(0, 1, 0)` for even q.
///
/// The first three conic columns address the rows, which are listed in
/// lexicographic address order.
pub fn oa_strength3_rs(q: usize) -> Result<OrthogonalArray> {
    let f = gf_make(q)?;
    if q < 3 {
        return Err(Error::InvalidParameter(format!(
            "strength-3 construction needs q ≥ 3, got {q}"
        )));
    }
    let mut columns: Vec<[usize; 3]> = (0..q).map(|e| [1, e, f.mul(e, e)]).collect();
    columns.push([0, 0, 1]);
    if q % 2 == 0 {
        columns.push([0, 1, 0]);
    }
    let det = |a: [usize; 3], b: [usize; 3], c: [usize; 3]| {
        let minor = |x: usize, y: usize, z: usize, w: usize| f.sub(f.mul(x, y), f.mul(z, w));
        let t0 = f.mul(a[0], minor(b[1], c[2], b[2], c[1]));
        let t1 = f.mul(a[1], minor(b[0], c[2], b[2], c[0]));
        let t2 = f.mul(a[2], minor(b[0], c[1], b[1], c[0]));
        f.add(f.sub(t0, t1), t2)
    };
    for triple in (0..columns.len()).combinations(3) {
        if det(columns[triple[0]], columns[triple[1]], columns[triple[2]]) == 0 {
            return Err(Error::InvalidParameter(format!(
                "coefficient columns {triple:?} are dependent over GF({q})"
            )));
        }
    }
    let mut rows: Vec<Vec<usize>> = (0..q * q * q)
        .map(|m| {
            let msg = [m / (q * q), (m / q) % q, m % q];
            columns
                .iter()
                .map(|c| {
                    (0..3).fold(0, |acc, s| f.add(acc, f.mul(msg[s], c[s])))
                })
                .collect()
        })
        .collect();
    // The address map m ↦ (⟨m,c₀⟩, ⟨m,c₁⟩, ⟨m,c₂⟩) is invertible, so sorting
    // by the first three entries re-indexes rows by literal (i, j, k).
    rows.sort();
    OrthogonalArray::new(q, 3, rows)
}

/// Reads columns 0–2 as the cube address and the rest as cubes.
pub fn oa_to_molc(oa: &OrthogonalArray) -> Result<Vec<LatinDesign>> {
    require(oa.strength == 3 && oa.factors() >= 4, "array is not of strength 3")?;
    let d = oa.levels;
    let mut seen = vec![false; d * d * d];
    for row in &oa.rows {
        let addr = (row[0] * d + row[1]) * d + row[2];
        require(!seen[addr], "address columns do not form a bijection")?;
        seen[addr] = true;
    }
    require(
        oa.runs() == d * d * d && seen.iter().all(|&s| s),
        "address columns do not form a bijection",
    )?;
    (3..oa.factors())
        .map(|c| {
            let mut cells = vec![None; d * d * d];
            for row in &oa.rows {
                cells[(row[0] * d + row[1]) * d + row[2]] = Some(row[c]);
            }
            LatinDesign::new(Arity::Cube, d, cells, Vec::new())
        })
        .collect()
}

/// Rows `(i, j, k, L¹(i,j,k), …, L^t(i,j,k))`.
pub fn molc_to_oa(cubes: &[LatinDesign]) -> Result<OrthogonalArray> {
    require(
        cubes.iter().all(|c| c.arity() == Arity::Cube),
        "inputs must be cubes",
    )?;
    require(
        verify_classical(cubes, ClassicalProperty::MolcWithB)?,
        "input cubes are not mutually orthogonal with Property (B)",
    )?;
    let d = cubes[0].order();
    let rows = (0..d * d * d)
        .map(|x| {
            let addr = [x / (d * d), (x / d) % d, x % d];
            let mut row = addr.to_vec();
            row.extend(cubes.iter().map(|c| c.get(&addr).unwrap_or(0)));
            row
        })
        .collect();
    OrthogonalArray::new(d, 3, rows)
}

fn require(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::VerificationFailed(msg.into()))
    }
}
