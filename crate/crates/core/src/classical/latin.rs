//! Classical Latin squares and cubes, with optional coordinate-aligned holes.

use std::collections::HashSet;

use super::field::{gf_make, GaloisField};
use crate::{Arity, Error, Result};

/// Integer grid of symbols `0..order`; `None` marks a hole cell.
///
/// Holes are index subsets `V_i`; exactly the cells in some `V_i × V_i` are
/// empty. Cubes carry no holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinDesign {
    arity: Arity,
    order: usize,
    cells: Vec<Option<usize>>,
    holes: Vec<Vec<usize>>,
}

/// Property checked by [`verify_classical`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalProperty {
    /// Every design is a Latin square/cube (incomplete squares per their holes).
    Latin,
    /// Latin, and every pair superimposes to each admissible ordered pair once.
    MolsPairwise,
    /// A single square orthogonal to its transpose.
    Sols,
    /// A single square with holes partitioning the symbols, orthogonal to its transpose.
    Hsols,
    /// At least three mutually orthogonal cubes whose corresponding planes are orthogonal.
    MolcWithB,
}

impl LatinDesign {
    pub fn new(
        arity: Arity,
        order: usize,
        cells: Vec<Option<usize>>,
        holes: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::Malformed("order must be positive".into()));
        }
        let expected = arity.cell_count(order);
        if cells.len() != expected {
            return Err(Error::Malformed(format!(
                "expected {expected} cells, found {}",
                cells.len()
            )));
        }
        if let Some(s) = cells.iter().flatten().find(|&&s| s >= order) {
            return Err(Error::Malformed(format!("symbol {s} out of range 0..{order}")));
        }
        let holes = normalize_holes(&holes, order)?;
        if arity == Arity::Cube && !holes.is_empty() {
            return Err(Error::Malformed("cubes cannot carry holes".into()));
        }
        let design = Self {
            arity,
            order,
            cells,
            holes,
        };
        for (idx, cell) in design.cells.iter().enumerate() {
            let addr = arity.address(order, idx);
            let in_hole = design.is_hole_address(&addr);
            if in_hole != cell.is_none() {
                return Err(Error::Malformed(format!(
                    "cell {addr:?} is {} but {} a hole block",
                    if cell.is_none() { "empty" } else { "filled" },
                    if in_hole { "lies in" } else { "is outside" },
                )));
            }
        }
        Ok(design)
    }

    /// Square without holes from explicit rows.
    pub fn square(rows: &[Vec<usize>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Malformed("rows must all have length equal to the order".into()));
        }
        Self::new(
            Arity::Square,
            d,
            rows.iter().flatten().map(|&s| Some(s)).collect(),
            Vec::new(),
        )
    }

    /// Square of order `d` filled by `f(i, j)`.
    pub fn square_from_fn(d: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let cells = (0..d * d).map(|x| Some(f(x / d, x % d))).collect();
        Self::new(Arity::Square, d, cells, Vec::new())
    }

    /// Cube of order `d` filled by `f(i, j, k)`.
    pub fn cube_from_fn(d: usize, f: impl Fn(usize, usize, usize) -> usize) -> Result<Self> {
        let cells = (0..d * d * d)
            .map(|x| Some(f(x / (d * d), (x / d) % d, x % d)))
            .collect();
        Self::new(Arity::Cube, d, cells, Vec::new())
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    pub fn holes(&self) -> &[Vec<usize>] {
        &self.holes
    }

    pub fn get(&self, address: &[usize]) -> Option<usize> {
        self.cells[self.arity.index(self.order, address)]
    }

    /// Index of the hole containing symbol/coordinate `i`.
    pub fn hole_of(&self, i: usize) -> Option<usize> {
        self.holes.iter().position(|h| h.contains(&i))
    }

    fn is_hole_address(&self, addr: &[usize]) -> bool {
        match self.hole_of(addr[0]) {
            Some(h) => addr.iter().all(|&c| self.holes[h].contains(&c)),
            None => false,
        }
    }

    /// Transposed square; holes are symmetric and carry over unchanged.
    pub fn transpose(&self) -> Result<Self> {
        if self.arity != Arity::Square {
            return Err(Error::Malformed("transpose needs a square".into()));
        }
        let d = self.order;
        let cells = (0..d * d).map(|x| self.cells[(x % d) * d + x / d]).collect();
        Ok(Self {
            cells,
            ..self.clone()
        })
    }

    /// Every axis-parallel line as a list of cell indices, tagged with the
    /// fixed coordinate used to decide which hole the line crosses.
    fn lines(&self) -> Vec<(usize, Vec<usize>)> {
        let d = self.order;
        let mut out = Vec::new();
        match self.arity {
            Arity::Square => {
                for i in 0..d {
                    out.push((i, (0..d).map(|j| i * d + j).collect()));
                    out.push((i, (0..d).map(|j| j * d + i).collect()));
                }
            }
            Arity::Cube => {
                for a in 0..d {
                    for b in 0..d {
                        out.push((a, (0..d).map(|x| (a * d + b) * d + x).collect()));
                        out.push((a, (0..d).map(|x| (a * d + x) * d + b).collect()));
                        out.push((a, (0..d).map(|x| (x * d + a) * d + b).collect()));
                    }
                }
            }
        }
        out
    }

    fn is_latin(&self) -> bool {
        let d = self.order;
        self.lines().into_iter().all(|(fixed, line)| {
            let forbidden: &[usize] = match self.hole_of(fixed) {
                Some(h) => &self.holes[h],
                None => &[],
            };
            let symbols: Vec<usize> = line.iter().filter_map(|&x| self.cells[x]).collect();
            let distinct: HashSet<usize> = symbols.iter().copied().collect();
            distinct.len() == symbols.len()
                && symbols.len() == d - forbidden.len()
                && symbols.iter().all(|s| !forbidden.contains(s))
        })
    }
}

fn normalize_holes(holes: &[Vec<usize>], order: usize) -> Result<Vec<Vec<usize>>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(holes.len());
    for hole in holes {
        if hole.is_empty() {
            return Err(Error::Malformed("empty hole".into()));
        }
        let mut h = hole.clone();
        h.sort_unstable();
        for &i in &h {
            if i >= order {
                return Err(Error::Malformed(format!("hole index {i} out of range 0..{order}")));
            }
            if !seen.insert(i) {
                return Err(Error::Malformed(format!("hole index {i} appears twice")));
            }
        }
        out.push(h);
    }
    Ok(out)
}

pub(crate) fn normalize_hole_list(holes: &[Vec<usize>], order: usize) -> Result<Vec<Vec<usize>>> {
    normalize_holes(holes, order)
}

/// True when two designs superimpose to every ordered pair outside `∪ V_i × V_i` exactly once.
fn orthogonal_pair(a: &LatinDesign, b: &LatinDesign) -> bool {
    let d = a.order;
    let mut seen = vec![false; d * d];
    let mut count = 0;
    for (x, y) in a.cells.iter().zip(&b.cells) {
        match (x, y) {
            (Some(x), Some(y)) => {
                if seen[x * d + y] {
                    return false;
                }
                if let Some(h) = a.hole_of(*x) {
                    if a.holes[h].contains(y) {
                        return false;
                    }
                }
                seen[x * d + y] = true;
                count += 1;
            }
            (None, None) => {}
            _ => return false,
        }
    }
    let hole_area: usize = a.holes.iter().map(|h| h.len() * h.len()).sum();
    count == d * d - hole_area
}

/// Exhaustively checks a classical property of one or more designs.
pub fn verify_classical(designs: &[LatinDesign], property: ClassicalProperty) -> Result<bool> {
    let first = designs
        .first()
        .ok_or_else(|| Error::Malformed("no designs given".into()))?;
    for d in designs {
        if d.order != first.order || d.arity != first.arity {
            return Err(Error::Malformed("designs differ in order or arity".into()));
        }
        if d.holes != first.holes {
            return Err(Error::HoleMismatch("designs declare different holes".into()));
        }
    }
    let all_latin = designs.iter().all(LatinDesign::is_latin);
    let pairwise = |ds: &[&LatinDesign]| {
        ds.iter()
            .enumerate()
            .all(|(i, a)| ds[i + 1..].iter().all(|b| orthogonal_pair(a, b)))
    };
    let single = || -> Result<&LatinDesign> {
        match designs {
            [one] if one.arity == Arity::Square => Ok(one),
            _ => Err(Error::Malformed("property needs exactly one square".into())),
        }
    };
    Ok(match property {
        ClassicalProperty::Latin => all_latin,
        ClassicalProperty::MolsPairwise => {
            all_latin && pairwise(&designs.iter().collect::<Vec<_>>())
        }
        ClassicalProperty::Sols => {
            let s = single()?;
            s.holes.is_empty() && all_latin && orthogonal_pair(s, &s.transpose()?)
        }
        ClassicalProperty::Hsols => {
            let s = single()?;
            let covered: usize = s.holes.iter().map(Vec::len).sum();
            !s.holes.is_empty()
                && covered == s.order
                && all_latin
                && orthogonal_pair(s, &s.transpose()?)
        }
        ClassicalProperty::MolcWithB => {
            if first.arity != Arity::Cube || designs.len() < 3 {
                return Err(Error::Malformed("need at least three cubes".into()));
            }
            all_latin && cubes_orthogonal(designs) && property_b(designs)
        }
    })
}

fn cubes_orthogonal(cubes: &[LatinDesign]) -> bool {
    let d = cubes[0].order;
    let n = cubes.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mut seen = vec![false; d * d * d];
                for x in 0..d * d * d {
                    let (Some(u), Some(v), Some(w)) =
                        (cubes[a].cells[x], cubes[b].cells[x], cubes[c].cells[x])
                    else {
                        return false;
                    };
                    let key = (u * d + v) * d + w;
                    if seen[key] {
                        return false;
                    }
                    seen[key] = true;
                }
            }
        }
    }
    true
}

/// Cell indices of the plane `axis = p` of a cube, ordered by the remaining two axes.
pub(crate) fn plane_indices(d: usize, axis: usize, p: usize) -> Vec<usize> {
    (0..d * d)
        .map(|x| {
            let (u, v) = (x / d, x % d);
            match axis {
                0 => (p * d + u) * d + v,
                1 => (u * d + p) * d + v,
                _ => (u * d + v) * d + p,
            }
        })
        .collect()
}

fn property_b(cubes: &[LatinDesign]) -> bool {
    let d = cubes[0].order;
    for a in 0..cubes.len() {
        for b in a + 1..cubes.len() {
            for axis in 0..3 {
                for p in 0..d {
                    let mut seen = vec![false; d * d];
                    for x in plane_indices(d, axis, p) {
                        let key = cubes[a].cells[x].unwrap_or(0) * d + cubes[b].cells[x].unwrap_or(0);
                        if seen[key] {
                            return false;
                        }
                        seen[key] = true;
                    }
                }
            }
        }
    }
    true
}

/// The q−1 squares `L_e(i,j) = e·i + j` over GF(q), e ≠ 0.
pub fn mols_prime_power(q: usize) -> Result<Vec<LatinDesign>> {
    let f = gf_make(q)?;
    (1..q)
        .map(|e| LatinDesign::square_from_fn(q, |i, j| f.add(f.mul(e, i), j)))
        .collect()
}

fn sols_admissible(f: &GaloisField, lam: usize) -> bool {
    lam < f.order() && lam != 0 && lam != 1 && f.add(lam, lam) != 1
}

/// Idempotent self-orthogonal square `L(i,j) = λi + (1−λ)j` over GF(q).
pub fn sols_prime_power(q: usize, lam: usize) -> Result<LatinDesign> {
    let f = gf_make(q)?;
    if q < 4 {
        return Err(Error::InvalidParameter(format!("no SOLS of order {q}")));
    }
    if !sols_admissible(&f, lam) {
        return Err(Error::InvalidParameter(format!(
            "λ = {lam} must be a field element outside {{0, 1}} with 2λ ≠ 1"
        )));
    }
    idempotent_square(&f, lam)
}

fn idempotent_square(f: &GaloisField, lam: usize) -> Result<LatinDesign> {
    let mu = f.sub(1, lam);
    LatinDesign::square_from_fn(f.order(), |i, j| f.add(f.mul(lam, i), f.mul(mu, j)))
}

fn remove_diagonal(square: &LatinDesign) -> Result<LatinDesign> {
    let d = square.order;
    let cells = (0..d * d)
        .map(|x| if x / d == x % d { None } else { square.cells[x] })
        .collect();
    LatinDesign::new(Arity::Square, d, cells, (0..d).map(|i| vec![i]).collect())
}

/// HSOLS(1^q): an idempotent SOLS(q) with its diagonal emptied.
pub fn hsols_unit_holes(q: usize) -> Result<LatinDesign> {
    let f = gf_make(q)?;
    if q < 4 {
        return Err(Error::InvalidParameter(format!("no HSOLS(1^{q})")));
    }
    let lam = (2..q)
        .find(|&l| sols_admissible(&f, l))
        .ok_or_else(|| Error::InvalidParameter(format!("no admissible λ in GF({q})")))?;
    remove_diagonal(&idempotent_square(&f, lam)?)
}

/// 2-HMOLS(1^q): two idempotent orthogonal squares `L_λ1`, `L_λ2` with diagonals emptied.
pub fn hmols_unit_holes(q: usize) -> Result<Vec<LatinDesign>> {
    let f = gf_make(q)?;
    let lams: Vec<usize> = (2..q).take(2).collect();
    if q < 4 || lams.len() < 2 {
        return Err(Error::InvalidParameter(format!("no admissible λ pair in GF({q})")));
    }
    lams.into_iter()
        .map(|l| remove_diagonal(&idempotent_square(&f, l)?))
        .collect()
}

/// MacNeish product: `C((i,m),(j,n)) = A(i,j)·order(b) + B(m,n)`.
pub fn direct_product_ls(a: &LatinDesign, b: &LatinDesign) -> Result<LatinDesign> {
    if a.arity != b.arity {
        return Err(Error::Malformed("cannot multiply a square by a cube".into()));
    }
    if !a.holes.is_empty() || !b.holes.is_empty() {
        return Err(Error::Malformed("direct product needs complete designs".into()));
    }
    let (da, db) = (a.order, b.order);
    let d = da * db;
    let arity = a.arity;
    let cells = (0..arity.cell_count(d))
        .map(|x| {
            let addr = arity.address(d, x);
            let outer: Vec<usize> = addr.iter().map(|c| c / db).collect();
            let inner: Vec<usize> = addr.iter().map(|c| c % db).collect();
            Some(a.get(&outer).unwrap_or(0) * db + b.get(&inner).unwrap_or(0))
        })
        .collect();
    LatinDesign::new(arity, d, cells, Vec::new())
}
