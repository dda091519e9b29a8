//! Quantum combinatorial designs.
//!
//! Constructs and verifies quantum Latin squares and cubes (plain, orthogonal,
//! self-orthogonal and incomplete), quantum orthogonal arrays, and the
//! k-uniform multipartite states they generate. Classical Latin squares,
//! orthogonal arrays and finite fields live in [`classical`].
//!
//! All comparisons take an explicit tolerance; [`DEFAULT_TOL`] is `1e-9`.

pub mod classical;
pub mod construct;
mod error;
pub mod fixtures;
pub mod linalg;
pub mod qdesign;
pub mod qoa;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default absolute tolerance for every numerical comparison.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Shape of a design grid: a square (two coordinates) or a cube (three).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arity {
    Square,
    Cube,
}

impl Arity {
    /// Number of coordinates per address.
    pub fn rank(self) -> usize {
        match self {
            Arity::Square => 2,
            Arity::Cube => 3,
        }
    }

    pub fn from_rank(rank: usize) -> Option<Self> {
        match rank {
            2 => Some(Arity::Square),
            3 => Some(Arity::Cube),
            _ => None,
        }
    }

    /// Number of cells of a grid of the given order.
    pub fn cell_count(self, order: usize) -> usize {
        order.pow(self.rank() as u32)
    }

    /// Row-major flat index of an address.
    pub fn index(self, order: usize, address: &[usize]) -> usize {
        debug_assert_eq!(address.len(), self.rank());
        address.iter().fold(0, |acc, &c| acc * order + c)
    }

    /// Inverse of [`Arity::index`].
    pub fn address(self, order: usize, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.rank()];
        for slot in out.iter_mut().rev() {
            *slot = index % order;
            index /= order;
        }
        out
    }
}

/// First violated condition found by a verifier.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Human-readable description including the offending addresses.
    pub condition: String,
    /// Numeric deviation that exceeded the tolerance.
    pub deviation: f64,
}

/// Outcome of a verification run.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(Violation),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(v) => Some(v),
        }
    }

    pub(crate) fn fail(condition: impl Into<String>, deviation: f64) -> Self {
        Verdict::Fail(Violation {
            condition: condition.into(),
            deviation,
        })
    }

    /// Keeps the first failure of a sequence of checks.
    pub(crate) fn and_then(self, next: impl FnOnce() -> Result<Verdict>) -> Result<Verdict> {
        match self {
            Verdict::Pass => next(),
            fail => Ok(fail),
        }
    }
}
