//! Worked examples: explicit designs of small order, each verified before it
//! is served.
//!
//! Fixtures are built once per process and cached. Each holds one or more
//! labelled parts; the first part is the headline design.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::classical::LatinDesign;
use crate::construct::{
    fill_holes, hsoqls_product, moqlc_from_molc, moqls_from_mols, soqls_fill, BlockUnitary,
    TauPattern,
};
use crate::linalg::{ComplexMatrix, ComplexVector, SparseVector};
use crate::qdesign::{
    embed_classical, verify_hsoqls, verify_iqls, verify_moqlc, verify_moqls, verify_qls,
    verify_soqls, QuantumGrid,
};
use crate::qoa::{verify_qoa, QuantumOrthogonalArray};
use crate::{Arity, Error, Result, DEFAULT_TOL};

/// Names accepted by [`fixture`].
pub const FIXTURE_NAMES: [&str; 8] = [
    "soqls14",
    "moqls12",
    "qls4_7",
    "soqls16",
    "hsoqls3_4",
    "moqlc16",
    "qoa_bell",
    "qoa343",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Design {
    Grids(Vec<QuantumGrid>),
    Array(QuantumOrthogonalArray),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Part {
    pub label: &'static str,
    pub design: Design,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub parts: Vec<Part>,
    /// Repairs and table discrepancies worth knowing about.
    pub notes: Vec<&'static str>,
}

impl Fixture {
    pub fn part(&self, label: &str) -> Option<&Design> {
        self.parts.iter().find(|p| p.label == label).map(|p| &p.design)
    }

    pub fn grids(&self, label: &str) -> Option<&[QuantumGrid]> {
        match self.part(label)? {
            Design::Grids(gs) => Some(gs),
            Design::Array(_) => None,
        }
    }

    pub fn array(&self, label: &str) -> Option<&QuantumOrthogonalArray> {
        match self.part(label)? {
            Design::Array(q) => Some(q),
            Design::Grids(_) => None,
        }
    }

    /// The headline design.
    pub fn main(&self) -> &Design {
        &self.parts[0].design
    }
}

/// Looks up a fixture by name, building and verifying it on first use.
pub fn fixture(name: &str) -> Result<&'static Fixture> {
    static CACHE: [OnceLock<Result<Fixture>>; 8] = [const { OnceLock::new() }; 8];
    let slot = FIXTURE_NAMES
        .iter()
        .position(|&n| n == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    CACHE[slot]
        .get_or_init(|| build(FIXTURE_NAMES[slot]))
        .as_ref()
        .map_err(Clone::clone)
}

fn build(name: &'static str) -> Result<Fixture> {
    let fixture = match name {
        "soqls14" => soqls14(),
        "moqls12" => moqls12(),
        "qls4_7" => qls4_7(),
        "soqls16" => soqls16(),
        "hsoqls3_4" => hsoqls3_4(),
        "moqlc16" => moqlc16(),
        "qoa_bell" => qoa_bell(),
        "qoa343" => qoa343(),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    }?;
    self_test(&fixture)?;
    Ok(fixture)
}

fn self_test(f: &Fixture) -> Result<()> {
    let tol = DEFAULT_TOL;
    let grids = |label| f.grids(label).expect("part present");
    let checks: Vec<(&str, bool)> = match f.name {
        "soqls14" => vec![("square", verify_soqls(&grids("square")[0], tol)?)],
        "moqls12" => vec![("pair", verify_moqls(grids("pair"), tol)?)],
        "qls4_7" => vec![
            ("phi_filled", verify_qls(&grids("phi_filled")[0], tol)?),
            ("psi_filled", verify_qls(&grids("psi_filled")[0], tol)?),
            ("phi", verify_iqls(&grids("phi")[0], tol)?),
            ("psi", verify_iqls(&grids("psi")[0], tol)?),
        ],
        "soqls16" => vec![
            ("square", verify_soqls(&grids("square")[0], tol)?),
            ("hsols", verify_hsoqls(&grids("hsols")[0], tol)?),
            ("sols", verify_soqls(&grids("sols")[0], tol)?),
        ],
        "hsoqls3_4" => vec![
            ("square", verify_hsoqls(&grids("square")[0], tol)?),
            ("psi", verify_hsoqls(&grids("psi")[0], tol)?),
            ("pair", verify_moqls(grids("pair"), tol)?),
        ],
        "moqlc16" => vec![("cubes", verify_moqlc(grids("cubes"), tol)?)],
        "qoa_bell" | "qoa343" => vec![("array", verify_qoa(f.array("array").expect("array"), tol)?)],
        _ => Vec::new(),
    };
    match checks.iter().find(|c| !c.1) {
        Some((label, _)) => Err(Error::VerificationFailed(format!(
            "fixture {} part {label} fails its verifier",
            f.name
        ))),
        None => Ok(()),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn part(label: &'static str, grids: Vec<QuantumGrid>) -> Part {
    Part {
        label,
        design: Design::Grids(grids),
    }
}

/// One entry of a printed table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Ket(usize),
    /// `U|n⟩` for the block unitary of the surrounding construction.
    UKet(usize),
    /// The n-th auxiliary vector of the table (1-based).
    Aux(usize),
    Hole,
}

fn tokens(rows: &[&str]) -> Vec<Vec<Token>> {
    rows.iter()
        .map(|r| {
            r.split_whitespace()
                .map(|t| match t {
                    "." => Token::Hole,
                    _ if t.starts_with('U') => Token::UKet(t[1..].parse().expect("table entry")),
                    _ if t.starts_with('p') => Token::Aux(t[1..].parse().expect("table entry")),
                    _ => Token::Ket(t.parse().expect("table entry")),
                })
                .collect()
        })
        .collect()
}

fn grid_from_table(
    rows: &[&str],
    holes: Vec<Vec<usize>>,
    aux: impl Fn(usize) -> ComplexVector,
    u: Option<&ComplexMatrix>,
) -> Result<QuantumGrid> {
    let table = tokens(rows);
    let d = table.len();
    let cells = table
        .iter()
        .flatten()
        .map(|&t| match t {
            Token::Hole => Ok(None),
            Token::Ket(n) => Ok(Some(ComplexVector::basis(d, n))),
            Token::Aux(n) => Ok(Some(aux(n))),
            Token::UKet(n) => u
                .ok_or_else(|| Error::Malformed("table needs a unitary".into()))?
                .apply(&ComplexVector::basis(d, n))
                .map(Some),
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumGrid::new(Arity::Square, d, d, cells, holes)
}

fn no_aux(_: usize) -> ComplexVector {
    unreachable!("table has no auxiliary vectors")
}

fn square(rows: &[&[usize]]) -> Result<LatinDesign> {
    LatinDesign::square(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn unit_holes(d: usize) -> Vec<Vec<usize>> {
    (0..d).map(|i| vec![i]).collect()
}

fn hadamard_filler() -> Result<QuantumGrid> {
    let h = FRAC_1_SQRT_2;
    let plus = ComplexVector::from_real(&[h, h]);
    let minus = ComplexVector::from_real(&[h, -h]);
    QuantumGrid::new(
        Arity::Square,
        2,
        2,
        vec![Some(plus.clone()), Some(minus.clone()), Some(minus), Some(plus)],
        Vec::new(),
    )
}

fn trivial_filler() -> Result<QuantumGrid> {
    QuantumGrid::from_fn(Arity::Square, 1, 1, |_| ComplexVector::basis(1, 0))
}

const SOQLS14: &[&str] = &[
    " 0  6 13  7 12  3  8 10  9 11  5  4  2  1",
    "10  1  7 12  5 11  2  4 13  3  9  6  8  0",
    " 8 11  2  9  7 13 10  6 12  1  4  5  0  3",
    "13  7 10  3  6  4  9  1 11 12  8  0  5  2",
    " 9 12  0 11  4  6  3  2 10 13  7  8  1  5",
    " 6  8  1 10 13  5 12 11  7  2  0  3  9  4",
    "12  9  8 13 11  0  6  5  3 10  2  1  4  7",
    " 5 13 12  8 10  2 11  7  4  0  1  9  3  6",
    "11  5  3  0  1 10 13 12  8  4  6  2  7  9",
    " 4 10 11  1  2 12  0 13  5  9  3  7  6  8",
    " 7  0  6  2  9  8  4  3  1  5 p1 p2 p3 p4",
    " 1  2  9  4  3  7  5  8  0  6 p4 p3 p2 p1",
    " 3  4  5  6  0  1  7  9  2  8 p2 p1 p4 p3",
    " 2  3  4  5  8  9  1  0  6  7 p3 p4 p1 p2",
];
const HSOLS16: &[&str] = &[
    " .  .  .  . 12 13 14 15  4  5  6  7  8  9 10 11",
    " .  .  .  . 14 15 12 13  6  7  4  5 10 11  8  9",
    " .  .  .  . 15 14 13 12  7  6  5  4 11 10  9  8",
    " .  .  .  . 13 12 15 14  5  4  7  6  9  8 11 10",
    " 8  9 10 11  .  .  .  . 12 13 14 15  0  1  2  3",
    "11 10  9  8  .  .  .  . 14 15 12 13  2  3  0  1",
    " 9  8 11 10  .  .  .  . 15 14 13 12  3  2  1  0",
    "10 11  8  9  .  .  .  . 13 12 15 14  1  0  3  2",
    "12 13 14 15  0  1  2  3  .  .  .  .  4  5  6  7",
    "15 14 13 12  3  2  1  0  .  .  .  .  6  7  4  5",
    "13 12 15 14  1  0  3  2  .  .  .  .  7  6  5  4",
    "14 15 12 13  2  3  0  1  .  .  .  .  5  4  7  6",
    " 4  5  6  7  8  9 10 11  0  1  2  3  .  .  .  .",
    " 7  6  5  4 11 10  9  8  3  2  1  0  .  .  .  .",
    " 5  4  7  6  9  8 11 10  1  0  3  2  .  .  .  .",
    " 6  7  4  5 10 11  8  9  2  3  0  1  .  .  .  .",
];

/// The 3×3 blocks of the unitary used by `moqls12`.
pub fn moqls12_blocks() -> BlockUnitary {
    let s = 1.0 / 3f64.sqrt();
    let h = FRAC_1_SQRT_2;
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let one = c(1.0, 0.0);
    let u0 = ComplexMatrix::from_rows(vec![
        vec![one, one, one],
        vec![one, w, w.conj()],
        vec![one, w.conj(), w],
    ])
    .expect("3x3")
    .scale(c(s, 0.0));
    let u1 = ComplexMatrix::from_rows(vec![
        vec![c(1.0, 1.0), c(h, -h), c(0.0, 0.0)],
        vec![c(0.0, -h), one, c(h, 1.0)],
        vec![c(h, 0.0), c(0.0, 1.0), c(1.0, -h)],
    ])
    .expect("3x3")
    .scale(c(s, 0.0));
    let u2 = ComplexMatrix::from_real_rows(&[&[h, h, 0.0], &[h, -h, 0.0], &[0.0, 0.0, 1.0]])
        .expect("3x3");
    let t = 1.0 / 3.0;
    let u3 = ComplexMatrix::from_real_rows(&[
        &[2.0 * t, 2.0 * t, t],
        &[t, -2.0 * t, 2.0 * t],
        &[-2.0 * t, t, 2.0 * t],
    ])
    .expect("3x3");
    BlockUnitary::new(vec![u0, u1, u2, u3], DEFAULT_TOL).expect("blocks are unitary")
}

/// The 4×4 blocks used by `soqls16` and `moqlc16`.
pub fn order16_blocks() -> BlockUnitary {
    let (r2, r3, r6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let rows = |scale: f64, rows: [[Complex64; 4]; 4]| {
        ComplexMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
            .expect("4x4")
            .scale(c(scale, 0.0))
    };
    let re = |x: f64| c(x, 0.0);
    let im = |x: f64| c(0.0, x);
    let u0 = rows(
        0.5,
        [
            [re(1.0), re(1.0), re(1.0), re(1.0)],
            [re(1.0), re(-1.0), re(1.0), re(-1.0)],
            [re(1.0), re(1.0), re(-1.0), re(-1.0)],
            [re(1.0), re(-1.0), re(-1.0), re(1.0)],
        ],
    );
    let u1 = rows(
        0.25,
        [
            [re(1.0), im(-r3), im(-r3), re(-3.0)],
            [re(r3), im(1.0), im(-3.0), re(r3)],
            [re(r3), im(-3.0), im(1.0), re(r3)],
            [re(3.0), im(r3), im(r3), re(-1.0)],
        ],
    );
    let u2 = rows(
        0.5,
        [
            [re(1.0), im(1.0), im(1.0), re(-1.0)],
            [im(1.0), re(1.0), re(-1.0), im(1.0)],
            [im(1.0), re(-1.0), re(1.0), im(1.0)],
            [re(-1.0), im(1.0), im(1.0), re(1.0)],
        ],
    );
    let u3 = rows(
        0.25,
        [
            [re(r2), im(r2), im(-r6), re(r6)],
            [im(r2), re(r2), re(r6), im(-r6)],
            [re(r6), im(r6), im(r2), re(-r2)],
            [im(r6), re(r6), re(-r2), im(r2)],
        ],
    );
    BlockUnitary::new(vec![u0, u1, u2, u3], DEFAULT_TOL).expect("blocks are unitary")
}

const KLEIN4: &[&[usize]] = &[&[0, 1, 2, 3], &[3, 2, 1, 0], &[1, 0, 3, 2], &[2, 3, 0, 1]];

fn soqls14() -> Result<Fixture> {
    let half = 0.5;
    let signs: [[f64; 4]; 4] = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    let aux = |n: usize| {
        let mut v = vec![0.0; 14];
        for (k, s) in signs[n - 1].iter().enumerate() {
            v[10 + k] = half * s;
        }
        ComplexVector::from_real(&v)
    };
    let square = grid_from_table(SOQLS14, Vec::new(), aux, None)?;
    Ok(Fixture {
        name: "soqls14",
        description: "non-classical self-orthogonal quantum Latin square of order 14",
        parts: vec![part("square", vec![square])],
        notes: vec!["the lower-right 4x4 block holds four real superpositions of |10>..|13>"],
    })
}

fn moqls12() -> Result<Fixture> {
    let outer = [
        square(&[&[0, 1, 2, 3], &[3, 2, 1, 0], &[1, 0, 3, 2], &[2, 3, 0, 1]])?,
        square(&[&[0, 1, 2, 3], &[2, 3, 0, 1], &[3, 2, 1, 0], &[1, 0, 3, 2]])?,
    ];
    let inner = [
        square(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]])?,
        square(&[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]])?,
    ];
    let patterns = [
        TauPattern::from_u_cells(Arity::Square, 4, &[&[2, 1], &[3, 0], &[3, 3]])?,
        TauPattern::from_u_cells(Arity::Square, 4, &[&[0, 1], &[2, 1], &[2, 3]])?,
    ];
    let pair = moqls_from_mols(&outer, &inner, &moqls12_blocks(), &patterns)?;
    Ok(Fixture {
        name: "moqls12",
        description: "non-classical pair of orthogonal quantum Latin squares of order 12",
        parts: vec![part("pair", pair)],
        notes: vec![
            "block U0 is the normalized Fourier matrix; the 1/sqrt(3) factor is required for unitarity",
            "block U2 has bottom-right entry 1, the only value that makes it unitary",
        ],
    })
}

const QLS4_PHI: &[&str] = &[". 1 2 .", "1 0 3 2", "2 3 0 1", ". 2 1 ."];

const QLS7_PSI: &[&str] = &[
    ". 3 4 5 6 1 2",
    "2 . 5 6 0 4 3",
    "1 6 . 0 5 3 4",
    "6 5 1 . . 2 0",
    "5 2 6 . . 0 1",
    "3 4 0 1 2 . .",
    "4 0 3 2 1 . .",
];

fn qls4_7() -> Result<Fixture> {
    let phi = grid_from_table(QLS4_PHI, vec![vec![0, 3]], no_aux, None)?;
    let psi = grid_from_table(
        QLS7_PSI,
        vec![vec![0], vec![1], vec![2], vec![3, 4], vec![5, 6]],
        no_aux,
        None,
    )?;
    let phi_filled = fill_holes(&phi, &BTreeMap::from([(0, hadamard_filler()?)]), DEFAULT_TOL)?;
    let fillers = BTreeMap::from([
        (0, trivial_filler()?),
        (1, trivial_filler()?),
        (2, trivial_filler()?),
        (3, hadamard_filler()?),
        (4, hadamard_filler()?),
    ]);
    let psi_filled = fill_holes(&psi, &fillers, DEFAULT_TOL)?;
    Ok(Fixture {
        name: "qls4_7",
        description: "incomplete squares of orders 4 and 7 completed by superposition fillers",
        parts: vec![
            part("phi_filled", vec![phi_filled]),
            part("phi", vec![phi]),
            part("psi", vec![psi]),
            part("psi_filled", vec![psi_filled]),
        ],
        notes: vec!["2x2 holes are filled with the Hadamard square (|+>, |->; |->, |+>)"],
    })
}

fn blocks_of(d: usize, size: usize) -> Vec<Vec<usize>> {
    (0..d / size).map(|i| (i * size..(i + 1) * size).collect()).collect()
}

/// Transposes every `size × size` block strictly below the block diagonal.
fn transpose_lower_blocks(g: &QuantumGrid, size: usize) -> Result<QuantumGrid> {
    let d = g.order();
    let cells = (0..d * d)
        .map(|x| {
            let (r, c) = (x / d, x % d);
            let (bi, bj) = (r / size, c / size);
            let src = if bi > bj {
                [bi * size + c % size, bj * size + r % size]
            } else {
                [r, c]
            };
            g.cell(&src).cloned()
        })
        .collect();
    QuantumGrid::new(Arity::Square, d, g.cell_dim(), cells, g.holes().to_vec())
}

fn soqls16() -> Result<Fixture> {
    let printed = grid_from_table(HSOLS16, blocks_of(16, 4), no_aux, None)?;
    let hsols = transpose_lower_blocks(&printed, 4)?;
    let sols = embed_classical(&square(KLEIN4)?);
    let square = soqls_fill(&hsols, &sols, &order16_blocks(), DEFAULT_TOL)?;
    Ok(Fixture {
        name: "soqls16",
        description: "non-classical self-orthogonal quantum Latin square of order 16",
        parts: vec![
            part("square", vec![square]),
            part("hsols", vec![hsols]),
            part("sols", vec![sols]),
        ],
        notes: vec![
            "the four 4x4 diagonal holes are filled with block i of the unitary applied to a self-orthogonal square of order 4",
            "the commonly printed holey square is orthogonal only to its block-wise transpose; its blocks below the diagonal are transposed here so that it is orthogonal to its true transpose",
        ],
    })
}

fn hsoqls3_4() -> Result<Fixture> {
    let psi = grid_from_table(&[". 3 1 2", "2 . 3 0", "3 0 . 1", "1 2 0 ."], unit_holes(4), no_aux, None)?;
    let pair = vec![
        embed_classical(&square(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]])?),
        embed_classical(&square(&[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]])?),
    ];
    let square = hsoqls_product(&psi, (&pair[0], &pair[1]), DEFAULT_TOL)?;
    Ok(Fixture {
        name: "hsoqls3_4",
        description: "holey self-orthogonal square of type 3^4 built from an order-4 holey square and an orthogonal pair of order 3",
        parts: vec![
            part("square", vec![square]),
            part("psi", vec![psi]),
            part("pair", pair),
        ],
        notes: vec![
            "the commonly printed table differs from the construction at 0-based cells (2,6) and (10,5); the construction is served",
        ],
    })
}

const CUBE_R: [[[usize; 4]; 4]; 4] = [
    [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]],
    [[1, 0, 3, 2], [0, 1, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]],
    [[2, 3, 0, 1], [3, 2, 1, 0], [0, 1, 2, 3], [1, 0, 3, 2]],
    [[3, 2, 1, 0], [2, 3, 0, 1], [1, 0, 3, 2], [0, 1, 2, 3]],
];

const CUBE_S: [[[usize; 4]; 4]; 4] = [
    [[0, 3, 1, 2], [2, 1, 3, 0], [3, 0, 2, 1], [1, 2, 0, 3]],
    [[1, 2, 0, 3], [3, 0, 2, 1], [2, 1, 3, 0], [0, 3, 1, 2]],
    [[2, 1, 3, 0], [0, 3, 1, 2], [1, 2, 0, 3], [3, 0, 2, 1]],
    [[3, 0, 2, 1], [1, 2, 0, 3], [0, 3, 1, 2], [2, 1, 3, 0]],
];

const CUBE_T: [[[usize; 4]; 4]; 4] = [
    [[0, 2, 3, 1], [3, 1, 0, 2], [1, 3, 2, 0], [2, 0, 1, 3]],
    [[1, 3, 2, 0], [2, 0, 1, 3], [0, 2, 3, 1], [3, 1, 0, 2]],
    [[2, 0, 1, 3], [1, 3, 2, 0], [3, 1, 0, 2], [0, 2, 3, 1]],
    [[3, 1, 0, 2], [0, 2, 3, 1], [2, 0, 1, 3], [1, 3, 2, 0]],
];

fn moqlc16() -> Result<Fixture> {
    let cubes = [CUBE_R, CUBE_S, CUBE_T]
        .iter()
        .map(|planes| LatinDesign::cube_from_fn(4, |a, b, c| planes[a][b][c]))
        .collect::<Result<Vec<_>>>()?;
    let patterns = [
        TauPattern::from_u_cells(Arity::Cube, 4, &[&[0, 1, 2], &[1, 2, 1], &[2, 1, 2], &[3, 0, 0]])?,
        TauPattern::from_u_cells(Arity::Cube, 4, &[&[0, 1, 1], &[1, 2, 2], &[2, 2, 2], &[3, 0, 2]])?,
        TauPattern::from_u_cells(Arity::Cube, 4, &[&[0, 0, 1], &[1, 2, 1], &[2, 2, 2], &[3, 3, 1]])?,
    ];
    let cubes = moqlc_from_molc(&cubes, &cubes, &order16_blocks(), &patterns)?;
    Ok(Fixture {
        name: "moqlc16",
        description: "three non-classical mutually orthogonal quantum Latin cubes of order 16",
        parts: vec![part("cubes", cubes)],
        notes: vec!["outer and inner cubes are the same three cubes of order 4 over GF(4)"],
    })
}

fn array(q: QuantumOrthogonalArray) -> Part {
    Part {
        label: "array",
        design: Design::Array(q),
    }
}

fn qoa_bell() -> Result<Fixture> {
    let h = FRAC_1_SQRT_2;
    let rows = [(0, 3, h), (13, 14, h), (21, 22, -h), (24, 27, -h)]
        .iter()
        .map(|&(a, b, sb)| SparseVector::new(32, vec![(a, c(h, 0.0)), (b, c(sb, 0.0))]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fixture {
        name: "qoa_bell",
        description: "four-run quantum orthogonal array on five qubits of strength 2, rows are Bell-type pairs",
        parts: vec![array(QuantumOrthogonalArray::new(5, 2, 2, rows)?)],
        notes: Vec::new(),
    })
}

fn qoa343() -> Result<Fixture> {
    const D: usize = 7;
    let norm = 1.0 / (D as f64).sqrt();
    let index = |digits: [usize; 7]| digits.iter().fold(0, |acc, &x| acc * D + x);
    let mut rows = Vec::with_capacity(D * D * D);
    for i in 0..D {
        for j in 0..D {
            for k in 0..D {
                let terms = (0..D)
                    .map(|l| {
                        let digits = [
                            i,
                            k,
                            (i + j + k) % D,
                            (i + 2 * j + 4 * k) % D,
                            (l + j) % D,
                            (l + 2 * j + 5 * k) % D,
                            l,
                        ];
                        let phase = 2.0 * PI * ((i * l) % D) as f64 / D as f64;
                        (index(digits), Complex64::from_polar(norm, phase))
                    })
                    .collect();
                rows.push(SparseVector::new(D.pow(7), terms)?);
            }
        }
    }
    Ok(Fixture {
        name: "qoa343",
        description: "343-run quantum orthogonal array on seven parties of dimension 7 with strength 3",
        parts: vec![array(QuantumOrthogonalArray::new(7, D, 3, rows)?)],
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdesign::{cell_overlap, classicality_witness};

    /// 0-based `(row, col)` positions where two squares disagree.
    fn differences(a: &QuantumGrid, b: &QuantumGrid) -> Vec<(usize, usize)> {
        let d = a.order();
        (0..d * d)
            .filter(|&x| {
                let (r, c) = (x / d, x % d);
                match (a.cell(&[r, c]), b.cell(&[r, c])) {
                    (Some(u), Some(v)) => u.iter().zip(v.iter()).any(|(p, q)| (p - q).norm() > 1e-12),
                    (None, None) => false,
                    _ => true,
                }
            })
            .map(|x| (x / d, x % d))
            .collect()
    }

    fn printed(rows: &[&str], holes: Vec<Vec<usize>>, u: Option<&BlockUnitary>) -> QuantumGrid {
        let m = u.map(BlockUnitary::assemble);
        grid_from_table(rows, holes, no_aux, m.as_ref()).unwrap()
    }

    #[test]
    fn every_fixture_builds_and_verifies() {
        for name in FIXTURE_NAMES {
            let f = fixture(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(f.name, name);
            assert!(!f.parts.is_empty());
        }
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn table_tokens() {
        assert_eq!(
            tokens(&["3 . p2 U11"]),
            vec![vec![Token::Ket(3), Token::Hole, Token::Aux(2), Token::UKet(11)]]
        );
    }

    #[test]
    fn soqls14_is_not_classical() {
        let g = &fixture("soqls14").unwrap().grids("square").unwrap()[0];
        assert_eq!(g.order(), 14);
        let w = classicality_witness(g, DEFAULT_TOL).unwrap();
        assert!((w.value - 0.5).abs() < 1e-12);
        let z = cell_overlap(g, &[10, 10], &[10, 11]).unwrap();
        assert!(z.norm() < 1e-12);
    }

    #[test]
    fn moqls12_overlaps() {
        let pair = fixture("moqls12").unwrap().grids("pair").unwrap();
        let z = cell_overlap(&pair[0], &[0, 3], &[9, 10]).unwrap();
        let expected = c(1.0, -1.0) / 6f64.sqrt();
        assert!((z - expected).norm() < 1e-12, "{z}");
        assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let z = cell_overlap(&pair[1], &[0, 3], &[9, 1]).unwrap();
        assert!((z.norm() - 1.0 / 6f64.sqrt()).abs() < 1e-12, "{z}");
    }

    #[test]
    fn moqls12_matches_printed_tables() {
        let pair = fixture("moqls12").unwrap().grids("pair").unwrap();
        let u = moqls12_blocks();
        assert!(differences(&pair[0], &printed(MOQLS12_PHI_PRINTED, Vec::new(), Some(&u))).is_empty());
        assert!(differences(&pair[1], &printed(MOQLS12_PSI_PRINTED, Vec::new(), Some(&u))).is_empty());
    }

    #[test]
    fn qls4_7_fillers_make_complete_squares() {
        let f = fixture("qls4_7").unwrap();
        let phi = &f.grids("phi_filled").unwrap()[0];
        assert!(phi.holes().is_empty());
        let w = classicality_witness(phi, DEFAULT_TOL).unwrap();
        assert!((w.value - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(f.grids("psi_filled").unwrap()[0].holes().is_empty());
        assert_eq!(f.grids("psi").unwrap()[0].holes().len(), 5);
    }

    #[test]
    fn soqls16_matches_printed_table_and_witness() {
        let g = &fixture("soqls16").unwrap().grids("square").unwrap()[0];
        let table = printed(SOQLS16_PRINTED, Vec::new(), Some(&order16_blocks()));
        let diff = differences(g, &table);
        assert!(diff.iter().all(|&(r, c)| r / 4 > c / 4), "{diff:?}");
        let fixed = transpose_lower_blocks(&table, 4).unwrap();
        assert!(differences(g, &fixed).is_empty());
        let z = cell_overlap(g, &[0, 8], &[4, 5]).unwrap();
        assert!((z.norm() - 3f64.sqrt() / 4.0).abs() < 1e-12, "{z}");
    }

    #[test]
    fn printed_holey_square_of_order_16_is_not_self_orthogonal() {
        let g = grid_from_table(HSOLS16, blocks_of(16, 4), no_aux, None).unwrap();
        assert!(!verify_hsoqls(&g, DEFAULT_TOL).unwrap());
        assert!(verify_hsoqls(&transpose_lower_blocks(&g, 4).unwrap(), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn hsoqls3_4_differs_from_printed_table_in_two_cells() {
        let g = &fixture("hsoqls3_4").unwrap().grids("square").unwrap()[0];
        assert_eq!(g.cell(&[0, 3]), Some(&ComplexVector::basis(12, 9)));
        let table = printed(HSOQLS3_4_PRINTED, blocks_of(12, 3), None);
        assert_eq!(differences(g, &table), vec![(2, 6), (10, 5)]);
        assert_eq!(g.cell(&[2, 6]), Some(&ComplexVector::basis(12, 5)));
        assert_eq!(g.cell(&[10, 5]), Some(&ComplexVector::basis(12, 8)));
    }

    #[test]
    fn moqlc16_witness() {
        let cubes = fixture("moqlc16").unwrap().grids("cubes").unwrap();
        assert_eq!(cubes.len(), 3);
        let z = cell_overlap(&cubes[0], &[0, 4, 10], &[0, 0, 13]).unwrap();
        assert!((z.norm() - 6f64.sqrt() / 4.0).abs() < 1e-12, "{z}");
    }

    #[test]
    fn arrays_have_expected_shapes() {
        let q = fixture("qoa_bell").unwrap().array("array").unwrap();
        assert_eq!((q.runs(), q.parties(), q.local_dim(), q.strength()), (4, 5, 2, 2));
        let q = fixture("qoa343").unwrap().array("array").unwrap();
        assert_eq!((q.runs(), q.parties(), q.local_dim(), q.strength()), (343, 7, 7, 3));
        assert!(q.rows().iter().all(|r| r.nnz() == 7));
    }

    const SOQLS16_PRINTED: &[&str] = &[
        " U0  U1  U2  U3  12  13  14  15   4   5   6   7   8   9  10  11",
        " U3  U2  U1  U0  14  15  12  13   6   7   4   5  10  11   8   9",
        " U1  U0  U3  U2  15  14  13  12   7   6   5   4  11  10   9   8",
        " U2  U3  U0  U1  13  12  15  14   5   4   7   6   9   8  11  10",
        "  8   9  10  11  U4  U5  U6  U7  12  13  14  15   0   1   2   3",
        " 11  10   9   8  U7  U6  U5  U4  14  15  12  13   2   3   0   1",
        "  9   8  11  10  U5  U4  U7  U6  15  14  13  12   3   2   1   0",
        " 10  11   8   9  U6  U7  U4  U5  13  12  15  14   1   0   3   2",
        " 12  13  14  15   0   1   2   3  U8  U9 U10 U11   4   5   6   7",
        " 15  14  13  12   3   2   1   0 U11 U10  U9  U8   6   7   4   5",
        " 13  12  15  14   1   0   3   2  U9  U8 U11 U10   7   6   5   4",
        " 14  15  12  13   2   3   0   1 U10 U11  U8  U9   5   4   7   6",
        "  4   5   6   7   8   9  10  11   0   1   2   3 U12 U13 U14 U15",
        "  7   6   5   4  11  10   9   8   3   2   1   0 U15 U14 U13 U12",
        "  5   4   7   6   9   8  11  10   1   0   3   2 U13 U12 U15 U14",
        "  6   7   4   5  10  11   8   9   2   3   0   1 U14 U15 U12 U13",
    ];

    const MOQLS12_PHI_PRINTED: &[&str] = &[
        " 0  1  2  3  4  5  6  7  8  9 10 11",
        " 1  2  0  4  5  3  7  8  6 10 11  9",
        " 2  0  1  5  3  4  8  6  7 11  9 10",
        " 9 10 11  6  7  8  3  4  5  0  1  2",
        "10 11  9  7  8  6  4  5  3  1  2  0",
        "11  9 10  8  6  7  5  3  4  2  0  1",
        " 3  4  5 U0 U1 U2  9 10 11  6  7  8",
        " 4  5  3 U1 U2 U0 10 11  9  7  8  6",
        " 5  3  4 U2 U0 U1 11  9 10  8  6  7",
        "U6 U7 U8  9 10 11  0  1  2 U3 U4 U5",
        "U7 U8 U6 10 11  9  1  2  0 U4 U5 U3",
        "U8 U6 U7 11  9 10  2  0  1 U5 U3 U4",
    ];

    const MOQLS12_PSI_PRINTED: &[&str] = &[
        " 0  1  2 U3 U4 U5  6  7  8  9 10 11",
        " 2  0  1 U5 U3 U4  8  6  7 11  9 10",
        " 1  2  0 U4 U5 U3  7  8  6 10 11  9",
        " 6  7  8  9 10 11  0  1  2  3  4  5",
        " 8  6  7 11  9 10  2  0  1  5  3  4",
        " 7  8  6 10 11  9  1  2  0  4  5  3",
        " 9 10 11 U6 U7 U8  3  4  5 U0 U1 U2",
        "11  9 10 U8 U6 U7  5  3  4 U2 U0 U1",
        "10 11  9 U7 U8 U6  4  5  3 U1 U2 U0",
        " 3  4  5  0  1  2  9 10 11  6  7  8",
        " 5  3  4  2  0  1 11  9 10  8  6  7",
        " 4  5  3  1  2  0 10 11  9  7  8  6",
    ];

    const HSOQLS3_4_PRINTED: &[&str] = &[
        " .  .  .  9 10 11  3  4  5  6  7  8",
        " .  .  . 10 11  9  4  5  3  7  8  6",
        " .  .  . 11  9 10  4  3  4  8  6  7",
        " 6  8  7  .  .  .  9 10 11  0  1  2",
        " 7  6  8  .  .  . 10 11  9  1  2  0",
        " 8  7  6  .  .  . 11  9 10  2  0  1",
        " 9 11 10  0  2  1  .  .  .  3  4  5",
        "10  9 11  1  0  2  .  .  .  4  5  3",
        "11 10  9  2  1  0  .  .  .  5  3  4",
        " 3  5  4  6  8  7  0  2  1  .  .  .",
        " 4  3  5  7  6  5  1  0  2  .  .  .",
        " 5  4  3  8  7  6  2  1  0  .  .  .",
    ];

}
