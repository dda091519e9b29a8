//! On-disk design format.
//!
//! A design file is a single JSON object with a `"format": 1` field, a
//! `"kind"` tag, kind-specific shape fields, the cells, and free-form
//! metadata. Complex numbers are `[re, im]` pairs. Grid cells are listed
//! row-major (last coordinate fastest) and holes are `null`. Multipartite
//! vectors (generalized grid cells, array rows, states) are sparse lists of
//! `[index, [re, im]]` terms, where party 0 is the most significant digit of
//! the index.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use qcdesign::classical::{LatinDesign, OrthogonalArray};
use qcdesign::linalg::{ComplexVector, SparseVector};
use qcdesign::qoa::{GeneralizedGrid, PureState, QuantumOrthogonalArray};
use qcdesign::qdesign::QuantumGrid;
use qcdesign::{Arity, Complex64};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

pub type Amplitude = [f64; 2];
pub type Term = (usize, Amplitude);

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Name of the construction or fixture that produced the design.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub construction: String,
    /// How the design was obtained (command line, input files).
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Kind-specific payload, tagged by `"kind"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    /// Classical Latin squares or cubes over symbols `0..order`.
    Ls {
        arity: usize,
        order: usize,
        #[serde(default)]
        holes: Vec<Vec<usize>>,
        cells: Vec<Vec<Option<usize>>>,
    },
    Oa {
        levels: usize,
        strength: usize,
        rows: Vec<Vec<usize>>,
    },
    Qls {
        order: usize,
        dim: usize,
        cells: Vec<Vec<Option<Vec<Amplitude>>>>,
    },
    Iqls {
        order: usize,
        dim: usize,
        holes: Vec<Vec<usize>>,
        cells: Vec<Vec<Option<Vec<Amplitude>>>>,
    },
    Qlc {
        order: usize,
        dim: usize,
        cells: Vec<Vec<Option<Vec<Amplitude>>>>,
    },
    Gmoqls {
        order: usize,
        parties: usize,
        cells: Vec<Vec<Term>>,
    },
    Gmoqlc {
        order: usize,
        parties: usize,
        cells: Vec<Vec<Term>>,
    },
    Qoa {
        parties: usize,
        dim: usize,
        strength: usize,
        rows: Vec<Vec<Term>>,
    },
    State {
        parties: usize,
        dim: usize,
        amplitudes: Vec<Term>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignFile {
    pub format: u32,
    #[serde(flatten)]
    pub body: Body,
    #[serde(default)]
    pub metadata: Metadata,
}

/// In-memory form of a design file.
#[derive(Clone, Debug, PartialEq)]
pub enum Design {
    Latin(Vec<LatinDesign>),
    Oa(OrthogonalArray),
    /// Quantum squares (with or without holes) or cubes.
    Grids(Vec<QuantumGrid>),
    Generalized(GeneralizedGrid),
    Qoa(QuantumOrthogonalArray),
    State(PureState),
}

impl Design {
    pub fn kind(&self) -> &'static str {
        match self {
            Design::Latin(_) => "ls",
            Design::Oa(_) => "oa",
            Design::Grids(gs) => match gs.first().map(QuantumGrid::arity) {
                Some(Arity::Cube) => "qlc",
                _ if gs.iter().any(|g| !g.holes().is_empty()) => "iqls",
                _ => "qls",
            },
            Design::Generalized(g) => match g.arity() {
                Arity::Square => "gmoqls",
                Arity::Cube => "gmoqlc",
            },
            Design::Qoa(_) => "qoa",
            Design::State(_) => "state",
        }
    }
}

fn pair(z: &Complex64) -> Amplitude {
    [z.re, z.im]
}

fn complex(a: &Amplitude) -> Complex64 {
    Complex64::new(a[0], a[1])
}

fn dense(v: &ComplexVector) -> Vec<Amplitude> {
    v.iter().map(pair).collect()
}

fn terms(v: &SparseVector) -> Vec<Term> {
    v.entries().iter().map(|(i, z)| (*i, pair(z))).collect()
}

fn sparse(dim: usize, ts: &[Term]) -> Result<SparseVector> {
    if let Some((i, _)) = ts.iter().find(|(i, _)| *i >= dim) {
        bail!("index {i} out of range for dimension {dim}");
    }
    Ok(SparseVector::new(dim, ts.iter().map(|(i, a)| (*i, complex(a))).collect())?)
}

fn grid_cells(g: &QuantumGrid) -> Vec<Option<Vec<Amplitude>>> {
    g.cells().iter().map(|c| c.as_ref().map(dense)).collect()
}

fn arity_of(rank: usize) -> Result<Arity> {
    Arity::from_rank(rank).with_context(|| format!("arity must be 2 or 3, got {rank}"))
}

impl DesignFile {
    pub fn new(design: &Design, metadata: Metadata) -> Self {
        let body = match design {
            Design::Latin(ls) => {
                let first = &ls[0];
                Body::Ls {
                    arity: first.arity().rank(),
                    order: first.order(),
                    holes: first.holes().to_vec(),
                    cells: ls.iter().map(|l| l.cells().to_vec()).collect(),
                }
            }
            Design::Oa(oa) => Body::Oa {
                levels: oa.levels(),
                strength: oa.strength(),
                rows: oa.rows().to_vec(),
            },
            Design::Grids(gs) => {
                let (order, dim) = (gs[0].order(), gs[0].cell_dim());
                let cells = gs.iter().map(grid_cells).collect();
                match design.kind() {
                    "qlc" => Body::Qlc { order, dim, cells },
                    "iqls" => Body::Iqls {
                        order,
                        dim,
                        holes: gs[0].holes().to_vec(),
                        cells,
                    },
                    _ => Body::Qls { order, dim, cells },
                }
            }
            Design::Generalized(g) => {
                let (order, parties) = (g.grid().order(), g.parties());
                let cells = g
                    .grid()
                    .cells()
                    .iter()
                    .map(|c| terms(&SparseVector::from_dense(c.as_ref().expect("complete grid"))))
                    .collect();
                match g.arity() {
                    Arity::Square => Body::Gmoqls { order, parties, cells },
                    Arity::Cube => Body::Gmoqlc { order, parties, cells },
                }
            }
            Design::Qoa(q) => Body::Qoa {
                parties: q.parties(),
                dim: q.local_dim(),
                strength: q.strength(),
                rows: q.rows().iter().map(terms).collect(),
            },
            Design::State(s) => Body::State {
                parties: s.parties(),
                dim: s.local_dim(),
                amplitudes: terms(s.amplitudes()),
            },
        };
        Self {
            format: FORMAT_VERSION,
            body,
            metadata,
        }
    }

    pub fn into_design(self) -> Result<Design> {
        ensure!(
            self.format == FORMAT_VERSION,
            "unsupported format version {} (expected {FORMAT_VERSION})",
            self.format
        );
        let design = match self.body {
            Body::Ls {
                arity,
                order,
                holes,
                cells,
            } => {
                ensure!(!cells.is_empty(), "no designs in file");
                let arity = arity_of(arity)?;
                Design::Latin(
                    cells
                        .into_iter()
                        .map(|c| LatinDesign::new(arity, order, c, holes.clone()))
                        .collect::<qcdesign::Result<_>>()?,
                )
            }
            Body::Oa {
                levels,
                strength,
                rows,
            } => Design::Oa(OrthogonalArray::new(levels, strength, rows)?),
            Body::Qls { order, dim, cells } => quantum_grids(Arity::Square, order, dim, Vec::new(), cells)?,
            Body::Iqls {
                order,
                dim,
                holes,
                cells,
            } => quantum_grids(Arity::Square, order, dim, holes, cells)?,
            Body::Qlc { order, dim, cells } => quantum_grids(Arity::Cube, order, dim, Vec::new(), cells)?,
            Body::Gmoqls {
                order,
                parties,
                cells,
            } => generalized(Arity::Square, order, parties, cells)?,
            Body::Gmoqlc {
                order,
                parties,
                cells,
            } => generalized(Arity::Cube, order, parties, cells)?,
            Body::Qoa {
                parties,
                dim,
                strength,
                rows,
            } => {
                let full = full_dim(dim, parties)?;
                let rows = rows.iter().map(|r| sparse(full, r)).collect::<Result<_>>()?;
                Design::Qoa(QuantumOrthogonalArray::new(parties, dim, strength, rows)?)
            }
            Body::State {
                parties,
                dim,
                amplitudes,
            } => {
                let full = full_dim(dim, parties)?;
                Design::State(PureState::new(parties, dim, sparse(full, &amplitudes)?)?)
            }
        };
        Ok(design)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("design files always serialize")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).with_context(|| format!("writing {}", path.display()))
    }
}

fn full_dim(dim: usize, parties: usize) -> Result<usize> {
    u32::try_from(parties)
        .ok()
        .and_then(|p| dim.checked_pow(p))
        .with_context(|| format!("{dim}^{parties} is too large"))
}

fn quantum_grids(
    arity: Arity,
    order: usize,
    dim: usize,
    holes: Vec<Vec<usize>>,
    cells: Vec<Vec<Option<Vec<Amplitude>>>>,
) -> Result<Design> {
    ensure!(!cells.is_empty(), "no grids in file");
    let grids = cells
        .into_iter()
        .map(|g| {
            let g = g
                .into_iter()
                .map(|c| c.map(|v| v.iter().map(complex).collect::<ComplexVector>()))
                .collect();
            QuantumGrid::new(arity, order, dim, g, holes.clone())
        })
        .collect::<qcdesign::Result<_>>()?;
    Ok(Design::Grids(grids))
}

fn generalized(arity: Arity, order: usize, parties: usize, cells: Vec<Vec<Term>>) -> Result<Design> {
    let dim = full_dim(order, parties)?;
    let cells = cells
        .iter()
        .map(|c| Ok(Some(sparse(dim, c)?.to_dense())))
        .collect::<Result<_>>()?;
    let grid = QuantumGrid::new(arity, order, dim, cells, Vec::new())?;
    Ok(Design::Generalized(GeneralizedGrid::new(grid, parties)?))
}
