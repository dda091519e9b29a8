use std::path::Path;

use anyhow::{bail, ensure, Context as _, Result};
use clap::{Subcommand, ValueEnum};
use qcdesign::classical::{
    mols_prime_power, oa_strength3_rs, oa_to_molc, sols_prime_power, LatinDesign,
};
use qcdesign::construct::{
    embed_all, hsoqls_product, moqlc_from_molc, moqls_from_mols, soqls_fill, weighting,
    BlockUnitary, TauPattern,
};
use qcdesign::fixtures::fixture;
use qcdesign::linalg::random_unitary;
use qcdesign::qdesign::{
    verify_hsoqls, verify_imoqls, verify_moqlc, verify_moqls, verify_soqls, QuantumGrid,
};
use qcdesign::qoa::{moqlc_to_qoa, moqls_to_qoa, state_from_qoa};
use qcdesign::Arity;
use qcdesign_cli::file::{Design, Metadata};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::{emit, load, Context_};

#[derive(Subcommand)]
pub enum Construct {
    /// q − 1 mutually orthogonal Latin squares of prime-power order q.
    Mols {
        #[arg(long)]
        q: usize,
    },
    /// Self-orthogonal Latin square of prime-power order q.
    Sols {
        #[arg(long)]
        q: usize,
        /// Field element defining the square (first admissible one by default).
        #[arg(long)]
        lambda: Option<usize>,
    },
    /// Mutually orthogonal Latin cubes of prime-power order q ≥ 4.
    Molc {
        #[arg(long)]
        q: usize,
    },
    /// Pair of orthogonal quantum Latin squares of order d1·d2 lifted by a block unitary.
    Moqls {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[arg(long, value_enum, default_value_t = Pattern::Default)]
        pattern: Pattern,
        #[arg(long, value_enum, default_value_t = Unitaries::Dft)]
        unitaries: Unitaries,
    },
    /// Three orthogonal quantum Latin cubes of order d1·d2 lifted by a block unitary.
    Moqlc {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[arg(long, value_enum, default_value_t = Pattern::Default)]
        pattern: Pattern,
        #[arg(long, value_enum, default_value_t = Unitaries::Dft)]
        unitaries: Unitaries,
    },
    /// Fill the holes of a holey self-orthogonal square with a rotated self-orthogonal square.
    SoqlsFill {
        #[arg(long)]
        hsols: std::path::PathBuf,
        #[arg(long)]
        sols: std::path::PathBuf,
        #[arg(long, value_enum, default_value_t = Unitaries::Dft)]
        unitaries: Unitaries,
    },
    /// Weight an incomplete orthogonal set by an orthogonal set of squares.
    Weighting {
        #[arg(long)]
        hmols: std::path::PathBuf,
        #[arg(long)]
        moqls: std::path::PathBuf,
    },
    /// Holey self-orthogonal square from a holey square and an orthogonal pair.
    HsoqlsProduct {
        #[arg(long)]
        hsoqls: std::path::PathBuf,
        #[arg(long)]
        pair: std::path::PathBuf,
    },
    /// Quantum orthogonal array from orthogonal squares or cubes.
    Qoa {
        #[arg(long)]
        from: std::path::PathBuf,
    },
    /// Multipartite state from a quantum orthogonal array.
    State {
        #[arg(long)]
        from: std::path::PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pattern {
    /// Block unitary on the upper half of the outer rows.
    Default,
    /// Identity everywhere (classical product).
    Identity,
    /// The built-in order-12 example.
    Example,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Unitaries {
    /// Fourier matrix in every block.
    Dft,
    /// Haar-random blocks drawn from `--seed`.
    Random,
    /// The blocks of the built-in order-12 example.
    Example,
}

fn blocks(kind: Unitaries, outer: usize, inner: usize, ctx: &Context_) -> Result<BlockUnitary> {
    match kind {
        Unitaries::Dft => Ok(BlockUnitary::dft(outer, inner)),
        Unitaries::Random => {
            let mut rng = StdRng::seed_from_u64(ctx.seed);
            let bs = (0..outer).map(|_| random_unitary(inner, &mut rng)).collect();
            Ok(BlockUnitary::new(bs, ctx.tol)?)
        }
        Unitaries::Example => bail!("example unitaries exist only for the order-12 pair"),
    }
}

fn two_mols(q: usize) -> Result<Vec<LatinDesign>> {
    let mols = mols_prime_power(q)?;
    ensure!(mols.len() >= 2, "order {q} has no orthogonal pair");
    Ok(mols[..2].to_vec())
}

fn three_molc(q: usize) -> Result<Vec<LatinDesign>> {
    let cubes = oa_to_molc(&oa_strength3_rs(q)?)?;
    ensure!(cubes.len() >= 3, "order {q} gives only {} orthogonal cubes", cubes.len());
    Ok(cubes[..3].to_vec())
}

fn patterns(kind: Pattern, arity: Arity, order: usize, count: usize) -> Result<Vec<TauPattern>> {
    Ok(match kind {
        Pattern::Default => vec![TauPattern::default_for(arity, order); count],
        Pattern::Identity => vec![TauPattern::all(arity, order, false); count],
        Pattern::Example => bail!("the example pattern exists only for the order-12 pair"),
    })
}

/// Loads quantum grids, embedding classical designs.
fn grids(path: &Path) -> Result<Vec<QuantumGrid>> {
    match load(path)? {
        Design::Latin(ls) => Ok(embed_all(&ls)),
        Design::Grids(gs) => Ok(gs),
        other => bail!("{} holds {}, expected squares or cubes", path.display(), other.kind()),
    }
}

fn single(path: &Path) -> Result<QuantumGrid> {
    let mut gs = grids(path)?;
    ensure!(gs.len() == 1, "{} holds {} grids, expected one", path.display(), gs.len());
    Ok(gs.remove(0))
}

pub fn run(what: Construct, output: Option<&Path>, ctx: &Context_) -> Result<bool> {
    let tol = ctx.tol;
    let (design, name, verified) = match what {
        Construct::Mols { q } => (Design::Latin(mols_prime_power(q)?), format!("mols q={q}"), true),
        Construct::Sols { q, lambda } => {
            let square = match lambda {
                Some(l) => sols_prime_power(q, l)?,
                None => (2..q)
                    .find_map(|l| sols_prime_power(q, l).ok())
                    .with_context(|| format!("no self-orthogonal square of order {q}"))?,
            };
            (Design::Latin(vec![square]), format!("sols q={q}"), true)
        }
        Construct::Molc { q } => {
            let cubes = oa_to_molc(&oa_strength3_rs(q)?)?;
            (Design::Latin(cubes), format!("molc q={q}"), true)
        }
        Construct::Moqls {
            d1,
            d2,
            pattern,
            unitaries,
        } => {
            let gs = if pattern == Pattern::Example || unitaries == Unitaries::Example {
                ensure!(
                    pattern == Pattern::Example && unitaries == Unitaries::Example && (d1, d2) == (4, 3),
                    "the example needs --d1 4 --d2 3 --pattern example --unitaries example"
                );
                fixture("moqls12")?.grids("pair").expect("pair").to_vec()
            } else {
                let pats = patterns(pattern, Arity::Square, d1, 2)?;
                moqls_from_mols(&two_mols(d1)?, &two_mols(d2)?, &blocks(unitaries, d1, d2, ctx)?, &pats)?
            };
            let ok = verify_moqls(&gs, tol)?;
            (Design::Grids(gs), format!("moqls d1={d1} d2={d2} pattern={pattern:?} unitaries={unitaries:?}"), ok)
        }
        Construct::Moqlc {
            d1,
            d2,
            pattern,
            unitaries,
        } => {
            let pats = patterns(pattern, Arity::Cube, d1, 3)?;
            let gs = moqlc_from_molc(&three_molc(d1)?, &three_molc(d2)?, &blocks(unitaries, d1, d2, ctx)?, &pats)?;
            let ok = verify_moqlc(&gs, tol)?;
            (Design::Grids(gs), format!("moqlc d1={d1} d2={d2} pattern={pattern:?} unitaries={unitaries:?}"), ok)
        }
        Construct::SoqlsFill {
            hsols,
            sols,
            unitaries,
        } => {
            let (h, s) = (single(&hsols)?, single(&sols)?);
            ensure!(s.order() > 0 && h.order() % s.order() == 0, "hole size must divide the order");
            let u = blocks(unitaries, h.order() / s.order(), s.order(), ctx)?;
            let g = soqls_fill(&h, &s, &u, tol)?;
            let ok = verify_soqls(&g, tol)?;
            (Design::Grids(vec![g]), "soqls-fill".to_string(), ok)
        }
        Construct::Weighting { hmols, moqls } => {
            let gs = weighting(&grids(&hmols)?, &grids(&moqls)?, tol)?;
            let ok = verify_imoqls(&gs, tol)?;
            (Design::Grids(gs), "weighting".to_string(), ok)
        }
        Construct::HsoqlsProduct { hsoqls, pair } => {
            let pair = grids(&pair)?;
            ensure!(pair.len() == 2, "expected a pair of squares, found {}", pair.len());
            let g = hsoqls_product(&single(&hsoqls)?, (&pair[0], &pair[1]), tol)?;
            let ok = verify_hsoqls(&g, tol)?;
            (Design::Grids(vec![g]), "hsoqls-product".to_string(), ok)
        }
        Construct::Qoa { from } => {
            let gs = grids(&from)?;
            let q = match gs[0].arity() {
                Arity::Square => moqls_to_qoa(&gs, tol)?,
                Arity::Cube => moqlc_to_qoa(&gs, tol)?,
            };
            (Design::Qoa(q), format!("qoa from {}", from.display()), true)
        }
        Construct::State { from } => {
            let q = match load(&from)? {
                Design::Qoa(q) => q,
                other => bail!("{} holds {}, expected qoa", from.display(), other.kind()),
            };
            (Design::State(state_from_qoa(&q, tol)?), format!("state from {}", from.display()), true)
        }
    };
    if !verified {
        eprintln!("constructed {} fails its verifier at tol {tol:e}", crate::describe(&design));
        return Ok(false);
    }
    let metadata = Metadata {
        construction: name,
        provenance: format!("qcdesign construct (seed {})", ctx.seed),
        notes: Vec::new(),
    };
    emit(&design, metadata, output)?;
    Ok(true)
}
