use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcdesign::classical::{capability, molc_to_oa, mols_to_oa, oa_to_molc, oa_to_mols, Bound};
use qcdesign::construct::embed_all;
use qcdesign::fixtures::{fixture, Design as FixtureDesign, FIXTURE_NAMES};
use qcdesign::qoa::{
    gmoqlc_to_qoa, gmoqls_to_qoa, moqlc_to_qoa, moqls_to_qoa, product_cells, qoa_to_gmoqlc,
    qoa_to_gmoqls, state_from_qoa,
};
use qcdesign::{Arity, DEFAULT_TOL};
use qcdesign_cli::file::{Design, DesignFile, Metadata};

mod construct;
mod verify;

#[derive(Parser)]
#[command(name = "qcdesign", version, about = "Build and verify quantum Latin squares, cubes and orthogonal arrays")]
struct Cli {
    /// Absolute tolerance for every numerical comparison.
    #[arg(long, global = true, env = "QCDESIGN_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for verification (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomly drawn unitaries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design and write it as a design file.
    Construct {
        #[command(subcommand)]
        what: construct::Construct,
        /// Output file (stdout when omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Check a design file; exit 0 on success and 1 on a violation.
    Verify(verify::VerifyArgs),
    /// Write one of the built-in worked examples.
    Example {
        name: String,
        /// Part of the example to write (defaults to the main design).
        #[arg(long)]
        part: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert between squares, cubes, arrays, generalized grids and states.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print known lower bounds on the number of orthogonal designs of order d.
    Capability { d: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Ls,
    Oa,
    Qls,
    Qlc,
    Qoa,
    Gmoqls,
    Gmoqlc,
    State,
}

pub(crate) struct Context_ {
    pub tol: f64,
    pub seed: u64,
    pub json: bool,
}

pub(crate) fn load(path: &Path) -> Result<Design> {
    DesignFile::read(path)?.into_design()
}

pub(crate) fn emit(design: &Design, metadata: Metadata, output: Option<&Path>) -> Result<()> {
    let file = DesignFile::new(design, metadata);
    match output {
        Some(path) => {
            file.write(path)?;
            eprintln!("wrote {} to {}", describe(design), path.display());
        }
        None => println!("{}", file.to_json()),
    }
    Ok(())
}

pub(crate) fn describe(design: &Design) -> String {
    match design {
        Design::Latin(ls) => format!(
            "{} classical {} of order {}",
            ls.len(),
            if ls[0].arity() == Arity::Cube { "cube(s)" } else { "square(s)" },
            ls[0].order()
        ),
        Design::Oa(oa) => format!(
            "OA({}, {}, {}, {})",
            oa.runs(),
            oa.factors(),
            oa.levels(),
            oa.strength()
        ),
        Design::Grids(gs) => format!("{} ({} grid(s) of order {})", design.kind(), gs.len(), gs[0].order()),
        Design::Generalized(g) => format!(
            "{} of order {} with {}-party cells",
            design.kind(),
            g.grid().order(),
            g.parties()
        ),
        Design::Qoa(q) => format!(
            "QOA({}, {}, {}, {})",
            q.runs(),
            q.parties(),
            q.local_dim(),
            q.strength()
        ),
        Design::State(s) => format!("state on {} parties of dimension {}", s.parties(), s.local_dim()),
    }
}

fn example(name: &str, part: Option<&str>, output: Option<&Path>) -> Result<()> {
    if !FIXTURE_NAMES.contains(&name) {
        bail!("unknown example {name:?}; known: {}", FIXTURE_NAMES.join(", "));
    }
    let f = fixture(name)?;
    let chosen = match part {
        Some(label) => f
            .parts
            .iter()
            .find(|p| p.label == label)
            .with_context(|| {
                let labels: Vec<_> = f.parts.iter().map(|p| p.label).collect();
                format!("{name} has no part {label:?}; parts: {}", labels.join(", "))
            })?,
        None => &f.parts[0],
    };
    let design = match &chosen.design {
        FixtureDesign::Grids(gs) => Design::Grids(gs.clone()),
        FixtureDesign::Array(q) => Design::Qoa(q.clone()),
    };
    let metadata = Metadata {
        construction: format!("{name}/{}", chosen.label),
        provenance: f.description.to_string(),
        notes: f.notes.iter().map(|n| n.to_string()).collect(),
    };
    emit(&design, metadata, output)
}

fn convert(to: Target, input: &Path, output: Option<&Path>, ctx: &Context_) -> Result<()> {
    let source = DesignFile::read(input)?;
    let mut metadata = source.metadata.clone();
    let design = source.into_design()?;
    let tol = ctx.tol;
    let converted = match (&design, to) {
        (Design::Latin(ls), Target::Qls | Target::Qlc) => {
            let cube = ls[0].arity() == Arity::Cube;
            if cube != (to == Target::Qlc) {
                bail!("cannot convert {} to {to:?}", describe(&design));
            }
            Design::Grids(embed_all(ls))
        }
        (Design::Latin(ls), Target::Oa) => Design::Oa(match ls[0].arity() {
            Arity::Square => mols_to_oa(ls)?,
            Arity::Cube => molc_to_oa(ls)?,
        }),
        (Design::Oa(oa), Target::Ls) => Design::Latin(match oa.strength() {
            2 => oa_to_mols(oa)?,
            3 => oa_to_molc(oa)?,
            t => bail!("no Latin designs for strength {t}"),
        }),
        (Design::Grids(gs), Target::Qoa) => Design::Qoa(match gs[0].arity() {
            Arity::Square => moqls_to_qoa(gs, tol)?,
            Arity::Cube => moqlc_to_qoa(gs, tol)?,
        }),
        (Design::Grids(gs), Target::Gmoqls | Target::Gmoqlc) => {
            let cube = gs[0].arity() == Arity::Cube;
            if cube != (to == Target::Gmoqlc) {
                bail!("cannot convert {} to {to:?}", describe(&design));
            }
            Design::Generalized(product_cells(gs)?)
        }
        (Design::Qoa(q), Target::Gmoqls) => Design::Generalized(qoa_to_gmoqls(q, tol)?),
        (Design::Qoa(q), Target::Gmoqlc) => Design::Generalized(qoa_to_gmoqlc(q, tol)?),
        (Design::Qoa(q), Target::State) => Design::State(state_from_qoa(q, tol)?),
        (Design::Generalized(g), Target::Qoa) => Design::Qoa(match g.arity() {
            Arity::Square => gmoqls_to_qoa(g, tol)?,
            Arity::Cube => gmoqlc_to_qoa(g, tol)?,
        }),
        _ => bail!("cannot convert {} to {to:?}", describe(&design)),
    };
    metadata.provenance = format!("converted from {}", input.display());
    emit(&converted, metadata, output)
}

fn show(b: Option<Bound>, symbol: &str, d: usize, what: &str) -> String {
    let head = format!("{symbol}({d})");
    match b {
        Some(b) => {
            let rel = if b.exact { "=" } else { "≥" };
            format!("{head:<7} {rel} {:<4} {what:<48} [{}]", b.value, b.rule)
        }
        None => format!("{head:<7} ?      {what:<48} [no known construction]"),
    }
}

fn show_capability(d: usize, json: bool) -> Result<()> {
    if d < 2 {
        bail!("order must be at least 2");
    }
    let c = capability(d);
    let rows = [
        ("m", "classical orthogonal Latin squares", c.mols),
        ("M", "non-classical orthogonal quantum Latin squares", c.moqls),
        ("c", "classical orthogonal Latin cubes", c.molc),
        ("C", "non-classical orthogonal quantum Latin cubes", c.moqlc),
    ];
    if json {
        let entries: Vec<_> = rows
            .iter()
            .map(|(sym, what, b)| {
                serde_json::json!({
                    "symbol": sym,
                    "counts": what,
                    "value": b.map(|b| b.value),
                    "exact": b.is_some_and(|b| b.exact),
                    "rule": b.map(|b| b.rule),
                })
            })
            .collect();
        println!("{}", serde_json::json!({ "order": d, "bounds": entries }));
    } else {
        for (sym, what, b) in rows {
            println!("{}", show(b, sym, d, what));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring worker threads")?;
    }
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        bail!("tolerance must be a finite non-negative number");
    }
    let ctx = Context_ {
        tol: cli.tol,
        seed: cli.seed,
        json: cli.json,
    };
    match cli.command {
        Command::Construct { what, output } => construct::run(what, output.as_deref(), &ctx),
        Command::Verify(args) => verify::run(&args, &ctx),
        Command::Example { name, part, output } => {
            example(&name, part.as_deref(), output.as_deref()).map(|_| true)
        }
        Command::Convert { to, input, output } => {
            convert(to, &input, output.as_deref(), &ctx).map(|_| true)
        }
        Command::Capability { d } => show_capability(d, ctx.json).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
