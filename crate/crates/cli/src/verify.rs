use std::path::PathBuf;

use anyhow::{bail, ensure, Result};
use clap::{Args, ValueEnum};
use qcdesign::classical::{verify_classical, verify_oa, ClassicalProperty};
use qcdesign::qdesign::{
    check_hsoqls, check_imoqls, check_iqls, check_moqlc, check_moqls, check_qlc, check_qls,
    check_soqls, QuantumGrid,
};
use qcdesign::qoa::{check_generalized, check_k_uniform, check_qoa};
use qcdesign::{Arity, Verdict};
use qcdesign_cli::file::Design;
use serde_json::json;

use crate::{describe, load, Context_};

#[derive(Args)]
pub struct VerifyArgs {
    input: PathBuf,
    /// Property to check (inferred from the file kind by default).
    #[arg(long, value_enum)]
    property: Option<Property>,
    /// Subset size for `--uniform` (defaults to half the parties).
    #[arg(long)]
    k: Option<usize>,
    /// Check k-uniformity of a state.
    #[arg(long)]
    uniform: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Latin,
    Mols,
    Sols,
    Hsols,
    Molc,
    Oa,
    Qls,
    Iqls,
    Moqls,
    Imoqls,
    Soqls,
    Hsoqls,
    Qlc,
    Moqlc,
    Gmoqls,
    Gmoqlc,
    Qoa,
    Uniform,
}

fn infer(design: &Design) -> Property {
    match design {
        Design::Latin(ls) => match (ls[0].arity(), ls.len()) {
            (Arity::Cube, n) if n >= 3 => Property::Molc,
            (Arity::Square, n) if n >= 2 => Property::Mols,
            _ => Property::Latin,
        },
        Design::Oa(_) => Property::Oa,
        Design::Grids(gs) => {
            let holey = gs.iter().any(|g| !g.holes().is_empty());
            match (gs[0].arity(), gs.len() > 1, holey) {
                (Arity::Cube, true, _) => Property::Moqlc,
                (Arity::Cube, false, _) => Property::Qlc,
                (Arity::Square, true, true) => Property::Imoqls,
                (Arity::Square, true, false) => Property::Moqls,
                (Arity::Square, false, true) => Property::Iqls,
                (Arity::Square, false, false) => Property::Qls,
            }
        }
        Design::Generalized(g) => match g.arity() {
            Arity::Square => Property::Gmoqls,
            Arity::Cube => Property::Gmoqlc,
        },
        Design::Qoa(_) => Property::Qoa,
        Design::State(_) => Property::Uniform,
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn one(gs: &[QuantumGrid]) -> Result<&QuantumGrid> {
    ensure!(gs.len() == 1, "property applies to a single grid, file holds {}", gs.len());
    Ok(&gs[0])
}

/// Verdict plus a short description of what was checked.
fn check(design: &Design, property: Property, k: Option<usize>, tol: f64) -> Result<(Verdict, String)> {
    let classical = |ok: bool, what: &str| {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail(qcdesign::Violation {
                condition: format!("{what} condition violated"),
                deviation: 1.0,
            })
        }
    };
    let scope = describe(design);
    let verdict = match (design, property) {
        (Design::Latin(ls), p @ (Property::Latin | Property::Mols | Property::Sols | Property::Hsols | Property::Molc)) => {
            let prop = match p {
                Property::Latin => ClassicalProperty::Latin,
                Property::Mols => ClassicalProperty::MolsPairwise,
                Property::Sols => ClassicalProperty::Sols,
                Property::Hsols => ClassicalProperty::Hsols,
                _ => ClassicalProperty::MolcWithB,
            };
            classical(verify_classical(ls, prop)?, &format!("{p:?}").to_lowercase())
        }
        (Design::Oa(oa), Property::Oa) => classical(verify_oa(oa)?, "orthogonal array"),
        (Design::Grids(gs), Property::Qls) => check_qls(one(gs)?, tol)?,
        (Design::Grids(gs), Property::Iqls) => check_iqls(one(gs)?, tol)?,
        (Design::Grids(gs), Property::Soqls) => check_soqls(one(gs)?, tol)?,
        (Design::Grids(gs), Property::Hsoqls) => check_hsoqls(one(gs)?, tol)?,
        (Design::Grids(gs), Property::Qlc) => check_qlc(one(gs)?, tol)?,
        (Design::Grids(gs), Property::Moqls) => check_moqls(gs, tol)?,
        (Design::Grids(gs), Property::Imoqls) => check_imoqls(gs, tol)?,
        (Design::Grids(gs), Property::Moqlc) => check_moqlc(gs, tol)?,
        (Design::Generalized(g), Property::Gmoqls | Property::Gmoqlc) => {
            let want = if property == Property::Gmoqls { Arity::Square } else { Arity::Cube };
            ensure!(g.arity() == want, "{scope} is not a {property:?} candidate");
            check_generalized(g, tol)?
        }
        (Design::Qoa(q), Property::Qoa) => {
            let v = check_qoa(q, tol)?;
            return Ok((v, format!("{scope}, {} subsets checked", binom(q.parties(), q.strength()))));
        }
        (Design::State(s), Property::Uniform) => {
            let k = k.unwrap_or(s.parties() / 2);
            let v = check_k_uniform(s, k, tol)?;
            return Ok((v, format!("{k}-uniformity of {scope}, {} subsets checked", binom(s.parties(), k))));
        }
        (_, p) => bail!("property {p:?} does not apply to {scope}"),
    };
    Ok((verdict, scope))
}

pub fn run(args: &VerifyArgs, ctx: &Context_) -> Result<bool> {
    let design = load(&args.input)?;
    let property = match (args.property, args.uniform) {
        (Some(p), true) if p != Property::Uniform => bail!("--uniform conflicts with --property {p:?}"),
        (_, true) => Property::Uniform,
        (Some(p), false) => p,
        (None, false) => infer(&design),
    };
    let (verdict, scope) = check(&design, property, args.k, ctx.tol)?;
    let name = format!("{property:?}").to_lowercase();
    if ctx.json {
        let violation = verdict.violation().map(|v| json!({ "condition": v.condition, "deviation": v.deviation }));
        println!(
            "{}",
            json!({
                "file": args.input.display().to_string(),
                "property": name,
                "passed": verdict.passed(),
                "checked": scope,
                "tolerance": ctx.tol,
                "violation": violation,
            })
        );
    } else {
        match verdict.violation() {
            None => println!("PASS {name}: {scope}"),
            Some(v) => println!("FAIL {name}: {scope}\n  {} (deviation {:.3e})", v.condition, v.deviation),
        }
    }
    Ok(verdict.passed())
}
