//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qcdesign::classical::{
    hmols_unit_holes, hsols_unit_holes, mols_prime_power, mols_to_oa, oa_strength3_rs,
    oa_to_molc, sols_prime_power, verify_classical, verify_oa, ClassicalProperty, LatinDesign,
    OrthogonalArray,
};
use qcdesign::construct::{
    embed_all, fill_holes, hsoqls_product, moqlc_direct_product, moqlc_from_molc,
    moqls_direct_product, moqls_from_mols, soqls_fill, weighting, BlockUnitary, TauPattern,
};
use qcdesign::fixtures::fixture;
use qcdesign::linalg::{partial_cross_trace, random_unit_vector, random_unitary, ComplexVector, PartySplit};
use qcdesign::qdesign::{
    cell_overlap, conjugate, diagonal_basis_check, embed_classical, verify_hsoqls, verify_imoqls,
    verify_iqls, verify_moqlc, verify_moqls, verify_qlc, verify_qls, verify_soqls, QuantumGrid,
};
use qcdesign::qoa::{
    generalized_to_qoa, gmoqlc_to_qoa, gmoqls_to_qoa, moqlc_to_qoa, moqls_to_qoa, product_cells,
    qoa_to_gmoqlc, qoa_to_gmoqls, state_from_qoa, verify_gmoqlc, verify_gmoqls, verify_k_uniform,
    verify_qoa, GeneralizedGrid, QuantumOrthogonalArray,
};
use qcdesign::{Arity, DEFAULT_TOL as TOL};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Turns a library error into a criterion failure.
trait OrFail<T> {
    fn or_fail(self, what: &str) -> Result<T, String>;
}

impl<T, E: std::fmt::Display> OrFail<T> for Result<T, E> {
    fn or_fail(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn grids(name: &str, label: &str) -> Result<Vec<QuantumGrid>, String> {
    let f = fixture(name).or_fail(name)?;
    f.grids(label)
        .map(<[QuantumGrid]>::to_vec)
        .ok_or_else(|| format!("{name} has no part {label}"))
}

fn array(name: &str) -> Result<QuantumOrthogonalArray, String> {
    let f = fixture(name).or_fail(name)?;
    f.array("array").cloned().ok_or_else(|| format!("{name} has no array"))
}

fn peak_rss_mib() -> Option<f64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: f64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib / 1024.0)
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---------------------------------------------------------------------------

fn fixture_suite() -> Check {
    let start = Instant::now();
    let one = |name: &str, label: &str| -> Result<QuantumGrid, String> { Ok(grids(name, label)?.remove(0)) };
    let checks = [
        ("soqls14 soqls", verify_soqls(&one("soqls14", "square")?, TOL)),
        ("qls4_7 phi' qls", verify_qls(&one("qls4_7", "phi_filled")?, TOL)),
        ("qls4_7 psi' qls", verify_qls(&one("qls4_7", "psi_filled")?, TOL)),
        ("qls4_7 phi iqls", verify_iqls(&one("qls4_7", "phi")?, TOL)),
        ("qls4_7 psi iqls", verify_iqls(&one("qls4_7", "psi")?, TOL)),
        ("soqls16 soqls", verify_soqls(&one("soqls16", "square")?, TOL)),
        ("hsoqls3_4 hsoqls", verify_hsoqls(&one("hsoqls3_4", "square")?, TOL)),
        ("moqls12 moqls", verify_moqls(&grids("moqls12", "pair")?, TOL)),
        ("moqlc16 moqlc", verify_moqlc(&grids("moqlc16", "cubes")?, TOL)),
        ("qoa_bell qoa", verify_qoa(&array("qoa_bell")?, TOL)),
        ("qoa343 qoa", verify_qoa(&array("qoa343")?, TOL)),
    ];
    for (what, verdict) in checks {
        ensure!(verdict.or_fail(what)?, "{what} rejected");
    }
    let q = array("qoa_bell")?;
    ensure!(q.strength() == 2, "qoa_bell strength {}", q.strength());
    ensure!(array("qoa343")?.strength() == 3, "qoa343 strength");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:.1?}");
    Ok(format!("11 verifier runs in {elapsed:.2?}"))
}

fn printed_values() -> Check {
    let pair = grids("moqls12", "pair")?;
    let z = cell_overlap(&pair[0], &[0, 3], &[9, 10]).or_fail("overlap")?;
    let expected = Complex64::new(1.0, -1.0).norm() / 6f64.sqrt();
    ensure!((expected - 0.5773502691896258).abs() < 1e-15, "oracle drift");
    ensure!((z.norm() - expected).abs() <= TOL, "order 12: {} vs {expected}", z.norm());

    let sq = grids("soqls16", "square")?.remove(0);
    let z16 = cell_overlap(&sq, &[0, 8], &[4, 5]).or_fail("overlap")?.norm();
    ensure!((z16 - 0.4330127018922193).abs() <= TOL, "order 16 square: {z16}");

    let cubes = grids("moqlc16", "cubes")?;
    let zc = cell_overlap(&cubes[0], &[0, 4, 10], &[0, 0, 13]).or_fail("overlap")?.norm();
    ensure!((zc - 0.6123724356957945).abs() <= TOL, "order 16 cube: {zc}");
    Ok(format!("{:.16}, {z16:.16}, {zc:.16}", z.norm()))
}

fn k_uniform_states() -> Check {
    let bell = state_from_qoa(&array("qoa_bell")?, TOL).or_fail("bell state")?;
    ensure!(bell.parties() == 5 && bell.local_dim() == 2, "bell shape");
    ensure!(verify_k_uniform(&bell, 2, TOL).or_fail("bell")?, "bell state is not 2-uniform");

    let start = Instant::now();
    let q = array("qoa343")?;
    let s = state_from_qoa(&q, TOL).or_fail("343 state")?;
    ensure!(s.parties() == 7 && s.local_dim() == 7, "343 shape");
    ensure!(verify_k_uniform(&s, 3, TOL).or_fail("343")?, "343 state is not 3-uniform");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "343 state took {elapsed:.1?}");
    let peak = peak_rss_mib().ok_or("peak memory unavailable")?;
    ensure!(peak < 1024.0, "peak resident memory {peak:.0} MiB");
    Ok(format!(
        "{} + {} subsets; d=7 state in {elapsed:.2?}, peak RSS {peak:.0} MiB",
        binom(5, 2),
        binom(7, 3)
    ))
}

fn ame_generation() -> Check {
    let mols = embed_all(&mols_prime_power(3).or_fail("mols(3)")?);
    let q = moqls_to_qoa(&mols, TOL).or_fail("moqls_to_qoa")?;
    let s = state_from_qoa(&q, TOL).or_fail("state")?;
    ensure!(s.parties() == 4 && s.local_dim() == 3, "AME(4,3) shape");
    ensure!(verify_k_uniform(&s, 2, TOL).or_fail("AME(4,3)")?, "AME(4,3) not 2-uniform");

    let molc = oa_to_molc(&oa_strength3_rs(5).or_fail("rs(5)")?).or_fail("molc(5)")?;
    ensure!(molc.len() >= 3, "only {} cubes of order 5", molc.len());
    let q = moqlc_to_qoa(&embed_all(&molc[..3]), TOL).or_fail("moqlc_to_qoa")?;
    let s = state_from_qoa(&q, TOL).or_fail("state")?;
    ensure!(s.parties() == 6 && s.local_dim() == 5, "AME(6,5) shape");
    ensure!(verify_k_uniform(&s, 3, TOL).or_fail("AME(6,5)")?, "AME(6,5) not 3-uniform");
    Ok(format!("AME(4,3): {} reductions, AME(6,5): {} reductions", binom(4, 2), binom(6, 3)))
}

/// Every `k`-tuple of columns shows every `k`-tuple of symbols equally often.
fn brute_force_oa(oa: &OrthogonalArray) -> bool {
    let (d, k) = (oa.levels(), oa.strength());
    let rows = oa.rows();
    let total = d.pow(k as u32);
    if rows.len() % total != 0 {
        return false;
    }
    let lambda = rows.len() / total;
    (0..oa.factors()).combinations(k).all(|cols| {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for row in rows {
            *counts.entry(cols.iter().map(|&c| row[c]).collect()).or_default() += 1;
        }
        counts.len() == total && counts.values().all(|&n| n == lambda)
    })
}

fn corrupt_oa(oa: &OrthogonalArray) -> OrthogonalArray {
    let mut rows = oa.rows().to_vec();
    rows[0][0] = (rows[0][0] + 1) % oa.levels();
    OrthogonalArray::new(oa.levels(), oa.strength(), rows).expect("same shape")
}

fn sols_of(q: usize) -> Option<LatinDesign> {
    (2..q).find_map(|lam| sols_prime_power(q, lam).ok())
}

fn cyclic(d: usize, step: usize) -> LatinDesign {
    LatinDesign::square_from_fn(d, |i, j| (step * i + j) % d).expect("cyclic square")
}

fn oracle_equivalence() -> Check {
    let mut arrays = 0;
    for q in [3, 4, 5] {
        let oa2 = mols_to_oa(&mols_prime_power(q).or_fail("mols")?).or_fail("mols_to_oa")?;
        let oa3 = oa_strength3_rs(q).or_fail("rs")?;
        for oa in [oa2, oa3] {
            for a in [oa.clone(), corrupt_oa(&oa)] {
                let (fast, slow) = (verify_oa(&a).or_fail("verify_oa")?, brute_force_oa(&a));
                ensure!(fast == slow, "q={q}: verify_oa {fast}, brute force {slow}");
                arrays += 1;
            }
        }
    }

    let mut pairs = 0;
    let mut agree = |what: String, classical: bool, quantum: bool| -> Result<(), String> {
        pairs += 1;
        ensure!(classical == quantum, "{what}: classical {classical}, quantum {quantum}");
        Ok(())
    };
    for d in 2..=7 {
        let good = cyclic(d, 1);
        let mut rows: Vec<Vec<usize>> = (0..d).map(|i| (0..d).map(|j| (i + j) % d).collect()).collect();
        rows[0].swap(0, 1);
        let bad = LatinDesign::square(&rows).or_fail("square")?;
        for ls in [&good, &bad] {
            let c = verify_classical(std::slice::from_ref(ls), ClassicalProperty::Latin).or_fail("latin")?;
            agree(format!("latin d={d}"), c, verify_qls(&embed_classical(ls), TOL).or_fail("qls")?)?;
        }
        let shifted = [cyclic(d, 1), cyclic(d, 2 % d.max(2))];
        let c = verify_classical(&shifted, ClassicalProperty::MolsPairwise).or_fail("mols")?;
        agree(format!("pair d={d}"), c, verify_moqls(&embed_all(&shifted), TOL).or_fail("moqls")?)?;
    }
    for q in [3, 4, 5, 7] {
        let mols = mols_prime_power(q).or_fail("mols")?;
        let c = verify_classical(&mols, ClassicalProperty::MolsPairwise).or_fail("mols")?;
        agree(format!("mols q={q}"), c, verify_moqls(&embed_all(&mols), TOL).or_fail("moqls")?)?;
        let twice = [mols[0].clone(), mols[0].clone()];
        let c = verify_classical(&twice, ClassicalProperty::MolsPairwise).or_fail("mols")?;
        agree(format!("repeated q={q}"), c, verify_moqls(&embed_all(&twice), TOL).or_fail("moqls")?)?;
        if let Some(s) = sols_of(q) {
            let c = verify_classical(std::slice::from_ref(&s), ClassicalProperty::Sols).or_fail("sols")?;
            agree(format!("sols q={q}"), c, verify_soqls(&embed_classical(&s), TOL).or_fail("soqls")?)?;
            let t = mols[0].clone();
            let c = verify_classical(std::slice::from_ref(&t), ClassicalProperty::Sols).or_fail("sols")?;
            agree(format!("non-sols q={q}"), c, verify_soqls(&embed_classical(&t), TOL).or_fail("soqls")?)?;
        }
        if q >= 4 {
            let h = hsols_unit_holes(q).or_fail("hsols")?;
            let c = verify_classical(std::slice::from_ref(&h), ClassicalProperty::Hsols).or_fail("hsols")?;
            agree(format!("hsols q={q}"), c, verify_hsoqls(&embed_classical(&h), TOL).or_fail("hsoqls")?)?;
            let hm = hmols_unit_holes(q).or_fail("hmols")?;
            let c = verify_classical(&hm, ClassicalProperty::MolsPairwise).or_fail("hmols")?;
            agree(format!("hmols q={q}"), c, verify_imoqls(&embed_all(&hm), TOL).or_fail("imoqls")?)?;
            let molc = oa_to_molc(&oa_strength3_rs(q).or_fail("rs")?).or_fail("molc")?;
            if molc.len() >= 3 {
                let c = verify_classical(&molc, ClassicalProperty::MolcWithB).or_fail("molc")?;
                agree(format!("molc q={q}"), c, verify_moqlc(&embed_all(&molc), TOL).or_fail("moqlc")?)?;
                let dup = [molc[0].clone(), molc[0].clone(), molc[1].clone()];
                let c = verify_classical(&dup, ClassicalProperty::MolcWithB).or_fail("molc")?;
                agree(format!("repeated cubes q={q}"), c, verify_moqlc(&embed_all(&dup), TOL).or_fail("moqlc")?)?;
            }
        }
    }
    Ok(format!("{arrays} arrays, {pairs} classical/quantum verdict pairs agree"))
}

/// Replaces cell `x` by a copy of cell `y`.
fn corrupt_grid(g: &GeneralizedGrid, x: usize, y: usize) -> Result<GeneralizedGrid, String> {
    let grid = g.grid();
    let mut cells = grid.cells().to_vec();
    cells[x] = cells[y].clone();
    let bad = QuantumGrid::new(grid.arity(), grid.order(), grid.cell_dim(), cells, Vec::new()).or_fail("grid")?;
    GeneralizedGrid::new(bad, g.parties()).or_fail("generalized grid")
}

fn round_trip(q: &QuantumOrthogonalArray, g: &GeneralizedGrid) -> Check {
    let (to_grid, to_qoa, check_grid): (
        fn(&QuantumOrthogonalArray, f64) -> qcdesign::Result<GeneralizedGrid>,
        fn(&GeneralizedGrid, f64) -> qcdesign::Result<QuantumOrthogonalArray>,
        fn(&GeneralizedGrid, f64) -> qcdesign::Result<bool>,
    ) = match g.arity() {
        Arity::Square => (qoa_to_gmoqls, gmoqls_to_qoa, verify_gmoqls),
        Arity::Cube => (qoa_to_gmoqlc, gmoqlc_to_qoa, verify_gmoqlc),
    };
    let back = to_grid(q, TOL).or_fail("qoa to grid")?;
    ensure!(&back == g, "qoa -> grid does not invert grid -> qoa");
    let again = to_qoa(&back, TOL).or_fail("grid to qoa")?;
    ensure!(again.sorted_rows() == q.sorted_rows(), "grid -> qoa does not invert qoa -> grid");
    let (a, b) = (verify_qoa(q, TOL).or_fail("qoa")?, check_grid(g, TOL).or_fail("grid")?);
    ensure!(a && b, "verdicts on the intact design: qoa {a}, grid {b}");
    let bad = corrupt_grid(g, 0, 1)?;
    let bad_q = generalized_to_qoa(&bad).or_fail("corrupt qoa")?;
    let (a, b) = (verify_qoa(&bad_q, TOL).or_fail("qoa")?, check_grid(&bad, TOL).or_fail("grid")?);
    ensure!(!a && !b, "verdicts on the corrupted design: qoa {a}, grid {b}");
    Ok(String::new())
}

fn proposition_round_trips() -> Check {
    let mut names = Vec::new();
    for name in ["qoa_bell", "qoa343"] {
        let q = array(name)?;
        let g = if q.strength() == 2 { qoa_to_gmoqls(&q, TOL) } else { qoa_to_gmoqlc(&q, TOL) }
            .or_fail(name)?;
        round_trip(&q, &g).map_err(|e| format!("{name}: {e}"))?;
        names.push(name);
    }
    for (name, label) in [("moqls12", "pair"), ("hsoqls3_4", "pair"), ("moqlc16", "cubes")] {
        let gs = grids(name, label)?;
        let g = product_cells(&gs).or_fail(name)?;
        let q = match g.arity() {
            Arity::Square => moqls_to_qoa(&gs, TOL),
            Arity::Cube => moqlc_to_qoa(&gs, TOL),
        }
        .or_fail(name)?;
        round_trip(&q, &g).map_err(|e| format!("{name}: {e}"))?;
        names.push(name);
    }
    Ok(names.join(", "))
}

fn with_random_phases(g: &QuantumGrid, rng: &mut StdRng) -> QuantumGrid {
    let cells = g
        .cells()
        .iter()
        .map(|c| c.as_ref().map(|v| v.scale(Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))))
        .collect();
    QuantumGrid::new(g.arity(), g.order(), g.cell_dim(), cells, g.holes().to_vec()).expect("same shape")
}

fn psd_oracle(m: &qcdesign::linalg::ComplexMatrix) -> f64 {
    let n = m.rows();
    let h = DMatrix::from_fn(n, n, |r, c| m.get(r, c));
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

fn property_suites() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);

    let pairs = [grids("moqls12", "pair")?, grids("hsoqls3_4", "pair")?];
    for t in 0..20 {
        let base = &pairs[t % pairs.len()];
        let perturbed: Vec<QuantumGrid> = base.iter().map(|g| with_random_phases(g, &mut rng)).collect();
        let conj: Vec<QuantumGrid> = perturbed.iter().map(conjugate).collect();
        let (a, b) = (verify_moqls(&perturbed, TOL).or_fail("moqls")?, verify_moqls(&conj, TOL).or_fail("moqls")?);
        ensure!(a && b, "perturbation {t}: moqls {a}, conjugate {b}");
    }

    for name in ["soqls14", "soqls16"] {
        let g = grids(name, "square")?.remove(0);
        ensure!(diagonal_basis_check(&g, TOL).or_fail(name)?, "{name}: diagonal is not a basis");
    }

    for t in 0..100 {
        let parties = rng.gen_range(2..=4);
        let d = rng.gen_range(2..=3);
        let keep: Vec<usize> = (0..parties).filter(|_| rng.gen_bool(0.5)).collect();
        let split = PartySplit::new(parties, d, &keep).or_fail("split")?;
        let psi: ComplexVector = random_unit_vector(d.pow(parties as u32), &mut rng);
        let rho = partial_cross_trace(&psi, &psi, &split).or_fail("partial trace")?;
        let herm = rho.hermiticity_deviation();
        let tr = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
        let min_eig = psd_oracle(&rho);
        ensure!(herm <= 1e-12, "state {t}: hermiticity {herm:e}");
        ensure!(tr <= TOL, "state {t}: trace off by {tr:e}");
        ensure!(min_eig >= -TOL, "state {t}: eigenvalue {min_eig:e}");
    }

    let mols = embed_all(&mols_prime_power(3).or_fail("mols")?);
    let states = [
        (state_from_qoa(&array("qoa_bell")?, TOL).or_fail("bell")?, 2),
        (state_from_qoa(&array("qoa343")?, TOL).or_fail("343")?, 3),
        (state_from_qoa(&moqls_to_qoa(&mols, TOL).or_fail("ame")?, TOL).or_fail("ame")?, 2),
    ];
    for (s, k) in &states {
        for j in 1..=*k {
            ensure!(verify_k_uniform(s, j, TOL).or_fail("uniform")?, "{k}-uniform state fails at {j}");
        }
    }
    Ok("20 perturbations, 2 diagonals, 100 reductions, 3 states".into())
}

/// QLS with cells `U|L(i,j)⟩` for a random unitary `U`.
fn rotated(ls: &LatinDesign, rng: &mut StdRng) -> Result<QuantumGrid, String> {
    let u = random_unitary(ls.order(), rng);
    let d = ls.order();
    QuantumGrid::from_fn(Arity::Square, d, d, |a| {
        u.apply(&ComplexVector::basis(d, ls.get(a).expect("complete"))).expect("same dim")
    })
    .or_fail("rotated square")
}

fn random_blocks(outer: usize, inner: usize, rng: &mut StdRng) -> Result<BlockUnitary, String> {
    BlockUnitary::new((0..outer).map(|_| random_unitary(inner, rng)).collect(), TOL).or_fail("blocks")
}

fn construction_closure() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mols = |q: usize| mols_prime_power(q).map(|m| m[..2].to_vec()).or_fail("mols");
    let mut runs = 0;
    let mut pass = |what: &str, ok: bool| -> Result<(), String> {
        runs += 1;
        ensure!(ok, "{what} output rejected");
        Ok(())
    };

    for (a, b) in [(3, 4), (3, 5)] {
        let out = moqls_direct_product(&embed_all(&mols(a)?), &embed_all(&mols(b)?), TOL).or_fail("direct")?;
        pass("moqls_direct_product", verify_moqls(&out, TOL).or_fail("verify")?)?;
    }
    for (a, b) in [(4, 3), (5, 4)] {
        let u = random_blocks(a, b, &mut rng)?;
        let pats = vec![TauPattern::default_for(Arity::Square, a); 2];
        let out = moqls_from_mols(&mols(a)?, &mols(b)?, &u, &pats).or_fail("from_mols")?;
        pass("moqls_from_mols", verify_moqls(&out, TOL).or_fail("verify")?)?;
    }
    for (name, label, hole) in [("hsoqls3_4", "square", 3), ("soqls16", "hsols", 4)] {
        let g = grids(name, label)?.remove(0);
        let fillers = (0..g.holes().len())
            .map(|h| Ok((h, rotated(&cyclic(hole, 1), &mut rng)?)))
            .collect::<Result<_, String>>()?;
        let out = fill_holes(&g, &fillers, TOL).or_fail("fill_holes")?;
        pass("fill_holes", out.holes().is_empty() && verify_qls(&out, TOL).or_fail("verify")?)?;
    }
    for (n, m) in [(4, 4), (5, 5)] {
        let pair = embed_all(&mols(m)?);
        let psi = embed_classical(&hsols_unit_holes(n).or_fail("hsols")?);
        let holey = hsoqls_product(&psi, (&pair[0], &pair[1]), TOL).or_fail("product")?;
        let sols = embed_classical(&sols_of(m).ok_or("no sols")?);
        let out = soqls_fill(&holey, &sols, &random_blocks(n, m, &mut rng)?, TOL).or_fail("soqls_fill")?;
        pass("soqls_fill", verify_soqls(&out, TOL).or_fail("verify")?)?;
    }
    let quantum_pair = grids("moqls12", "pair")?;
    for (q, pair) in [(4, quantum_pair.clone()), (5, embed_all(&mols(3)?))] {
        let h = embed_all(&hmols_unit_holes(q).or_fail("hmols")?);
        let out = weighting(&h, &pair, TOL).or_fail("weighting")?;
        pass("weighting", verify_imoqls(&out, TOL).or_fail("verify")?)?;
    }
    for (n, pair) in [(4, embed_all(&mols(3)?)), (5, quantum_pair)] {
        let psi = embed_classical(&hsols_unit_holes(n).or_fail("hsols")?);
        let out = hsoqls_product(&psi, (&pair[0], &pair[1]), TOL).or_fail("product")?;
        pass("hsoqls_product", verify_hsoqls(&out, TOL).or_fail("verify")?)?;
    }
    let cubes = |q: usize| -> Result<Vec<LatinDesign>, String> {
        let molc = oa_to_molc(&oa_strength3_rs(q).or_fail("rs")?).or_fail("molc")?;
        Ok(molc[..3].to_vec())
    };
    for (a, b) in [(4, 4), (4, 5)] {
        let out = moqlc_direct_product(&embed_all(&cubes(a)?), &embed_all(&cubes(b)?), TOL).or_fail("direct")?;
        pass("moqlc_direct_product", verify_moqlc(&out, TOL).or_fail("verify")?)?;
    }
    let qlc = |a: usize, b: usize, rng: &mut StdRng| -> Result<Vec<QuantumGrid>, String> {
        let u = random_blocks(a, b, rng)?;
        let pats = vec![TauPattern::default_for(Arity::Cube, a); 3];
        moqlc_from_molc(&cubes(a)?, &cubes(b)?, &u, &pats).or_fail("from_molc")
    };
    let small = qlc(4, 4, &mut rng)?;
    pass("moqlc_from_molc", verify_moqlc(&small, TOL).or_fail("verify")?)?;
    let other = qlc(5, 4, &mut rng)?;
    pass("moqlc_from_molc", verify_qlc(&other[0], TOL).or_fail("verify")? && verify_moqlc(&other, TOL).or_fail("verify")?)?;
    Ok(format!("{runs} constructions verified"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("fixture verification", fixture_suite),
        ("printed values", printed_values),
        ("k-uniform states", k_uniform_states),
        ("AME generation", ame_generation),
        ("oracle equivalence", oracle_equivalence),
        ("round trips", proposition_round_trips),
        ("property suites", property_suites),
        ("construction closure", construction_closure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("AC{} PASS  {name} [{t:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("AC{} FAIL  {name} [{t:.2?}] {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
