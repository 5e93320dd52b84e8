//! Acceptance checks, one line per criterion.
//!
//! A criterion passes only if its numeric checks hold and it finishes within
//! its runtime limit. Criterion 4 cannot hold for the lifted series (see the
//! README); it is run as stated and reported as an expected failure. Any
//! other failure makes the target exit with status 1.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use lseries_cli::commands::{fe_samples, lemma_samples};
use lseries_cli::{run, EXIT_PASS, EXIT_WITNESS};
use lseries_core::abscissa::estimate_sigma_a;
use lseries_core::analytic::{
    almost_period_find, count_zeros, density_probe, dirichlet_l, fe_residual, pl_propagation_check, zeta,
    zeta_smooth_count, Builtin, Custom, Rectangle,
};
use lseries_core::coefficients::{ramanujan_audit, BuiltinCharacter, CoefficientSource};
use lseries_core::euler_split::{
    b_bound_audit, exceptional_free_primes, lemma_scan, split_theorem1, split_theorem3, QuotientInput,
    Theorem1Config, Theorem3Config,
};
use lseries_core::fe::{b_invariant, check_lift_laws, conductor, GammaFactorData};
use lseries_core::kronecker::{
    alignment_report, default_budget, e_factor_check, prime_phase_targets, prime_values, restrict_to_primes, solve,
    Method,
};
use lseries_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot hold as stated.
const EXPECTED_FAILURES: &[u32] = &[4];

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chi4() -> CoefficientSource {
    CoefficientSource::dirichlet(BuiltinCharacter::Mod4)
}

fn degree_one_builtins() -> Vec<Builtin> {
    std::iter::once(Builtin::Zeta)
        .chain(BuiltinCharacter::ALL.into_iter().map(Builtin::Dirichlet))
        .collect()
}

fn spec_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn invariant_table() -> Check {
    let rows = [
        ("zeta", GammaFactorData::zeta(), 1.0, 1.0),
        ("chi4", Builtin::Dirichlet(BuiltinCharacter::Mod4).gamma_data(), 3.0, 4.0),
        ("delta", GammaFactorData::level_one_eigenform(12), 12.0, 1.0),
    ];
    let mut out = Vec::new();
    for (name, data, b, q) in rows {
        let bf = b_invariant(&data);
        let qf = conductor(&data);
        ensure(bf == b, || format!("B_{name} = {bf}, expected {b}"))?;
        ensure(rel(qf, q) <= 1e-9, || format!("q_{name} = {qf}, expected {q}"))?;
        out.push(format!("{name}: B={bf} q={qf:.12}"));
    }
    Ok(out.join(", ") + "; tol 1e-9 rel")
}

fn lift_laws() -> Check {
    let mut cases: Vec<(String, GammaFactorData, u32)> = Vec::new();
    for b in degree_one_builtins() {
        for k in 1..=3 {
            cases.push((b.name(), b.gamma_data(), k));
        }
    }
    for k in 1..=12 {
        cases.push(("delta".into(), Builtin::Eigenform.gamma_data(), k));
    }
    let mut worst: f64 = 0.0;
    for (name, data, k) in &cases {
        let r = check_lift_laws(data, *k).map_err(|e| e.to_string())?;
        let d = r.degree_rel_diff().max(r.conductor_rel_diff());
        ensure(d <= 1e-9, || format!("{name} k={k}: rel diff {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("{} cases, worst rel diff {worst:.1e}; tol 1e-9", cases.len()))
}

fn lifted_abscissa() -> Check {
    let mut out = Vec::new();
    for (k, lo, hi) in [(2, 0.70, 0.80), (3, 0.62, 0.72)] {
        let src = CoefficientSource::lift(chi4(), k).map_err(|e| e.to_string())?;
        let est = estimate_sigma_a(&src, 1_000_000).map_err(|e| e.to_string())?;
        ensure(est.value >= lo && est.value <= hi, || {
            format!("k={k}: sigma_a = {:.4} outside [{lo}, {hi}]", est.value)
        })?;
        out.push(format!("k={k}: {:.4} in [{lo}, {hi}]", est.value));
    }
    Ok(out.join(", ") + "; Nmax 1e6")
}

fn ramanujan_violation() -> Check {
    let src = CoefficientSource::lift(chi4(), 2).map_err(|e| e.to_string())?;
    let a = ramanujan_audit(&src, 1_000_000, 0.2).map_err(|e| e.to_string())?;
    let root = (a.argmax as f64).sqrt().round() as u64;
    let square = root * root == a.argmax;
    let detail = format!(
        "max |a(m)|/m^0.2 = {:.4} at m = {} (square: {square}), growth flag {}; need > 5",
        a.max_ratio, a.argmax, a.growth_flag
    );
    ensure(a.max_ratio > 5.0 && square && a.growth_flag, || detail.clone())?;
    Ok(detail)
}

fn split_reconstruction() -> Check {
    let n = 10_000;
    let mut out = Vec::new();
    for (name, src) in [("zeta", CoefficientSource::Zeta), ("chi4", chi4())] {
        let direct = src.coefficients(n).map_err(|e| e.to_string())?;
        let t1 = split_theorem1(&src, &Theorem1Config::new(0.5, 3.0), n).map_err(|e| e.to_string())?;
        let e1 = t1.reconstruct().max_abs_diff(&direct);
        let failures = t1.complete_multiplicativity_failures();
        let t3 = split_theorem3(&QuotientInput::Source(src.clone()), n, &Theorem3Config::default())
            .map_err(|e| e.to_string())?;
        let e3 = t3.reconstruct().max_abs_diff(&direct);
        ensure(e1 == 0.0 && e3 == 0.0, || format!("{name}: reconstruction errors {e1:e}, {e3:e}"))?;
        ensure(failures.is_empty(), || {
            format!("{name}: part1 not completely multiplicative at {:?}", &failures[..failures.len().min(5)])
        })?;
        out.push(format!("{name}: exact, part1 c.m."));
    }
    Ok(out.join(", ") + "; n <= 1e4")
}

fn b_bound() -> Check {
    let cfg = Theorem1Config::new(0.5, 3.0);
    let mut out = Vec::new();
    for (name, src) in [("zeta", CoefficientSource::Zeta), ("chi4", chi4())] {
        let primes = exceptional_free_primes(&src, &cfg, 500).map_err(|e| e.to_string())?;
        let a = b_bound_audit(&src, &cfg, &primes, 20).map_err(|e| e.to_string())?;
        ensure(a.failures.is_empty() && a.checked > 0, || {
            format!("{name}: {} failures of {}", a.failures.len(), a.checked)
        })?;
        out.push(format!("{name}: {} primes, {} checks, worst ratio {:.3}", primes.len(), a.checked, a.worst_ratio));
    }
    Ok(out.join(", "))
}

fn lemma_bound() -> Check {
    let samples = lemma_samples(10_000, 10.0, 0);
    let r = lemma_scan(&samples, 2048);
    ensure(r.passes(), || format!("{} samples below 1 + (|a|+|b|)/24", r.failures))?;
    ensure(r.constant_not_improvable_to_one(), || format!("min ratio {}", r.min_ratio))?;
    Ok(format!(
        "1e4 samples, grid 2048: min slack {:.4}, ratio range [{:.3}, {:.3}]",
        r.min_slack, r.min_ratio, r.max_ratio
    ))
}

fn kronecker_alignment() -> Check {
    let cfg = Theorem1Config::new(0.5, 3.0).with_cutoff(2.0);
    let part1 = split_theorem1(&chi4(), &cfg, 1400).map_err(|e| e.to_string())?.part1;
    let target = prime_phase_targets(&prime_values(&part1, 50), 0.0, 0.02).map_err(|e| e.to_string())?;
    let sol = solve(&target, default_budget(target.len())).map_err(|e| e.to_string())?;
    let check = target.evaluate(sol.t.clone(), Method::Lattice, 0);
    ensure(check.max_error < 0.02, || format!("re-evaluated max error {}", check.max_error))?;
    let restricted = restrict_to_primes(&part1, target.primes().unwrap_or_default());
    let al = alignment_report(&sol, &restricted, 586, 0.9, 50.0).map_err(|e| e.to_string())?;
    ensure(al.ratio >= 0.9, || format!("A/B = {:.4}", al.ratio))?;
    for y in [10.0, 50.0, 100.0] {
        let e = e_factor_check(&part1, 0.9, y).map_err(|e| e.to_string())?;
        ensure(e.holds(), || format!("e-factor fails at Y={y}: {} > {}", e.lhs, e.rhs))?;
    }
    Ok(format!(
        "{} primes, t = {:.4e}, max error {:.5} < 0.02, A/B = {:.4} >= 0.9, e-factor holds at Y = 10, 50, 100",
        target.len(),
        sol.t_approx,
        check.max_error,
        al.ratio
    ))
}

fn evaluator_regression() -> Check {
    let z2 = zeta(c(2.0, 0.0)).value;
    let l1 = dirichlet_l(&BuiltinCharacter::Mod4.character(), c(1.0, 0.0)).value;
    let ez = (z2 - PI * PI / 6.0).norm();
    let el = (l1 - PI / 4.0).norm();
    ensure(ez <= 1e-10 && el <= 1e-10, || format!("zeta(2) err {ez:e}, L(1) err {el:e}"))?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let builtins: Vec<Builtin> = degree_one_builtins().into_iter().chain([Builtin::Eigenform]).collect();
    for b in &builtins {
        for s in fe_samples(*b, 100, 0) {
            let r = fe_residual(&b.gamma_data(), *b, s).map_err(|e| format!("{} at {s}: {e}", b.name()))?;
            ensure(r.absolute < 1e-6, || format!("{} at {s}: residual {:e}", b.name(), r.absolute))?;
            worst = worst.max(r.absolute);
            count += 1;
        }
    }
    Ok(format!(
        "zeta(2) err {ez:.1e}, L(1,chi4) err {el:.1e} (tol 1e-10); {count} fe points over {} built-ins, worst {worst:.1e} (tol 1e-6)",
        builtins.len()
    ))
}

fn zero_counting() -> Check {
    let chi = Builtin::Dirichlet(BuiltinCharacter::Mod4);
    for f in [Builtin::Zeta, chi] {
        let n = density_probe(&f, &[0.6], 50.0).map_err(|e| e.to_string())?[0].count;
        ensure(n == 0, || format!("N_{}(0.6, 50) = {n}", f.name()))?;
    }
    let whole = Rectangle::new(-0.5, 1.5, 0.0, 50.0).map_err(|e| e.to_string())?;
    let total = count_zeros(&Builtin::Zeta, whole).map_err(|e| e.to_string())?.count;
    let smooth = zeta_smooth_count(50.0);
    ensure((total as f64 - smooth).abs() <= 2.0, || format!("count {total} vs smooth {smooth:.3}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut splits = Vec::new();
    for _ in 0..3 {
        let h: f64 = rng.gen_range(1.0..49.0);
        let (lo, hi) = whole.split_at_height(h).map_err(|e| e.to_string())?;
        let a = count_zeros(&Builtin::Zeta, lo).map_err(|e| e.to_string())?.count;
        let b = count_zeros(&Builtin::Zeta, hi).map_err(|e| e.to_string())?.count;
        ensure(a + b == total, || format!("split at {h:.3}: {a} + {b} != {total}"))?;
        splits.push(format!("{h:.2}"));
    }
    Ok(format!(
        "N(0.6, 50) = 0 for zeta and chi4; zeta count {total} vs {smooth:.3} (tol 2); additive at t = {}",
        splits.join(", ")
    ))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("lseries").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn domination() -> Check {
    let chi = spec_path("chi4.spec");
    let (code, out, err) = cli(&["dominate", &chi, &spec_path("zeta.spec"), "--m", "1000", "--sigma-floor", "0.5005"]);
    ensure(code == EXIT_WITNESS, || format!("exit {code}: {err}"))?;
    let row = out.lines().nth(1).unwrap_or_default().to_string();
    ensure(row.ends_with(",true"), || format!("witness not verified: {row}"))?;
    let (code, _, err) = cli(&["dominate", &chi, &chi, "--m", "1000", "--sigma-floor", "0.5005"]);
    ensure(code == EXIT_PASS, || format!("control exit {code}: {err}"))?;
    Ok(format!("witness row {row} with exit 2; F=G control exit 0"))
}

fn pl_propagation() -> Check {
    let ts: Vec<f64> = (0..=20).map(f64::from).collect();
    let exp = Custom::monomial(2.0);
    let r = pl_propagation_check(&exp, 1.0, 2.0, 1.1, 1.5, &ts).map_err(|e| e.to_string())?;
    ensure(r.defect <= 0.0, || format!("2^-s defect {:e}", r.defect))?;
    let h = Custom::new("zeta(s)(1-2^-s)", |s| {
        Ok(zeta(s).value * (1.0 - (-s * 2f64.ln()).exp()))
    })
    .with_poles(vec![(c(1.0, 0.0), 1)]);
    let ap = almost_period_find(&h, 2.0, 0.05, (1.0, 500.0), &ts, None).map_err(|e| e.to_string())?;
    ensure(ap.found, || format!("no almost period, best sup {:.4} at {:.3}", ap.sup, ap.tau))?;
    let d = pl_propagation_check(&h, ap.tau, 2.0, 1.1, 1.5, &ts).map_err(|e| e.to_string())?;
    ensure(d.defect <= 0.05, || format!("desk defect {:.4}", d.defect))?;
    Ok(format!(
        "2^-s defect {}; zeta(s)(1-2^-s): tau = {:.4}, defect {:.4} <= 0.05",
        r.defect, ap.tau, d.defect
    ))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 12] = [
        (1, "invariant table", 1, invariant_table),
        (2, "lift laws", 1, lift_laws),
        (3, "lifted abscissa", 30, lifted_abscissa),
        (4, "Ramanujan violation", 30, ramanujan_violation),
        (5, "split reconstruction", 20, split_reconstruction),
        (6, "b-bound audit", 5, b_bound),
        (7, "lemma bound", 10, lemma_bound),
        (8, "Kronecker alignment", 60, kronecker_alignment),
        (9, "evaluator regression", 10, evaluator_regression),
        (10, "zero counting", 120, zero_counting),
        (11, "domination witness", 60, domination),
        (12, "Phragmen-Lindelof propagation", 30, pl_propagation),
    ];
    let mut passed = 0;
    let mut unexpected = Vec::new();
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (ok, detail) = match result {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        let expected = EXPECTED_FAILURES.contains(&id);
        let tag = match (ok, expected) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {id:>2} [{tag}] {name}: {detail} | {:.3} s (limit {limit} s)",
            elapsed.as_secs_f64()
        );
        if ok {
            passed += 1;
        } else if !expected {
            unexpected.push(id);
        }
    }
    println!(
        "acceptance: {passed}/12 passed; expected failures {EXPECTED_FAILURES:?}; unexpected failures {unexpected:?}"
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
