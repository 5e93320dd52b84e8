use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use lseries_core::abscissa::{bound_oracle_entire, bound_oracle_lift, estimate_sigma_a, estimate_sigma_c, Interval};
use lseries_core::analytic::{
    density_probe, domination_witness, evaluate, fe_residual, locate_zeros, majorant_check, zeta_smooth_count,
    Builtin, DominationGrid, MajorantGrid, Rectangle, Witness, DENSITY_SIGMA_MAX,
};
use lseries_core::euler_split::{
    b_bound_audit, exceptional_free_primes, lemma_scan, lemma_theta, split_theorem1, split_theorem3, LemmaTheta,
    QuotientInput, Theorem1Config, Theorem3Config,
};
use lseries_core::fe::{check_lift_laws, lift_admissible, lift_data};
use lseries_core::kronecker::{
    alignment_report, default_budget, prime_phase_targets, prime_values, restrict_to_primes, solve,
    KroneckerError, KroneckerSolution,
};
use lseries_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spec::SpecFile;
use crate::{Command, Variant, Which};

/// Relative tolerance of the lift-law comparison.
pub const LIFT_LAW_TOLERANCE: f64 = 1e-9;
/// Default bound on functional-equation residuals.
pub const FE_TOLERANCE: f64 = 1e-6;
/// Default bound on reconstruction errors of a split.
pub const SPLIT_TOLERANCE: f64 = 1e-9;
/// Widening of the abscissa oracles.
pub const ORACLE_SLACK: f64 = 0.05;
/// Largest prime and exponent of the b-bound audit run by `split`.
pub const B_AUDIT_PRIMES: u64 = 500;
pub const B_AUDIT_DEPTH: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Witness,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => crate::EXIT_PASS,
            Status::Witness => crate::EXIT_WITNESS,
        }
    }

    fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Witness
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    /// Printed ahead of the table, e.g. a lifted spec.
    pub preamble: Option<String>,
    pub csv: String,
    pub summary: Vec<(String, String)>,
    pub status: Status,
}

impl Report {
    fn new(command: &'static str, csv: String) -> Self {
        Self {
            command,
            preamble: None,
            csv,
            summary: Vec::new(),
            status: Status::Pass,
        }
    }

    fn add(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    /// Shortest round-trip form, with an exponent for very large or small values.
    fn num(&mut self, key: &str, value: f64) {
        self.add(key, format!("{value:?}"));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::from("[summary]\n");
        let _ = writeln!(s, "command = {}", self.command);
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k} = {v}");
        }
        let status = match self.status {
            Status::Pass => "pass",
            Status::Witness => "witness",
        };
        let _ = writeln!(s, "status = {status}");
        s
    }

    pub fn emit(&self, csv_path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
        if let Some(p) = &self.preamble {
            out.write_all(p.as_bytes())?;
            out.write_all(b"\n")?;
        }
        match csv_path {
            Some(path) => {
                std::fs::write(path, &self.csv).with_context(|| format!("writing {}", path.display()))?;
            }
            None => {
                out.write_all(self.csv.as_bytes())?;
                out.write_all(b"\n")?;
            }
        }
        out.write_all(self.summary_text().as_bytes())?;
        Ok(())
    }
}

fn load(path: &Path) -> Result<SpecFile> {
    SpecFile::load(path).with_context(|| format!("reading spec {}", path.display()))
}

fn evaluator(spec: &SpecFile) -> Result<Builtin> {
    spec.generator
        .builtin()
        .ok_or_else(|| anyhow!("no analytic evaluator for generator '{}'", spec.generator.name()))
}

pub fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Invariants { spec } => Ok(invariants(&load(spec)?)),
        Command::Lift { spec, k, out } => {
            let (report, lifted) = lift(&load(spec)?, *k)?;
            match out {
                Some(path) => {
                    std::fs::write(path, lifted.to_string()).with_context(|| format!("writing {}", path.display()))?;
                    Ok(report)
                }
                None => Ok(Report {
                    preamble: Some(lifted.to_string()),
                    ..report
                }),
            }
        }
        Command::Abscissa { spec, which, nmax } => abscissa(&load(spec)?, *which, *nmax),
        Command::Split {
            spec,
            variant,
            eps,
            c0,
            nmax,
        } => split(&load(spec)?, *variant, *eps, *c0, *nmax),
        Command::Kronecker {
            spec,
            prime_max,
            eta,
            tmin,
            part1,
            sigma,
            y,
            budget,
        } => kronecker(
            &load(spec)?,
            &KroneckerArgs {
                prime_max: *prime_max,
                eta: *eta,
                t_min: *tmin,
                part1: *part1,
                sigma: *sigma,
                y: *y,
                budget: *budget,
            },
        ),
        Command::Zeros { spec, sigma, tmax } => zeros(&load(spec)?, *sigma, *tmax),
        Command::Majorant {
            pair,
            sigma_min,
            sigma_max,
            grid,
            tmax,
            c,
        } => majorant(
            &load(&pair.spec_f)?,
            &load(&pair.spec_g)?,
            (*sigma_min, *sigma_max),
            *grid,
            *tmax,
            *c,
        ),
        Command::Dominate { pair, m, sigma_floor } => {
            dominate(&load(&pair.spec_f)?, &load(&pair.spec_g)?, m, *sigma_floor)
        }
        Command::LemmaScan {
            trials,
            grid,
            radius,
            seed,
        } => Ok(lemma(*trials, *grid, *radius, *seed)),
        Command::FeCheck { spec, samples, seed } => fe_check(&load(spec)?, *samples, *seed),
    }
}

pub fn invariants(spec: &SpecFile) -> Report {
    let g = &spec.gamma;
    let inv = g.invariants();
    let mut csv = String::from("quantity,value\n");
    let _ = writeln!(csv, "degree,{:?}", inv.degree);
    let _ = writeln!(csv, "conductor,{:?}", inv.conductor);
    let _ = writeln!(csv, "b_invariant,{:?}", inv.b_invariant);
    let _ = writeln!(csv, "sharp_admissible,{:?}", g.sharp_admissible());
    let _ = writeln!(csv, "pole_order,{:?}", g.pole_order());
    let _ = writeln!(csv, "pole_displaced,{:?}", g.pole_displaced());
    let mut r = Report::new("invariants", csv);
    r.add("generator", spec.generator.name());
    r.num("degree", inv.degree);
    r.num("conductor", inv.conductor);
    r.num("b_invariant", inv.b_invariant);
    r.add("sharp_admissible", g.sharp_admissible());
    r
}

/// The report and the lifted spec.
pub fn lift(spec: &SpecFile, k: u32) -> Result<(Report, SpecFile)> {
    let laws = check_lift_laws(&spec.gamma, k)?;
    let lifted = SpecFile {
        gamma: lift_data(&spec.gamma, k)?,
        generator: spec.generator.lifted(k),
        overrides: spec.overrides.clone(),
    };
    let mut csv = String::from("quantity,direct,law,rel_diff\n");
    let _ = writeln!(
        csv,
        "degree,{:?},{:?},{:?}",
        laws.degree_direct,
        laws.degree_law,
        laws.degree_rel_diff()
    );
    let _ = writeln!(
        csv,
        "conductor,{:?},{:?},{:?}",
        laws.conductor_direct,
        laws.conductor_law,
        laws.conductor_rel_diff()
    );
    let mut r = Report::new("lift", csv);
    let inv = lifted.gamma.invariants();
    r.add("k", k);
    r.num("degree", inv.degree);
    r.num("conductor", inv.conductor);
    r.num("b_invariant", inv.b_invariant);
    r.add("sharp_admissible", lifted.gamma.sharp_admissible());
    r.add(
        "lift_admissible",
        lift_admissible(&spec.gamma, spec.gamma.pole_order() == 0, k),
    );
    r.add("pole_displaced", lifted.gamma.pole_displaced());
    r.status = Status::from_pass(
        laws.degree_rel_diff() <= LIFT_LAW_TOLERANCE && laws.conductor_rel_diff() <= LIFT_LAW_TOLERANCE,
    );
    Ok((r, lifted))
}

/// Closed-form interval the estimate is expected in, when one is known.
fn abscissa_oracle(spec: &SpecFile, which: Which) -> Result<Option<Interval>> {
    let k = spec.generator.lift_order();
    let d = spec.gamma.invariants().degree / k as f64;
    Ok(match which {
        Which::A if k > 1 => Some(bound_oracle_lift(d, k)?),
        Which::C if k == 1 && spec.gamma.pole_order() == 0 && d >= 1.0 => Some(bound_oracle_entire(d)?),
        _ => None,
    })
}

pub fn abscissa(spec: &SpecFile, which: Which, nmax: usize) -> Result<Report> {
    let source = spec.source();
    let est = match which {
        Which::A => estimate_sigma_a(&source, nmax)?,
        Which::C => estimate_sigma_c(&source, nmax)?,
    };
    let mut r = Report::new("abscissa", est.to_csv());
    r.add("which", est.which.name());
    r.num("value", est.value);
    r.add("n_used", est.n_used);
    r.num("tail_slope_diagnostic", est.tail_slope_diagnostic);
    r.add("degenerate", est.degenerate);
    r.add("floored", est.floored);
    if let Some(oracle) = abscissa_oracle(spec, which)? {
        let widened = oracle.widen(ORACLE_SLACK);
        let inside = widened.contains(est.value);
        r.add("oracle", oracle);
        r.add("within_oracle", inside);
        r.status = Status::from_pass(inside);
    }
    Ok(r)
}

pub fn split(spec: &SpecFile, variant: Variant, eps: Option<f64>, c0: Option<f64>, nmax: usize) -> Result<Report> {
    let source = spec.source();
    let o = &spec.overrides;
    let direct = source.coefficients(nmax)?;
    let tolerance = o.tolerance.unwrap_or(SPLIT_TOLERANCE);
    let (split, mut r_fields, mut ok) = match variant {
        Variant::T1 => {
            let mut cfg = Theorem1Config::new(eps.or(o.eps).unwrap_or(0.5), c0.or(o.c0).unwrap_or(3.0));
            if let Some(c) = o.cutoff {
                cfg = cfg.with_cutoff(c);
            }
            let split = split_theorem1(&source, &cfg, nmax)?;
            let failures = split.complete_multiplicativity_failures();
            let bound = B_AUDIT_PRIMES.min(nmax as u64);
            let primes = exceptional_free_primes(&source, &cfg, bound)?;
            let audit = b_bound_audit(&source, &cfg, &primes, B_AUDIT_DEPTH)?;
            let fields = vec![
                ("eps", format!("{:?}", cfg.eps)),
                ("c0", format!("{:?}", cfg.c0)),
                ("cutoff", format!("{:?}", cfg.cutoff_value())),
                ("multiplicativity_failures", failures.len().to_string()),
                ("b_audit_checked", audit.checked.to_string()),
                ("b_audit_failures", audit.failures.len().to_string()),
                ("b_audit_worst_ratio", format!("{:?}", audit.worst_ratio)),
            ];
            let ok = failures.is_empty() && audit.failures.is_empty();
            (split, fields, ok)
        }
        Variant::T3 => {
            let cfg = match o.t3_cutoff {
                Some(c) => Theorem3Config::with_cutoff(c),
                None => Theorem3Config::default(),
            };
            let split = split_theorem3(&QuotientInput::Source(source.clone()), nmax, &cfg)?;
            let mut fields = vec![("cutoff", cfg.cutoff.to_string())];
            let mut ok = true;
            if let Some(kb) = &split.k_bound {
                fields.push(("k_bound_worst", format!("{:?}", kb.worst)));
                fields.push(("k_bound_limit", format!("{:?}", kb.limit)));
                ok = kb.passes();
            }
            (split, fields, ok)
        }
    };
    let err = split.reconstruct().max_abs_diff(&direct);
    ok &= err <= tolerance;
    r_fields.insert(0, ("variant", format!("{variant:?}").to_lowercase()));
    r_fields.push(("exceptional_primes", split.exceptional.len().to_string()));
    r_fields.push(("uncertified_primes", split.exceptional.uncertified().len().to_string()));
    r_fields.push(("reconstruction_error", format!("{err:?}")));
    let mut r = Report::new("split", split.to_csv(&direct));
    r.add("nmax", nmax);
    for (k, v) in r_fields {
        r.add(k, v);
    }
    r.status = Status::from_pass(ok);
    Ok(r)
}

#[derive(Debug, Clone, Copy)]
pub struct KroneckerArgs {
    pub prime_max: usize,
    pub eta: f64,
    pub t_min: f64,
    pub part1: bool,
    pub sigma: f64,
    pub y: f64,
    pub budget: Option<usize>,
}

pub fn kronecker(spec: &SpecFile, args: &KroneckerArgs) -> Result<Report> {
    let source = spec.source();
    let o = &spec.overrides;
    let n_align = (3.0 * args.y * args.y.ln()).floor() as usize;
    let len = n_align.max(args.prime_max).max(2);
    let c = if args.part1 {
        let mut cfg = Theorem1Config::new(o.eps.unwrap_or(0.5), o.c0.unwrap_or(3.0));
        if let Some(cut) = o.cutoff {
            cfg = cfg.with_cutoff(cut);
        }
        split_theorem1(&source, &cfg, len)?.part1
    } else {
        source.coefficients(len)?
    };
    let target = prime_phase_targets(&prime_values(&c, args.prime_max), args.t_min, args.eta)?;
    let budget = args.budget.or(o.budget).unwrap_or_else(|| default_budget(target.len()));
    let (solution, found) = match solve(&target, budget) {
        Ok(s) => (Some(s), true),
        Err(KroneckerError::BudgetExhausted { best, .. }) => (best.map(|b| *b), false),
        Err(e) => return Err(e.into()),
    };
    let mut r = Report::new(
        "kronecker",
        solution
            .as_ref()
            .map_or_else(|| "prime,theta,beta,n,error\n".to_string(), |s| s.to_csv(&target)),
    );
    r.add("components", target.len());
    r.num("eta", args.eta);
    r.add("budget", budget);
    r.add("found", found);
    if let Some(s) = &solution {
        add_solution(&mut r, s);
        let primes = target.primes().unwrap_or_default();
        let restricted = restrict_to_primes(&c, primes);
        let al = alignment_report(s, &restricted, n_align, args.sigma, args.y)?;
        r.num("alignment_sigma", al.sigma);
        r.num("alignment_y", al.y);
        r.add("alignment_n", al.n_max);
        r.num("alignment_a", al.a);
        r.num("alignment_b", al.b);
        r.num("alignment_ratio", al.ratio);
    }
    r.status = Status::from_pass(found);
    Ok(r)
}

fn add_solution(r: &mut Report, s: &KroneckerSolution) {
    r.add("t", &s.t);
    r.num("t_approx", s.t_approx);
    r.num("max_error", s.max_error);
    r.add("method", format!("{:?}", s.method));
    r.add("attempts", s.attempts);
}

pub fn zeros(spec: &SpecFile, sigma: f64, tmax: f64) -> Result<Report> {
    let f = evaluator(spec)?;
    let row = density_probe(&f, &[sigma], tmax)?[0];
    let mut csv = String::from("sigma,t,multiplicity,residual\n");
    if row.count > 0 {
        let region = Rectangle::new(sigma, DENSITY_SIGMA_MAX, -tmax, tmax)?;
        for z in locate_zeros(&f, region, None)? {
            let _ = writeln!(csv, "{:?},{:?},{:?},{:?}", z.s.re, z.s.im, z.multiplicity, z.residual);
        }
    }
    let mut r = Report::new("zeros", csv);
    r.add("function", f.name());
    r.num("sigma", sigma);
    r.num("tmax", tmax);
    r.add("count", row.count);
    r.num("count_over_t", row.ratio);
    if f == Builtin::Zeta {
        r.num("smooth_count_upper_half", zeta_smooth_count(tmax));
    }
    Ok(r)
}

fn witness_row(csv: &mut String, kind: &str, w: &Witness) {
    let _ = writeln!(csv, "{kind},{:?},{:?},{:?},{:?},{:?}", w.s.re, w.s.im, w.lhs, w.rhs, w.ratio());
}

pub fn majorant(
    big: &SpecFile,
    small: &SpecFile,
    strip: (f64, f64),
    grid: usize,
    tmax: f64,
    c: f64,
) -> Result<Report> {
    let f = evaluator(big)?;
    let g = evaluator(small)?;
    let grid = MajorantGrid {
        t_max: tmax,
        t_steps: grid,
        ..MajorantGrid::default()
    };
    let rep = majorant_check(&f, &g, strip, &|_| c, &grid)?;
    let mut csv = String::from("kind,sigma,t,lhs,rhs,ratio\n");
    if let Some(w) = &rep.witness {
        witness_row(&mut csv, "witness", w);
    }
    witness_row(&mut csv, "worst", &rep.worst);
    for z in &rep.zeros_of_f {
        let _ = writeln!(csv, "zero_of_minorant,{:?},{:?},0,0,0", z.s.re, z.s.im);
    }
    let mut r = Report::new("majorant", csv);
    r.add("f", f.name());
    r.add("g", g.name());
    r.add("strip", format!("[{}, {}]", strip.0, strip.1));
    r.num("c", c);
    r.add("points", rep.points);
    r.num("worst_ratio", rep.worst.ratio());
    r.status = Status::from_pass(rep.passes());
    Ok(r)
}

pub fn dominate(big: &SpecFile, small: &SpecFile, m_list: &[f64], sigma_floor: f64) -> Result<Report> {
    let f = evaluator(big)?;
    let g = evaluator(small)?;
    let rep = domination_witness(&f, &g, sigma_floor, m_list, &DominationGrid::default())?;
    let mut csv = String::from("m,sigma,t,abs_f,m_abs_g,ratio,verified\n");
    let mut witnesses = 0;
    for row in &rep.rows {
        if let Some(w) = &row.witness {
            let fv = evaluate(f, w.s)?.value.norm();
            let gv = evaluate(g, w.s)?.value.norm();
            let verified = fv > row.m * gv;
            witnesses += 1;
            let _ = writeln!(
                csv,
                "{:?},{:?},{:?},{:?},{:?},{:?},{verified}",
                row.m,
                w.s.re,
                w.s.im,
                w.lhs,
                w.rhs,
                w.ratio()
            );
        }
    }
    let mut r = Report::new("dominate", csv);
    r.add("f", f.name());
    r.add("g", g.name());
    r.num("sigma_floor", sigma_floor);
    r.add("points", rep.points);
    r.add("zeros_of_g", rep.zeros_of_g.len());
    r.num("worst_ratio", rep.worst.ratio());
    r.add("witnesses", witnesses);
    r.status = Status::from_pass(witnesses == 0);
    Ok(r)
}

/// `a, b` with modulus uniform in `[0, radius]` and uniform argument.
pub fn lemma_samples(trials: usize, radius: f64, seed: u64) -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let r = rng.gen_range(0.0..=radius);
        Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
    };
    (0..trials).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

pub fn lemma(trials: usize, grid: usize, radius: f64, seed: u64) -> Report {
    let samples = lemma_samples(trials, radius, seed);
    let mut csv = String::from("trial,a_re,a_im,b_re,b_im,theta_re,theta_im,value,target\n");
    for (i, &(a, b)) in samples.iter().enumerate() {
        let th = lemma_theta(a, b, grid);
        let _ = writeln!(
            csv,
            "{i},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            a.re,
            a.im,
            b.re,
            b.im,
            th.theta.re,
            th.theta.im,
            th.value,
            LemmaTheta::target(a, b)
        );
    }
    let rep = lemma_scan(&samples, grid);
    let mut r = Report::new("lemma-scan", csv);
    r.add("trials", rep.trials);
    r.add("grid", rep.grid);
    r.add("seed", seed);
    r.num("min_slack", rep.min_slack);
    r.add("failures", rep.failures);
    r.num("min_ratio", rep.min_ratio);
    r.num("max_ratio", rep.max_ratio);
    r.add("constant_not_improvable_to_one", rep.constant_not_improvable_to_one());
    r.status = Status::from_pass(rep.passes());
    r
}

/// Points with `s` and `1 − s̄` both inside the evaluation window, away from
/// the poles of the completed function.
pub fn fe_samples(f: Builtin, samples: usize, seed: u64) -> Vec<Complex64> {
    let w = f.window();
    let lo = w.sigma_min.max(1.0 - w.sigma_max);
    let hi = w.sigma_max.min(1.0 - w.sigma_min);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let s = Complex64::new(rng.gen_range(lo..=hi), rng.gen_range(-w.t_max..=w.t_max));
        if f.pole_order() > 0 && (s.norm() < 1e-3 || (s - 1.0).norm() < 1e-3) {
            continue;
        }
        out.push(s);
    }
    out
}

pub fn fe_check(spec: &SpecFile, samples: usize, seed: u64) -> Result<Report> {
    let f = evaluator(spec)?;
    let tolerance = spec.overrides.tolerance.unwrap_or(FE_TOLERANCE);
    let mut csv = String::from("sigma,t,lambda_re,lambda_im,residual,scaled\n");
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for s in fe_samples(f, samples, seed) {
        let res = fe_residual(&spec.gamma, f, s).with_context(|| format!("at s = {s}"))?;
        worst = worst.max(res.absolute);
        if !(res.absolute < tolerance) {
            failures += 1;
        }
        let _ = writeln!(
            csv,
            "{:?},{:?},{:?},{:?},{:?},{:?}",
            s.re, s.im, res.lambda.re, res.lambda.im, res.absolute, res.scaled
        );
    }
    if samples == 0 {
        bail!("at least one sample is required");
    }
    let mut r = Report::new("fe-check", csv);
    r.add("function", f.name());
    r.add("samples", samples);
    r.add("seed", seed);
    r.num("tolerance", tolerance);
    r.num("worst_residual", worst);
    r.add("failures", failures);
    r.status = Status::from_pass(failures == 0);
    Ok(r)
}
