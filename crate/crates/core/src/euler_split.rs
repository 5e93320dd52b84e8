//! Euler-product factorizations of a multiplicative series into three parts.
//!
//! The first shape splits `F = P₁P₂P₃`: `P₂` collects the full local factors
//! at an exceptional prime set `S_ε`, `P₁` carries the first-order behaviour
//! at the remaining primes, and `P₃` is what is left. The second shape splits
//! a quotient `H = F/G = Q₁Q₂Q₃` the same way, with `Q₁` built from the
//! quadratic truncations `1 + h(p)x + h(p²)x²`.
//!
//! Also here: the alternating coefficients `b(p^m)`, their growth audit, and
//! the unit-circle lemma `max_θ |1 + θa + θ²b| ≥ 1 + (|a|+|b|)/24`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{primes_up_to, SpfSieve};
use crate::coefficients::{CoefficientError, CoefficientSource, LocalGrowth};
use crate::series::DirichletSeries;

/// Largest `m` scanned when deciding `|h(p^m)| > p^{m/10}`.
pub const THEOREM3_DEPTH: u32 = 40;
/// Default prime cutoff of the quotient split: every `p ≤ 10^4` is exceptional.
pub const THEOREM3_CUTOFF: u64 = 10_000;
/// Exponent in `|h(p^m)| > p^{m·exponent}`.
pub const THEOREM3_EXPONENT: f64 = 0.1;
/// Depth of the local series used for the `k(p^m)` bound.
const K_BOUND_DEPTH: u32 = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplitError {
    #[error("eps must lie in (0, 1/2], got {0}")]
    InvalidEps(f64),
    #[error("c0 must be at least 3, got {0}")]
    InvalidC0(f64),
    #[error("sieve bound {bound} is below the prime cutoff {cutoff}")]
    SieveTooSmall { cutoff: f64, bound: u64 },
    #[error("prime {0} belongs to the exceptional set")]
    ExceptionalPrime(u64),
    #[error("series is not multiplicative")]
    NotMultiplicative,
    #[error("coefficient a(1) must equal 1")]
    NonUnitLeading,
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

/// Shape of the first factor in the `P₁P₂P₃` split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartOneForm {
    /// `P₁ = Π (1 - a(p)p^{-s})^{-1}`, completely multiplicative.
    #[default]
    CompletelyMultiplicative,
    /// `P₁ = Π (1 + a(p)p^{-s})`, supported on squarefree integers; `P₃` then
    /// carries the alternating coefficients `b(p^m)`.
    Squarefree,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Config {
    pub eps: f64,
    pub c0: f64,
    /// Replaces `c0^{2/ε}` as the prime cutoff.
    pub cutoff: Option<f64>,
    pub form: PartOneForm,
}

impl Theorem1Config {
    pub fn new(eps: f64, c0: f64) -> Self {
        Self {
            eps,
            c0,
            cutoff: None,
            form: PartOneForm::default(),
        }
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn with_form(mut self, form: PartOneForm) -> Self {
        self.form = form;
        self
    }

    /// Primes below this value are exceptional.
    pub fn cutoff_value(&self) -> f64 {
        self.cutoff.unwrap_or_else(|| self.c0.powf(2.0 / self.eps))
    }

    fn validate(&self) -> Result<(), SplitError> {
        if !(self.eps > 0.0 && self.eps <= 0.5) {
            return Err(SplitError::InvalidEps(self.eps));
        }
        if !(self.c0 >= 3.0) {
            return Err(SplitError::InvalidC0(self.c0));
        }
        Ok(())
    }

    /// `|a(p)| > p^{ε/2}` or `p` below the cutoff.
    pub fn is_exceptional(&self, p: u64, ap: Complex64) -> bool {
        (p as f64) < self.cutoff_value() || ap.norm() > (p as f64).powf(self.eps / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem3Config {
    pub cutoff: u64,
    pub depth: u32,
}

impl Default for Theorem3Config {
    fn default() -> Self {
        Self {
            cutoff: THEOREM3_CUTOFF,
            depth: THEOREM3_DEPTH,
        }
    }
}

impl Theorem3Config {
    pub fn with_cutoff(cutoff: u64) -> Self {
        Self {
            cutoff,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExceptionalRule {
    Theorem1(Theorem1Config),
    Theorem3(Theorem3Config),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalPrimeSet {
    primes: Vec<u64>,
    rule: ExceptionalRule,
    /// Every prime up to this bound has been classified.
    completeness_bound: u64,
    /// Primes placed in the set only because no growth bound could rule
    /// them out beyond the scan depth.
    uncertified: Vec<u64>,
}

impl ExceptionalPrimeSet {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn rule(&self) -> ExceptionalRule {
        self.rule
    }

    pub fn completeness_bound(&self) -> u64 {
        self.completeness_bound
    }

    pub fn uncertified(&self) -> &[u64] {
        &self.uncertified
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// `S_ε` for the default cutoff `c0^{2/ε}`.
pub fn build_exceptional_set(
    source: &CoefficientSource,
    eps: f64,
    c0: f64,
    sieve_bound: u64,
) -> Result<ExceptionalPrimeSet, SplitError> {
    build_exceptional_set_with(source, &Theorem1Config::new(eps, c0), sieve_bound)
}

pub fn build_exceptional_set_with(
    source: &CoefficientSource,
    config: &Theorem1Config,
    sieve_bound: u64,
) -> Result<ExceptionalPrimeSet, SplitError> {
    config.validate()?;
    let cutoff = config.cutoff_value();
    if cutoff > sieve_bound as f64 {
        return Err(SplitError::SieveTooSmall {
            cutoff,
            bound: sieve_bound,
        });
    }
    let mut primes = Vec::new();
    for p in primes_up_to(sieve_bound as usize) {
        let p = p as u64;
        if config.is_exceptional(p, source.coeff_or_zero(p)?) {
            primes.push(p);
        }
    }
    Ok(ExceptionalPrimeSet {
        primes,
        rule: ExceptionalRule::Theorem1(*config),
        completeness_bound: sieve_bound,
        uncertified: Vec::new(),
    })
}

/// `b(p^m) = Σ_{l=0}^{m} (-1)^l a(p)^l a(p^{m-l})`.
pub fn b_coefficient(
    source: &CoefficientSource,
    p: u64,
    m: u32,
) -> Result<Complex64, SplitError> {
    if !source.is_multiplicative() {
        return Err(SplitError::NotMultiplicative);
    }
    let local = source.local_series(p, m)?;
    Ok(alternating(&local, m as usize))
}

fn alternating(local: &[Complex64], m: usize) -> Complex64 {
    let ap = local[1.min(local.len() - 1)];
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..=m {
        let term = power * local[m - l];
        acc += if l % 2 == 0 { term } else { -term };
        power *= ap;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitVariant {
    Theorem1(PartOneForm),
    Theorem3,
}

/// Per-prime value of `Σ_{m≥3} |k(p^m)| p^{-m/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KBoundReport {
    pub per_prime: Vec<(u64, f64)>,
    pub worst: f64,
    pub worst_prime: Option<u64>,
    pub limit: f64,
}

impl KBoundReport {
    pub fn passes(&self) -> bool {
        self.worst <= self.limit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerSplit {
    pub part1: DirichletSeries,
    pub part2: DirichletSeries,
    pub part3: DirichletSeries,
    pub variant: SplitVariant,
    pub exceptional: ExceptionalPrimeSet,
    pub k_bound: Option<KBoundReport>,
}

impl EulerSplit {
    pub fn len(&self) -> usize {
        self.part1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.part1.is_empty()
    }

    pub fn reconstruct(&self) -> DirichletSeries {
        self.part1.convolve(&self.part2).convolve(&self.part3)
    }

    /// Primes `p ∉ S`, `p^m ≤ N` at which `part1(p^m) ≠ part1(p)^m`.
    pub fn complete_multiplicativity_failures(&self) -> Vec<(u64, u32)> {
        let n = self.len();
        let mut bad = Vec::new();
        for p in primes_up_to(n) {
            if self.exceptional.contains(p as u64) {
                continue;
            }
            let cp = self.part1.get(p);
            let mut pm = p;
            let mut m = 1u32;
            while pm <= n {
                if self.part1.get(pm) != cp.powu(m) {
                    bad.push((p as u64, m));
                }
                match pm.checked_mul(p) {
                    Some(q) => pm = q,
                    None => break,
                }
                m += 1;
            }
        }
        bad
    }

    /// CSV with columns `n,part1,part2,part3,reconstructed,source,abs_error`.
    pub fn to_csv(&self, source: &DirichletSeries) -> String {
        let rec = self.reconstruct();
        let mut out = String::from("n,part1,part2,part3,reconstructed,source,abs_error\n");
        for n in 1..=self.len().min(source.len()) {
            let _ = writeln!(
                out,
                "{n},{},{},{},{},{},{:e}",
                fmt_complex(self.part1.get(n)),
                fmt_complex(self.part2.get(n)),
                fmt_complex(self.part3.get(n)),
                fmt_complex(rec.get(n)),
                fmt_complex(source.get(n)),
                (rec.get(n) - source.get(n)).norm()
            );
        }
        out
    }
}

/// `re+imi` with shortest round-trip formatting.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn check_leading(a1: Complex64) -> Result<(), SplitError> {
    if (a1 - 1.0).norm() > 1e-12 {
        return Err(SplitError::NonUnitLeading);
    }
    Ok(())
}

pub fn split_theorem1(
    source: &CoefficientSource,
    config: &Theorem1Config,
    n: usize,
) -> Result<EulerSplit, SplitError> {
    if !source.is_multiplicative() {
        return Err(SplitError::NotMultiplicative);
    }
    check_leading(source.coeff(1)?)?;
    let bound = (n as u64).max(config.cutoff_value().ceil() as u64);
    let exceptional = build_exceptional_set_with(source, config, bound)?;
    let sieve = SpfSieve::new(n);
    let zero = Complex64::new(0.0, 0.0);
    let mut locals = std::collections::HashMap::new();
    for p in sieve.primes() {
        let depth = crate::arith::max_exponent(p, n);
        locals.insert(p, source.local_series(p as u64, depth)?);
    }
    let form = config.form;
    let in_s = |p: usize| exceptional.contains(p as u64);
    let part1 = DirichletSeries::multiplicative(n, &sieve, |p, e| {
        if in_s(p) {
            return zero;
        }
        let ap = locals[&p][1];
        match form {
            PartOneForm::CompletelyMultiplicative => ap.powu(e),
            PartOneForm::Squarefree if e == 1 => ap,
            PartOneForm::Squarefree => zero,
        }
    });
    let part2 = DirichletSeries::multiplicative(n, &sieve, |p, e| {
        if in_s(p) {
            locals[&p][e as usize]
        } else {
            zero
        }
    });
    let part3 = DirichletSeries::multiplicative(n, &sieve, |p, e| {
        if in_s(p) {
            return zero;
        }
        let local = &locals[&p];
        let e = e as usize;
        match form {
            // F_p (1 - a(p) x)
            PartOneForm::CompletelyMultiplicative => local[e] - local[1] * local[e - 1],
            PartOneForm::Squarefree => alternating(local, e),
        }
    });
    Ok(EulerSplit {
        part1,
        part2,
        part3,
        variant: SplitVariant::Theorem1(form),
        exceptional,
        k_bound: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BBoundAudit {
    pub checked: usize,
    pub failures: Vec<(u64, u32, f64)>,
    /// Largest `|b(p^m)| / p^{mε}` seen and where.
    pub worst_ratio: f64,
    pub worst_at: Option<(u64, u32)>,
}

/// Checks `|b(p^m)| ≤ p^{mε}` for `2 ≤ m ≤ m_max` at each given prime.
pub fn b_bound_audit(
    source: &CoefficientSource,
    config: &Theorem1Config,
    primes: &[u64],
    m_max: u32,
) -> Result<BBoundAudit, SplitError> {
    config.validate()?;
    if !source.is_multiplicative() {
        return Err(SplitError::NotMultiplicative);
    }
    let mut audit = BBoundAudit {
        checked: 0,
        failures: Vec::new(),
        worst_ratio: 0.0,
        worst_at: None,
    };
    for &p in primes {
        let local = source.local_series(p, m_max.max(1))?;
        if config.is_exceptional(p, local[1]) {
            return Err(SplitError::ExceptionalPrime(p));
        }
        for m in 2..=m_max {
            let b = alternating(&local, m as usize).norm();
            let limit = (p as f64).powf(m as f64 * config.eps);
            let ratio = b / limit;
            audit.checked += 1;
            if ratio > audit.worst_ratio {
                audit.worst_ratio = ratio;
                audit.worst_at = Some((p, m));
            }
            if b > limit {
                audit.failures.push((p, m, ratio));
            }
        }
    }
    Ok(audit)
}

/// Primes up to `bound` outside `S_ε`.
pub fn exceptional_free_primes(
    source: &CoefficientSource,
    config: &Theorem1Config,
    bound: u64,
) -> Result<Vec<u64>, SplitError> {
    config.validate()?;
    let mut out = Vec::new();
    for p in primes_up_to(bound as usize) {
        let p = p as u64;
        if !config.is_exceptional(p, source.coeff_or_zero(p)?) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `h = a_F * a_G^{-1}`, the coefficients of `F/G`.
pub fn ratio_coefficients(
    f: &CoefficientSource,
    g: &CoefficientSource,
    n: usize,
) -> Result<DirichletSeries, SplitError> {
    let af = f.coefficients(n)?;
    let ag = g.coefficients(n)?;
    check_leading(af.get(1))?;
    check_leading(ag.get(1))?;
    let inv = ag.inverse().map_err(CoefficientError::from)?;
    Ok(af.convolve(&inv))
}

/// Multiplicative series fed to the quotient split.
#[derive(Debug, Clone, PartialEq)]
pub enum QuotientInput {
    /// `h = F / G`, with local factors by power-series division.
    Ratio {
        f: CoefficientSource,
        g: CoefficientSource,
    },
    /// `h` given directly by a source.
    Source(CoefficientSource),
    /// A finite stream, read as zero past its end.
    Stream(DirichletSeries),
}

impl QuotientInput {
    fn local(&self, p: u64, depth: u32) -> Result<Vec<Complex64>, SplitError> {
        match self {
            QuotientInput::Ratio { f, g } => {
                let fl = f.local_series(p, depth)?;
                let gl = g.local_series(p, depth)?;
                Ok(series_div(&fl, &gl))
            }
            QuotientInput::Source(s) => Ok(s.local_series(p, depth)?),
            QuotientInput::Stream(h) => {
                let mut out = vec![Complex64::new(1.0, 0.0)];
                let mut pm = Some(1usize);
                for _ in 0..depth {
                    pm = pm.and_then(|q| q.checked_mul(p as usize)).filter(|&q| q <= h.len());
                    out.push(pm.map_or(Complex64::new(0.0, 0.0), |q| h.get(q)));
                }
                Ok(out)
            }
        }
    }

    fn growth(&self) -> Option<LocalGrowth> {
        match self {
            QuotientInput::Ratio { f, g } => {
                Some(f.local_growth()?.product(&g.inverse_local_growth()?))
            }
            QuotientInput::Source(s) => s.local_growth(),
            QuotientInput::Stream(h) => Some(LocalGrowth {
                scale: h.values().iter().map(|v| v.norm()).fold(1.0, f64::max),
                degree: 0.0,
            }),
        }
    }

    fn leading(&self) -> Result<(), SplitError> {
        match self {
            QuotientInput::Ratio { f, g } => {
                check_leading(f.coeff(1)?)?;
                check_leading(g.coeff(1)?)
            }
            QuotientInput::Source(s) => check_leading(s.coeff(1)?),
            QuotientInput::Stream(h) => check_leading(h.get(1)),
        }
    }

    fn multiplicative(&self) -> bool {
        match self {
            QuotientInput::Ratio { f, g } => f.is_multiplicative() && g.is_multiplicative(),
            QuotientInput::Source(s) => s.is_multiplicative(),
            QuotientInput::Stream(h) => stream_is_multiplicative(h),
        }
    }
}

/// Checks `h(mn) = h(m)h(n)` on every coprime pair drawn from a fixed
/// deterministic sample.
fn stream_is_multiplicative(h: &DirichletSeries) -> bool {
    let n = h.len();
    let tol = |z: Complex64| 1e-9 * (1.0 + z.norm());
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = |bound: usize| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        1 + ((state >> 33) as usize % bound.max(1))
    };
    let root = (n as f64).sqrt() as usize;
    for _ in 0..500 {
        let a = next(root.max(1));
        let b = next((n / a).max(1));
        if a * b > n || crate::arith::gcd(a as u64, b as u64) != 1 {
            continue;
        }
        let lhs = h.get(a * b);
        let rhs = h.get(a) * h.get(b);
        if (lhs - rhs).norm() > tol(lhs) {
            return false;
        }
    }
    true
}

/// `num / den` as truncated power series; `den[0]` must be nonzero.
fn series_div(num: &[Complex64], den: &[Complex64]) -> Vec<Complex64> {
    let len = num.len();
    let inv0 = den[0].inv();
    let mut out = Vec::with_capacity(len);
    for m in 0..len {
        let mut acc = num[m];
        for j in 1..=m.min(den.len() - 1) {
            acc -= den[j] * out[m - j];
        }
        out.push(acc * inv0);
    }
    out
}

/// Whether `(m+1)^D A ≤ p^{m/10}` for every `m > depth`.
fn growth_rules_out(p: u64, depth: u32, growth: &LocalGrowth) -> bool {
    let lp = (p as f64).ln();
    let m = depth as f64 + 1.0;
    let at_next = growth.scale.ln() + growth.degree * (m + 1.0).ln() <= THEOREM3_EXPONENT * m * lp;
    // The gap `m lp/10 - D ln(m+1)` is increasing once lp/10 ≥ D/(m+1).
    let increasing = THEOREM3_EXPONENT * lp >= growth.degree / (m + 1.0);
    at_next && increasing
}

/// The quotient split `H = Q₁Q₂Q₃` up to `N`.
pub fn split_theorem3(
    input: &QuotientInput,
    n: usize,
    config: &Theorem3Config,
) -> Result<EulerSplit, SplitError> {
    if !input.multiplicative() {
        return Err(SplitError::NotMultiplicative);
    }
    input.leading()?;
    let bound = (n as u64).max(config.cutoff);
    let growth = input.growth();
    let mut primes = Vec::new();
    let mut uncertified = Vec::new();
    let mut locals = std::collections::HashMap::new();
    let mut k_per_prime = Vec::new();
    for p in primes_up_to(bound as usize) {
        let p = p as u64;
        if p <= config.cutoff {
            primes.push(p);
            if p as usize <= n {
                locals.insert(p as usize, input.local(p, config.depth)?);
            }
            continue;
        }
        let local = input.local(p, config.depth.max(K_BOUND_DEPTH))?;
        let pf = p as f64;
        let large = (1..=config.depth as usize)
            .any(|m| local[m].norm() > pf.powf(m as f64 * THEOREM3_EXPONENT));
        let certified = growth.is_some_and(|g| growth_rules_out(p, config.depth, &g));
        if large || !certified {
            if !large {
                uncertified.push(p);
            }
            primes.push(p);
        } else {
            let quad = [Complex64::new(1.0, 0.0), local[1], local[2]];
            let k = series_div(&local, &quad);
            let sum: f64 = k
                .iter()
                .enumerate()
                .skip(3)
                .map(|(m, v)| v.norm() * pf.powf(-(m as f64) / 2.0))
                .sum();
            k_per_prime.push((p, sum));
        }
        if p as usize <= n {
            locals.insert(p as usize, local);
        }
    }
    let exceptional = ExceptionalPrimeSet {
        primes,
        rule: ExceptionalRule::Theorem3(*config),
        completeness_bound: bound,
        uncertified,
    };
    let sieve = SpfSieve::new(n);
    let zero = Complex64::new(0.0, 0.0);
    let in_s = |p: usize| exceptional.contains(p as u64);
    let part1 = DirichletSeries::multiplicative(n, &sieve, |p, e| {
        if in_s(p) || e > 2 {
            zero
        } else {
            locals[&p][e as usize]
        }
    });
    let part2 = DirichletSeries::multiplicative(n, &sieve, |p, e| {
        if in_s(p) {
            locals[&p][e as usize]
        } else {
            zero
        }
    });
    let part3 = DirichletSeries::multiplicative(n, &sieve, |p, e| {
        if in_s(p) {
            return zero;
        }
        let local = &locals[&p];
        let quad = [Complex64::new(1.0, 0.0), local[1], local[2]];
        series_div(&local[..=e as usize], &quad)[e as usize]
    });
    let (worst_prime, worst) = k_per_prime
        .iter()
        .fold((None, 0.0), |(wp, w), &(p, v)| if v > w { (Some(p), v) } else { (wp, w) });
    Ok(EulerSplit {
        part1,
        part2,
        part3,
        variant: SplitVariant::Theorem3,
        exceptional,
        k_bound: Some(KBoundReport {
            per_prime: k_per_prime,
            worst,
            worst_prime,
            limit: 1.0 / 3.0,
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaTheta {
    pub theta: Complex64,
    pub value: f64,
}

impl LemmaTheta {
    /// `1 + (|a|+|b|)/24`.
    pub fn target(a: Complex64, b: Complex64) -> f64 {
        1.0 + (a.norm() + b.norm()) / 24.0
    }

    /// `10(|a| + 4|b|)/grid`, the Lipschitz slack of a `grid`-point scan.
    pub fn tolerance(a: Complex64, b: Complex64, grid: usize) -> f64 {
        10.0 * (a.norm() + 4.0 * b.norm()) / grid as f64
    }
}

/// Maximizes `|1 + θa + θ²b|` over `|θ| = 1`: a uniform grid, then a
/// golden-section search on the two neighbouring cells of the best node.
pub fn lemma_theta(a: Complex64, b: Complex64, grid: usize) -> LemmaTheta {
    let grid = grid.max(1);
    let f = |phi: f64| {
        let th = Complex64::from_polar(1.0, phi);
        (1.0 + th * a + th * th * b).norm()
    };
    let step = 2.0 * PI / grid as f64;
    let (mut best_phi, mut best) = (0.0, f(0.0));
    for j in 1..grid {
        let phi = j as f64 * step;
        let v = f(phi);
        if v > best {
            best = v;
            best_phi = phi;
        }
    }
    let (mut lo, mut hi) = (best_phi - step, best_phi + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    for (phi, v) in [(x1, f1), (x2, f2)] {
        if v > best {
            best = v;
            best_phi = phi;
        }
    }
    LemmaTheta {
        theta: Complex64::from_polar(1.0, best_phi.rem_euclid(2.0 * PI)),
        value: best,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaScanReport {
    pub trials: usize,
    pub grid: usize,
    /// Smallest `value - (1 + (|a|+|b|)/24)` over the sample.
    pub min_slack: f64,
    /// Samples with `value < 1 + (|a|+|b|)/24`.
    pub failures: usize,
    /// Extremes of `(value - 1)·24/(|a|+|b|)` over samples with `a,b` not both 0.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl LemmaScanReport {
    pub fn passes(&self) -> bool {
        self.failures == 0
    }

    /// Some sample has ratio below 24, so the constant cannot be 1.
    pub fn constant_not_improvable_to_one(&self) -> bool {
        self.min_ratio < 24.0
    }
}

pub fn lemma_scan(samples: &[(Complex64, Complex64)], grid: usize) -> LemmaScanReport {
    let mut report = LemmaScanReport {
        trials: samples.len(),
        grid,
        min_slack: f64::INFINITY,
        failures: 0,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
    };
    for &(a, b) in samples {
        let r = lemma_theta(a, b, grid);
        let slack = r.value - LemmaTheta::target(a, b);
        report.min_slack = report.min_slack.min(slack);
        if slack < 0.0 {
            report.failures += 1;
        }
        let size = a.norm() + b.norm();
        if size > 0.0 {
            let ratio = (r.value - 1.0) * 24.0 / size;
            report.min_ratio = report.min_ratio.min(ratio);
            report.max_ratio = report.max_ratio.max(ratio);
        }
    }
    report
}
