//! Abscissa estimators, smoothed partial sums, and the closed-form abscissa
//! bounds for entire functions and lifts.
//!
//! `σ_a` is read off `log Σ_{n≤N}|a(n)| / log N` and `σ_c` off the same
//! quotient for the running maximum of `|Σ_{n≤M} a(n)|, M ≤ N`. Quotients at
//! `N/4, N/2, N` are fitted to `q = a + b/log N` and `a` is reported.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::coefficients::{CoefficientError, CoefficientSource};
use crate::series::DirichletSeries;

pub const MIN_NMAX: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AbscissaError {
    #[error("Nmax must be at least {MIN_NMAX}, got {0}")]
    NmaxTooSmall(usize),
    #[error("partial sums vanish identically")]
    AllZero,
    #[error("sample set is empty")]
    EmptySamples,
    #[error("Y must be at least 1, got {0}")]
    InvalidY(f64),
    #[error("smoothed sum needs {needed} coefficients, stream has {len}")]
    StreamTooShort { needed: usize, len: usize },
    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(f64),
    #[error("lift order must be at least 1")]
    InvalidLiftOrder,
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    Convergence,
    Absolute,
}

impl Abscissa {
    pub fn name(self) -> &'static str {
        match self {
            Abscissa::Convergence => "convergence",
            Abscissa::Absolute => "absolute",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbscissaEstimate {
    pub which: Abscissa,
    /// Extrapolated abscissa; `-∞` for Dirichlet polynomials.
    pub value: f64,
    pub n_used: usize,
    /// Change of the quotient per octave over the last two octaves.
    pub tail_slope_diagnostic: f64,
    /// `(N, quotient)` at octaves below `Nmax`, ascending.
    pub quotients: Vec<(usize, f64)>,
    /// The series is a Dirichlet polynomial inside the scanned range.
    pub degenerate: bool,
    /// The fit fell below 0 and was floored ("≤ 0 within resolution").
    pub floored: bool,
}

impl AbscissaEstimate {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,quotient\n");
        for (n, q) in &self.quotients {
            out.push_str(&format!("{n},{q}\n"));
        }
        out
    }
}

impl fmt::Display for AbscissaEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "which: {}", self.which.name())?;
        writeln!(f, "value: {}", self.value)?;
        writeln!(f, "N_used: {}", self.n_used)?;
        writeln!(f, "tail_slope_diagnostic: {}", self.tail_slope_diagnostic)?;
        writeln!(f, "degenerate: {}", self.degenerate)?;
        write!(f, "floored: {}", self.floored)
    }
}

fn is_polynomial_below(source: &CoefficientSource, nmax: usize) -> bool {
    match source {
        CoefficientSource::Explicit { values, .. } => values.len() < nmax,
        CoefficientSource::Lift { base, k } => {
            is_polynomial_below(base, (nmax as f64).powf(1.0 / *k as f64).floor() as usize + 1)
        }
        _ => false,
    }
}

/// `q = a + b/log N` through the three points, by least squares.
fn extrapolate(points: &[(usize, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(m, _)| 1.0 / (m as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return my;
    }
    my - sxy / sxx * mx
}

fn estimate(
    source: &CoefficientSource,
    nmax: usize,
    which: Abscissa,
) -> Result<AbscissaEstimate, AbscissaError> {
    if nmax < MIN_NMAX {
        return Err(AbscissaError::NmaxTooSmall(nmax));
    }
    let coeffs = source.coefficients(nmax)?;
    // growth[N] = Σ_{n≤N} |a(n)| or max_{M≤N} |Σ_{n≤M} a(n)|.
    let mut growth = vec![0.0; nmax + 1];
    let mut running = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut peak: f64 = 0.0;
    for n in 1..=nmax {
        let a = coeffs.get(n);
        match which {
            Abscissa::Absolute => {
                abs_sum += a.norm();
                growth[n] = abs_sum;
            }
            Abscissa::Convergence => {
                running += a;
                peak = peak.max(running.norm());
                growth[n] = peak;
            }
        }
    }
    if growth[nmax] == 0.0 {
        return Err(AbscissaError::AllZero);
    }
    let quotient = |n: usize| {
        let g = growth[n];
        if g > 0.0 {
            g.ln() / (n as f64).ln()
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut quotients = Vec::new();
    let mut n = nmax;
    while n >= 16 {
        quotients.push((n, quotient(n)));
        n /= 2;
    }
    quotients.reverse();
    let fit_points: Vec<(usize, f64)> = [nmax / 4, nmax / 2, nmax]
        .iter()
        .map(|&n| (n, quotient(n)))
        .collect();
    let tail_slope_diagnostic = (fit_points[2].1 - fit_points[0].1) / 2.0;
    let degenerate = is_polynomial_below(source, nmax);
    let mut value = if degenerate {
        f64::NEG_INFINITY
    } else {
        extrapolate(&fit_points)
    };
    let mut floored = false;
    if !degenerate && which == Abscissa::Convergence && value < 0.0 {
        value = 0.0;
        floored = true;
    }
    Ok(AbscissaEstimate {
        which,
        value,
        n_used: nmax,
        tail_slope_diagnostic,
        quotients,
        degenerate,
        floored,
    })
}

pub fn estimate_sigma_a(
    source: &CoefficientSource,
    nmax: usize,
) -> Result<AbscissaEstimate, AbscissaError> {
    estimate(source, nmax, Abscissa::Absolute)
}

pub fn estimate_sigma_c(
    source: &CoefficientSource,
    nmax: usize,
) -> Result<AbscissaEstimate, AbscissaError> {
    estimate(source, nmax, Abscissa::Convergence)
}

/// `⌈3Y log Y⌉`, with `log Y` replaced by 1 when `Y < e`.
pub fn smoothed_cutoff(y: f64) -> usize {
    let l = if y < std::f64::consts::E { 1.0 } else { y.ln() };
    (3.0 * y * l).ceil() as usize
}

/// `Σ_{n ≤ 3Y log Y} c(n) n^{-σ-it} e^{-n/Y}`.
pub fn smoothed_sum(
    c: &DirichletSeries,
    sigma: f64,
    t: f64,
    y: f64,
) -> Result<Complex64, AbscissaError> {
    smoothed_sum_to(c, sigma, t, y, smoothed_cutoff(y))
}

/// The smoothed sum truncated at an explicit `cutoff`.
pub fn smoothed_sum_to(
    c: &DirichletSeries,
    sigma: f64,
    t: f64,
    y: f64,
    cutoff: usize,
) -> Result<Complex64, AbscissaError> {
    if !(y >= 1.0) {
        return Err(AbscissaError::InvalidY(y));
    }
    if cutoff > c.len() {
        return Err(AbscissaError::StreamTooShort {
            needed: cutoff,
            len: c.len(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=cutoff {
        let a = c.get(n);
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let ln = (n as f64).ln();
        let w = (-sigma * ln - n as f64 / y).exp();
        acc += a * Complex64::from_polar(w, -t * ln);
    }
    Ok(acc)
}

/// `Σ_{n ≤ cutoff} |c(n)| n^{-σ} e^{-n/Y}`, the aligned value of the sum.
pub fn smoothed_abs_sum(c: &DirichletSeries, sigma: f64, y: f64, cutoff: usize) -> f64 {
    (1..=cutoff.min(c.len()))
        .map(|n| c.get(n).norm() * (n as f64).powf(-sigma) * (-(n as f64) / y).exp())
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport {
    pub sup: f64,
    /// `(t, Y)` at the supremum.
    pub arg_sup: (f64, f64),
    /// Supremum over `t` for each `Y`, in the order given.
    pub per_y: Vec<(f64, f64)>,
    /// The per-`Y` suprema never increase along `Y_list`.
    pub non_increasing: bool,
}

pub fn boundedness_probe(
    c: &DirichletSeries,
    sigma: f64,
    t_samples: &[f64],
    y_list: &[f64],
) -> Result<BoundednessReport, AbscissaError> {
    if t_samples.is_empty() || y_list.is_empty() {
        return Err(AbscissaError::EmptySamples);
    }
    let mut per_y = Vec::with_capacity(y_list.len());
    let mut sup = f64::NEG_INFINITY;
    let mut arg_sup = (t_samples[0], y_list[0]);
    for &y in y_list {
        let mut best = f64::NEG_INFINITY;
        for &t in t_samples {
            let v = smoothed_sum(c, sigma, t, y)?.norm();
            if v > best {
                best = v;
            }
            if v > sup {
                sup = v;
                arg_sup = (t, y);
            }
        }
        per_y.push((y, best));
    }
    let non_increasing = per_y.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(BoundednessReport {
        sup,
        arg_sup,
        per_y,
        non_increasing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn widen(&self, by: f64) -> Interval {
        Interval {
            lo: self.lo - by,
            hi: self.hi + by,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `σ_c` of an entire function of degree `d ≥ 1` lies in
/// `[1/2 - 1/(2d), 1 - 2/(d+1)]`.
pub fn bound_oracle_entire(d: f64) -> Result<Interval, AbscissaError> {
    if !(d >= 1.0) {
        return Err(AbscissaError::InvalidDegree(d));
    }
    Ok(Interval {
        lo: 0.5 - 0.5 / d,
        hi: 1.0 - 2.0 / (d + 1.0),
    })
}

/// `σ_a` of a `k`-lift of a degree-`d` function lies in
/// `[1/2 + 1/(2kd), 1/2 + 1/(2k)]`.
pub fn bound_oracle_lift(d: f64, k: u32) -> Result<Interval, AbscissaError> {
    if !(d >= 1.0) {
        return Err(AbscissaError::InvalidDegree(d));
    }
    if k == 0 {
        return Err(AbscissaError::InvalidLiftOrder);
    }
    let k = k as f64;
    Ok(Interval {
        lo: 0.5 + 0.5 / (k * d),
        hi: 0.5 + 0.5 / k,
    })
}
