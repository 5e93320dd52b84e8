//! Grid checks: majorants, almost periods, Phragmén–Lindelöf convexity of
//! translation differences, and domination witnesses.

use num_complex::Complex64;

use super::zeros::{locate_zeros, LocatedZero, Rectangle};
use super::{AnalyticError, Evaluable};

/// A point where an inequality fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub s: Complex64,
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// Linear interpolation through `(σ, c)` nodes, constant beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    nodes: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(mut nodes: Vec<(f64, f64)>) -> Result<Self, AnalyticError> {
        if nodes.is_empty() {
            return Err(AnalyticError::InvalidArgument("empty c table".into()));
        }
        if nodes.iter().any(|&(x, y)| !x.is_finite() || !(y > 0.0)) {
            return Err(AnalyticError::InvalidArgument(
                "c table entries must be finite and positive".into(),
            ));
        }
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { nodes })
    }

    pub fn constant(c: f64) -> Result<Self, AnalyticError> {
        Self::new(vec![(0.0, c)])
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = &self.nodes;
        if x <= n[0].0 {
            return n[0].1;
        }
        if x >= n[n.len() - 1].0 {
            return n[n.len() - 1].1;
        }
        let i = n.partition_point(|p| p.0 <= x);
        let (x0, y0) = n[i - 1];
        let (x1, y1) = n[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorantGrid {
    pub sigma_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    /// Add probes at the heights of zeros of `f` near the strip.
    pub refine_zeros: bool,
}

impl Default for MajorantGrid {
    fn default() -> Self {
        Self {
            sigma_steps: 8,
            t_min: 0.0,
            t_max: 30.0,
            t_steps: 300,
            refine_zeros: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorantReport {
    pub points: usize,
    /// First failing point in scan order: zero probes, then the grid.
    pub witness: Option<Witness>,
    /// Point of largest `|F| / (c|f|)`.
    pub worst: Witness,
    pub zeros_of_f: Vec<LocatedZero>,
}

impl MajorantReport {
    pub fn passes(&self) -> bool {
        self.witness.is_none()
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 0 || lo == hi {
        return vec![lo];
    }
    (0..=steps)
        .map(|i| {
            if i == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / steps as f64
            }
        })
        .collect()
}

/// Band below the strip searched for zeros of the minorized function.
const ZERO_BAND: f64 = 0.25;
/// Offsets in `t` probed around each located zero.
const ZERO_OFFSETS: [f64; 3] = [0.0, -1e-4, 1e-4];

fn zero_probes(zeros: &[LocatedZero], sigma_min: f64, sigma_max: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for z in zeros {
        let sigma = z.s.re.clamp(sigma_min, sigma_max);
        for dt in ZERO_OFFSETS {
            out.push(Complex64::new(sigma, z.s.im + dt));
        }
    }
    out
}

/// Checks `|F(s)| ≤ c(σ)|f(s)|` at the heights of zeros of `f` and on a
/// closed grid over the strip.
pub fn majorant_check(
    big: &dyn Evaluable,
    small: &dyn Evaluable,
    strip: (f64, f64),
    c: &dyn Fn(f64) -> f64,
    grid: &MajorantGrid,
) -> Result<MajorantReport, AnalyticError> {
    let (lo, hi) = strip;
    if !(lo <= hi) || !(grid.t_min <= grid.t_max) {
        return Err(AnalyticError::InvalidArgument(format!(
            "invalid strip ({lo}, {hi}) or height range"
        )));
    }
    let zeros = if grid.refine_zeros && grid.t_min < grid.t_max {
        let region = Rectangle::new(lo - ZERO_BAND, hi, grid.t_min, grid.t_max)?;
        locate_zeros(small, region, None)?
    } else {
        Vec::new()
    };
    let mut points = zero_probes(&zeros, lo, hi);
    for &sigma in &linspace(lo, hi, grid.sigma_steps) {
        for &t in &linspace(grid.t_min, grid.t_max, grid.t_steps) {
            points.push(Complex64::new(sigma, t));
        }
    }

    let mut witness = None;
    let mut worst: Option<Witness> = None;
    for &s in &points {
        let cs = c(s.re);
        if !(cs > 0.0) {
            return Err(AnalyticError::InvalidArgument(format!(
                "c({}) = {cs} is not positive",
                s.re
            )));
        }
        let w = Witness {
            s,
            lhs: big.eval(s)?.norm(),
            rhs: cs * small.eval(s)?.norm(),
        };
        if w.lhs > w.rhs && witness.is_none() {
            witness = Some(w);
        }
        if worst.map_or(true, |b| w.lhs * b.rhs > b.lhs * w.rhs) {
            worst = Some(w);
        }
    }
    Ok(MajorantReport {
        points: points.len(),
        witness,
        worst: worst.expect("grid is never empty"),
        zeros_of_f: zeros,
    })
}

/// `max_t |f(A + i(t+τ)) − f(A + it)|` over the samples.
pub fn almost_period_defect(
    f: &dyn Evaluable,
    a: f64,
    tau: f64,
    t_samples: &[f64],
) -> Result<f64, AnalyticError> {
    let mut sup: f64 = 0.0;
    for &t in t_samples {
        let base = f.eval(Complex64::new(a, t))?;
        let shifted = f.eval(Complex64::new(a, t + tau))?;
        sup = sup.max((shifted - base).norm());
    }
    Ok(sup)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostPeriodResult {
    pub tau: f64,
    pub sup: f64,
    pub found: bool,
    pub evaluations: usize,
}

/// Default grid spacing for the τ scan.
pub const ALMOST_PERIOD_STEP: f64 = 0.005;
/// Coarse local minima below this multiple of `eps`, plus the slope
/// allowance, are polished.
const CANDIDATE_FACTOR: f64 = 2.0;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Smallest scanned `τ` in `range` whose sampled translation defect is below
/// `eps`, or the best `τ` seen if none qualifies.
pub fn almost_period_find(
    f: &dyn Evaluable,
    a: f64,
    eps: f64,
    range: (f64, f64),
    t_samples: &[f64],
    step: Option<f64>,
) -> Result<AlmostPeriodResult, AnalyticError> {
    if !(eps > 0.0) {
        return Err(AnalyticError::InvalidArgument(format!(
            "eps = {eps} must be positive"
        )));
    }
    let step = step.unwrap_or(ALMOST_PERIOD_STEP);
    let (lo, hi) = range;
    if !(step > 0.0) || !(lo < hi) || t_samples.is_empty() {
        return Err(AnalyticError::InvalidArgument(
            "almost-period search needs a positive step, a nonempty range and samples".into(),
        ));
    }
    let mut evaluations = 0usize;
    let base: Vec<Complex64> = t_samples
        .iter()
        .map(|&t| f.eval(Complex64::new(a, t)))
        .collect::<Result<_, _>>()?;
    evaluations += base.len();

    let sup_at = |tau: f64, cap: f64, evaluations: &mut usize| -> Result<f64, AnalyticError> {
        let mut sup: f64 = 0.0;
        for (&t, &b) in t_samples.iter().zip(&base) {
            *evaluations += 1;
            sup = sup.max((f.eval(Complex64::new(a, t + tau))? - b).norm());
            if sup > cap {
                break;
            }
        }
        Ok(sup)
    };

    // Slope of the defect in τ is at most twice the sampled |f'|.
    let h = 1e-4;
    let mut slope: f64 = 0.0;
    for &t in t_samples {
        let d = f.eval(Complex64::new(a, t + h))? - f.eval(Complex64::new(a, t - h))?;
        slope = slope.max(d.norm() / (2.0 * h));
    }
    evaluations += 2 * t_samples.len();
    let cap = CANDIDATE_FACTOR * eps + 2.0 * slope * step;

    let polish = |tau: f64, evaluations: &mut usize| -> Result<(f64, f64), AnalyticError> {
        let (mut x0, mut x1) = ((tau - step).max(lo), (tau + step).min(hi));
        let mut xa = x1 - GOLDEN * (x1 - x0);
        let mut xb = x0 + GOLDEN * (x1 - x0);
        let mut fa = sup_at(xa, f64::INFINITY, evaluations)?;
        let mut fb = sup_at(xb, f64::INFINITY, evaluations)?;
        while x1 - x0 > 1e-10 * (1.0 + tau) {
            if fa < fb {
                x1 = xb;
                xb = xa;
                fb = fa;
                xa = x1 - GOLDEN * (x1 - x0);
                fa = sup_at(xa, f64::INFINITY, evaluations)?;
            } else {
                x0 = xa;
                xa = xb;
                fa = fb;
                xb = x0 + GOLDEN * (x1 - x0);
                fb = sup_at(xb, f64::INFINITY, evaluations)?;
            }
        }
        Ok(if fa < fb { (xa, fa) } else { (xb, fb) })
    };

    let taus: Vec<f64> = (0..=((hi - lo) / step).floor() as usize)
        .map(|i| lo + i as f64 * step)
        .filter(|&t| t > 0.0)
        .collect();
    let mut best = AlmostPeriodResult {
        tau: taus.first().copied().unwrap_or(hi),
        sup: f64::INFINITY,
        found: false,
        evaluations: 0,
    };
    // Coarse values above the cap are only known to exceed it.
    let coarse = |i: usize, evaluations: &mut usize| -> Result<f64, AnalyticError> {
        match taus.get(i) {
            Some(&t) => {
                let v = sup_at(t, cap, evaluations)?;
                Ok(if v > cap { f64::INFINITY } else { v })
            }
            None => Ok(f64::INFINITY),
        }
    };
    let mut prev = f64::INFINITY;
    let mut cur = coarse(0, &mut evaluations)?;
    for i in 0..taus.len() {
        let next = coarse(i + 1, &mut evaluations)?;
        let tau = taus[i];
        if cur < best.sup {
            best.tau = tau;
            best.sup = cur;
        }
        if cur < eps {
            return Ok(AlmostPeriodResult {
                tau,
                sup: cur,
                found: true,
                evaluations,
            });
        }
        if cur.is_finite() && cur <= prev && cur <= next {
            let (t, v) = polish(tau, &mut evaluations)?;
            if v < best.sup {
                best.tau = t;
                best.sup = v;
            }
            if v < eps {
                return Ok(AlmostPeriodResult {
                    tau: t,
                    sup: v,
                    found: true,
                    evaluations,
                });
            }
        }
        prev = cur;
        cur = next;
    }
    best.evaluations = evaluations;
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlReport {
    pub eta: f64,
    pub sigma: f64,
    pub a: f64,
    pub d_eta: f64,
    pub d_sigma: f64,
    pub d_a: f64,
    /// `D(η)^{(A−σ)/(A−η)} · D(A)^{(σ−η)/(A−η)}`.
    pub bound: f64,
    pub defect: f64,
    pub slack: f64,
}

impl PlReport {
    pub fn passes(&self) -> bool {
        self.defect <= self.slack
    }
}

/// Allowance for sampled sups in place of true suprema.
pub const PL_SLACK: f64 = 0.05;

/// Convexity of `D(x) = sup_t |h(x + i(t+τ)) − h(x + it)|` between the lines
/// `η < σ < A`.
pub fn pl_propagation_check(
    h: &dyn Evaluable,
    tau: f64,
    a: f64,
    eta: f64,
    sigma: f64,
    t_samples: &[f64],
) -> Result<PlReport, AnalyticError> {
    if !(eta < sigma && sigma < a) {
        return Err(AnalyticError::InvalidArgument(format!(
            "need η < σ < A, got {eta}, {sigma}, {a}"
        )));
    }
    if t_samples.is_empty() {
        return Err(AnalyticError::InvalidArgument("no t samples".into()));
    }
    let d_eta = almost_period_defect(h, eta, tau, t_samples)?;
    let d_sigma = almost_period_defect(h, sigma, tau, t_samples)?;
    let d_a = almost_period_defect(h, a, tau, t_samples)?;
    let we = (a - sigma) / (a - eta);
    let wa = (sigma - eta) / (a - eta);
    let bound = d_eta.powf(we) * d_a.powf(wa);
    let mut defect = d_sigma - bound;
    // Equality cases (|h| constant on vertical lines) land here up to rounding.
    if defect.abs() <= 16.0 * f64::EPSILON * d_sigma.max(bound) {
        defect = 0.0;
    }
    Ok(PlReport {
        eta,
        sigma,
        a,
        d_eta,
        d_sigma,
        d_a,
        bound,
        defect,
        slack: PL_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationGrid {
    pub sigma_max: f64,
    pub sigma_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
}

impl Default for DominationGrid {
    fn default() -> Self {
        Self {
            sigma_max: 1.2,
            sigma_steps: 6,
            t_min: 1.0,
            t_max: 30.0,
            t_steps: 290,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationRow {
    pub m: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub sigma_floor: f64,
    pub rows: Vec<DominationRow>,
    pub zeros_of_g: Vec<LocatedZero>,
    /// Point of largest `|F| / |G|`, with `rhs = |G|`.
    pub worst: Witness,
    pub points: usize,
}

impl DominationReport {
    pub fn has_witness(&self) -> bool {
        self.rows.iter().any(|r| r.witness.is_some())
    }
}

/// Region below which zeros of `G` are sought.
const DOMINATION_ZERO_SIGMA: (f64, f64) = (0.3, 1.2);

/// Searches for `s` with `σ ≥ σ_floor` and `|F(s)| > M|G(s)|`, for each `M`.
/// Points near zeros of `G` are scanned first, in order of height, then the
/// grid; the first failing point is the witness.
pub fn domination_witness(
    big: &dyn Evaluable,
    small: &dyn Evaluable,
    sigma_floor: f64,
    m_list: &[f64],
    grid: &DominationGrid,
) -> Result<DominationReport, AnalyticError> {
    if !(sigma_floor > 0.5) {
        return Err(AnalyticError::InvalidArgument(format!(
            "σ floor {sigma_floor} must exceed 1/2"
        )));
    }
    if !(grid.sigma_max >= sigma_floor) || !(grid.t_min < grid.t_max) {
        return Err(AnalyticError::InvalidArgument("empty domination grid".into()));
    }
    let region = Rectangle::new(
        DOMINATION_ZERO_SIGMA.0,
        DOMINATION_ZERO_SIGMA.1.max(grid.sigma_max),
        grid.t_min,
        grid.t_max,
    )?;
    let zeros = locate_zeros(small, region, None)?;
    let mut points = zero_probes(&zeros, sigma_floor, grid.sigma_max);
    for &sigma in &linspace(sigma_floor, grid.sigma_max, grid.sigma_steps) {
        for &t in &linspace(grid.t_min, grid.t_max, grid.t_steps) {
            points.push(Complex64::new(sigma, t));
        }
    }
    let mut ratios = Vec::with_capacity(points.len());
    for &s in &points {
        ratios.push(Witness {
            s,
            lhs: big.eval(s)?.norm(),
            rhs: small.eval(s)?.norm(),
        });
    }
    let worst = *ratios
        .iter()
        .reduce(|b, w| if w.lhs * b.rhs > b.lhs * w.rhs { w } else { b })
        .expect("grid is never empty");
    let rows = m_list
        .iter()
        .map(|&m| DominationRow {
            m,
            witness: ratios.iter().find(|w| w.lhs > m * w.rhs).map(|w| Witness {
                s: w.s,
                lhs: w.lhs,
                rhs: m * w.rhs,
            }),
        })
        .collect();
    Ok(DominationReport {
        sigma_floor,
        rows,
        zeros_of_g: zeros,
        worst,
        points: points.len(),
    })
}
