//! Argument-principle zero counting on rectangles, zero localization by
//! bisection, and comparison of zero sets.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::{AnalyticError, Evaluable};

/// Zeros closer than this to the contour trigger a nudge.
pub const CONTOUR_CLEARANCE: f64 = 1e-4;
/// Size of a single contour nudge.
pub const NUDGE: f64 = 1e-3;
pub const MAX_NUDGES: u32 = 4;
/// Largest accepted argument change per edge segment.
const MAX_STEP_ARG: f64 = PI / 4.0;
const INITIAL_STEP: f64 = 0.5;
const MAX_DEPTH: u32 = 40;
const WINDING_TOLERANCE: f64 = 0.05;
/// Zeros of two functions closer than this are paired.
pub const MATCH_TOLERANCE: f64 = 1e-4;
const SPLIT_FRACTION: f64 = 0.4871;
const NEWTON_STEP: f64 = 1e-6;

/// `[σ_0, σ_1] × [T_0, T_1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub sigma0: f64,
    pub sigma1: f64,
    pub t0: f64,
    pub t1: f64,
}

impl Rectangle {
    pub fn new(sigma0: f64, sigma1: f64, t0: f64, t1: f64) -> Result<Self, AnalyticError> {
        let r = Self {
            sigma0,
            sigma1,
            t0,
            t1,
        };
        if [sigma0, sigma1, t0, t1].iter().any(|x| !x.is_finite())
            || sigma0 > sigma1
            || t0 > t1
        {
            return Err(AnalyticError::InvalidArgument(format!(
                "invalid rectangle {r}"
            )));
        }
        Ok(r)
    }

    pub fn is_empty(&self) -> bool {
        self.sigma0 == self.sigma1 || self.t0 == self.t1
    }

    pub fn width(&self) -> f64 {
        self.sigma1 - self.sigma0
    }

    pub fn height(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.sigma0 + self.sigma1),
            0.5 * (self.t0 + self.t1),
        )
    }

    /// Strict interior.
    pub fn contains(&self, s: Complex64) -> bool {
        s.re > self.sigma0 && s.re < self.sigma1 && s.im > self.t0 && s.im < self.t1
    }

    /// Splits the longer side at `fraction`.
    pub fn split(&self, fraction: f64) -> (Rectangle, Rectangle) {
        let mut a = *self;
        let mut b = *self;
        if self.width() >= self.height() {
            let m = self.sigma0 + fraction * self.width();
            a.sigma1 = m;
            b.sigma0 = m;
        } else {
            let m = self.t0 + fraction * self.height();
            a.t1 = m;
            b.t0 = m;
        }
        (a, b)
    }

    /// Splits at height `t` into lower and upper parts.
    pub fn split_at_height(&self, t: f64) -> Result<(Rectangle, Rectangle), AnalyticError> {
        if !(t > self.t0 && t < self.t1) {
            return Err(AnalyticError::InvalidArgument(format!(
                "split height {t} outside ({}, {})",
                self.t0, self.t1
            )));
        }
        let mut a = *self;
        let mut b = *self;
        a.t1 = t;
        b.t0 = t;
        Ok((a, b))
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma0, self.t0),
            Complex64::new(self.sigma1, self.t0),
            Complex64::new(self.sigma1, self.t1),
            Complex64::new(self.sigma0, self.t1),
        ]
    }

    fn edge_distance(&self, edge: usize, s: Complex64) -> f64 {
        let (a, b) = (self.corners()[edge], self.corners()[(edge + 1) % 4]);
        let lo_re = a.re.min(b.re);
        let hi_re = a.re.max(b.re);
        let lo_im = a.im.min(b.im);
        let hi_im = a.im.max(b.im);
        let dx = (lo_re - s.re).max(0.0).max(s.re - hi_re);
        let dy = (lo_im - s.im).max(0.0).max(s.im - hi_im);
        dx.hypot(dy)
    }

    /// Moves `edge` (0 bottom, 1 right, 2 top, 3 left) outward by `delta`.
    fn moved(&self, edge: usize, delta: f64) -> Rectangle {
        let mut r = *self;
        match edge {
            0 => r.t0 -= delta,
            1 => r.sigma1 += delta,
            2 => r.t1 += delta,
            _ => r.sigma0 -= delta,
        }
        r
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.sigma0, self.sigma1, self.t0, self.t1
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCountResult {
    /// The requested rectangle.
    pub rectangle: Rectangle,
    /// The contour actually traced, after nudging.
    pub contour: Rectangle,
    pub count: u32,
    pub pole_correction: u32,
    pub min_edge_modulus: f64,
    /// Raw winding number before rounding.
    pub winding: f64,
    pub nudges: u32,
    pub evaluations: usize,
}

enum Trace {
    Done { arg: f64, min_modulus: f64 },
    NearZero { edge: usize, at: Complex64 },
}

struct Tracer<'a> {
    f: &'a dyn Evaluable,
    evaluations: usize,
}

impl Tracer<'_> {
    fn eval(&mut self, s: Complex64) -> Result<Complex64, AnalyticError> {
        self.evaluations += 1;
        self.f.eval(s)
    }

    fn near_zero(za: Complex64, fa: Complex64, zb: Complex64, fb: Complex64) -> bool {
        let m = fa.norm().min(fb.norm());
        if m == 0.0 {
            return true;
        }
        let df = (fb - fa).norm();
        df > 0.0 && m * (zb - za).norm() / df < CONTOUR_CLEARANCE
    }

    fn trace(&mut self, rect: &Rectangle) -> Result<Trace, AnalyticError> {
        let corners = rect.corners();
        let mut values = Vec::with_capacity(4);
        for &z in &corners {
            values.push(self.eval(z)?);
        }
        let mut total = 0.0;
        let mut min_modulus = f64::INFINITY;
        for edge in 0..4 {
            let (a, b) = (corners[edge], corners[(edge + 1) % 4]);
            let (fa, fb) = (values[edge], values[(edge + 1) % 4]);
            let n = ((b - a).norm() / INITIAL_STEP).ceil().max(1.0) as usize;
            let mut za = a;
            let mut va = fa;
            for k in 1..=n {
                let zb = if k == n {
                    b
                } else {
                    a + (b - a) * (k as f64 / n as f64)
                };
                let vb = if k == n { fb } else { self.eval(zb)? };
                match self.segment(za, va, zb, vb, 0)? {
                    Some((arg, m)) => {
                        total += arg;
                        min_modulus = min_modulus.min(m);
                    }
                    None => {
                        let at = if va.norm() < vb.norm() { za } else { zb };
                        return Ok(Trace::NearZero { edge, at });
                    }
                }
                za = zb;
                va = vb;
            }
        }
        Ok(Trace::Done {
            arg: total,
            min_modulus,
        })
    }

    /// Argument change along `[za, zb]`, or `None` if a zero is too close.
    fn segment(
        &mut self,
        za: Complex64,
        fa: Complex64,
        zb: Complex64,
        fb: Complex64,
        depth: u32,
    ) -> Result<Option<(f64, f64)>, AnalyticError> {
        if Self::near_zero(za, fa, zb, fb) || depth > MAX_DEPTH {
            return Ok(None);
        }
        let zm = 0.5 * (za + zb);
        let fm = self.eval(zm)?;
        let d1 = (fm / fa).arg();
        let d2 = (fb / fm).arg();
        let d = (fb / fa).arg();
        if d1.abs() <= MAX_STEP_ARG && d2.abs() <= MAX_STEP_ARG && (d1 + d2 - d).abs() < 1e-9 {
            if fm.norm() == 0.0 {
                return Ok(None);
            }
            let m = fa.norm().min(fb.norm()).min(fm.norm());
            return Ok(Some((d, m)));
        }
        let left = self.segment(za, fa, zm, fm, depth + 1)?;
        let Some((a1, m1)) = left else {
            return Ok(None);
        };
        let right = self.segment(zm, fm, zb, fb, depth + 1)?;
        let Some((a2, m2)) = right else {
            return Ok(None);
        };
        Ok(Some((a1 + a2, m1.min(m2))))
    }
}

/// Outward offsets tried, in order, for an edge that passes too close to a
/// zero or pole.
const NUDGE_SEQUENCE: [f64; 4] = [-NUDGE, NUDGE, -2.0 * NUDGE, 2.0 * NUDGE];

/// Number of zeros of `f` inside `rect`, counted with multiplicity.
pub fn count_zeros(f: &dyn Evaluable, rect: Rectangle) -> Result<ZeroCountResult, AnalyticError> {
    let rect = Rectangle::new(rect.sigma0, rect.sigma1, rect.t0, rect.t1)?;
    if rect.is_empty() {
        return Ok(ZeroCountResult {
            rectangle: rect,
            contour: rect,
            count: 0,
            pole_correction: 0,
            min_edge_modulus: f64::INFINITY,
            winding: 0.0,
            nudges: 0,
            evaluations: 0,
        });
    }
    let poles = f.poles();
    let mut tracer = Tracer { f, evaluations: 0 };
    let mut contour = rect;
    let mut edge_nudges = [0usize; 4];
    let mut nudges = 0u32;
    loop {
        let blocked = (0..4).find_map(|edge| {
            poles
                .iter()
                .find(|(p, _)| contour.edge_distance(edge, *p) < NUDGE)
                .map(|(p, _)| (edge, *p))
        });
        let outcome = match blocked {
            Some((edge, at)) => Trace::NearZero { edge, at },
            None => tracer.trace(&contour)?,
        };
        match outcome {
            Trace::Done { arg, min_modulus } => {
                let winding = arg / (2.0 * PI);
                let rounded = winding.round();
                if (winding - rounded).abs() > WINDING_TOLERANCE {
                    return Err(AnalyticError::NonIntegralWinding(winding));
                }
                let pole_correction: u32 = poles
                    .iter()
                    .filter(|(p, _)| contour.contains(*p))
                    .map(|&(_, m)| m)
                    .sum();
                let count = rounded as i64 + pole_correction as i64;
                if count < 0 {
                    return Err(AnalyticError::NegativeCount(count));
                }
                return Ok(ZeroCountResult {
                    rectangle: rect,
                    contour,
                    count: count as u32,
                    pole_correction,
                    min_edge_modulus: min_modulus,
                    winding,
                    nudges,
                    evaluations: tracer.evaluations,
                });
            }
            Trace::NearZero { edge, at } => {
                if nudges >= MAX_NUDGES {
                    return Err(AnalyticError::ContourThroughZero(at));
                }
                let k = edge_nudges[edge];
                let previous = if k == 0 { 0.0 } else { NUDGE_SEQUENCE[k - 1] };
                contour = contour.moved(edge, NUDGE_SEQUENCE[k] - previous);
                edge_nudges[edge] += 1;
                nudges += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocatedZero {
    pub s: Complex64,
    pub multiplicity: u32,
    /// `|f(s)|` at the reported point.
    pub residual: f64,
}

fn newton(f: &dyn Evaluable, start: Complex64, steps: usize) -> Result<Complex64, AnalyticError> {
    let h = Complex64::new(NEWTON_STEP, 0.0);
    let mut z = start;
    for _ in 0..steps {
        let v = f.eval(z)?;
        let d = (f.eval(z + h)? - f.eval(z - h)?) / (2.0 * NEWTON_STEP);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        z -= step;
        if step.norm() < 1e-13 * (1.0 + z.norm()) {
            break;
        }
    }
    Ok(z)
}

fn locate_in(
    f: &dyn Evaluable,
    rect: Rectangle,
    count: u32,
    tol: f64,
    out: &mut Vec<LocatedZero>,
) -> Result<(), AnalyticError> {
    if count == 0 {
        return Ok(());
    }
    let size = rect.width().max(rect.height());
    if count == 1 && size < 0.25 {
        let z = newton(f, rect.center(), 30)?;
        if rect.contains(z) {
            out.push(LocatedZero {
                s: z,
                multiplicity: 1,
                residual: f.eval(z)?.norm(),
            });
            return Ok(());
        }
    }
    if size <= tol {
        let c = rect.center();
        let z = if count == 1 {
            let z = newton(f, c, 1)?;
            if (z - c).norm() <= 2.0 * tol {
                z
            } else {
                c
            }
        } else {
            c
        };
        out.push(LocatedZero {
            s: z,
            multiplicity: count,
            residual: f.eval(z)?.norm(),
        });
        return Ok(());
    }
    let (a, b) = rect.split(SPLIT_FRACTION);
    let ca = count_zeros(f, a)?.count;
    let cb = count_zeros(f, b)?.count;
    locate_in(f, a, ca, tol, out)?;
    locate_in(f, b, cb, tol, out)
}

/// Zeros of `f` in `rect`, by bisection to boxes of size `tol` (default
/// `1e-4`) and a Newton polish, sorted by height.
pub fn locate_zeros(
    f: &dyn Evaluable,
    rect: Rectangle,
    tol: Option<f64>,
) -> Result<Vec<LocatedZero>, AnalyticError> {
    let tol = tol.unwrap_or(MATCH_TOLERANCE);
    if !(tol > 0.0) {
        return Err(AnalyticError::InvalidArgument(format!(
            "localization tolerance {tol} must be positive"
        )));
    }
    let total = count_zeros(f, rect)?.count;
    let mut out = Vec::new();
    locate_in(f, rect, total, tol, &mut out)?;
    out.sort_by(|a, b| a.s.im.total_cmp(&b.s.im).then(a.s.re.total_cmp(&b.s.re)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub sigma: f64,
    pub t: f64,
    pub count: u32,
    /// `N(σ, T) / T`.
    pub ratio: f64,
}

/// Right edge of the density rectangles.
pub const DENSITY_SIGMA_MAX: f64 = 3.0;

/// `N_F(σ, T)` over `(σ, 3) × (−T, T)` for each `σ`.
pub fn density_probe(
    f: &dyn Evaluable,
    sigmas: &[f64],
    t: f64,
) -> Result<Vec<DensityRow>, AnalyticError> {
    if !(t > 0.0) {
        return Err(AnalyticError::InvalidArgument(format!(
            "height {t} must be positive"
        )));
    }
    let mut rows = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let count = if sigma >= DENSITY_SIGMA_MAX {
            0
        } else {
            count_zeros(f, Rectangle::new(sigma, DENSITY_SIGMA_MAX, -t, t)?)?.count
        };
        rows.push(DensityRow {
            sigma,
            t,
            count,
            ratio: count as f64 / t,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetReport {
    pub region: Rectangle,
    pub zeros_first: Vec<LocatedZero>,
    pub zeros_second: Vec<LocatedZero>,
    pub matched: Vec<(LocatedZero, LocatedZero)>,
    pub unmatched_first: Vec<LocatedZero>,
    pub unmatched_second: Vec<LocatedZero>,
}

impl ZeroSetReport {
    pub fn all_matched(&self) -> bool {
        self.unmatched_first.is_empty() && self.unmatched_second.is_empty()
    }
}

/// Locates the zeros of `first` and `second` in `region` and pairs those
/// within [`MATCH_TOLERANCE`] with equal multiplicity.
pub fn zero_set_compare(
    first: &dyn Evaluable,
    second: &dyn Evaluable,
    region: Rectangle,
) -> Result<ZeroSetReport, AnalyticError> {
    let zeros_first = locate_zeros(first, region, None)?;
    let zeros_second = locate_zeros(second, region, None)?;
    let mut taken = vec![false; zeros_second.len()];
    let mut matched = Vec::new();
    let mut unmatched_first = Vec::new();
    for z in &zeros_first {
        let partner = zeros_second
            .iter()
            .enumerate()
            .filter(|(j, w)| {
                !taken[*j]
                    && w.multiplicity == z.multiplicity
                    && (w.s - z.s).norm() <= MATCH_TOLERANCE
            })
            .min_by(|a, b| (a.1.s - z.s).norm().total_cmp(&(b.1.s - z.s).norm()));
        match partner {
            Some((j, w)) => {
                taken[j] = true;
                matched.push((*z, *w));
            }
            None => unmatched_first.push(*z),
        }
    }
    let unmatched_second = zeros_second
        .iter()
        .zip(&taken)
        .filter(|(_, &t)| !t)
        .map(|(w, _)| *w)
        .collect();
    Ok(ZeroSetReport {
        region,
        zeros_first,
        zeros_second,
        matched,
        unmatched_first,
        unmatched_second,
    })
}
