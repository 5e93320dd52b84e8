//! The completed L-function of Δ from its theta integral on a rotated ray.
//!
//! With `w = s + 11/2`, `Λ(s) = (2π)^{11/2} Λ_τ(w)` and
//!
//! ```text
//! Λ_τ(w) = δ^w ∫_1^∞ Δ(iδu) u^{w-1} du + δ^{w-12} ∫_1^∞ Δ(iu/δ) u^{11-w} du,
//! ```
//!
//! valid for any `δ = e^{iφ}`, `|φ| < π/2`. Taking `φ` close to `π/2` for
//! large `Im w` cancels the exponential decay of `Γ(w)` before the
//! integrals are formed, so both integrals stay at the size of the result.
//! Real coefficients give `Δ(iu/δ) = conj Δ(iδu)`, so one theta sum per
//! node serves both integrals.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::lfunc::Bounded;
use super::AnalyticError;
use crate::coefficients::TauTable;

/// Rotation leaves `c/|t|` of slack below `π/2`.
const ROTATION_SLACK: f64 = 2.0;
/// Truncation depth in units of `e`-folds.
const TAIL_EFOLDS: f64 = 45.0;
const GAUSS_NODES: usize = 20;

fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_NODES;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

/// Rotation angle for `Im w = t ≥ 0`.
pub fn rotation_angle(t: f64) -> f64 {
    (PI / 2.0 - ROTATION_SLACK / t.abs()).max(0.0)
}

/// `Λ(s)` for `Im s ≥ 0`.
fn completed_upper(table: &TauTable, s: Complex64) -> Result<Bounded, AnalyticError> {
    let w = s + 5.5;
    let phi = rotation_angle(w.im);
    let delta = Complex64::from_polar(1.0, phi);
    let kappa = 2.0 * PI * phi.cos();
    let nu = 2.0 * PI * phi.sin();
    let e1 = w - 1.0;
    let e2 = 11.0 - w;
    let p = e1.re.max(e2.re).max(0.0);
    let limit = table.limit();
    let rule = gauss_legendre();

    let mut i1 = Complex64::new(0.0, 0.0);
    let mut i2 = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let mut peak: f64 = 0.0;
    let mut u = 1.0;
    loop {
        // Terms beyond n_max are below e^{-45} of the leading one at u.
        let n_max = |u: f64| {
            let mut n = 1usize;
            while (n as f64 - 1.0) * kappa * u < TAIL_EFOLDS + 6.5 * (n as f64).ln() {
                n += 1;
            }
            n
        };
        let nm = n_max(u);
        if nm > limit {
            return Err(AnalyticError::TableTooShort { needed: nm, limit });
        }
        let freq = (nu + kappa) * nm as f64 + (w.im.abs() + p + 1.0) / u;
        let h = (4.0 * PI / freq).min(u);
        let mut panel_peak: f64 = 0.0;
        for &(x, wt) in rule {
            let v = u + 0.5 * h * (x + 1.0);
            let lv = v.ln();
            let r = (-2.0 * PI * delta * v).exp();
            let mut rn = r;
            let mut theta = Complex64::new(0.0, 0.0);
            for n in 1..=n_max(v) {
                theta += rn * table.get(n).unwrap() as f64;
                rn *= r;
            }
            let f1 = theta * (e1 * lv).exp();
            let f2 = theta.conj() * (e2 * lv).exp();
            let weight = 0.5 * h * wt;
            i1 += f1 * weight;
            i2 += f2 * weight;
            let m = (f1.norm() + f2.norm()) * weight;
            mag += m;
            panel_peak = panel_peak.max(f1.norm() + f2.norm());
        }
        peak = peak.max(panel_peak);
        u += h;
        if kappa * u > p && panel_peak < 1e-19 * peak && u * kappa > TAIL_EFOLDS {
            break;
        }
        if u > 1e7 {
            return Err(AnalyticError::NoConvergence(s));
        }
    }
    let dw = (Complex64::i() * phi * w).exp();
    let d12 = Complex64::from_polar(1.0, -12.0 * phi);
    let scale = (2.0 * PI).powf(5.5);
    let lambda_tau = dw * (i1 + d12 * i2);
    Ok(Bounded {
        value: scale * lambda_tau,
        // Rounding in the quadrature sums plus a fixed allowance for the
        // Gauss–Legendre panels and the series truncation.
        error: scale * (dw.norm() * 256.0 * f64::EPSILON * mag + 1e-12 * lambda_tau.norm()),
    })
}

/// `Λ(s) = (2π)^{-s} Γ(s + 11/2) L(s)` for the weight-12 eigenform.
pub fn completed_delta(table: &TauTable, s: Complex64) -> Result<Bounded, AnalyticError> {
    if s.im >= 0.0 {
        completed_upper(table, s)
    } else {
        let b = completed_upper(table, s.conj())?;
        Ok(Bounded {
            value: b.value.conj(),
            error: b.error,
        })
    }
}
