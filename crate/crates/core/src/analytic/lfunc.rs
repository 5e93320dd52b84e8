//! Euler–Maclaurin evaluation of `ζ(s)`, `ζ(s, a)` and `L(s, χ)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::special::{bernoulli_even, exprel};
use crate::coefficients::DirichletCharacter;

/// Bernoulli terms kept in the Euler–Maclaurin tail.
const EM_TERMS: usize = 12;

/// Value with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded {
    pub value: Complex64,
    pub error: f64,
}

fn cutoff(s: Complex64) -> usize {
    (s.norm() / 2.0).ceil() as usize + 20
}

/// `4 |(s)_{2M}| / (2π)^{2M} · x^{1-σ-2M} / (σ + 2M - 1)`.
fn remainder_bound(s: Complex64, x: f64) -> f64 {
    let m2 = 2 * EM_TERMS;
    let mut rising = 1.0;
    for k in 0..m2 {
        rising *= (s + k as f64).norm();
    }
    let sigma = s.re + m2 as f64 - 1.0;
    4.0 * rising / (2.0 * PI).powi(m2 as i32) * x.powf(-sigma) / sigma
}

/// `Σ_{j=1}^{M} B_{2j}/(2j)! (s)_{2j-1} x^{-s-2j+1}` given `x^{-s}`.
fn bernoulli_tail(s: Complex64, x: f64, x_neg_s: Complex64) -> (Complex64, f64) {
    let mut total = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    // coef = (s)_{2j-1} / (2j)! · x^{-2j+1}
    let mut coef = s / (2.0 * x);
    for j in 1..=EM_TERMS {
        let term = coef * bernoulli_even(j) * x_neg_s;
        total += term;
        mag += term.norm();
        let k = 2 * j as u32;
        coef = coef * (s + (k - 1) as f64) * (s + k as f64)
            / (((k + 1) * (k + 2)) as f64 * x * x);
    }
    (total, mag)
}

/// `ζ(s, a) - (N+a)^{1-s}/(s-1)` by Euler–Maclaurin with `N` terms, plus the
/// magnitude of the summed terms for rounding control.
fn hurwitz_regular(s: Complex64, a: f64, n: usize) -> (Complex64, f64, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for k in 0..n {
        let term = (-s * (k as f64 + a).ln()).exp();
        sum += term;
        mag += term.norm();
    }
    let x = n as f64 + a;
    let x_neg_s = (-s * x.ln()).exp();
    sum += 0.5 * x_neg_s;
    let (tail, tail_mag) = bernoulli_tail(s, x, x_neg_s);
    sum += tail;
    mag += tail_mag;
    (sum, mag, remainder_bound(s, x))
}

/// `ζ(s, a)`, `0 < a ≤ 1`, `s ≠ 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Bounded {
    let n = cutoff(s);
    let (reg, mag, rem) = hurwitz_regular(s, a, n);
    let x = n as f64 + a;
    let pole = ((1.0 - s) * x.ln()).exp() / (s - 1.0);
    let value = reg + pole;
    Bounded {
        value,
        error: rem + 64.0 * f64::EPSILON * (mag + pole.norm()),
    }
}

pub fn zeta(s: Complex64) -> Bounded {
    hurwitz_zeta(s, 1.0)
}

/// `L(s, χ) = q^{-s} Σ_a χ(a) ζ(s, a/q)` for a non-principal character. The
/// pole terms cancel in `Σ χ(a) = 0`; they are combined before evaluation.
pub fn dirichlet_l(chi: &DirichletCharacter, s: Complex64) -> Bounded {
    let q = chi.modulus();
    let n = cutoff(s);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut mag = 0.0;
    for a in 1..=q {
        let c = chi.value(a);
        if c.norm() == 0.0 {
            continue;
        }
        let frac = a as f64 / q as f64;
        let (reg, m, rem) = hurwitz_regular(s, frac, n);
        let lx = (n as f64 + frac).ln();
        // (x^{1-s} - 1)/(s - 1)
        let pole = -lx * exprel((1.0 - s) * lx);
        sum += c * (reg + pole);
        err += rem;
        mag += m + pole.norm();
    }
    let scale = (-s * (q as f64).ln()).exp();
    Bounded {
        value: scale * sum,
        error: scale.norm() * (err + 64.0 * f64::EPSILON * mag),
    }
}
