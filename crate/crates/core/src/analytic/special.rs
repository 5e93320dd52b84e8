//! Bernoulli numbers, complex `Γ` and a few elementary helpers.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::AnalyticError;

/// Even Bernoulli numbers `B_0, B_2, …, B_{2·(COUNT-1)}`.
const BERNOULLI_COUNT: usize = 40;

fn bernoulli_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 2 * (BERNOULLI_COUNT - 1);
        // Akiyama–Tanigawa, exact.
        let mut row: Vec<BigRational> = Vec::with_capacity(n + 1);
        let mut out = Vec::with_capacity(BERNOULLI_COUNT);
        for m in 0..=n {
            row.push(BigRational::new(BigInt::from(1), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &row[j - 1] - &row[j];
                row[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
            }
            if m % 2 == 0 {
                out.push(row[0].to_f64().unwrap_or(0.0));
            }
        }
        out
    })
}

/// `B_{2j}` as a double.
pub fn bernoulli_even(j: usize) -> f64 {
    bernoulli_table()[j]
}

/// `B_n` exactly, for small `n`; `B_1 = -1/2`.
pub fn bernoulli_exact(n: usize) -> BigRational {
    let mut row: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(BigRational::new(BigInt::from(1), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
    }
    let b = row[0].clone();
    if n == 1 {
        -b
    } else if n > 1 && n % 2 == 1 {
        BigRational::zero()
    } else {
        b
    }
}

fn near_nonpositive_integer(z: Complex64) -> bool {
    z.re <= 0.5 && z.im.abs() < 1e-14 && (z.re - z.re.round()).abs() < 1e-14
}

/// `ln sin(πz)` on some branch, without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im > 1.0 {
        // sin(πz) = e^{-iπz}(1 - e^{2πiz}) · i/2
        -i * PI * z + (1.0 - (2.0 * PI * i * z).exp()).ln() + (0.5 * i).ln()
    } else if z.im < -1.0 {
        ln_sin_pi(z.conj()).conj()
    } else {
        (PI * z).sin().ln()
    }
}

/// A logarithm of `Γ(z)`: Stirling's series after shifting to `|z| ≥ 15`,
/// with reflection on `Re z < 1/2`. The branch is not the principal one.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, AnalyticError> {
    if near_nonpositive_integer(z) {
        return Err(AnalyticError::GammaPole(z));
    }
    if z.re < 0.5 {
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z)?);
    }
    let mut w = z;
    let mut product = Complex64::new(1.0, 0.0);
    while w.norm() < 15.0 {
        product *= w;
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for j in 1..=12 {
        let b = bernoulli_even(j);
        series += pow * (b / ((2 * j) as f64 * (2 * j - 1) as f64));
        pow *= inv2;
    }
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - product.ln())
}

/// `Γ(z)`; relative error below `1e-12` on `|z| ≤ 50` away from the poles.
pub fn complex_gamma(z: Complex64) -> Result<Complex64, AnalyticError> {
    Ok(ln_gamma(z)?.exp())
}

/// `(e^z - 1)/z`, accurate near 0.
pub fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=20 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}
