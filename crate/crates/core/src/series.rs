//! Truncated Dirichlet series `Σ_{n≤N} a(n) n^{-s}` as coefficient vectors.

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::SpfSieve;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("leading coefficient a(1) is zero; the series has no Dirichlet inverse")]
    ZeroLeadingCoefficient,
    #[error("series truncated at {len} but index {index} was requested")]
    OutOfRange { index: usize, len: usize },
}

/// Coefficients `a(1..=N)`; slot 0 is kept as zero so indexing is natural.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeries {
    coeffs: Vec<Complex64>,
}

impl DirichletSeries {
    pub fn zeros(len: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); len + 1],
        }
    }

    /// The unit of Dirichlet convolution: `a(1) = 1`, zero elsewhere.
    pub fn identity(len: usize) -> Self {
        let mut s = Self::zeros(len);
        if len >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let mut s = Self::zeros(len);
        for n in 1..=len {
            s.coeffs[n] = f(n);
        }
        s
    }

    /// Builds from `a(1), a(2), …` in order.
    pub fn from_values(values: &[Complex64]) -> Self {
        let mut coeffs = Vec::with_capacity(values.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(values);
        Self { coeffs }
    }

    /// Multiplicative series with `a(p^e) = local(p, e)` for `e ≥ 1`.
    pub fn multiplicative(
        len: usize,
        sieve: &SpfSieve,
        mut local: impl FnMut(usize, u32) -> Complex64,
    ) -> Self {
        assert!(sieve.limit() >= len, "sieve too short for series length");
        let mut s = Self::identity(len);
        for n in 2..=len {
            let p = sieve.smallest_factor(n);
            let mut m = n;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            s.coeffs[n] = local(p, e) * s.coeffs[m];
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    pub fn try_get(&self, n: usize) -> Result<Complex64, SeriesError> {
        if n == 0 || n > self.len() {
            return Err(SeriesError::OutOfRange {
                index: n,
                len: self.len(),
            });
        }
        Ok(self.coeffs[n])
    }

    pub fn set(&mut self, n: usize, value: Complex64) {
        self.coeffs[n] = value;
    }

    /// `a(1..=N)` as a slice.
    pub fn values(&self) -> &[Complex64] {
        &self.coeffs[1..]
    }

    pub fn truncate(&self, len: usize) -> Self {
        let len = len.min(self.len());
        Self {
            coeffs: self.coeffs[..=len].to_vec(),
        }
    }

    /// Dirichlet convolution, truncated to the shorter length.
    pub fn convolve(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let mut out = Self::zeros(len);
        for d in 1..=len {
            let a = self.coeffs[d];
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for m in 1..=len / d {
                out.coeffs[d * m] += a * other.coeffs[m];
            }
        }
        out
    }

    /// Dirichlet inverse `b` with `(a * b)(n) = [n = 1]` for all `n ≤ N`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let len = self.len();
        let a1 = self.coeffs[1];
        if a1.norm() == 0.0 {
            return Err(SeriesError::ZeroLeadingCoefficient);
        }
        let inv_a1 = a1.inv();
        let mut acc = vec![Complex64::new(0.0, 0.0); len + 1];
        let mut out = Self::zeros(len);
        for m in 1..=len {
            let b = if m == 1 { inv_a1 } else { -acc[m] * inv_a1 };
            out.coeffs[m] = b;
            if b.re == 0.0 && b.im == 0.0 {
                continue;
            }
            for d in 2..=len / m {
                acc[d * m] += self.coeffs[d] * b;
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.len().min(other.len());
        (1..=len)
            .map(|n| (self.coeffs[n] - other.coeffs[n]).norm())
            .fold(0.0, f64::max)
    }

    /// True when every coefficient has integral real and imaginary parts.
    pub fn is_integral(&self) -> bool {
        self.values()
            .iter()
            .all(|z| z.re.fract() == 0.0 && z.im.fract() == 0.0)
    }

    /// `Σ_{n≤N} a(n) n^{-s}`.
    pub fn partial_sum(&self, s: Complex64) -> Complex64 {
        (1..=self.len())
            .filter(|&n| self.coeffs[n] != Complex64::new(0.0, 0.0))
            .map(|n| self.coeffs[n] * Complex64::new(n as f64, 0.0).powc(-s))
            .sum()
    }
}
