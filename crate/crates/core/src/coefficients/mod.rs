//! Deterministic Dirichlet-coefficient generators.
//!
//! A [`CoefficientSource`] produces `a(n)` for the series `Σ a(n) n^{-s}` of
//! one of the built-in L-functions (ζ, Dirichlet L, the weight-12 level-one
//! eigenform), an explicit finite list, or a `k`-lift of another source.
//! Lifts are kept flat: lifting a lift multiplies the orders.

mod character;
mod tau;

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{exact_root, is_prime};
use crate::fe::GammaFactorData;
use crate::series::{DirichletSeries, SeriesError};

pub use character::{BuiltinCharacter, DirichletCharacter};
pub use tau::TauTable;

/// τ is tabulated up to this index unless a source asks for more.
pub const DEFAULT_TAU_LIMIT: usize = 10_000;

/// Weight of the built-in eigenform Δ.
pub const DELTA_WEIGHT: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoefficientError {
    #[error("coefficient index must be at least 1")]
    ZeroIndex,
    #[error("index {index} exceeds the {len} stored coefficients")]
    OutOfRange { index: u64, len: u64 },
    #[error("source is not multiplicative")]
    NotMultiplicative,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("lift order must be at least 1")]
    ZeroLiftOrder,
    #[error("prime power {p}^{m} overflows u64")]
    Overflow { p: u64, m: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("reading {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSource {
    Zeta,
    DirichletL(DirichletCharacter),
    /// Δ normalized as `τ(n) / n^{11/2}`.
    Eigenform(Arc<TauTable>),
    /// A finite list `a(1), a(2), …`; as a Dirichlet polynomial it is zero
    /// beyond its length.
    Explicit {
        values: Arc<Vec<Complex64>>,
        multiplicative: bool,
    },
    Lift {
        base: Box<CoefficientSource>,
        k: u32,
    },
}

impl CoefficientSource {
    pub fn dirichlet(character: BuiltinCharacter) -> Self {
        CoefficientSource::DirichletL(character.character())
    }

    pub fn eigenform() -> Self {
        Self::eigenform_with_limit(DEFAULT_TAU_LIMIT)
    }

    pub fn eigenform_with_limit(limit: usize) -> Self {
        CoefficientSource::Eigenform(Arc::new(TauTable::new(limit)))
    }

    pub fn explicit(values: Vec<Complex64>, multiplicative: bool) -> Self {
        CoefficientSource::Explicit {
            values: Arc::new(values),
            multiplicative,
        }
    }

    /// `F_k(s) = F(ks + (1-k)/2)`. Nested lifts collapse to one.
    pub fn lift(base: CoefficientSource, k: u32) -> Result<Self, CoefficientError> {
        if k == 0 {
            return Err(CoefficientError::ZeroLiftOrder);
        }
        if k == 1 {
            return Ok(base);
        }
        Ok(match base {
            CoefficientSource::Lift { base, k: j } => CoefficientSource::Lift { base, k: j * k },
            other => CoefficientSource::Lift {
                base: Box::new(other),
                k,
            },
        })
    }

    pub fn is_multiplicative(&self) -> bool {
        match self {
            CoefficientSource::Explicit { multiplicative, .. } => *multiplicative,
            CoefficientSource::Lift { base, .. } => base.is_multiplicative(),
            _ => true,
        }
    }

    /// Largest index that can be produced, `None` when unbounded.
    pub fn cached_len(&self) -> Option<u64> {
        match self {
            CoefficientSource::Zeta | CoefficientSource::DirichletL(_) => None,
            CoefficientSource::Eigenform(t) => Some(t.limit() as u64),
            CoefficientSource::Explicit { values, .. } => Some(values.len() as u64),
            CoefficientSource::Lift { base, k } => base
                .cached_len()
                .map(|l| l.checked_pow(*k).unwrap_or(u64::MAX)),
        }
    }

    /// Lift order, 1 for anything that is not a lift.
    pub fn lift_order(&self) -> u32 {
        match self {
            CoefficientSource::Lift { k, .. } => *k,
            _ => 1,
        }
    }

    /// Exponent `(k-1)/(2k)` with which `|a(m)|` can grow along perfect
    /// `k`-th powers of a lifted Ramanujan-bounded source.
    pub fn growth_exponent(&self) -> f64 {
        let k = self.lift_order() as f64;
        (k - 1.0) / (2.0 * k)
    }

    /// Functional-equation data of the built-in kinds and their lifts.
    pub fn gamma_data(&self) -> Option<GammaFactorData> {
        match self {
            CoefficientSource::Zeta => Some(GammaFactorData::zeta()),
            CoefficientSource::DirichletL(chi) => chi.gamma_data().ok(),
            CoefficientSource::Eigenform(_) => {
                Some(GammaFactorData::level_one_eigenform(DELTA_WEIGHT))
            }
            CoefficientSource::Explicit { .. } => None,
            CoefficientSource::Lift { base, k } => base
                .gamma_data()
                .and_then(|d| crate::fe::lift_data(&d, *k).ok()),
        }
    }

    pub fn coeff(&self, n: u64) -> Result<Complex64, CoefficientError> {
        if n == 0 {
            return Err(CoefficientError::ZeroIndex);
        }
        match self {
            CoefficientSource::Zeta => Ok(Complex64::new(1.0, 0.0)),
            CoefficientSource::DirichletL(chi) => Ok(chi.value(n)),
            CoefficientSource::Eigenform(table) => {
                let t = table
                    .get(n as usize)
                    .ok_or(CoefficientError::OutOfRange {
                        index: n,
                        len: table.limit() as u64,
                    })?;
                Ok(Complex64::new(t as f64 / (n as f64).powf(5.5), 0.0))
            }
            CoefficientSource::Explicit { values, .. } => values
                .get(n as usize - 1)
                .copied()
                .ok_or(CoefficientError::OutOfRange {
                    index: n,
                    len: values.len() as u64,
                }),
            CoefficientSource::Lift { base, k } => lift_coeff(base, *k, n),
        }
    }

    /// `a(1..=len)`. Explicit lists are zero-padded as Dirichlet polynomials.
    pub fn coefficients(&self, len: usize) -> Result<DirichletSeries, CoefficientError> {
        match self {
            CoefficientSource::Zeta => Ok(DirichletSeries::from_fn(len, |_| {
                Complex64::new(1.0, 0.0)
            })),
            CoefficientSource::DirichletL(chi) => {
                Ok(DirichletSeries::from_fn(len, |n| chi.value(n as u64)))
            }
            CoefficientSource::Eigenform(table) => {
                if len > table.limit() {
                    return Err(CoefficientError::OutOfRange {
                        index: len as u64,
                        len: table.limit() as u64,
                    });
                }
                Ok(DirichletSeries::from_fn(len, |n| {
                    Complex64::new(table.get(n).unwrap() as f64 / (n as f64).powf(5.5), 0.0)
                }))
            }
            CoefficientSource::Explicit { values, .. } => Ok(DirichletSeries::from_fn(len, |n| {
                values.get(n - 1).copied().unwrap_or(Complex64::new(0.0, 0.0))
            })),
            CoefficientSource::Lift { base, k } => {
                let mut out = DirichletSeries::zeros(len);
                let kf = *k as f64;
                let mut n = 1usize;
                while let Some(m) = n.checked_pow(*k).filter(|&m| m <= len) {
                    let a = base.coeff_or_zero(n as u64)?;
                    out.set(m, a * (n as f64).powf((kf - 1.0) / 2.0));
                    n += 1;
                }
                Ok(out)
            }
        }
    }

    /// Like [`Self::coeff`], but an explicit list reads as zero past its end.
    pub fn coeff_or_zero(&self, n: u64) -> Result<Complex64, CoefficientError> {
        match self.coeff(n) {
            Err(CoefficientError::OutOfRange { .. })
                if matches!(self, CoefficientSource::Explicit { .. }) =>
            {
                Ok(Complex64::new(0.0, 0.0))
            }
            other => other,
        }
    }


    /// `a(p^m)` for `m = 0..=depth` without forming `p^m`; explicit lists
    /// contribute zero past their end.
    pub fn local_series(&self, p: u64, depth: u32) -> Result<Vec<Complex64>, CoefficientError> {
        if !is_prime(p) {
            return Err(CoefficientError::NotPrime(p));
        }
        let one = Complex64::new(1.0, 0.0);
        let len = depth as usize + 1;
        match self {
            CoefficientSource::Zeta => Ok(vec![one; len]),
            CoefficientSource::DirichletL(chi) => {
                let c = chi.value(p);
                Ok((0..len).map(|m| c.powu(m as u32)).collect())
            }
            CoefficientSource::Eigenform(_) => {
                // Hecke: a(p^{m+1}) = a(p) a(p^m) - a(p^{m-1}) in the unitary normalization.
                let ap = self.coeff(p)?;
                let mut out = vec![one, ap];
                while out.len() < len {
                    let m = out.len();
                    out.push(ap * out[m - 1] - out[m - 2]);
                }
                out.truncate(len);
                Ok(out)
            }
            CoefficientSource::Explicit { values, .. } => {
                let mut out = vec![one];
                let mut pm = 1u64;
                for _ in 1..len {
                    let v = pm
                        .checked_mul(p)
                        .filter(|&q| q as usize <= values.len())
                        .map(|q| {
                            pm = q;
                            values[q as usize - 1]
                        })
                        .unwrap_or_else(|| {
                            pm = u64::MAX;
                            Complex64::new(0.0, 0.0)
                        });
                    out.push(v);
                }
                Ok(out)
            }
            CoefficientSource::Lift { base, k } => {
                let k = *k as usize;
                let inner = base.local_series(p, depth / k as u32)?;
                let exponent = (k as f64 - 1.0) / 2.0;
                Ok((0..len)
                    .map(|m| {
                        if m % k == 0 {
                            let n = (p as f64).powi((m / k) as i32);
                            inner[m / k] * n.powf(exponent)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect())
            }
        }
    }

    /// Bound `|a(p^m)| ≤ A (m+1)^D` valid for every prime and every `m`, when
    /// the local structure of the source provides one.
    pub fn local_growth(&self) -> Option<LocalGrowth> {
        match self {
            CoefficientSource::Zeta | CoefficientSource::DirichletL(_) => {
                Some(LocalGrowth { scale: 1.0, degree: 0.0 })
            }
            CoefficientSource::Eigenform(_) => Some(LocalGrowth { scale: 1.0, degree: 1.0 }),
            CoefficientSource::Explicit { values, .. } => Some(LocalGrowth {
                scale: values.iter().map(|v| v.norm()).fold(1.0, f64::max),
                degree: 0.0,
            }),
            CoefficientSource::Lift { .. } => None,
        }
    }

    /// Same bound for the local factors of `1/F`.
    pub fn inverse_local_growth(&self) -> Option<LocalGrowth> {
        match self {
            // 1 - χ(p) x, and 1 - a(p) x + x² with |a(p)| ≤ 2.
            CoefficientSource::Zeta | CoefficientSource::DirichletL(_) => {
                Some(LocalGrowth { scale: 1.0, degree: 0.0 })
            }
            CoefficientSource::Eigenform(_) => Some(LocalGrowth { scale: 2.0, degree: 0.0 }),
            CoefficientSource::Explicit { .. } | CoefficientSource::Lift { .. } => None,
        }
    }

    /// `a(p^m)`.
    pub fn local(&self, p: u64, m: u32) -> Result<Complex64, CoefficientError> {
        let pm = p.checked_pow(m).ok_or(CoefficientError::Overflow { p, m })?;
        self.coeff(pm)
    }
}

/// Coefficient of `F_k` at `m`: `a(n) n^{(k-1)/2}` if `m = n^k`, else 0.
pub fn lift_coeff(
    base: &CoefficientSource,
    k: u32,
    m: u64,
) -> Result<Complex64, CoefficientError> {
    if k == 0 {
        return Err(CoefficientError::ZeroLiftOrder);
    }
    if m == 0 {
        return Err(CoefficientError::ZeroIndex);
    }
    match exact_root(m, k) {
        Some(n) => {
            let a = base.coeff(n)?;
            Ok(a * (n as f64).powf((k as f64 - 1.0) / 2.0))
        }
        None => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// `|a(p^m)| ≤ scale · (m+1)^degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGrowth {
    pub scale: f64,
    pub degree: f64,
}

impl LocalGrowth {
    pub fn bound(&self, m: u32) -> f64 {
        self.scale * (m as f64 + 1.0).powf(self.degree)
    }

    /// Bound for the Cauchy product of two local series.
    pub fn product(&self, other: &LocalGrowth) -> LocalGrowth {
        LocalGrowth {
            scale: self.scale * other.scale,
            degree: self.degree + other.degree + 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamanujanAudit {
    pub n_max: u64,
    pub eps: f64,
    /// `max_{n≤N} |a(n)| / n^ε`.
    pub max_ratio: f64,
    pub argmax: u64,
    /// Order `r` of the perfect powers tracked by the growth flag.
    pub power_order: u32,
    /// `|a(n^r)|` is non-decreasing over the nonzero terms and strictly grows
    /// from the first to the last of them.
    pub growth_flag: bool,
    /// Exponent `(k-1)/(2k)` reported by lifted sources.
    pub growth_exponent: f64,
}

pub fn ramanujan_audit(
    source: &CoefficientSource,
    n_max: u64,
    eps: f64,
) -> Result<RamanujanAudit, CoefficientError> {
    let coeffs = source.coefficients(n_max as usize)?;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax = 1;
    for n in 1..=n_max as usize {
        let r = coeffs.get(n).norm() / (n as f64).powf(eps);
        if r > max_ratio {
            max_ratio = r;
            argmax = n as u64;
        }
    }
    let power_order = source.lift_order().max(2);
    let along_powers: Vec<f64> = (1usize..)
        .map_while(|n| n.checked_pow(power_order).filter(|&m| m <= n_max as usize))
        .map(|m| coeffs.get(m).norm())
        .filter(|&v| v > 0.0)
        .collect();
    let growth_flag = along_powers.len() >= 2
        && along_powers.windows(2).all(|w| w[1] >= w[0])
        && along_powers.last() > along_powers.first();
    Ok(RamanujanAudit {
        n_max,
        eps,
        max_ratio,
        argmax,
        power_order,
        growth_flag,
        growth_exponent: source.growth_exponent(),
    })
}

/// `(a(1), a(p), …, a(p^M))`, the truncated local factor at `p`.
pub fn euler_factor(
    source: &CoefficientSource,
    p: u64,
    m_max: u32,
) -> Result<Vec<Complex64>, CoefficientError> {
    if !source.is_multiplicative() {
        return Err(CoefficientError::NotMultiplicative);
    }
    if !is_prime(p) {
        return Err(CoefficientError::NotPrime(p));
    }
    (0..=m_max).map(|m| source.local(p, m)).collect()
}

/// Coefficients of `1/F` up to `len`.
pub fn dirichlet_inverse(
    source: &CoefficientSource,
    len: usize,
) -> Result<DirichletSeries, CoefficientError> {
    Ok(source.coefficients(len)?.inverse()?)
}

/// Parses one coefficient per line as `re im` (or a lone real). Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_explicit_values(text: &str) -> Result<Vec<Complex64>, CoefficientError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |tok: &str| {
            tok.parse::<f64>().map_err(|_| CoefficientError::Parse {
                line: i + 1,
                message: format!("cannot parse {tok:?} as a number"),
            })
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let z = match parts.as_slice() {
            [re] => Complex64::new(parse(re)?, 0.0),
            [re, im] => Complex64::new(parse(re)?, parse(im)?),
            _ => {
                return Err(CoefficientError::Parse {
                    line: i + 1,
                    message: "expected `re im`".into(),
                })
            }
        };
        out.push(z);
    }
    Ok(out)
}

pub fn load_explicit_values(path: &Path) -> Result<Vec<Complex64>, CoefficientError> {
    let text = std::fs::read_to_string(path).map_err(|e| CoefficientError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_explicit_values(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::moebius;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn chi4() -> CoefficientSource {
        CoefficientSource::dirichlet(BuiltinCharacter::Mod4)
    }

    #[test]
    fn coeff_examples() {
        assert_eq!(CoefficientSource::Zeta.coeff(10).unwrap(), c(1.0));
        assert_eq!(chi4().coeff(3).unwrap(), c(-1.0));
        let delta = CoefficientSource::eigenform_with_limit(100);
        let a2 = delta.coeff(2).unwrap();
        assert!((a2.re - (-24.0 / 2f64.powf(5.5))).abs() < 1e-15);
        assert_eq!(CoefficientSource::Zeta.coeff(0), Err(CoefficientError::ZeroIndex));
        let e = CoefficientSource::explicit(vec![c(1.0), c(2.0)], false);
        assert_eq!(
            e.coeff(3),
            Err(CoefficientError::OutOfRange { index: 3, len: 2 })
        );
    }

    #[test]
    fn lift_coeff_examples() {
        assert_eq!(lift_coeff(&CoefficientSource::Zeta, 1, 7).unwrap(), c(1.0));
        let v = lift_coeff(&chi4(), 2, 9).unwrap();
        assert!((v - c(-3f64.sqrt())).norm() < 1e-15);
        assert_eq!(lift_coeff(&CoefficientSource::Zeta, 2, 6).unwrap(), c(0.0));
    }

    #[test]
    fn nested_lifts_collapse() {
        let l = CoefficientSource::lift(CoefficientSource::lift(chi4(), 2).unwrap(), 3).unwrap();
        assert_eq!(l.lift_order(), 6);
        assert_eq!(CoefficientSource::lift(chi4(), 1).unwrap(), chi4());
    }

    #[test]
    fn lifted_series_is_base_series_at_shifted_point() {
        // Σ_{m≤N} a_2(m) m^{-s} = Σ_{n≤√N} a(n) n^{-(2s - 1/2)}.
        let lifted = CoefficientSource::lift(chi4(), 2).unwrap();
        let s = Complex64::new(0.9, 3.7);
        let lhs = lifted.coefficients(10_000).unwrap().partial_sum(s);
        let base = chi4().coefficients(100).unwrap();
        let rhs = base.partial_sum(2.0 * s - 0.5);
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn audit_examples() {
        let z = ramanujan_audit(&CoefficientSource::Zeta, 10_000, 0.1).unwrap();
        assert_eq!(z.max_ratio, 1.0);
        assert_eq!(z.argmax, 1);
        assert!(!z.growth_flag);

        let lifted = CoefficientSource::lift(chi4(), 2).unwrap();
        let a = ramanujan_audit(&lifted, 10_000, 0.1).unwrap();
        let expected = 99f64.sqrt() / 9801f64.powf(0.1);
        assert_eq!(a.argmax, 9801);
        assert!((a.max_ratio - expected).abs() < 1e-12);
        assert!((a.max_ratio - 3.96).abs() < 0.01);
        assert!(a.growth_flag);
        assert_eq!(a.growth_exponent, 0.25);

        let e = CoefficientSource::explicit(vec![c(1.0), c(0.0), c(0.0)], false);
        assert_eq!(ramanujan_audit(&e, 3, 0.5).unwrap().max_ratio, 1.0);
    }

    #[test]
    fn euler_factor_examples() {
        assert_eq!(
            euler_factor(&CoefficientSource::Zeta, 2, 3).unwrap(),
            vec![c(1.0); 4]
        );
        assert_eq!(
            euler_factor(&chi4(), 2, 3).unwrap(),
            vec![c(1.0), c(0.0), c(0.0), c(0.0)]
        );
        let delta = CoefficientSource::eigenform_with_limit(100);
        let f = euler_factor(&delta, 2, 2).unwrap();
        assert!((f[1].re + 24.0 / 2f64.powf(5.5)).abs() < 1e-15);
        assert!((f[2].re + 1472.0 / 4f64.powf(5.5)).abs() < 1e-15);
        let e = CoefficientSource::explicit(vec![c(1.0)], false);
        assert_eq!(euler_factor(&e, 2, 1), Err(CoefficientError::NotMultiplicative));
        assert_eq!(
            euler_factor(&CoefficientSource::Zeta, 4, 1),
            Err(CoefficientError::NotPrime(4))
        );
    }

    #[test]
    fn inverse_examples() {
        let mu = dirichlet_inverse(&CoefficientSource::Zeta, 10).unwrap();
        let expect: Vec<Complex64> = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
            .iter()
            .map(|&v| c(v as f64))
            .collect();
        assert_eq!(mu.values(), expect.as_slice());

        let id = CoefficientSource::explicit(vec![c(1.0), c(0.0), c(0.0)], true);
        assert_eq!(
            dirichlet_inverse(&id, 3).unwrap(),
            DirichletSeries::identity(3)
        );

        let b = dirichlet_inverse(&chi4(), 50).unwrap();
        for n in 1..=50u64 {
            let expect = moebius(n) as f64 * chi4().coeff(n).unwrap().re;
            assert_eq!(b.get(n as usize), c(expect), "n={n}");
        }
        let zero_lead = CoefficientSource::explicit(vec![c(0.0), c(1.0)], false);
        assert!(dirichlet_inverse(&zero_lead, 2).is_err());
    }

    #[test]
    fn explicit_value_parsing() {
        let v = parse_explicit_values("1 0\n# comment\n\n-0.5 2\n3\n").unwrap();
        assert_eq!(v, vec![c(1.0), Complex64::new(-0.5, 2.0), c(3.0)]);
        let err = parse_explicit_values("1 0\n1 x\n").unwrap_err();
        assert!(matches!(err, CoefficientError::Parse { line: 2, .. }));
    }

    #[test]
    fn local_series_matches_direct_coefficients() {
        let delta = CoefficientSource::eigenform_with_limit(3000);
        let lifted = CoefficientSource::lift(chi4(), 2).unwrap();
        for src in [CoefficientSource::Zeta, chi4(), delta, lifted] {
            for p in [2u64, 3, 5, 7] {
                let depth = crate::arith::max_exponent(p as usize, 2000);
                let loc = src.local_series(p, depth).unwrap();
                for (m, v) in loc.iter().enumerate() {
                    let direct = src.local(p, m as u32).unwrap();
                    assert!((v - direct).norm() < 1e-12 * (1.0 + direct.norm()), "p={p} m={m}");
                }
            }
        }
        let e = CoefficientSource::explicit(vec![c(1.0), c(2.0), c(3.0), c(4.0)], true);
        assert_eq!(e.local_series(2, 3).unwrap(), vec![c(1.0), c(2.0), c(4.0), c(0.0)]);
    }

    #[test]
    fn deligne_bound_for_tau() {
        let delta = CoefficientSource::eigenform_with_limit(200);
        for p in crate::arith::primes_up_to(200) {
            // Normalized: |a(p)| ≤ 2.
            assert!(delta.coeff(p as u64).unwrap().norm() <= 2.0, "p={p}");
        }
    }
}
