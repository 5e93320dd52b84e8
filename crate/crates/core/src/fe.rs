//! Functional-equation data `(Q, λ, μ, ω)` of
//! `Q^s Π Γ(λ_j s + μ_j) F(s) = ω Q^{1-s} Π Γ(λ_j (1-s) + conj μ_j) conj F(1 - conj s)`,
//! the invariants it determines, and the `k`-lift `F(s) ↦ F(ks + (1-k)/2)`.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance applied when validating `|ω| = 1`.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeError {
    #[error("Q must be positive and finite, got {0}")]
    NonPositiveQ(f64),
    #[error("at least one gamma factor is required")]
    NoGammaFactors,
    #[error("lambda and mu lengths differ ({lambda} vs {mu})")]
    LengthMismatch { lambda: usize, mu: usize },
    #[error("lambda[{index}] = {value} is not a positive finite number")]
    NonPositiveLambda { index: usize, value: f64 },
    #[error("mu[{index}] is not finite")]
    NonFiniteMu { index: usize },
    #[error("|omega| = {0} differs from 1 by more than {UNIT_TOLERANCE:e}")]
    OmegaNotUnit(f64),
    #[error("lift order must be at least 1")]
    ZeroLiftOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactorData {
    q: f64,
    lambda: Vec<f64>,
    mu: Vec<Complex64>,
    omega: Complex64,
    pole_order: u32,
    pole_displaced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelbergInvariants {
    pub degree: f64,
    pub conductor: f64,
    pub b_invariant: f64,
}

/// Both routes to the degree and conductor of a lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftLawReport {
    pub k: u32,
    pub degree_direct: f64,
    pub degree_law: f64,
    pub conductor_direct: f64,
    pub conductor_law: f64,
    pub degree_diff: f64,
    pub conductor_diff: f64,
}

impl LiftLawReport {
    pub fn conductor_rel_diff(&self) -> f64 {
        self.conductor_diff / self.conductor_law.abs()
    }

    pub fn degree_rel_diff(&self) -> f64 {
        if self.degree_law == 0.0 {
            self.degree_diff
        } else {
            self.degree_diff / self.degree_law.abs()
        }
    }
}

impl GammaFactorData {
    pub fn new(
        q: f64,
        lambda: Vec<f64>,
        mu: Vec<Complex64>,
        omega: Complex64,
        pole_order: u32,
    ) -> Result<Self, FeError> {
        if !(q.is_finite() && q > 0.0) {
            return Err(FeError::NonPositiveQ(q));
        }
        if lambda.is_empty() {
            return Err(FeError::NoGammaFactors);
        }
        if lambda.len() != mu.len() {
            return Err(FeError::LengthMismatch {
                lambda: lambda.len(),
                mu: mu.len(),
            });
        }
        if let Some((index, &value)) = lambda
            .iter()
            .enumerate()
            .find(|(_, l)| !(l.is_finite() && **l > 0.0))
        {
            return Err(FeError::NonPositiveLambda { index, value });
        }
        if let Some(index) = mu.iter().position(|m| !(m.re.is_finite() && m.im.is_finite())) {
            return Err(FeError::NonFiniteMu { index });
        }
        if (omega.norm() - 1.0).abs() > UNIT_TOLERANCE {
            return Err(FeError::OmegaNotUnit(omega.norm()));
        }
        Ok(Self {
            q,
            lambda,
            mu,
            omega,
            pole_order,
            pole_displaced: false,
        })
    }

    /// `ζ(s)`: `Q = π^{-1/2}`, one factor `Γ(s/2)`, simple pole at 1.
    pub fn zeta() -> Self {
        Self::new(
            std::f64::consts::PI.powf(-0.5),
            vec![0.5],
            vec![Complex64::new(0.0, 0.0)],
            Complex64::new(1.0, 0.0),
            1,
        )
        .expect("built-in data is valid")
    }

    /// Primitive Dirichlet `L(s, χ)` with `χ(-1) = (-1)^a`, root number `omega`.
    pub fn dirichlet(modulus: u64, odd: bool, omega: Complex64) -> Result<Self, FeError> {
        let a = if odd { 0.5 } else { 0.0 };
        Self::new(
            (modulus as f64 / std::f64::consts::PI).sqrt(),
            vec![0.5],
            vec![Complex64::new(a, 0.0)],
            omega,
            0,
        )
    }

    /// Level-one holomorphic eigenform of even weight `K`, normalized so the
    /// functional equation reflects `s ↦ 1 - s`: one factor `Γ(s + (K-1)/2)`.
    pub fn level_one_eigenform(weight: u32) -> Self {
        let sign = if weight % 4 == 0 { 1.0 } else { -1.0 };
        Self::new(
            1.0 / (2.0 * std::f64::consts::PI),
            vec![1.0],
            vec![Complex64::new((weight as f64 - 1.0) / 2.0, 0.0)],
            Complex64::new(sign, 0.0),
            0,
        )
        .expect("built-in data is valid")
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    /// Set on lifts with `k ≥ 2` of data carrying a pole: the lifted pole is
    /// no longer at `s = 1`.
    pub fn pole_displaced(&self) -> bool {
        self.pole_displaced
    }

    /// `Re μ_j ≥ 0` for every factor.
    pub fn sharp_admissible(&self) -> bool {
        self.mu.iter().all(|m| m.re >= 0.0)
    }

    pub fn with_omega(&self, omega: Complex64) -> Result<Self, FeError> {
        let mut out = Self::new(
            self.q,
            self.lambda.clone(),
            self.mu.clone(),
            omega,
            self.pole_order,
        )?;
        out.pole_displaced = self.pole_displaced;
        Ok(out)
    }

    pub fn invariants(&self) -> SelbergInvariants {
        SelbergInvariants {
            degree: degree(self),
            conductor: conductor(self),
            b_invariant: b_invariant(self),
        }
    }
}

/// `d = 2 Σ λ_j`.
pub fn degree(data: &GammaFactorData) -> f64 {
    2.0 * data.lambda.iter().sum::<f64>()
}

/// `q = (2π)^d Q² Π λ_j^{2λ_j}`, evaluated in logarithms.
pub fn conductor(data: &GammaFactorData) -> f64 {
    let d = degree(data);
    let log_q = d * (2.0 * std::f64::consts::PI).ln()
        + 2.0 * data.q.ln()
        + data
            .lambda
            .iter()
            .map(|&l| 2.0 * l * l.ln())
            .sum::<f64>();
    log_q.exp()
}

/// `B_F = 2 min_j Re μ_j / λ_j + 1`.
pub fn b_invariant(data: &GammaFactorData) -> f64 {
    let m = data
        .lambda
        .iter()
        .zip(&data.mu)
        .map(|(&l, m)| m.re / l)
        .fold(f64::INFINITY, f64::min);
    2.0 * m + 1.0
}

/// Data of `F_k(s) = F(ks + (1-k)/2)`: `(Q^k, kλ, μ + (1-k)/2 λ, ω)`.
pub fn lift_data(data: &GammaFactorData, k: u32) -> Result<GammaFactorData, FeError> {
    if k == 0 {
        return Err(FeError::ZeroLiftOrder);
    }
    if k == 1 {
        return Ok(data.clone());
    }
    let kf = k as f64;
    let shift = (1.0 - kf) / 2.0;
    Ok(GammaFactorData {
        q: data.q.powi(k as i32),
        lambda: data.lambda.iter().map(|l| kf * l).collect(),
        mu: data
            .mu
            .iter()
            .zip(&data.lambda)
            .map(|(m, l)| m + shift * l)
            .collect(),
        omega: data.omega,
        pole_order: data.pole_order,
        pole_displaced: data.pole_displaced || data.pole_order > 0,
    })
}

/// Whether the `k`-lift stays inside the extended class: `k ≤ B_F`, and the
/// function must be entire as soon as `k ≥ 2`.
pub fn lift_admissible(data: &GammaFactorData, entire: bool, k: u32) -> bool {
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    entire && (k as f64) <= b_invariant(data)
}

/// Compares degree/conductor of the lifted data with `k d_F` and `q_F^k k^{k d_F}`.
pub fn check_lift_laws(data: &GammaFactorData, k: u32) -> Result<LiftLawReport, FeError> {
    let lifted = lift_data(data, k)?;
    let kf = k as f64;
    let d = degree(data);
    let q = conductor(data);
    let degree_direct = degree(&lifted);
    let conductor_direct = conductor(&lifted);
    let degree_law = kf * d;
    let conductor_law = (kf * q.ln() + kf * d * kf.ln()).exp();
    Ok(LiftLawReport {
        k,
        degree_direct,
        degree_law,
        conductor_direct,
        conductor_law,
        degree_diff: (degree_direct - degree_law).abs(),
        conductor_diff: (conductor_direct - conductor_law).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn chi4() -> GammaFactorData {
        GammaFactorData::dirichlet(4, true, re(1.0)).unwrap()
    }

    fn delta() -> GammaFactorData {
        GammaFactorData::level_one_eigenform(12)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&GammaFactorData::zeta()), 1.0);
        assert_eq!(degree(&delta()), 2.0);
        let two_halves =
            GammaFactorData::new(1.0, vec![0.5, 0.5], vec![re(0.0), re(0.5)], re(1.0), 0).unwrap();
        assert_eq!(degree(&two_halves), 2.0);
    }

    #[test]
    fn conductor_examples() {
        assert!(close(conductor(&GammaFactorData::zeta()), 1.0, 1e-12));
        for q in [3u64, 4, 5, 7, 11] {
            let data = GammaFactorData::dirichlet(q, q % 2 == 1, re(1.0)).unwrap();
            assert!(close(conductor(&data), q as f64, 1e-12), "q={q}");
        }
        assert!(close(conductor(&delta()), 1.0, 1e-12));
    }

    #[test]
    fn b_invariant_examples() {
        assert_eq!(b_invariant(&GammaFactorData::zeta()), 1.0);
        assert_eq!(b_invariant(&delta()), 12.0);
        assert_eq!(b_invariant(&chi4()), 3.0);
    }

    #[test]
    fn lift_examples() {
        let d = delta();
        assert_eq!(lift_data(&d, 1).unwrap(), d);
        let l2 = lift_data(&d, 2).unwrap();
        assert!(close(l2.q(), (2.0 * PI).powi(-2), 1e-15));
        assert_eq!(l2.lambda(), &[2.0]);
        assert_eq!(l2.mu(), &[re(5.0)]);
        assert_eq!(l2.omega(), d.omega());

        let z2 = lift_data(&GammaFactorData::zeta(), 2).unwrap();
        assert_eq!(z2.mu(), &[re(-0.25)]);
        assert!(!z2.sharp_admissible());
        assert!(z2.pole_displaced());
        assert_eq!(z2.pole_order(), 1);
    }

    #[test]
    fn admissibility_examples() {
        assert!(!lift_admissible(&GammaFactorData::zeta(), false, 2));
        assert!(lift_admissible(&chi4(), true, 2));
        assert!(lift_admissible(&chi4(), true, 3));
        assert!(!lift_admissible(&chi4(), true, 4));
        assert!(!lift_admissible(&chi4(), false, 2));
        assert!(lift_admissible(&GammaFactorData::zeta(), false, 1));
        assert!(lift_admissible(&delta(), true, 12));
        assert!(!lift_admissible(&delta(), true, 13));
    }

    #[test]
    fn lift_law_examples() {
        let r = check_lift_laws(&delta(), 2).unwrap();
        assert!(close(r.conductor_direct, 16.0, 1e-12));
        assert!(close(r.conductor_law, 16.0, 1e-12));
        assert!(r.conductor_rel_diff() < 1e-12);

        let r1 = check_lift_laws(&chi4(), 1).unwrap();
        assert_eq!(r1.degree_diff, 0.0);
        assert_eq!(r1.conductor_diff, 0.0);

        let r3 = check_lift_laws(&chi4(), 3).unwrap();
        assert!(close(r3.degree_direct, 3.0, 1e-12));
        assert!(close(r3.conductor_direct, 1728.0, 1e-12));
        assert!(close(r3.conductor_law, 1728.0, 1e-12));
    }

    #[test]
    fn duplication_preserves_b_invariant() {
        let mu0 = 5.5;
        let split = GammaFactorData::new(
            1.0,
            vec![0.5, 0.5],
            vec![re(mu0 / 2.0), re((mu0 + 1.0) / 2.0)],
            re(1.0),
            0,
        )
        .unwrap();
        assert_eq!(b_invariant(&split), b_invariant(&delta()));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            GammaFactorData::new(1.0, vec![], vec![], re(1.0), 0),
            Err(FeError::NoGammaFactors)
        );
        assert!(matches!(
            GammaFactorData::new(1.0, vec![0.5], vec![re(0.0)], re(1.0 + 1e-9), 0),
            Err(FeError::OmegaNotUnit(_))
        ));
        assert!(matches!(
            GammaFactorData::new(1.0, vec![-0.5], vec![re(0.0)], re(1.0), 0),
            Err(FeError::NonPositiveLambda { index: 0, .. })
        ));
        assert!(matches!(
            GammaFactorData::new(0.0, vec![0.5], vec![re(0.0)], re(1.0), 0),
            Err(FeError::NonPositiveQ(_))
        ));
        assert_eq!(
            lift_data(&GammaFactorData::zeta(), 0),
            Err(FeError::ZeroLiftOrder)
        );
    }
}
