//! Evaluation of the built-in L-functions, functional-equation residuals,
//! argument-principle zero counting, and the majorant, almost-period and
//! domination checks built on them.

mod checks;
mod eigenform;
mod lfunc;
mod special;
mod zeros;

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use thiserror::Error;

use crate::coefficients::{BuiltinCharacter, CoefficientSource, TauTable, DEFAULT_TAU_LIMIT};
use crate::fe::GammaFactorData;

pub use checks::{
    almost_period_defect, almost_period_find, domination_witness, majorant_check,
    pl_propagation_check, AlmostPeriodResult, DominationGrid, DominationReport, DominationRow,
    MajorantGrid, MajorantReport, PiecewiseLinear, PlReport, Witness,
};
pub use eigenform::rotation_angle;
pub use lfunc::{dirichlet_l, hurwitz_zeta, zeta, Bounded};
pub use special::{bernoulli_even, bernoulli_exact, complex_gamma, exprel, ln_gamma};
pub use zeros::{
    count_zeros, density_probe, locate_zeros, zero_set_compare, DensityRow, LocatedZero,
    Rectangle, ZeroCountResult, ZeroSetReport, DENSITY_SIGMA_MAX, MATCH_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("Γ has a pole at {0}")]
    GammaPole(Complex64),
    #[error("{s} is within {distance:e} of a pole")]
    PoleProximity { s: Complex64, distance: f64 },
    #[error("{s} lies outside the evaluation window {window}")]
    OutsideWindow { s: Complex64, window: Window },
    #[error("τ table has {limit} entries, {needed} needed")]
    TableTooShort { needed: usize, limit: usize },
    #[error("theta integral failed to converge at {0}")]
    NoConvergence(Complex64),
    #[error("contour passes through a zero near {0} after every nudge")]
    ContourThroughZero(Complex64),
    #[error("winding number {0} is not within 0.05 of an integer")]
    NonIntegralWinding(f64),
    #[error("negative zero count {0} after pole correction")]
    NegativeCount(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Region where evaluation error bounds hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_max: f64,
}

impl Window {
    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im.abs() <= self.t_max
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ≤ σ ≤ {}, |t| ≤ {}",
            self.sigma_min, self.sigma_max, self.t_max
        )
    }
}

/// Degree-one built-ins: Euler–Maclaurin is sized by `|s|`, so the window
/// extends in `t` well past the zero-counting range.
pub const DEGREE_ONE_WINDOW: Window = Window {
    sigma_min: -1.0,
    sigma_max: 3.0,
    t_max: 1000.0,
};

pub const EIGENFORM_WINDOW: Window = Window {
    sigma_min: -1.0,
    sigma_max: 3.0,
    t_max: 100.0,
};

/// `ζ` is rejected this close to its pole.
pub const POLE_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Zeta,
    Dirichlet(BuiltinCharacter),
    /// Δ, weight 12, level 1, unitary normalization.
    Eigenform,
}

fn tau_table() -> &'static Arc<TauTable> {
    static TABLE: OnceLock<Arc<TauTable>> = OnceLock::new();
    TABLE.get_or_init(|| Arc::new(TauTable::new(DEFAULT_TAU_LIMIT)))
}

impl Builtin {
    pub fn name(&self) -> String {
        match self {
            Builtin::Zeta => "zeta".into(),
            Builtin::Dirichlet(c) => format!("dirichlet-{}", c.name()),
            Builtin::Eigenform => "delta".into(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "zeta" => Some(Builtin::Zeta),
            "delta" | "eigenform" => Some(Builtin::Eigenform),
            other => other
                .strip_prefix("dirichlet-")
                .and_then(BuiltinCharacter::from_name)
                .map(Builtin::Dirichlet),
        }
    }

    pub fn gamma_data(&self) -> GammaFactorData {
        match self {
            Builtin::Zeta => GammaFactorData::zeta(),
            Builtin::Dirichlet(c) => c
                .character()
                .gamma_data()
                .expect("built-in characters are primitive"),
            Builtin::Eigenform => GammaFactorData::level_one_eigenform(12),
        }
    }

    pub fn source(&self) -> CoefficientSource {
        match self {
            Builtin::Zeta => CoefficientSource::Zeta,
            Builtin::Dirichlet(c) => CoefficientSource::dirichlet(*c),
            Builtin::Eigenform => CoefficientSource::Eigenform(tau_table().clone()),
        }
    }

    pub fn window(&self) -> Window {
        match self {
            Builtin::Eigenform => EIGENFORM_WINDOW,
            _ => DEGREE_ONE_WINDOW,
        }
    }

    pub fn pole_order(&self) -> u32 {
        match self {
            Builtin::Zeta => 1,
            _ => 0,
        }
    }
}

/// A value with an error estimate; certified for the degree-one built-ins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluablePoint {
    pub s: Complex64,
    pub value: Complex64,
    pub est_abs_error: f64,
}

fn check_window(builtin: Builtin, s: Complex64) -> Result<(), AnalyticError> {
    let window = builtin.window();
    if !window.contains(s) {
        return Err(AnalyticError::OutsideWindow { s, window });
    }
    if builtin == Builtin::Zeta && (s - 1.0).norm() < POLE_EXCLUSION {
        return Err(AnalyticError::PoleProximity {
            s,
            distance: (s - 1.0).norm(),
        });
    }
    Ok(())
}

/// `Q^s Π Γ(λ_j s + μ_j)`.
pub fn gamma_factor(data: &GammaFactorData, s: Complex64) -> Result<Complex64, AnalyticError> {
    Ok(ln_gamma_factor(data, s)?.exp())
}

fn ln_gamma_factor(data: &GammaFactorData, s: Complex64) -> Result<Complex64, AnalyticError> {
    let mut acc = s * data.q().ln();
    for (&l, &m) in data.lambda().iter().zip(data.mu()) {
        acc += ln_gamma(s * l + m)?;
    }
    Ok(acc)
}

pub fn evaluate(builtin: Builtin, s: Complex64) -> Result<EvaluablePoint, AnalyticError> {
    check_window(builtin, s)?;
    let b = match builtin {
        Builtin::Zeta => zeta(s),
        Builtin::Dirichlet(c) => dirichlet_l(&c.character(), s),
        Builtin::Eigenform => {
            let lam = eigenform::completed_delta(tau_table(), s)?;
            let gamma = gamma_factor(&builtin.gamma_data(), s)?;
            Bounded {
                value: lam.value / gamma,
                error: lam.error / gamma.norm(),
            }
        }
    };
    Ok(EvaluablePoint {
        s,
        value: b.value,
        est_abs_error: b.error,
    })
}

/// Something that can be evaluated on a region of the complex plane.
pub trait Evaluable: Sync {
    fn eval(&self, s: Complex64) -> Result<Complex64, AnalyticError>;

    /// Poles with their orders.
    fn poles(&self) -> Vec<(Complex64, u32)> {
        Vec::new()
    }

    fn label(&self) -> String;
}

impl Evaluable for Builtin {
    fn eval(&self, s: Complex64) -> Result<Complex64, AnalyticError> {
        Ok(evaluate(*self, s)?.value)
    }

    fn poles(&self) -> Vec<(Complex64, u32)> {
        match self.pole_order() {
            0 => Vec::new(),
            m => vec![(Complex64::new(1.0, 0.0), m)],
        }
    }

    fn label(&self) -> String {
        self.name()
    }
}

type EvalFn = dyn Fn(Complex64) -> Result<Complex64, AnalyticError> + Send + Sync;

/// An evaluable defined by a closure.
pub struct Custom {
    label: String,
    f: Box<EvalFn>,
    poles: Vec<(Complex64, u32)>,
}

impl Custom {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(Complex64) -> Result<Complex64, AnalyticError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            f: Box::new(f),
            poles: Vec::new(),
        }
    }

    pub fn with_poles(mut self, poles: Vec<(Complex64, u32)>) -> Self {
        self.poles = poles;
        self
    }

    /// `z ↦ c`.
    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("const({c})"), move |_| Ok(c))
    }

    /// `n^{-s}`.
    pub fn monomial(n: f64) -> Self {
        Self::new(format!("{n}^-s"), move |s| Ok((-s * n.ln()).exp()))
    }
}

impl Evaluable for Custom {
    fn eval(&self, s: Complex64) -> Result<Complex64, AnalyticError> {
        (self.f)(s)
    }

    fn poles(&self) -> Vec<(Complex64, u32)> {
        self.poles.clone()
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeResidual {
    /// `|Λ(s) - ω conj Λ(1 - s̄)|`.
    pub absolute: f64,
    /// The same difference divided by `|Q^s Π Γ(λ_j s + μ_j)|`, i.e. measured
    /// on the scale of `F(s)`.
    pub scaled: f64,
    pub lambda: Complex64,
    pub reflected: Complex64,
}

/// Residual of the functional equation for `data` applied to a built-in.
pub fn fe_residual(
    data: &GammaFactorData,
    builtin: Builtin,
    s: Complex64,
) -> Result<FeResidual, AnalyticError> {
    let r = 1.0 - s.conj();
    for z in [s, r] {
        for (&l, &m) in data.lambda().iter().zip(data.mu()) {
            let arg = z * l + m;
            if arg.re <= 0.5 && arg.im.abs() < 1e-8 && (arg.re - arg.re.round()).abs() < 1e-8 {
                return Err(AnalyticError::GammaPole(arg));
            }
        }
    }
    let lg_s = ln_gamma_factor(data, s)?;
    let lg_r = ln_gamma_factor(data, r)?;
    let fs = evaluate(builtin, s)?.value;
    let fr = evaluate(builtin, r)?.value;
    let lambda = lg_s.exp() * fs;
    let reflected = data.omega() * (lg_r.exp() * fr).conj();
    let diff = lambda - reflected;
    // Scaled form avoids under/overflow of the Γ factors.
    let ratio = (lg_r.conj() - lg_s).exp();
    let scaled = (fs - data.omega() * ratio * fr.conj()).norm();
    Ok(FeResidual {
        absolute: diff.norm(),
        scaled,
        lambda,
        reflected,
    })
}

/// `Λ(s)` with the built-in's own data.
pub fn completed(builtin: Builtin, s: Complex64) -> Result<Complex64, AnalyticError> {
    let data = builtin.gamma_data();
    Ok(gamma_factor(&data, s)? * evaluate(builtin, s)?.value)
}

/// `(T/2π) log(T/(2πe)) + 7/8`, the smooth part of the zero count of ζ.
pub fn zeta_smooth_count(t: f64) -> f64 {
    t / (2.0 * PI) * (t / (2.0 * PI * std::f64::consts::E)).ln() + 0.875
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluator_examples() {
        let z2 = evaluate(Builtin::Zeta, c(2.0, 0.0)).unwrap();
        assert!((z2.value - PI * PI / 6.0).norm() < 1e-10);
        let l1 = evaluate(Builtin::Dirichlet(BuiltinCharacter::Mod4), c(1.0, 0.0)).unwrap();
        assert!((l1.value - PI / 4.0).norm() < 1e-10);
        let z0 = evaluate(Builtin::Zeta, c(0.0, 0.0)).unwrap();
        assert!((z0.value + 0.5).norm() < 1e-12);
        assert!(matches!(
            evaluate(Builtin::Zeta, c(1.0, 1e-8)),
            Err(AnalyticError::PoleProximity { .. })
        ));
        assert!(matches!(
            evaluate(Builtin::Eigenform, c(0.5, 150.0)),
            Err(AnalyticError::OutsideWindow { .. })
        ));
    }

    #[test]
    fn builtin_names_round_trip() {
        let all = [
            Builtin::Zeta,
            Builtin::Eigenform,
            Builtin::Dirichlet(BuiltinCharacter::Mod4),
            Builtin::Dirichlet(BuiltinCharacter::Mod5Quartic),
        ];
        for b in all {
            assert_eq!(Builtin::from_name(&b.name()), Some(b));
        }
        assert_eq!(Builtin::from_name("nope"), None);
    }

    #[test]
    fn fe_residual_examples() {
        let z = fe_residual(&GammaFactorData::zeta(), Builtin::Zeta, c(0.7, 5.0)).unwrap();
        assert!(z.absolute < 1e-8 && z.scaled < 1e-10, "{z:?}");
        let chi = Builtin::Dirichlet(BuiltinCharacter::Mod4);
        let r = fe_residual(&chi.gamma_data(), chi, c(0.6, 3.0)).unwrap();
        assert!(r.absolute < 1e-8 && r.scaled < 1e-10, "{r:?}");
        let wrong = chi.gamma_data().with_omega(-chi.gamma_data().omega()).unwrap();
        let w = fe_residual(&wrong, chi, c(0.6, 3.0)).unwrap();
        assert!((w.absolute - 2.0 * w.lambda.norm()).abs() < 1e-8);
    }

    #[test]
    fn complex_characters_satisfy_their_functional_equation() {
        for ch in [BuiltinCharacter::Mod5Quartic, BuiltinCharacter::Mod5QuarticConj] {
            let b = Builtin::Dirichlet(ch);
            for s in [c(0.3, 4.0), c(-0.5, -17.0), c(1.8, 40.0)] {
                let r = fe_residual(&b.gamma_data(), b, s).unwrap();
                assert!(r.scaled < 1e-9, "{} at {s}: {r:?}", b.name());
            }
        }
    }

    #[test]
    fn eigenform_functional_equation() {
        let b = Builtin::Eigenform;
        for s in [c(0.5, 10.0), c(-0.9, 70.0), c(2.0, -33.0)] {
            let r = fe_residual(&b.gamma_data(), b, s).unwrap();
            assert!(r.scaled < 1e-7, "{s}: {r:?}");
        }
    }

    #[test]
    fn smooth_count_values() {
        assert!((zeta_smooth_count(50.0) - 9.42).abs() < 0.01);
    }
}
