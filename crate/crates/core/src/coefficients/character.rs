use std::f64::consts::PI;

use num_complex::Complex64;

use super::CoefficientError;
use crate::arith::gcd;
use crate::fe::GammaFactorData;

const ROOT_TOLERANCE: f64 = 1e-12;

/// A Dirichlet character stored as its table of values on residues `0..q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Complex64>,
    primitive: bool,
    odd: bool,
}

/// Primitive characters that ship with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinCharacter {
    Mod3,
    Mod4,
    /// The Legendre symbol mod 5 (even).
    Mod5Real,
    /// The odd quartic character mod 5 with `χ(2) = i`.
    Mod5Quartic,
    /// Its conjugate, `χ(2) = -i`.
    Mod5QuarticConj,
}

impl BuiltinCharacter {
    pub const ALL: [BuiltinCharacter; 5] = [
        BuiltinCharacter::Mod3,
        BuiltinCharacter::Mod4,
        BuiltinCharacter::Mod5Real,
        BuiltinCharacter::Mod5Quartic,
        BuiltinCharacter::Mod5QuarticConj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinCharacter::Mod3 => "mod3",
            BuiltinCharacter::Mod4 => "mod4",
            BuiltinCharacter::Mod5Real => "mod5-real",
            BuiltinCharacter::Mod5Quartic => "mod5-i",
            BuiltinCharacter::Mod5QuarticConj => "mod5-minus-i",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn character(self) -> DirichletCharacter {
        let r = |x: f64| Complex64::new(x, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let values = match self {
            BuiltinCharacter::Mod3 => vec![r(0.0), r(1.0), r(-1.0)],
            BuiltinCharacter::Mod4 => vec![r(0.0), r(1.0), r(0.0), r(-1.0)],
            BuiltinCharacter::Mod5Real => vec![r(0.0), r(1.0), r(-1.0), r(-1.0), r(1.0)],
            BuiltinCharacter::Mod5Quartic => vec![r(0.0), r(1.0), i, -i, r(-1.0)],
            BuiltinCharacter::Mod5QuarticConj => vec![r(0.0), r(1.0), -i, i, r(-1.0)],
        };
        let modulus = values.len() as u64;
        DirichletCharacter::new(modulus, values).expect("built-in character tables are valid")
    }
}

impl DirichletCharacter {
    /// Validates a value table: `χ(1) = 1`, zero off the units, unimodular
    /// and multiplicative on the units.
    pub fn new(modulus: u64, values: Vec<Complex64>) -> Result<Self, CoefficientError> {
        let invalid = |msg: String| Err(CoefficientError::InvalidCharacter(msg));
        if modulus == 0 || values.len() as u64 != modulus {
            return invalid(format!(
                "expected {modulus} values, got {}",
                values.len()
            ));
        }
        let q = modulus as usize;
        if modulus == 1 {
            if (values[0] - 1.0).norm() > ROOT_TOLERANCE {
                return invalid("the character mod 1 must be identically 1".into());
            }
            return Ok(Self {
                modulus,
                values,
                primitive: true,
                odd: false,
            });
        }
        if (values[1] - 1.0).norm() > ROOT_TOLERANCE {
            return invalid("χ(1) must equal 1".into());
        }
        let units: Vec<usize> = (1..q).filter(|&a| gcd(a as u64, modulus) == 1).collect();
        for a in 0..q {
            let unit = gcd(a as u64, modulus) == 1;
            let v = values[a];
            if !unit && v.norm() > 0.0 {
                return invalid(format!("χ({a}) must vanish since gcd({a}, {q}) > 1"));
            }
            if unit && (v.norm() - 1.0).abs() > ROOT_TOLERANCE {
                return invalid(format!("|χ({a})| = {} is not 1", v.norm()));
            }
        }
        for &a in &units {
            for &b in &units {
                let lhs = values[(a * b) % q];
                if (lhs - values[a] * values[b]).norm() > ROOT_TOLERANCE {
                    return invalid(format!("χ({a}·{b}) ≠ χ({a})χ({b})"));
                }
            }
            let phi = units.len() as i32;
            if (values[a].powi(phi) - 1.0).norm() > 1e-9 {
                return invalid(format!("χ({a}) is not a root of unity"));
            }
        }
        let minus_one = values[q - 1];
        let odd = (minus_one + 1.0).norm() < ROOT_TOLERANCE;
        if !odd && (minus_one - 1.0).norm() > ROOT_TOLERANCE {
            return invalid("χ(-1) must be ±1".into());
        }
        let primitive = (1..q as u64)
            .filter(|d| modulus % d == 0)
            .all(|d| {
                units
                    .iter()
                    .any(|&a| a as u64 % d == 1 % d && (values[a] - 1.0).norm() > ROOT_TOLERANCE)
            });
        Ok(Self {
            modulus,
            values,
            primitive,
            odd,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn conj(&self) -> Self {
        Self {
            modulus: self.modulus,
            values: self.values.iter().map(|v| v.conj()).collect(),
            primitive: self.primitive,
            odd: self.odd,
        }
    }

    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus as f64;
        (0..self.modulus)
            .map(|a| self.value(a) * Complex64::from_polar(1.0, 2.0 * PI * a as f64 / q))
            .sum()
    }

    /// Root number `τ(χ) / (i^a √q)` of a primitive character.
    pub fn root_number(&self) -> Complex64 {
        let ia = if self.odd {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let w = self.gauss_sum() / (ia * (self.modulus as f64).sqrt());
        // Renormalize away rounding so the data passes the unit-modulus check.
        w / w.norm()
    }

    pub fn gamma_data(&self) -> Result<GammaFactorData, CoefficientError> {
        if !self.primitive {
            return Err(CoefficientError::InvalidCharacter(
                "functional-equation data requires a primitive character".into(),
            ));
        }
        GammaFactorData::dirichlet(self.modulus, self.odd, self.root_number())
            .map_err(|e| CoefficientError::InvalidCharacter(e.to_string()))
    }
}
