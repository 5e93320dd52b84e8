//! Binary fixed-point reals with `FRAC_BITS` fractional bits.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub const FRAC_BITS: u32 = 320;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_raw(raw: BigInt) -> Self {
        Fixed(raw)
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Fixed(n.into() << FRAC_BITS)
    }

    /// Exact conversion; non-finite input maps to zero.
    pub fn from_f64(x: f64) -> Self {
        if !x.is_finite() || x == 0.0 {
            return Self::zero();
        }
        let bits = x.abs().to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let (mant, e) = if exp == 0 {
            (bits & ((1 << 52) - 1), -1074)
        } else {
            ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
        };
        let shift = e + FRAC_BITS as i64;
        let m = BigInt::from(mant);
        let raw = if shift >= 0 {
            m << shift as usize
        } else {
            round_shift(&m, (-shift) as u32)
        };
        Fixed(if x < 0.0 { -raw } else { raw })
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.0.bits();
        // Keep 64 significant bits before converting.
        let drop = bits.saturating_sub(64) as u32;
        let top = (&self.0 >> drop).to_f64().unwrap_or(0.0);
        top * 2f64.powi(drop as i32 - FRAC_BITS as i32)
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        round_shift(&self.0, FRAC_BITS)
    }

    /// `x - round(x)`, in `[-1/2, 1/2]`.
    pub fn centered_frac(&self) -> Fixed {
        self.clone() - Fixed::from_int(self.round())
    }

    /// Distance to the nearest integer.
    pub fn dist_to_int(&self) -> f64 {
        self.centered_frac().to_f64().abs()
    }

    /// `x · 2^{bits - FRAC_BITS}` rounded to an integer, i.e. `round(x · 2^bits)`.
    pub fn scaled(&self, bits: u32) -> BigInt {
        if bits >= FRAC_BITS {
            &self.0 << (bits - FRAC_BITS)
        } else {
            round_shift(&self.0, FRAC_BITS - bits)
        }
    }

    pub fn div_int(&self, d: i64) -> Fixed {
        Fixed(div_round(&self.0, &BigInt::from(d)))
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        Fixed(div_round(&(&self.0 << FRAC_BITS), &other.0))
    }

    pub fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

fn round_shift(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (bits - 1);
    if x.is_negative() {
        -((-x + half) >> bits)
    } else {
        (x + half) >> bits
    }
}

/// `n / d` rounded to nearest, ties upward.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (n, d) = if d.is_negative() {
        (-n, -d)
    } else {
        (n.clone(), d.clone())
    };
    let num: BigInt = n * 2 + &d;
    num.div_floor(&(d * 2))
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, o: Fixed) -> Fixed {
        Fixed(self.0 + o.0)
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, o: Fixed) -> Fixed {
        Fixed(self.0 - o.0)
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-self.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, o: &Fixed) -> Fixed {
        Fixed(round_shift(&(&self.0 * &o.0), FRAC_BITS))
    }
}

impl Mul<i64> for &Fixed {
    type Output = Fixed;
    fn mul(self, k: i64) -> Fixed {
        Fixed(&self.0 * k)
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed({})", self.to_f64())
    }
}

impl fmt::Display for Fixed {
    /// Integer part and 30 decimal places.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.0.is_negative();
        let a = self.0.abs();
        let int = &a >> FRAC_BITS;
        let frac = &a - (&int << FRAC_BITS);
        let digits = round_shift(&(frac * BigInt::from(10u8).pow(30)), FRAC_BITS);
        let (int, digits) = if digits >= BigInt::from(10u8).pow(30) {
            (int + 1, BigInt::zero())
        } else {
            (int, digits)
        };
        write!(f, "{}{}.{:0>30}", if neg { "-" } else { "" }, int, digits)
    }
}

/// `Σ_{j≥0} z^{2j+1}/(2j+1)` for `|z| ≤ 1/2` given as a fixed-point value.
fn atanh_small(z: &Fixed) -> Fixed {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut j = 1i64;
    loop {
        power = &power * &z2;
        if power.0.is_zero() {
            break;
        }
        sum = sum + power.div_int(2 * j + 1);
        j += 1;
    }
    sum
}

/// `atan(1/x)` for an integer `x ≥ 2`.
fn atan_inv(x: i64) -> Fixed {
    let x2 = BigInt::from(x) * x;
    let mut power = Fixed(div_round(&(BigInt::one() << FRAC_BITS), &BigInt::from(x)));
    let mut sum = power.clone();
    let mut j = 1i64;
    loop {
        power = Fixed(div_round(&power.0, &x2));
        if power.0.is_zero() {
            break;
        }
        let term = power.div_int(2 * j + 1);
        sum = if j % 2 == 1 { sum - term } else { sum + term };
        j += 1;
    }
    sum
}

pub fn pi() -> &'static Fixed {
    static PI: OnceLock<Fixed> = OnceLock::new();
    PI.get_or_init(|| &atan_inv(5) * 16 - &atan_inv(239) * 4)
}

pub fn ln2() -> &'static Fixed {
    static LN2: OnceLock<Fixed> = OnceLock::new();
    LN2.get_or_init(|| &atanh_small(&Fixed::from_int(1).div_int(3)) * 2)
}

/// `ln n` for `n ≥ 1`, cached.
pub fn ln_u64(n: u64) -> Fixed {
    assert!(n >= 1, "ln of zero");
    static CACHE: OnceLock<Mutex<HashMap<u64, Fixed>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache lock").get(&n) {
        return v.clone();
    }
    // n = 2^e · r with r ∈ [1, 2); ln r = 2 atanh((r-1)/(r+1)).
    let e = 63 - n.leading_zeros() as i64;
    let pow = BigInt::from_u64(1).unwrap() << e as usize;
    let num = BigInt::from(n) - &pow;
    let den = BigInt::from(n) + &pow;
    let z = Fixed(div_round(&(num << FRAC_BITS), &den));
    let value = &*ln2() * e + &atanh_small(&z) * 2;
    cache.lock().expect("cache lock").insert(n, value.clone());
    value
}

/// `-ln n / (2π)`.
pub fn log_phase(n: u64) -> Fixed {
    (-ln_u64(n)).div(&(&*pi() * 2))
}
