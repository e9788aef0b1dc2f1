use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{checked_pow, max_exponent, pow_u64};
use crate::error::{Error, Result};

/// An exact element `num / p^exp mod 1` of the torus with a p-power
/// denominator.
///
/// Values are kept reduced: `0 <= num < p^exp` and `p` does not divide `num`
/// unless the value is zero, in which case `num = exp = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusValue {
    p: u32,
    exp: u32,
    num: u64,
}

/// JSON form `{"num": int, "exp": int}`; the prime comes from context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusJson {
    pub num: i64,
    pub exp: u32,
}

impl TorusValue {
    #[inline]
    pub fn zero(p: u32) -> Self {
        Self { p, exp: 0, num: 0 }
    }

    /// `num / p^exp mod 1`, reduced. `num` may be any integer.
    pub fn new(p: u32, num: i64, exp: u32) -> Result<Self> {
        if exp > max_exponent(p) {
            return Err(Error::ExponentOverflow { p, exp });
        }
        let modulus = checked_pow(p, exp)?;
        let n = (num as i128).rem_euclid(modulus as i128) as u64;
        Ok(Self::from_reduced_parts(p, n, exp))
    }

    /// Builds from a numerator already in `[0, p^exp)`.
    #[inline]
    pub fn from_parts(p: u32, num: u64, exp: u32) -> Self {
        debug_assert!(num < pow_u64(p, exp));
        Self::from_reduced_parts(p, num, exp)
    }

    #[inline]
    fn from_reduced_parts(p: u32, mut num: u64, mut exp: u32) -> Self {
        if num == 0 {
            return Self::zero(p);
        }
        while exp > 0 && num.is_multiple_of(p as u64) {
            num /= p as u64;
            exp -= 1;
        }
        Self { p, exp, num }
    }

    /// `iota(j) = j/p mod 1`.
    pub fn iota(p: u32, j: i64) -> Self {
        Self::new(p, j, 1).expect("exponent 1 always fits")
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn num(&self) -> u64 {
        self.num
    }
    #[inline]
    pub fn exp(&self) -> u32 {
        self.exp
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Numerator of this value over the denominator `p^exp`, for
    /// `exp >= self.exp()`.
    #[inline]
    pub fn numerator_at(&self, exp: u32) -> u64 {
        debug_assert!(exp >= self.exp);
        self.num * pow_u64(self.p, exp - self.exp)
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::MismatchedPrime(self.p, other.p));
        }
        let e = self.exp.max(other.exp);
        let m = pow_u64(self.p, e);
        let s = (self.numerator_at(e) + other.numerator_at(e)) % m;
        Ok(Self::from_reduced_parts(self.p, s, e))
    }

    pub fn neg(self) -> Self {
        if self.num == 0 {
            return self;
        }
        Self {
            num: pow_u64(self.p, self.exp) - self.num,
            ..self
        }
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.checked_add(other.neg())
    }

    /// Exact `n * self mod 1`.
    pub fn scale(self, n: i64) -> Self {
        if self.num == 0 {
            return self;
        }
        let m = pow_u64(self.p, self.exp) as i128;
        let v = ((self.num as i128) * (n as i128).rem_euclid(m)).rem_euclid(m) as u64;
        Self::from_reduced_parts(self.p, v, self.exp)
    }

    /// The canonical p-th root `num / p^(exp+1)` (numerator preserved).
    pub fn pth_root(self) -> Result<Self> {
        if self.num == 0 {
            return Ok(self);
        }
        if self.exp + 1 > max_exponent(self.p) {
            return Err(Error::ExponentOverflow {
                p: self.p,
                exp: self.exp + 1,
            });
        }
        Ok(Self {
            exp: self.exp + 1,
            ..self
        })
    }

    /// True iff the value lies in `iota(F_p) = (1/p)Z/Z`.
    #[inline]
    pub fn is_classical(&self) -> bool {
        self.exp <= 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / pow_u64(self.p, self.exp) as f64
    }

    pub fn to_json(&self) -> TorusJson {
        TorusJson {
            num: self.num as i64,
            exp: self.exp,
        }
    }

    pub fn from_json(p: u32, j: TorusJson) -> Result<Self> {
        Self::new(p, j.num, j.exp)
    }
}

impl fmt::Display for TorusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, pow_u64(self.p, self.exp))
        }
    }
}

/// Standard character `e(a) = exp(2 pi i a)`.
///
/// Multiples of 1/4 are returned exactly.
pub fn char_eval(a: TorusValue) -> Complex64 {
    unit_root(a.num, pow_u64(a.p, a.exp))
}

/// `e(num / modulus)` with exact values on the quarter turns.
pub fn unit_root(num: u64, modulus: u64) -> Complex64 {
    let num = num % modulus.max(1);
    if (4 * num as u128).is_multiple_of(modulus as u128) {
        return match (4 * num as u128 / modulus as u128) as u8 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = std::f64::consts::TAU * (num as f64 / modulus as f64);
    Complex64::new(theta.cos(), theta.sin())
}
