use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_PRIME: u32 = 13;

/// The prime field `F_p` for a small prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !(2..p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::UnsupportedPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero mod p.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// `a!` reduced mod p, for `a < p`.
    pub fn factorial(self, a: u32) -> u32 {
        (1..=a).fold(1 % self.p, |acc, t| self.mul(acc, t))
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

/// `p^e` as u64, failing on overflow.
pub fn checked_pow(p: u32, e: u32) -> Result<u64> {
    (p as u64)
        .checked_pow(e)
        .ok_or(Error::ExponentOverflow { p, exp: e })
}

/// `p^e` for exponents known to be in range.
#[inline]
pub fn pow_u64(p: u32, e: u32) -> u64 {
    (p as u64).pow(e)
}

/// Largest exponent `e` with `p^e` representable (with headroom for one extra
/// factor of p in intermediate products).
pub fn max_exponent(p: u32) -> u32 {
    let mut e = 0;
    let mut acc: u64 = 1;
    while let Some(next) = acc.checked_mul(p as u64) {
        if next.checked_mul(p as u64).is_none() {
            break;
        }
        acc = next;
        e += 1;
    }
    e
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(p: u32, mut a: u64) -> u32 {
    debug_assert!(a != 0);
    let mut v = 0;
    while a.is_multiple_of(p as u64) {
        a /= p as u64;
        v += 1;
    }
    v
}
