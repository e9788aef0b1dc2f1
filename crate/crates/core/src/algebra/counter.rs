//! Exact evaluation of averages `E e(a)` over multisets of torus values.
//!
//! A [`UnityCounter`] records how often each residue of `(1/N)Z/Z` occurs.
//! The average `sum_r c_r zeta^r / total` is an element of the cyclotomic
//! field `Q(zeta_N)`; it is made canonical by reducing the integer polynomial
//! `sum_r c_r x^r` modulo the cyclotomic polynomial `Phi_N`.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::field::pow_u64;
use super::torus::{unit_root, TorusValue};
use crate::error::{Error, Result};

/// Integer counts of the residues `r / N` for `N = p^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnityCounter {
    p: u32,
    exp: u32,
    counts: Vec<u64>,
}

impl UnityCounter {
    pub fn new(p: u32, exp: u32) -> Self {
        Self {
            p,
            exp,
            counts: vec![0; pow_u64(p, exp) as usize],
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// Adds `weight` occurrences of the residue `num / p^exp`.
    #[inline]
    pub fn add_residue(&mut self, num: u64, weight: u64) {
        self.counts[num as usize] += weight;
    }

    pub fn add(&mut self, a: TorusValue) {
        assert!(a.exp() <= self.exp, "value finer than counter resolution");
        self.counts[a.numerator_at(self.exp) as usize] += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Merging is associative and commutative.
    pub fn merge(&mut self, other: &Self) {
        assert_eq!((self.p, self.exp), (other.p, other.exp));
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn expectation(&self) -> Result<CyclotomicMean> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyCounter);
        }
        let raw: Vec<i128> = self.counts.iter().map(|&c| c as i128).collect();
        Ok(CyclotomicMean {
            modulus: self.modulus(),
            coeffs: reduce_mod_cyclotomic(&raw, self.modulus()),
            total: total as u128,
        })
    }
}

/// An exact element `(sum_r coeffs[r] zeta_N^r) / total` of `Q(zeta_N)`, with
/// `coeffs` reduced modulo `Phi_N` (so `coeffs.len() = phi(N)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicMean {
    pub modulus: u64,
    pub coeffs: Vec<i128>,
    pub total: u128,
}

impl CyclotomicMean {
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                acc += unit_root(r as u64, self.modulus) * c as f64;
            }
        }
        acc / self.total as f64
    }

    /// The value as a rational number, if it is rational.
    pub fn as_rational(&self) -> Option<Ratio<i128>> {
        if self.coeffs.iter().skip(1).any(|&c| c != 0) {
            return None;
        }
        let c0 = self.coeffs.first().copied().unwrap_or(0);
        Some(Ratio::new(c0, self.total as i128))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Equality of two means over the same modulus, as values in `Q(zeta_N)`.
    pub fn same_value(&self, other: &Self) -> bool {
        if self.modulus != other.modulus {
            return false;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&a, &b)| a * other.total as i128 == b * self.total as i128)
    }
}

/// Coefficients of the cyclotomic polynomial `Phi_n`, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i128> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut poly = vec![0i128; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = exact_div(&poly, &cyclotomic_poly(d));
        }
    }
    poly
}

fn exact_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    debug_assert_eq!(lead, 1);
    let mut q = vec![0i128; rem.len() - dl + 1];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1];
        q[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Remainder of `sum_r a[r] x^r` modulo `Phi_n`, padded to length `phi(n)`.
pub fn reduce_mod_cyclotomic(a: &[i128], n: u64) -> Vec<i128> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() < deg {
        rem.resize(deg, 0);
    }
    for i in (deg..rem.len()).rev() {
        let c = rem[i];
        if c != 0 {
            for (j, &pc) in phi.iter().enumerate() {
                rem[i - deg + j] -= c * pc;
            }
        }
    }
    rem.truncate(deg);
    rem
}

/// `E e(r/N)` over a histogram of residues mod `N`, exactly.
pub fn residue_mean(counts: &[u64]) -> Result<CyclotomicMean> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyCounter);
    }
    let raw: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
    Ok(CyclotomicMean {
        modulus: counts.len() as u64,
        coeffs: reduce_mod_cyclotomic(&raw, counts.len() as u64),
        total: total as u128,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12).len() - 1, 4);
    }

    #[test]
    fn expectation_examples() {
        let mut c = UnityCounter::new(2, 1);
        c.add_residue(0, 3);
        c.add_residue(1, 1);
        let e = c.expectation().unwrap();
        assert_eq!(e.as_rational(), Some(Ratio::new(1, 2)));

        let mut c = UnityCounter::new(3, 2);
        c.add_residue(0, 5);
        assert_eq!(c.expectation().unwrap().as_rational(), Some(Ratio::from_integer(1)));

        let mut c = UnityCounter::new(5, 1);
        for r in 0..5 {
            c.add_residue(r, 2);
        }
        let e = c.expectation().unwrap();
        assert!(e.is_zero());
        assert_eq!(e.as_rational(), Some(Ratio::from_integer(0)));

        assert!(UnityCounter::new(2, 2).expectation().is_err());
    }

    #[test]
    fn irrational_means_are_detected() {
        let mut c = UnityCounter::new(2, 3);
        c.add_residue(0, 1);
        c.add_residue(1, 1);
        let e = c.expectation().unwrap();
        assert!(e.as_rational().is_none());
        let z = e.to_complex();
        let expect = (Complex64::new(1.0, 0.0) + unit_root(1, 8)) / 2.0;
        assert!((z - expect).norm() < 1e-15);
    }

    #[test]
    fn merge_is_order_independent() {
        let data = [3u64, 7, 1, 0, 5, 2, 2, 6, 4, 4, 1];
        let mut a = UnityCounter::new(2, 3);
        for &r in &data {
            a.add_residue(r, 1);
        }
        let mut b = UnityCounter::new(2, 3);
        let mut c = UnityCounter::new(2, 3);
        for (i, &r) in data.iter().rev().enumerate() {
            if i % 2 == 0 {
                b.add_residue(r, 1)
            } else {
                c.add_residue(r, 1)
            }
        }
        c.merge(&b);
        assert_eq!(a, c);
        assert_eq!(a.expectation().unwrap(), c.expectation().unwrap());
    }
}
