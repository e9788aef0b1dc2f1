use rand::Rng;

use crate::algebra::field::pow_u64;
use crate::algebra::space::Space;
use crate::algebra::torus::TorusValue;
use crate::error::{Error, Result};

use super::canonical::{digit_sum, CanonicalForm, Term};
use super::poly::NCPoly;

/// Default cap on the number of enumerated polynomials.
pub const DEFAULT_POLY_CAP: u128 = 1 << 24;

/// Monomial positions `(depth, exponent vector)` allowed in a form of
/// degree at most `d`: `0 < sum i <= d - depth (p - 1)`.
pub fn monomial_slots(space: &Space, d: u32) -> Vec<(u32, u64)> {
    let p = space.p();
    let mut slots = Vec::new();
    let mut depth = 0;
    while d > depth * (p - 1) {
        let budget = d - depth * (p - 1);
        for mono in 1..space.size() as u64 {
            if digit_sum(p, mono) <= budget {
                slots.push((depth, mono));
            }
        }
        depth += 1;
    }
    slots
}

/// Exponent of the constant term ranging over `(1/p^e)Z/Z` when constants
/// are enumerated: the value group of degree `d` polynomials.
pub fn alpha_exp(p: u32, d: u32) -> u32 {
    if d == 0 {
        1
    } else {
        (d - 1) / (p - 1) + 1
    }
}

/// Every canonical form of degree at most `d`, each exactly once. The first
/// slot varies fastest; the constant term varies slowest.
pub struct PolyEnumeration {
    space: Space,
    slots: Vec<(u32, u64)>,
    alpha_exp: u32,
    count: u128,
}

impl PolyEnumeration {
    pub fn new(space: Space, d: u32, modulo_constants: bool) -> Result<Self> {
        Self::with_cap(space, d, modulo_constants, DEFAULT_POLY_CAP)
    }

    pub fn with_cap(space: Space, d: u32, modulo_constants: bool, cap: u128) -> Result<Self> {
        let slots = monomial_slots(&space, d);
        let alpha_exp = if modulo_constants { 0 } else { alpha_exp(space.p(), d) };
        let exponent = slots.len() as u32 + alpha_exp;
        let count = (space.p() as u128).checked_pow(exponent).unwrap_or(u128::MAX);
        if count > cap {
            return Err(Error::CapExceeded { size: count, cap });
        }
        Ok(Self { space, slots, alpha_exp, count })
    }

    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn slots(&self) -> &[(u32, u64)] {
        &self.slots
    }

    /// Exponent `K` such that every enumerated value lies in `(1/p^K)Z/Z`.
    pub fn value_exp(&self) -> u32 {
        let depth = self.slots.iter().map(|s| s.0 + 1).max().unwrap_or(0);
        depth.max(self.alpha_exp)
    }

    pub fn iter(&self) -> PolyIter<'_> {
        let p = self.space.p();
        let exp = self.value_exp();
        let modulus = pow_u64(p, exp);
        let slot_tables = self
            .slots
            .iter()
            .map(|&(depth, mono)| {
                let form = CanonicalForm::from_sorted(
                    p,
                    self.space.n(),
                    TorusValue::zero(p),
                    vec![Term { depth, mono, coeff: 1 }],
                );
                form.evaluate(&self.space, exp)
            })
            .collect();
        PolyIter {
            en: self,
            exp,
            modulus,
            digits: vec![0; self.slots.len()],
            alpha: 0,
            table: vec![0; self.space.size()],
            slot_tables,
            remaining: self.count,
        }
    }
}

pub struct PolyIter<'a> {
    en: &'a PolyEnumeration,
    exp: u32,
    modulus: u64,
    digits: Vec<u32>,
    alpha: u64,
    table: Vec<u64>,
    slot_tables: Vec<Vec<u64>>,
    remaining: u128,
}

impl PolyIter<'_> {
    fn current(&self) -> NCPoly {
        let p = self.en.space.p();
        let terms = self
            .en
            .slots
            .iter()
            .zip(&self.digits)
            .filter(|(_, &c)| c != 0)
            .map(|(&(depth, mono), &c)| Term { depth, mono, coeff: c })
            .collect();
        let alpha = TorusValue::from_parts(p, self.alpha, self.en.alpha_exp);
        let form = CanonicalForm::from_sorted(p, self.en.space.n(), alpha, terms);
        let poly = NCPoly::normalized(self.en.space, self.exp, self.table.clone());
        poly.set_canonical(form);
        poly
    }

    fn advance(&mut self) {
        let p = self.en.space.p();
        let m = self.modulus;
        for (s, digit) in self.digits.iter_mut().enumerate() {
            let t = &self.slot_tables[s];
            if *digit + 1 < p {
                *digit += 1;
                for (v, a) in self.table.iter_mut().zip(t) {
                    *v = (*v + a) % m;
                }
                return;
            }
            let back = (p as u64 - 1) % m;
            *digit = 0;
            for (v, a) in self.table.iter_mut().zip(t) {
                *v = (*v + m - a * back % m) % m;
            }
        }
        if self.en.alpha_exp > 0 {
            let unit = pow_u64(p, self.exp - self.en.alpha_exp);
            let top = pow_u64(p, self.en.alpha_exp);
            self.alpha = (self.alpha + 1) % top;
            let delta = if self.alpha == 0 { m - unit * (top - 1) % m } else { unit };
            for v in self.table.iter_mut() {
                *v = (*v + delta) % m;
            }
        }
    }
}

impl Iterator for PolyIter<'_> {
    type Item = NCPoly;

    fn next(&mut self) -> Option<NCPoly> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(out)
    }
}

/// Stream of every polynomial of degree at most `d` (see [`PolyEnumeration`]).
pub fn enumerate_polys(space: Space, d: u32, modulo_constants: bool) -> Result<Vec<NCPoly>> {
    let en = PolyEnumeration::new(space, d, modulo_constants)?;
    Ok(en.iter().collect())
}

/// A uniformly random canonical form of degree at most `d`.
pub fn random_form<R: Rng + ?Sized>(space: &Space, d: u32, with_alpha: bool, rng: &mut R) -> CanonicalForm {
    let p = space.p();
    let terms: Vec<Term> = monomial_slots(space, d)
        .into_iter()
        .filter_map(|(depth, mono)| {
            let c = rng.gen_range(0..p);
            (c != 0).then_some(Term { depth, mono, coeff: c })
        })
        .collect();
    let alpha = if with_alpha {
        let e = alpha_exp(p, d);
        TorusValue::from_parts(p, rng.gen_range(0..pow_u64(p, e)), e)
    } else {
        TorusValue::zero(p)
    };
    let mut terms = terms;
    terms.sort_unstable();
    CanonicalForm::from_sorted(p, space.n(), alpha, terms)
}

pub fn random_poly<R: Rng + ?Sized>(space: &Space, d: u32, with_alpha: bool, rng: &mut R) -> NCPoly {
    NCPoly::from_canonical(*space, random_form(space, d, with_alpha, rng)).expect("consistent space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_slot_formula() {
        let s = Space::new(2, 1).unwrap();
        let all = enumerate_polys(s, 1, true).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all[0].is_zero());
        assert_eq!(all[1].table(), &[0, 1]);

        let s = Space::new(2, 2).unwrap();
        let slots = monomial_slots(&s, 2);
        assert_eq!(slots.iter().filter(|x| x.0 == 0).count(), 3);
        assert_eq!(slots.iter().filter(|x| x.0 == 1).count(), 2);
        assert_eq!(enumerate_polys(s, 2, true).unwrap().len(), 32);

        let s = Space::new(3, 2).unwrap();
        let consts = enumerate_polys(s, 0, false).unwrap();
        assert_eq!(consts.len(), 3);
        assert!(consts.iter().all(|p| p.degree().unwrap_or(0) == 0));
        assert_eq!(enumerate_polys(s, 0, true).unwrap().len(), 1);
    }

    #[test]
    fn stream_is_distinct_and_consistent() {
        for (p, n, d) in [(2u32, 2usize, 3u32), (3, 1, 4), (2, 1, 3)] {
            let s = Space::new(p, n).unwrap();
            let en = PolyEnumeration::new(s, d, false).unwrap();
            let mut seen = HashSet::new();
            for poly in en.iter() {
                let fresh = NCPoly::from_table(s, poly.exp(), poly.table().to_vec()).unwrap();
                assert_eq!(fresh.canonical(), poly.canonical());
                assert!(poly.degree().is_none_or(|x| x <= d));
                assert!(seen.insert((poly.exp(), poly.table().to_vec())));
            }
            assert_eq!(seen.len() as u128, en.count());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s = Space::new(2, 4).unwrap();
        assert!(PolyEnumeration::with_cap(s, 4, true, 1000).is_err());
    }
}
