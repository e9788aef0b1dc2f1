use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::binom::{binom_mod_prime_power, binom_period_exp};
use crate::algebra::field::{checked_pow, max_exponent, pow_u64};
use crate::algebra::torus::{TorusJson, TorusValue};
use crate::error::{Error, Result};
use crate::ncpoly::Degree;

use super::table::{check_degrees, PeriodicTable};

/// `alpha + sum_i v_i * prod_t binom(x_t, i_t) mod 1` on `Z^m`, where each
/// nonzero `v_i = c / p^{r+1}` with `p` not dividing `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoly {
    p: u32,
    initial_degrees: Vec<u32>,
    alpha: TorusValue,
    terms: BTreeMap<Vec<u32>, TorusValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedJson {
    pub p: u32,
    pub m: usize,
    #[serde(rename = "D")]
    pub initial_degrees: Vec<u32>,
    pub alpha: TorusJson,
    pub terms: Vec<WeightedTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedTermJson {
    pub i: Vec<u32>,
    pub r: u32,
    pub c: u64,
}

impl WeightedPoly {
    pub fn new(
        p: u32,
        initial_degrees: Vec<u32>,
        alpha: TorusValue,
        terms: impl IntoIterator<Item = (Vec<u32>, TorusValue)>,
    ) -> Result<Self> {
        check_degrees(initial_degrees.len(), &initial_degrees)?;
        let mut out = Self { p, initial_degrees, alpha, terms: BTreeMap::new() };
        for (i, v) in terms {
            out.add_term(i, v)?;
        }
        Ok(out)
    }

    pub fn zero(p: u32, initial_degrees: Vec<u32>) -> Result<Self> {
        Self::new(p, initial_degrees, TorusValue::zero(p), [])
    }

    fn add_term(&mut self, i: Vec<u32>, v: TorusValue) -> Result<()> {
        if i.len() != self.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), got: i.len() });
        }
        if v.p() != self.p {
            return Err(Error::MismatchedPrime(v.p(), self.p));
        }
        if i.iter().all(|&e| e == 0) {
            self.alpha = self.alpha.checked_add(v)?;
            return Ok(());
        }
        let slot = self.terms.entry(i.clone()).or_insert_with(|| TorusValue::zero(v.p()));
        *slot = slot.checked_add(v)?;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> usize {
        self.initial_degrees.len()
    }
    pub fn initial_degrees(&self) -> &[u32] {
        &self.initial_degrees
    }
    pub fn alpha(&self) -> TorusValue {
        self.alpha
    }
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, TorusValue> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.terms.is_empty()
    }

    /// `sum_t D_t i_t + r (p - 1)` for a coefficient `c / p^{r+1}`.
    pub fn term_degree(&self, i: &[u32], v: TorusValue) -> u32 {
        let base: u32 = i.iter().zip(&self.initial_degrees).map(|(&e, &d)| e * d).sum();
        base + (v.exp() - 1) * (self.p - 1)
    }

    /// Largest term degree; `Some(0)` for nonzero constants.
    pub fn degree(&self) -> Degree {
        let top = self.terms.iter().map(|(i, &v)| self.term_degree(i, v)).max();
        match top {
            Some(d) => Some(d),
            None if self.alpha.is_zero() => None,
            None => Some(0),
        }
    }

    /// Smallest `K_i` with `D_i + K_i (p - 1) > d`; the map is periodic with
    /// period `p^{K_i} e_i` whenever its degree is at most `d`.
    pub fn period_exps_for(&self, d: Degree) -> Vec<u32> {
        period_exps(self.p, &self.initial_degrees, d)
    }

    pub fn period_exps(&self) -> Vec<u32> {
        self.period_exps_for(self.degree())
    }

    fn value_exp(&self) -> u32 {
        self.terms.values().chain(std::iter::once(&self.alpha)).map(TorusValue::exp).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[i64]) -> TorusValue {
        assert_eq!(x.len(), self.m(), "point has the wrong dimension");
        let exp = self.value_exp();
        let modulus = pow_u64(self.p, exp) as u128;
        let mut acc = self.alpha.numerator_at(exp) as u128;
        for (i, v) in &self.terms {
            let r = v.exp();
            let mut prod = v.num() as u128;
            for (&xt, &it) in x.iter().zip(i) {
                let period = pow_u64(self.p, binom_period_exp(it as u64, self.p, r)) as i64;
                let b = binom_mod_prime_power(xt.rem_euclid(period) as u64, it as u64, self.p, r);
                prod = prod * b as u128 % pow_u64(self.p, r) as u128;
            }
            acc = (acc + prod * pow_u64(self.p, exp - r) as u128) % modulus;
        }
        TorusValue::from_parts(self.p, acc as u64, exp)
    }

    /// Values on `prod [0, p^{K_i})`.
    pub fn to_table(&self, period_exps: Vec<u32>) -> Result<PeriodicTable> {
        PeriodicTable::from_fn(self.p, period_exps, |x| self.eval(x))
    }

    /// Values on the fundamental domain forced by the degree.
    pub fn fundamental_table(&self) -> Result<PeriodicTable> {
        self.to_table(self.period_exps())
    }

    /// Shifts every denominator `p^{r+1}` to `p^{r+2}` and `alpha` to a root.
    pub fn pth_root(&self) -> Result<Self> {
        let terms = self.terms.iter().map(|(i, v)| Ok((i.clone(), v.pth_root()?))).collect::<Result<_>>()?;
        Ok(Self { alpha: self.alpha.pth_root()?, terms, ..self.clone() })
    }

    pub fn mul_by_p(&self) -> Self {
        self.scale(self.p as i64)
    }

    pub fn scale(&self, n: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(i, v)| (i.clone(), v.scale(n)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self { alpha: self.alpha.scale(n), terms, ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.initial_degrees != other.initial_degrees {
            return Err(Error::InvalidForm("weighted polynomials over different data".into()));
        }
        let mut out = self.clone();
        out.add_term(vec![0; self.m()], other.alpha)?;
        for (i, &v) in &other.terms {
            out.add_term(i.clone(), v)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> WeightedJson {
        WeightedJson {
            p: self.p,
            m: self.m(),
            initial_degrees: self.initial_degrees.clone(),
            alpha: self.alpha.to_json(),
            terms: self
                .terms
                .iter()
                .map(|(i, v)| WeightedTermJson { i: i.clone(), r: v.exp() - 1, c: v.num() })
                .collect(),
        }
    }

    pub fn from_json(j: &WeightedJson) -> Result<Self> {
        if j.initial_degrees.len() != j.m {
            return Err(Error::DimensionMismatch { expected: j.m, got: j.initial_degrees.len() });
        }
        let alpha = TorusValue::from_json(j.p, j.alpha)?;
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let modulus = checked_pow(j.p, t.r + 1)?;
                if t.c == 0 || t.c >= modulus || t.c % j.p as u64 == 0 {
                    return Err(Error::InvalidForm(format!("coefficient {} not a unit below {modulus}", t.c)));
                }
                Ok((t.i.clone(), TorusValue::from_parts(j.p, t.c, t.r + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        let out = Self::new(j.p, j.initial_degrees.clone(), alpha, terms)?;
        if out.terms.len() != j.terms.len() {
            return Err(Error::InvalidForm("repeated multi-index".into()));
        }
        Ok(out)
    }
}

pub(crate) fn period_exps(p: u32, initial_degrees: &[u32], d: Degree) -> Vec<u32> {
    let d = d.unwrap_or(0);
    initial_degrees
        .iter()
        .map(|&di| if di > d { 0 } else { (d - di) / (p - 1) + 1 })
        .collect()
}

/// Multi-indices `i != 0` with `sum_t D_t i_t <= d`.
pub fn multi_indices(initial_degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(ds: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&first, rest)) = ds.split_first() else {
            out.push(cur.clone());
            return;
        };
        for e in 0..=left / first {
            cur.push(e);
            rec(rest, left - e * first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(initial_degrees, d, &mut Vec::new(), &mut out);
    out.retain(|i| i.iter().any(|&e| e > 0));
    out
}

/// The unique binomial-basis expansion of a periodic table, rejecting terms
/// of weighted degree above `bound`.
pub fn binomial_expand(table: &PeriodicTable, initial_degrees: &[u32], bound: u32) -> Result<WeightedPoly> {
    check_degrees(table.m(), initial_degrees)?;
    let p = table.p();
    let mut out = WeightedPoly::zero(p, initial_degrees.to_vec())?;
    let mut index = Vec::with_capacity(table.m());
    let mut found = Vec::new();
    newton(table, 0, &mut index, &mut found)?;
    for (i, v) in found {
        if i.iter().all(|&e| e == 0) {
            out.alpha = v;
            continue;
        }
        let d = out.term_degree(&i, v);
        if d > bound {
            return Err(Error::DegreeTooHigh { bound: bound as i64, found: d as i64 });
        }
        out.terms.insert(i, v);
    }
    Ok(out)
}

/// Collects `(Delta_1^{i_1} ... Delta_m^{i_m} f)(0)` for every nonzero
/// iterated difference.
fn newton(f: &PeriodicTable, coord: usize, index: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, TorusValue)>) -> Result<()> {
    if coord == f.m() {
        let v = f.value_at_index(0);
        if !v.is_zero() {
            out.push((index.clone(), v));
        }
        return Ok(());
    }
    let limit = pow_u64(f.p(), f.period_exps()[coord]) * max_exponent(f.p()) as u64;
    let mut g = f.clone();
    let mut i = 0u32;
    while !g.is_zero() {
        if i as u64 > limit {
            return Err(Error::InvalidForm("difference operator is not nilpotent".into()));
        }
        index.push(i);
        newton(&g, coord + 1, index, out)?;
        index.pop();
        g = g.derivative(coord, 0);
        i += 1;
    }
    Ok(())
}

/// A random element of degree at most `d` whose constant has denominator
/// at most `p^alpha_exp`.
pub fn random_weighted<R: Rng + ?Sized>(
    p: u32,
    initial_degrees: &[u32],
    d: u32,
    alpha_exp: u32,
    rng: &mut R,
) -> Result<WeightedPoly> {
    let alpha = TorusValue::from_parts(p, rng.gen_range(0..pow_u64(p, alpha_exp)), alpha_exp);
    let terms = multi_indices(initial_degrees, d)
        .into_iter()
        .map(|i| {
            let base: u32 = i.iter().zip(initial_degrees).map(|(&e, &dt)| e * dt).sum();
            let exp = (d - base) / (p - 1) + 1;
            (i, TorusValue::from_parts(p, rng.gen_range(0..pow_u64(p, exp)), exp))
        })
        .collect::<Vec<_>>();
    WeightedPoly::new(p, initial_degrees.to_vec(), alpha, terms)
}
