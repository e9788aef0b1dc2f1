use crate::algebra::field::{checked_pow, pow_u64};
use crate::algebra::torus::TorusValue;
use crate::error::{Error, Result};
use crate::ncpoly::Degree;

/// A map `Z^m -> T` periodic with period `p^{K_i}` in coordinate `i`, stored
/// on the box `prod [0, p^{K_i})` with the first coordinate varying fastest.
/// Values are numerators over the common denominator `p^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicTable {
    p: u32,
    period_exps: Vec<u32>,
    exp: u32,
    values: Vec<u64>,
}

impl PeriodicTable {
    pub fn new(p: u32, period_exps: Vec<u32>, values: &[TorusValue]) -> Result<Self> {
        let size = box_size(p, &period_exps)?;
        if values.len() != size {
            return Err(Error::DimensionMismatch { expected: size, got: values.len() });
        }
        let exp = values.iter().map(TorusValue::exp).max().unwrap_or(0);
        let values = values.iter().map(|v| v.numerator_at(exp)).collect();
        Ok(Self { p, period_exps, exp, values })
    }

    pub fn from_fn(p: u32, period_exps: Vec<u32>, f: impl Fn(&[i64]) -> TorusValue) -> Result<Self> {
        let size = box_size(p, &period_exps)?;
        let periods: Vec<usize> = period_exps.iter().map(|&k| pow_u64(p, k) as usize).collect();
        let mut point = vec![0i64; periods.len()];
        let values: Vec<TorusValue> = (0..size)
            .map(|idx| {
                unrank(idx, &periods, &mut point);
                f(&point)
            })
            .collect();
        Self::new(p, period_exps, &values)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> usize {
        self.period_exps.len()
    }
    pub fn period_exps(&self) -> &[u32] {
        &self.period_exps
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn periods(&self) -> Vec<usize> {
        self.period_exps.iter().map(|&k| pow_u64(self.p, k) as usize).collect()
    }

    /// Value at an arbitrary integer point.
    pub fn value(&self, x: &[i64]) -> TorusValue {
        let idx = self.index(x);
        TorusValue::from_parts(self.p, self.values[idx], self.exp)
    }

    pub fn value_at_index(&self, idx: usize) -> TorusValue {
        TorusValue::from_parts(self.p, self.values[idx], self.exp)
    }

    pub fn index(&self, x: &[i64]) -> usize {
        let periods = self.periods();
        x.iter()
            .zip(&periods)
            .rev()
            .fold(0, |acc, (&c, &per)| acc * per + c.rem_euclid(per as i64) as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `f(x + p^j e_i) - f(x)`.
    pub fn derivative(&self, i: usize, j: u32) -> Self {
        let periods = self.periods();
        let stride: usize = periods[..i].iter().product();
        let per = periods[i];
        let step = (pow_u64(self.p, j) as usize) % per;
        let modulus = pow_u64(self.p, self.exp);
        let values = (0..self.values.len())
            .map(|idx| {
                let c = idx / stride % per;
                let shifted = idx - c * stride + (c + step) % per * stride;
                (self.values[shifted] + modulus - self.values[idx]) % modulus
            })
            .collect();
        Self { values, ..self.clone() }
    }

    /// Whether `f(x + p^j e_i) = f(x)` everywhere.
    pub fn has_period(&self, i: usize, j: u32) -> bool {
        self.derivative(i, j).is_zero()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.period_exps != other.period_exps {
            return Err(Error::InvalidForm("tables live on different boxes".into()));
        }
        let exp = self.exp.max(other.exp);
        let modulus = pow_u64(self.p, exp);
        let (sa, sb) = (pow_u64(self.p, exp - self.exp), pow_u64(self.p, exp - other.exp));
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a * sa % modulus + modulus - b * sb % modulus) % modulus)
            .collect();
        Ok(Self { p: self.p, period_exps: self.period_exps.clone(), exp, values })
    }

    /// Generators `p^j e_i` that act nontrivially, with their weights.
    fn generators(&self, initial_degrees: &[u32]) -> Vec<(usize, u32, i64)> {
        let mut out = Vec::new();
        for (i, (&k, &d)) in self.period_exps.iter().zip(initial_degrees).enumerate() {
            for j in 0..k {
                out.push((i, j, d as i64 + j as i64 * (self.p as i64 - 1)));
            }
        }
        out
    }

    /// Whether every derivative along a multigenerator of weight above
    /// `bound` vanishes.
    pub fn has_weighted_degree_at_most(&self, initial_degrees: &[u32], bound: i64) -> Result<bool> {
        check_degrees(self.m(), initial_degrees)?;
        let gens = self.generators(initial_degrees);
        Ok(degree_at_most(self, &gens, 0, bound))
    }

    /// The least `d` with `has_weighted_degree_at_most(d)`, searched upwards.
    pub fn weighted_degree(&self, initial_degrees: &[u32]) -> Result<Degree> {
        check_degrees(self.m(), initial_degrees)?;
        if self.is_zero() {
            return Ok(None);
        }
        let gens = self.generators(initial_degrees);
        // nilpotency of each difference operator bounds the search
        let cap: i64 = self
            .period_exps
            .iter()
            .zip(initial_degrees)
            .map(|(&k, &d)| d as i64 * pow_u64(self.p, k) as i64 * self.exp as i64)
            .sum::<i64>()
            + self.exp as i64 * (self.p as i64 - 1);
        (0..=cap)
            .find(|&d| degree_at_most(self, &gens, 0, d))
            .map(|d| Some(d as u32))
            .ok_or_else(|| Error::InvalidForm("difference operators failed to terminate".into()))
    }
}

fn degree_at_most(f: &PeriodicTable, gens: &[(usize, u32, i64)], first: usize, bound: i64) -> bool {
    if f.is_zero() {
        return true;
    }
    if bound < 0 {
        return false;
    }
    gens.iter()
        .enumerate()
        .skip(first)
        .all(|(g, &(i, j, w))| degree_at_most(&f.derivative(i, j), gens, g, bound - w))
}

pub(crate) fn check_degrees(m: usize, initial_degrees: &[u32]) -> Result<()> {
    if initial_degrees.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: initial_degrees.len() });
    }
    if initial_degrees.contains(&0) {
        return Err(Error::InvalidForm("initial degrees must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn box_size(p: u32, period_exps: &[u32]) -> Result<usize> {
    let mut size: u128 = 1;
    for &k in period_exps {
        size *= checked_pow(p, k)? as u128;
        if size > 1 << 24 {
            return Err(Error::CapExceeded { size, cap: 1 << 24 });
        }
    }
    Ok(size as usize)
}

pub(crate) fn unrank(mut idx: usize, periods: &[usize], out: &mut [i64]) {
    for (o, &per) in out.iter_mut().zip(periods) {
        *o = (idx % per) as i64;
        idx /= per;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_of_the_argument() {
        let t = PeriodicTable::from_fn(2, vec![2], |x| TorusValue::new(2, x[0], 2).unwrap()).unwrap();
        assert_eq!(t.weighted_degree(&[1]).unwrap(), Some(2));
        assert!(t.has_period(0, 2));
        assert!(!t.has_period(0, 1));
        assert_eq!(t.value(&[-1]), TorusValue::new(2, 3, 2).unwrap());
    }

    #[test]
    fn constants_and_zero() {
        let c = TorusValue::new(3, 4, 2).unwrap();
        let t = PeriodicTable::from_fn(3, vec![1, 2], |_| c).unwrap();
        assert_eq!(t.weighted_degree(&[1, 2]).unwrap(), Some(0));
        let z = t.sub(&t).unwrap();
        assert_eq!(z.weighted_degree(&[1, 2]).unwrap(), None);
    }

    #[test]
    fn binomial_square_over_two() {
        let t = PeriodicTable::from_fn(2, vec![2], |x| TorusValue::new(2, x[0] * (x[0] - 1) / 2, 1).unwrap()).unwrap();
        assert_eq!(t.weighted_degree(&[1]).unwrap(), Some(2));
        assert_eq!(t.weighted_degree(&[3]).unwrap(), Some(6));
    }
}
