use std::collections::HashSet;
use std::sync::OnceLock;

use crate::algebra::field::{max_exponent, pow_u64};
use crate::algebra::space::{FVec, Space};
use crate::algebra::torus::TorusValue;
use crate::error::{Error, Result};

use super::canonical::{interpolate, CanonicalForm, Degree, PolyJson};

/// A function `F_p^n -> T` with values in `(1/p^K)Z/Z`, stored as a value
/// table of numerators over `p^K` with `K` minimal. The canonical monomial
/// form is computed on demand and cached.
#[derive(Clone, Debug)]
pub struct NCPoly {
    space: Space,
    exp: u32,
    table: Vec<u64>,
    canonical: OnceLock<CanonicalForm>,
}

impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.exp == other.exp && self.table == other.table
    }
}
impl Eq for NCPoly {}

impl NCPoly {
    /// Wraps numerators over `p^exp`, reducing the exponent to its minimum.
    pub fn from_table(space: Space, exp: u32, table: Vec<u64>) -> Result<Self> {
        if table.len() != space.size() {
            return Err(Error::DimensionMismatch { expected: space.size(), got: table.len() });
        }
        if exp > max_exponent(space.p()) {
            return Err(Error::ExponentOverflow { p: space.p(), exp });
        }
        let modulus = pow_u64(space.p(), exp);
        let mut table = table;
        for v in table.iter_mut() {
            *v %= modulus;
        }
        Ok(Self::normalized(space, exp, table))
    }

    pub(crate) fn normalized(space: Space, mut exp: u32, mut table: Vec<u64>) -> Self {
        let p = space.p() as u64;
        while exp > 0 && table.iter().all(|v| v % p == 0) {
            table.iter_mut().for_each(|v| *v /= p);
            exp -= 1;
        }
        Self { space, exp, table, canonical: OnceLock::new() }
    }

    pub fn from_values(space: Space, values: &[TorusValue]) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::DimensionMismatch { expected: space.size(), got: values.len() });
        }
        let mut exp = 0;
        for v in values {
            if v.p() != space.p() {
                return Err(Error::MismatchedPrime(space.p(), v.p()));
            }
            exp = exp.max(v.exp());
        }
        let table = values.iter().map(|v| v.numerator_at(exp)).collect();
        Ok(Self::normalized(space, exp, table))
    }

    pub fn from_fn(space: Space, f: impl Fn(usize) -> TorusValue) -> Result<Self> {
        let values: Vec<TorusValue> = (0..space.size()).map(f).collect();
        Self::from_values(space, &values)
    }

    /// The classical polynomial `iota(f)` for an `F_p`-valued function.
    pub fn classical_from_fn(space: Space, f: impl Fn(usize) -> u32) -> Self {
        let p = space.p();
        let table = (0..space.size()).map(|x| (f(x) % p) as u64).collect();
        Self::normalized(space, 1, table)
    }

    pub fn zero(space: Space) -> Self {
        Self::normalized(space, 0, vec![0; space.size()])
    }

    pub fn constant(space: Space, a: TorusValue) -> Self {
        Self::normalized(space, a.exp(), vec![a.num(); space.size()])
    }

    pub fn from_canonical(space: Space, form: CanonicalForm) -> Result<Self> {
        if form.p() != space.p() {
            return Err(Error::MismatchedPrime(space.p(), form.p()));
        }
        if form.n() != space.n() {
            return Err(Error::DimensionMismatch { expected: space.n(), got: form.n() });
        }
        let exp = form.value_exp();
        let table = form.evaluate(&space, exp);
        let poly = Self::normalized(space, exp, table);
        debug_assert_eq!(poly.exp, exp);
        let _ = poly.canonical.set(form);
        Ok(poly)
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let form = CanonicalForm::from_json(j)?;
        Self::from_canonical(Space::new(j.p, j.n)?, form)
    }

    pub fn to_json(&self) -> PolyJson {
        self.canonical().to_json()
    }

    #[inline]
    pub fn space(&self) -> &Space {
        &self.space
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.space.p()
    }
    #[inline]
    pub fn n(&self) -> usize {
        self.space.n()
    }
    /// Minimal exponent `K` with all values in `(1/p^K)Z/Z`.
    #[inline]
    pub fn exp(&self) -> u32 {
        self.exp
    }
    /// Numerators over `p^exp()`.
    #[inline]
    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Numerators over `p^exp` for any `exp >= self.exp()`.
    pub fn table_at(&self, exp: u32) -> Vec<u64> {
        assert!(exp >= self.exp);
        let scale = pow_u64(self.p(), exp - self.exp);
        self.table.iter().map(|v| v * scale).collect()
    }

    #[inline]
    pub fn value(&self, x: usize) -> TorusValue {
        TorusValue::from_parts(self.p(), self.table[x], self.exp)
    }

    pub fn values(&self) -> Vec<TorusValue> {
        (0..self.table.len()).map(|x| self.value(x)).collect()
    }

    pub fn eval(&self, x: &FVec) -> Result<TorusValue> {
        if x.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.n() });
        }
        if x.p() != self.p() {
            return Err(Error::MismatchedPrime(self.p(), x.p()));
        }
        Ok(self.value(x.index()))
    }

    pub fn is_zero(&self) -> bool {
        self.exp == 0
    }

    /// True iff every value lies in `(1/p)Z/Z`.
    pub fn is_classical(&self) -> bool {
        self.exp <= 1
    }

    /// The `F_p` value `p * P(x)` of a classical polynomial.
    pub fn classical_value(&self, x: usize) -> u32 {
        debug_assert!(self.is_classical());
        if self.exp == 0 {
            0
        } else {
            self.table[x] as u32
        }
    }

    pub(crate) fn set_canonical(&self, form: CanonicalForm) {
        debug_assert_eq!(form.value_exp(), self.exp);
        let _ = self.canonical.set(form);
    }

    pub fn canonical(&self) -> &CanonicalForm {
        self.canonical.get_or_init(|| {
            interpolate(&self.space, self.exp, &self.table).expect("table matches its space")
        })
    }

    /// Degree read off the canonical form.
    pub fn degree(&self) -> Degree {
        self.canonical().degree()
    }

    /// Degree computed from iterated basis-direction derivatives, searching
    /// up to `bound`. Fails if a nonzero derivative of order `bound + 1`
    /// exists.
    pub fn degree_by_derivatives(&self, bound: u32) -> Result<Degree> {
        if self.is_zero() {
            return Ok(None);
        }
        let modulus = pow_u64(self.p(), self.exp);
        let mut scratch: Vec<Vec<u64>> = vec![vec![0; self.table.len()]; bound as usize + 2];
        let best = chain_search(&self.space, modulus, &self.table, 0, 0, bound, &mut scratch)?;
        Ok(Some(best))
    }

    /// The largest degree any table with this exponent can have.
    pub fn default_degree_bound(&self) -> u32 {
        (self.n() as u32 + self.exp.max(1) - 1) * (self.p() - 1)
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.p() != other.p() {
            return Err(Error::MismatchedPrime(self.p(), other.p()));
        }
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: other.n() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let exp = self.exp.max(other.exp);
        let modulus = pow_u64(self.p(), exp);
        let (a, b) = (self.table_at(exp), other.table_at(exp));
        let table = a.iter().zip(&b).map(|(x, y)| (x + y) % modulus).collect();
        Ok(Self::normalized(self.space, exp, table))
    }

    pub fn neg(&self) -> Self {
        let modulus = pow_u64(self.p(), self.exp);
        let table = self.table.iter().map(|v| (modulus - v) % modulus).collect();
        Self::normalized(self.space, self.exp, table)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Pointwise integer multiple.
    pub fn scale(&self, c: i64) -> Self {
        let modulus = pow_u64(self.p(), self.exp) as i128;
        let c = (c as i128).rem_euclid(modulus.max(1));
        let table = self
            .table
            .iter()
            .map(|&v| ((v as i128 * c) % modulus.max(1)) as u64)
            .collect();
        Self::normalized(self.space, self.exp, table)
    }

    /// Translate: `x -> P(x + h)`.
    pub fn shift(&self, h: usize) -> Self {
        let table = (0..self.table.len())
            .map(|x| self.table[self.space.add(x, h)])
            .collect();
        Self { space: self.space, exp: self.exp, table, canonical: OnceLock::new() }
    }

    /// `x -> P(x + h) - P(x)`.
    pub fn derivative(&self, h: usize) -> Self {
        let modulus = pow_u64(self.p(), self.exp);
        let table = (0..self.table.len())
            .map(|x| (self.table[self.space.add(x, h)] + modulus - self.table[x]) % modulus)
            .collect();
        Self::normalized(self.space, self.exp, table)
    }

    pub fn derivative_vec(&self, h: &FVec) -> Result<Self> {
        if h.n() != self.n() || h.p() != self.p() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: h.n() });
        }
        Ok(self.derivative(h.index()))
    }

    /// Pointwise `p * P`.
    pub fn mul_by_p(&self) -> Self {
        if self.exp == 0 {
            return self.clone();
        }
        let poly = Self::normalized(self.space, self.exp - 1, self.table.iter().map(|v| v % pow_u64(self.p(), self.exp - 1)).collect());
        if let Some(form) = self.canonical.get() {
            let _ = poly.canonical.set(form.mul_by_p());
        }
        poly
    }

    /// The canonical p-th root: every denominator gains one factor of p and
    /// numerators are preserved.
    pub fn pth_root(&self) -> Result<Self> {
        let form = self.canonical().pth_root()?;
        Self::from_canonical(self.space, form)
    }

    /// Pointwise product in `F_p` of two classical polynomials.
    pub fn multiply_classical(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        if !self.is_classical() || !other.is_classical() {
            return Err(Error::NonClassical("multiply_classical needs values in (1/p)Z/Z"));
        }
        let p = self.p() as u64;
        let table = (0..self.table.len())
            .map(|x| self.classical_value(x) as u64 * other.classical_value(x) as u64 % p)
            .collect();
        Ok(Self::normalized(self.space, 1, table))
    }

    /// Number of distinct values taken.
    pub fn distinct_values(&self) -> usize {
        let modulus = pow_u64(self.p(), self.exp);
        if modulus <= 1 << 16 {
            let mut seen = vec![false; modulus as usize];
            return self.table.iter().filter(|&&v| !std::mem::replace(&mut seen[v as usize], true)).count();
        }
        self.table.iter().collect::<HashSet<_>>().len()
    }
}

/// Index of `x + e_t` where `stride = p^t`.
#[inline]
fn step(x: usize, stride: usize, p: usize) -> usize {
    if (x / stride) % p == p - 1 {
        x - (p - 1) * stride
    } else {
        x + stride
    }
}

/// Longest chain of basis-direction derivatives (non-decreasing directions,
/// starting at `first`) that keeps `table` nonzero; `table` is nonzero.
fn chain_search(
    space: &Space,
    modulus: u64,
    table: &[u64],
    first: usize,
    depth: u32,
    bound: u32,
    scratch: &mut [Vec<u64>],
) -> Result<u32> {
    let p = space.p() as usize;
    let mut best = depth;
    let (head, rest) = scratch.split_first_mut().expect("scratch depth");
    for t in first..space.n() {
        let stride = space.basis(t);
        let mut nonzero = false;
        for (x, out) in head.iter_mut().enumerate() {
            let v = (table[step(x, stride, p)] + modulus - table[x]) % modulus;
            nonzero |= v != 0;
            *out = v;
        }
        if nonzero {
            if depth + 1 > bound {
                return Err(Error::DegreeTooHigh { bound: bound as i64, found: depth as i64 + 1 });
            }
            let d = chain_search(space, modulus, head, t, depth + 1, bound, rest)?;
            best = best.max(d);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::canonical::Term;

    fn mother_p() -> NCPoly {
        NCPoly::from_table(Space::new(2, 1).unwrap(), 1, vec![0, 1]).unwrap()
    }
    fn mother_q() -> NCPoly {
        NCPoly::from_table(Space::new(2, 1).unwrap(), 2, vec![0, 1]).unwrap()
    }

    #[test]
    fn mother_polynomials() {
        let one = FVec::from_digits(2, &[1]).unwrap();
        assert_eq!(mother_p().eval(&one).unwrap(), TorusValue::new(2, 1, 1).unwrap());
        assert_eq!(mother_q().eval(&one).unwrap(), TorusValue::new(2, 1, 2).unwrap());
        assert!(mother_p().is_classical());
        assert!(!mother_q().is_classical());
        assert_eq!(mother_q().degree(), Some(2));
        assert_eq!(mother_q().degree_by_derivatives(8).unwrap(), Some(2));
        // derivative of Q is 1/4 - P
        let d = mother_q().derivative(1);
        let quarter = NCPoly::constant(Space::new(2, 1).unwrap(), TorusValue::new(2, 1, 2).unwrap());
        assert_eq!(d, quarter.sub(&mother_p()).unwrap());
        assert_eq!(mother_q().mul_by_p(), mother_p());
    }

    #[test]
    fn zero_polynomial() {
        let z = NCPoly::zero(Space::new(3, 2).unwrap());
        assert_eq!(z.degree(), None);
        assert_eq!(z.degree_by_derivatives(0).unwrap(), None);
        assert!(z.is_classical());
        assert_eq!(z.pth_root().unwrap(), z);
    }

    #[test]
    fn derivative_of_product_monomial() {
        let s = Space::new(2, 2).unwrap();
        let xy = NCPoly::classical_from_fn(s, |x| s.digit(x, 0) * s.digit(x, 1));
        let y = NCPoly::classical_from_fn(s, |x| s.digit(x, 1));
        assert_eq!(xy.derivative(s.basis(0)), y);
        let c = NCPoly::constant(s, TorusValue::new(2, 3, 3).unwrap());
        assert!(c.derivative(3).is_zero());
    }

    #[test]
    fn canonical_table_agree() {
        let s = Space::new(3, 2).unwrap();
        let form = CanonicalForm::new(
            3,
            2,
            TorusValue::new(3, 1, 1).unwrap(),
            vec![Term { depth: 1, mono: 1, coeff: 2 }, Term { depth: 0, mono: 4, coeff: 1 }],
        )
        .unwrap();
        let p = NCPoly::from_canonical(s, form.clone()).unwrap();
        let fresh = NCPoly::from_table(s, p.exp(), p.table().to_vec()).unwrap();
        assert_eq!(fresh.canonical(), &form);
        assert_eq!(fresh.degree(), fresh.degree_by_derivatives(fresh.default_degree_bound()).unwrap());
    }

    #[test]
    fn degree_search_respects_bound() {
        let s = Space::new(2, 3).unwrap();
        let l8 = NCPoly::from_fn(s, |x| TorusValue::new(2, s.digit_sum(x) as i64, 3).unwrap()).unwrap();
        assert_eq!(l8.degree_by_derivatives(10).unwrap(), Some(3));
        assert!(matches!(l8.degree_by_derivatives(2), Err(Error::DegreeTooHigh { .. })));
    }

    #[test]
    fn classical_products() {
        let s = Space::new(3, 2).unwrap();
        let a = NCPoly::classical_from_fn(s, |x| s.digit(x, 0));
        let b = NCPoly::classical_from_fn(s, |x| s.digit(x, 1) + 1);
        let ab = a.multiply_classical(&b).unwrap();
        assert!(ab.degree().unwrap() <= 2);
        let one = NCPoly::classical_from_fn(s, |_| 1);
        assert_eq!(a.multiply_classical(&one).unwrap(), a);
        let q = NCPoly::from_table(s, 2, vec![1; 9]).unwrap();
        assert!(a.multiply_classical(&q).is_err());
    }
}
