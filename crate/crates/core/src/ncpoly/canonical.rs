use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::field::{max_exponent, pow_u64, PrimeField};
use crate::algebra::space::Space;
use crate::algebra::torus::{TorusJson, TorusValue};
use crate::error::{Error, Result};

/// Degree of a polynomial; `None` stands for the zero polynomial (degree -inf).
pub type Degree = Option<u32>;

pub fn degree_to_i64(d: Degree) -> i64 {
    d.map_or(i64::MIN, i64::from)
}

pub fn format_degree(d: Degree) -> String {
    d.map_or_else(|| "-inf".to_string(), |v| v.to_string())
}

/// One monomial `coeff / p^(depth+1) * |x_1|^i_1 ... |x_n|^i_n`. The exponent
/// vector is packed base p with the first coordinate least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub depth: u32,
    pub mono: u64,
    pub coeff: u32,
}

/// The unique monomial expansion of a polynomial `F_p^n -> T` with p-power
/// values: `alpha + sum c / p^(j+1) prod |x_t|^(i_t)` with `i_t < p`,
/// `sum i_t > 0` and `c` in `1..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    p: u32,
    n: usize,
    alpha: TorusValue,
    terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub depth: u32,
    pub coeff: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub p: u32,
    pub n: usize,
    pub alpha: TorusJson,
    pub terms: Vec<TermJson>,
}

impl CanonicalForm {
    /// Builds a form from terms, sorting them and rejecting invalid entries.
    pub fn new(p: u32, n: usize, alpha: TorusValue, mut terms: Vec<Term>) -> Result<Self> {
        PrimeField::new(p)?;
        if alpha.p() != p {
            return Err(Error::MismatchedPrime(p, alpha.p()));
        }
        let size = pow_u64(p, n as u32);
        for t in &terms {
            if t.coeff == 0 || t.coeff >= p {
                return Err(Error::InvalidForm(format!("coefficient {} out of range", t.coeff)));
            }
            if t.mono == 0 || t.mono >= size {
                return Err(Error::InvalidForm(format!("bad exponent vector index {}", t.mono)));
            }
            if t.depth + 1 > max_exponent(p) {
                return Err(Error::ExponentOverflow { p, exp: t.depth + 1 });
            }
        }
        terms.sort_unstable();
        if terms.windows(2).any(|w| (w[0].depth, w[0].mono) == (w[1].depth, w[1].mono)) {
            return Err(Error::InvalidForm("repeated monomial".into()));
        }
        Ok(Self { p, n, alpha, terms })
    }

    pub(crate) fn from_sorted(p: u32, n: usize, alpha: TorusValue, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        Self { p, n, alpha, terms }
    }

    pub fn zero(p: u32, n: usize) -> Self {
        Self::from_sorted(p, n, TorusValue::zero(p), Vec::new())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn alpha(&self) -> TorusValue {
        self.alpha
    }
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Exponent vector of a term.
    pub fn exps(&self, term: &Term) -> Vec<u32> {
        unpack(self.p, self.n, term.mono)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.terms.is_empty()
    }

    /// `max (sum i_t) + j (p - 1)` over the terms.
    pub fn degree(&self) -> Degree {
        let top = self
            .terms
            .iter()
            .map(|t| digit_sum(self.p, t.mono) + t.depth * (self.p - 1))
            .max();
        match top {
            Some(d) => Some(d),
            None if self.alpha.is_zero() => None,
            None => Some(0),
        }
    }

    /// Smallest exponent K such that every value lies in `(1/p^K)Z/Z`.
    pub fn value_exp(&self) -> u32 {
        let terms = self.terms.last().map_or(0, |t| t.depth + 1);
        terms.max(self.alpha.exp())
    }

    /// Shifts every denominator up by one power of p.
    pub fn pth_root(&self) -> Result<Self> {
        let alpha = self.alpha.pth_root()?;
        let mut terms = self.terms.clone();
        let limit = max_exponent(self.p);
        for t in &mut terms {
            t.depth += 1;
            if t.depth + 1 > limit {
                return Err(Error::ExponentOverflow { p: self.p, exp: t.depth + 1 });
            }
        }
        Ok(Self::from_sorted(self.p, self.n, alpha, terms))
    }

    /// Multiplication by p: depth-0 terms vanish, the rest lose one level.
    pub fn mul_by_p(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.depth > 0)
            .map(|t| Term { depth: t.depth - 1, ..*t })
            .collect();
        Self::from_sorted(self.p, self.n, self.alpha.scale(self.p as i64), terms)
    }

    /// Numerators of every value over `p^exp`, in enumeration order.
    pub fn evaluate(&self, space: &Space, exp: u32) -> Vec<u64> {
        debug_assert!(exp >= self.value_exp());
        let modulus = pow_u64(self.p, exp);
        let mut table = vec![self.alpha.numerator_at(exp); space.size()];
        let mut layer = vec![0u64; space.size()];
        let mut i = 0;
        while i < self.terms.len() {
            let depth = self.terms[i].depth;
            layer.iter_mut().for_each(|v| *v = 0);
            while i < self.terms.len() && self.terms[i].depth == depth {
                layer[self.terms[i].mono as usize] = self.terms[i].coeff as u64;
                i += 1;
            }
            monomial_values(self.p, self.n, &mut layer, modulus);
            let scale = pow_u64(self.p, exp - depth - 1);
            if modulus <= u32::MAX as u64 {
                for (v, l) in table.iter_mut().zip(&layer) {
                    *v = (*v + scale * *l) % modulus;
                }
            } else {
                for (v, l) in table.iter_mut().zip(&layer) {
                    *v = ((*v as u128 + scale as u128 * *l as u128) % modulus as u128) as u64;
                }
            }
        }
        table
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            p: self.p,
            n: self.n,
            alpha: self.alpha.to_json(),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    exps: self.exps(t),
                    depth: t.depth,
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        PrimeField::new(j.p)?;
        let alpha = TorusValue::from_json(j.p, j.alpha)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exps.len() != j.n {
                return Err(Error::DimensionMismatch { expected: j.n, got: t.exps.len() });
            }
            let mono = pack(j.p, &t.exps)?;
            terms.push(Term { depth: t.depth, mono, coeff: t.coeff });
        }
        Self::new(j.p, j.n, alpha, terms)
    }
}

pub(crate) fn pack(p: u32, exps: &[u32]) -> Result<u64> {
    let mut mono = 0u64;
    for &e in exps.iter().rev() {
        if e >= p {
            return Err(Error::DigitOutOfRange { digit: e, p });
        }
        mono = mono * p as u64 + e as u64;
    }
    Ok(mono)
}

pub(crate) fn unpack(p: u32, n: usize, mut mono: u64) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = (mono % p as u64) as u32;
            mono /= p as u64;
            d
        })
        .collect()
}

pub(crate) fn digit_sum(p: u32, mut mono: u64) -> u32 {
    let mut s = 0;
    while mono > 0 {
        s += (mono % p as u64) as u32;
        mono /= p as u64;
    }
    s
}

/// Power tables for the axis-wise monomial transform.
struct Vandermonde {
    /// `a^i` as integers, row-major in `a`.
    powers: Vec<u64>,
    /// Inverse of `(a^i mod p)` over F_p, row-major in `i`.
    inverse: Vec<u32>,
}

fn vandermonde(p: u32) -> &'static Vandermonde {
    static CACHE: [OnceLock<Vandermonde>; 14] = [const { OnceLock::new() }; 14];
    CACHE[p as usize].get_or_init(|| {
        let pu = p as usize;
        let f = PrimeField::new(p).expect("prime");
        let mut powers = vec![0u64; pu * pu];
        for a in 0..pu {
            for i in 0..pu {
                powers[a * pu + i] = (a as u64).pow(i as u32);
            }
        }
        // Gauss-Jordan on [V | I] over F_p
        let mut m: Vec<Vec<u32>> = (0..pu)
            .map(|a| {
                let mut row: Vec<u32> = (0..pu).map(|i| (powers[a * pu + i] % p as u64) as u32).collect();
                row.extend((0..pu).map(|c| u32::from(c == a)));
                row
            })
            .collect();
        for col in 0..pu {
            let piv = (col..pu).find(|&r| m[r][col] != 0).expect("Vandermonde is invertible");
            m.swap(col, piv);
            let inv = f.inv(m[col][col]);
            for v in m[col].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for r in 0..pu {
                if r != col && m[r][col] != 0 {
                    let factor = m[r][col];
                    for c in 0..2 * pu {
                        let sub = f.mul(factor, m[col][c]);
                        m[r][c] = f.sub(m[r][c], sub);
                    }
                }
            }
        }
        let inverse = (0..pu).flat_map(|i| m[i][pu..].to_vec()).collect();
        Vandermonde { powers, inverse }
    })
}

/// In place: coefficient array (indexed by exponent vector) to the integer
/// values `sum_i c_i prod |x_t|^(i_t)` modulo `modulus`, for every x.
pub(crate) fn monomial_values(p: u32, n: usize, data: &mut [u64], modulus: u64) {
    if modulus <= u32::MAX as u64 {
        return monomial_values_narrow(p, n, data, modulus);
    }
    let vm = vandermonde(p);
    let pu = p as usize;
    let mat: Vec<u128> = vm.powers.iter().map(|&v| (v % modulus) as u128).collect();
    let m = modulus as u128;
    let mut buf = vec![0u128; pu];
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * pu;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = data[base + off + i * stride] as u128;
                }
                for a in 0..pu {
                    let mut acc = 0u128;
                    for i in 0..pu {
                        acc += mat[a * pu + i] * buf[i] % m;
                    }
                    data[base + off + a * stride] = (acc % m) as u64;
                }
            }
        }
        stride *= pu;
    }
}

/// Same transform when products of residues fit in 64 bits.
fn monomial_values_narrow(p: u32, n: usize, data: &mut [u64], modulus: u64) {
    let pu = p as usize;
    data.iter_mut().for_each(|v| *v %= modulus);
    if pu == 2 {
        // |x|^0 = 1 and |x|^1 = x on {0, 1}: a running sum per coordinate
        let mut stride = 1usize;
        for _ in 0..n {
            for base in (0..data.len()).step_by(2 * stride) {
                for off in base..base + stride {
                    let sum = data[off] + data[off + stride];
                    data[off + stride] = if sum >= modulus { sum - modulus } else { sum };
                }
            }
            stride *= 2;
        }
        return;
    }
    let vm = vandermonde(p);
    let mut mat = [0u64; 13 * 13];
    for (dst, &v) in mat.iter_mut().zip(&vm.powers) {
        *dst = v % modulus;
    }
    let mut buf = [0u64; 13];
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * pu;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (i, b) in buf[..pu].iter_mut().enumerate() {
                    *b = data[base + off + i * stride];
                }
                for a in 0..pu {
                    let row = &mat[a * pu..(a + 1) * pu];
                    let acc = row.iter().zip(&buf[..pu]).fold(0u64, |acc, (&c, &b)| (acc + c * b % modulus) % modulus);
                    data[base + off + a * stride] = acc;
                }
            }
        }
        stride *= pu;
    }
}

/// In place: values over F_p (indexed by x) to monomial coefficients in
/// `{0, .., p-1}` (indexed by exponent vector).
pub(crate) fn monomial_coefficients(p: u32, n: usize, data: &mut [u64]) {
    let vm = vandermonde(p);
    let pu = p as usize;
    let p64 = p as u64;
    let mut buf = vec![0u64; pu];
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * pu;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (a, b) in buf.iter_mut().enumerate() {
                    *b = data[base + off + a * stride];
                }
                for i in 0..pu {
                    let mut acc = 0u64;
                    for a in 0..pu {
                        acc += vm.inverse[i * pu + a] as u64 * buf[a];
                    }
                    data[base + off + i * stride] = acc % p64;
                }
            }
        }
        stride *= pu;
    }
}

/// `a - b mod m` for residues `a, b < m`.
#[inline]
fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// Peels the canonical form off a table of numerators over `p^exp`,
/// deepest layer first.
pub fn interpolate(space: &Space, exp: u32, table: &[u64]) -> Result<CanonicalForm> {
    let p = space.p();
    let n = space.n();
    if table.len() != space.size() {
        return Err(Error::DimensionMismatch { expected: space.size(), got: table.len() });
    }
    let alpha = TorusValue::from_parts(p, table[0] % pow_u64(p, exp), exp);
    let mut modulus = pow_u64(p, exp);
    let base = table[0] % modulus;
    let mut work: Vec<u64> = table.iter().map(|&v| sub_mod(v % modulus, base, modulus)).collect();
    let mut layer = vec![0u64; work.len()];
    let mut terms = Vec::new();
    let p64 = p as u64;
    for e in (1..=exp).rev() {
        for (l, w) in layer.iter_mut().zip(&work) {
            *l = if p == 2 { w & 1 } else { w % p64 };
        }
        if layer.iter().any(|&v| v != 0) {
            monomial_coefficients(p, n, &mut layer);
            let depth = e - 1;
            let start = terms.len();
            for (mono, &c) in layer.iter().enumerate() {
                if c != 0 {
                    debug_assert!(mono != 0);
                    terms.push(Term { depth, mono: mono as u64, coeff: c as u32 });
                }
            }
            debug_assert!(terms.len() > start);
            monomial_values(p, n, &mut layer, modulus);
            for (w, l) in work.iter_mut().zip(&layer) {
                *w = sub_mod(*w, *l, modulus);
            }
        }
        modulus /= p64;
        for w in work.iter_mut() {
            debug_assert_eq!(*w % p64, 0);
            *w = if p == 2 { *w >> 1 } else { *w / p64 };
        }
    }
    terms.sort_unstable();
    Ok(CanonicalForm::from_sorted(p, n, alpha, terms))
}

/// Interpolation that fails unless the result has degree at most `bound`.
pub fn interpolate_bounded(space: &Space, exp: u32, table: &[u64], bound: u32) -> Result<CanonicalForm> {
    let form = interpolate(space, exp, table)?;
    match form.degree() {
        Some(d) if d > bound => Err(Error::DegreeTooHigh { bound: bound as i64, found: d as i64 }),
        _ => Ok(form),
    }
}
