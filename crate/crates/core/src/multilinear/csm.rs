use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::field::PrimeField;
use crate::algebra::space::Space;
use crate::error::{Error, Result};

use super::table::MultilinearTable;

/// A classical symmetric multilinear form `V^k -> F_p`.
///
/// Stored by coordinate multisets: the coefficient of the sorted index tuple
/// `A` is `T(e_{a_1}, ..., e_{a_k})`. Indices are 0-based here and 1-based in
/// JSON. Multiplicities never reach `p`, which is what makes the form
/// classical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsmForm {
    p: u32,
    n: usize,
    k: usize,
    coeffs: BTreeMap<Vec<usize>, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub multiset: Vec<usize>,
    pub c: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsmJson {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<CoeffJson>,
}

/// Largest multiplicity of any entry of a sorted tuple.
pub(crate) fn max_multiplicity(sorted: &[usize]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for (i, &a) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == a { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

/// Every non-decreasing tuple of length `k` over `0..n` whose multiplicities
/// are at most `max_mult`.
pub fn multisets(n: usize, k: usize, max_mult: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, max_mult: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().copied().unwrap_or(0);
        for a in start..n {
            let run = cur.iter().rev().take_while(|&&b| b == a).count();
            if run < max_mult {
                cur.push(a);
                rec(n, k, max_mult, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, max_mult, &mut Vec::with_capacity(k), &mut out);
    out
}

impl CsmForm {
    pub fn zero(p: u32, n: usize, k: usize) -> Result<Self> {
        PrimeField::new(p)?;
        Ok(Self { p, n, k, coeffs: BTreeMap::new() })
    }

    /// Builds a form from `(multiset, coefficient)` pairs; multisets may be
    /// given in any order and repeated entries are summed.
    pub fn new(p: u32, n: usize, k: usize, entries: impl IntoIterator<Item = (Vec<usize>, u32)>) -> Result<Self> {
        let mut form = Self::zero(p, n, k)?;
        for (mut a, c) in entries {
            if a.len() != k {
                return Err(Error::InvalidForm(format!("multiset {a:?} does not have size {k}")));
            }
            if let Some(&bad) = a.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidForm(format!("index {} outside 1..={n}", bad + 1)));
            }
            a.sort_unstable();
            let c = c % p;
            if max_multiplicity(&a) >= p as usize {
                if c != 0 {
                    return Err(Error::InvalidForm(format!(
                        "multiset {a:?} repeats an index {p} or more times"
                    )));
                }
                continue;
            }
            form.add_coeff(a, c);
        }
        Ok(form)
    }

    fn add_coeff(&mut self, a: Vec<usize>, c: u32) {
        let p = self.p;
        let entry = self.coeffs.entry(a).or_insert(0);
        *entry = (*entry + c) % p;
        self.coeffs.retain(|_, v| *v != 0);
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn arity(&self) -> usize {
        self.k
    }
    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, u32> {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `T(e_{a_1}, ..., e_{a_k})` for an arbitrary index tuple.
    pub fn coeff(&self, indices: &[usize]) -> u32 {
        let mut a = indices.to_vec();
        a.sort_unstable();
        self.coeffs.get(&a).copied().unwrap_or(0)
    }

    /// Evaluates `T(h_1, ..., h_k)` on vectors given as space indices.
    pub fn eval(&self, space: &Space, args: &[usize]) -> u32 {
        assert_eq!(args.len(), self.k);
        let f = space.field();
        let digits: Vec<Vec<u32>> = args.iter().map(|&h| space.digits(h)).collect();
        let mut total = 0;
        for (a, &c) in &self.coeffs {
            // distinct arrangements of the multiset over the argument slots
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &i in a {
                *counts.entry(i).or_default() += 1;
            }
            let mut keys: Vec<(usize, usize)> = counts.into_iter().collect();
            let s = arrangements(f, &digits, 0, &mut keys);
            total = f.add(total, f.mul(c, s));
        }
        total
    }

    /// Dense tensor of basis values.
    pub fn to_table(&self) -> MultilinearTable {
        let mut t = MultilinearTable::zero(self.p, self.n, self.k);
        for (a, &c) in &self.coeffs {
            t.set_symmetric(a, c);
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.k != other.k {
            return Err(Error::InvalidForm("adding forms of different arity".into()));
        }
        let mut out = self.clone();
        for (a, &c) in &other.coeffs {
            out.add_coeff(a.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(a, &v)| (a.clone(), (v as u64 * c as u64 % p as u64) as u32))
            .filter(|(_, v)| *v != 0)
            .collect();
        Self { coeffs, ..self.clone() }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedPrime(self.p, other.p));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    pub fn to_json(&self) -> CsmJson {
        CsmJson {
            p: self.p,
            n: self.n,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, &c)| CoeffJson { multiset: a.iter().map(|i| i + 1).collect(), c })
                .collect(),
        }
    }

    pub fn from_json(j: &CsmJson) -> Result<Self> {
        let mut entries = Vec::with_capacity(j.coeffs.len());
        for e in &j.coeffs {
            if e.multiset.contains(&0) {
                return Err(Error::InvalidForm("multiset indices are 1-based".into()));
            }
            entries.push((e.multiset.iter().map(|i| i - 1).collect(), e.c));
        }
        Self::new(j.p, j.n, j.k, entries)
    }
}

/// Sum over assignments of the remaining index multiplicities to the slots
/// `slot..`, of the product of the chosen digits.
fn arrangements(f: PrimeField, digits: &[Vec<u32>], slot: usize, keys: &mut [(usize, usize)]) -> u32 {
    if slot == digits.len() {
        return 1;
    }
    let mut total = 0;
    for j in 0..keys.len() {
        let (i, left) = keys[j];
        if left == 0 {
            continue;
        }
        let d = digits[slot][i];
        if d == 0 {
            continue;
        }
        keys[j].1 -= 1;
        let rest = arrangements(f, digits, slot + 1, keys);
        keys[j].1 += 1;
        total = f.add(total, f.mul(d, rest));
    }
    total
}
