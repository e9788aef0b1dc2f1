use serde::{Deserialize, Serialize};

use crate::algebra::field::PrimeField;
use crate::algebra::space::Space;
use crate::error::{Error, Result};

use super::csm::{max_multiplicity, multisets, CsmForm};

/// An `F_p`-valued multilinear form `V^k -> F_p` stored by its values on
/// basis tuples and extended by multilinearity. Entry `(i_1, ..., i_k)` sits
/// at `sum_t i_t n^(k - 1 - t)`, so the first argument is most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultilinearTable {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub values: Vec<u32>,
}

impl MultilinearTable {
    pub fn zero(p: u32, n: usize, k: usize) -> Self {
        Self { p, n, k, values: vec![0; n.pow(k as u32)] }
    }

    pub fn from_values(p: u32, n: usize, k: usize, values: Vec<u32>) -> Result<Self> {
        PrimeField::new(p)?;
        if values.len() != n.pow(k as u32) {
            return Err(Error::DimensionMismatch { expected: n.pow(k as u32), got: values.len() });
        }
        let values = values.into_iter().map(|v| v % p).collect();
        Ok(Self { p, n, k, values })
    }

    pub fn index(&self, basis: &[usize]) -> usize {
        basis.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, basis: &[usize]) -> u32 {
        self.values[self.index(basis)]
    }

    pub fn set(&mut self, basis: &[usize], v: u32) {
        let i = self.index(basis);
        self.values[i] = v % self.p;
    }

    /// Writes `v` at every permutation of `basis`.
    pub fn set_symmetric(&mut self, basis: &[usize], v: u32) {
        let mut perm = basis.to_vec();
        perm.sort_unstable();
        loop {
            self.set(&perm, v);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Restricts the first argument to `h`: the form `T(h, ., ..., .)`.
    pub fn contract_first(&self, space: &Space, h: usize) -> Self {
        assert!(self.k >= 1);
        let f = space.field();
        let stride = self.n.pow(self.k as u32 - 1);
        let mut out = vec![0u32; stride];
        for (i, d) in space.digits(h).into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let slice = &self.values[i * stride..(i + 1) * stride];
            for (o, &s) in out.iter_mut().zip(slice) {
                *o = f.add(*o, f.mul(d, s));
            }
        }
        Self { p: self.p, n: self.n, k: self.k - 1, values: out }
    }

    /// `T(h_1, ..., h_k)` for vectors given as space indices.
    pub fn eval(&self, space: &Space, args: &[usize]) -> u32 {
        assert_eq!(args.len(), self.k);
        let mut cur = self.clone();
        for &h in args {
            cur = cur.contract_first(space, h);
        }
        cur.values[0]
    }

    pub fn is_symmetric(&self) -> bool {
        let mut basis = vec![0usize; self.k];
        for idx in 0..self.values.len() {
            let mut r = idx;
            for t in (0..self.k).rev() {
                basis[t] = r % self.n;
                r /= self.n;
            }
            let mut sorted = basis.clone();
            sorted.sort_unstable();
            if self.get(&sorted) != self.values[idx] {
                return false;
            }
        }
        true
    }

    /// Symmetric and vanishing whenever an index occurs `p` or more times.
    pub fn is_classical(&self) -> bool {
        self.is_symmetric()
            && multisets(self.n, self.k, self.k)
                .iter()
                .all(|a| max_multiplicity(a) < self.p as usize || self.get(a) == 0)
    }

    pub fn to_csm(&self) -> Result<CsmForm> {
        if !self.is_symmetric() {
            return Err(Error::InvalidForm("table is not symmetric".into()));
        }
        if !self.is_classical() {
            return Err(Error::InvalidForm("table does not vanish on p repeated arguments".into()));
        }
        let entries = multisets(self.n, self.k, self.p as usize - 1)
            .into_iter()
            .map(|a| {
                let c = self.get(&a);
                (a, c)
            })
            .filter(|(_, c)| *c != 0);
        CsmForm::new(self.p, self.n, self.k, entries)
    }
}

/// Lexicographic successor; false once the sequence is the last permutation.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_multisets() {
        let mut a = vec![0, 1, 1];
        let mut seen = vec![a.clone()];
        while next_permutation(&mut a) {
            seen.push(a.clone());
        }
        assert_eq!(seen, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn dot_product_form() {
        let s = Space::new(2, 3).unwrap();
        let mut t = MultilinearTable::zero(2, 3, 2);
        for i in 0..3 {
            t.set(&[i, i], 1);
        }
        assert!(t.is_symmetric());
        assert!(!t.is_classical());
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(t.eval(&s, &[a, b]), s.dot(a, b));
            }
        }
    }

    #[test]
    fn classical_round_trip() {
        let form = CsmForm::new(3, 2, 2, [(vec![0, 0], 1), (vec![0, 1], 2)]).unwrap();
        let t = form.to_table();
        assert!(t.is_classical());
        assert_eq!(t.to_csm().unwrap(), form);
        let mut asym = t.clone();
        asym.set(&[0, 1], 1);
        assert!(asym.to_csm().is_err());
    }
}
