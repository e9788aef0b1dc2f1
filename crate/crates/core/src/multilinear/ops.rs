use crate::algebra::binom::binom_mod_p;
use crate::algebra::field::{pow_u64, PrimeField};
use crate::algebra::torus::TorusValue;
use crate::error::{Error, Result};
use crate::ncpoly::{CanonicalForm, NCPoly, Term};

use super::csm::{max_multiplicity, multisets, CsmForm};

/// Builds an arity-`k` form from its values on sorted basis tuples, checking
/// that tuples with `p` repeated indices get zero.
fn form_from_basis(p: u32, n: usize, k: usize, value: impl Fn(&[usize]) -> u32) -> Result<CsmForm> {
    let mut entries = Vec::new();
    for a in multisets(n, k, k) {
        let c = value(&a) % p;
        if c == 0 {
            continue;
        }
        if max_multiplicity(&a) >= p as usize {
            return Err(Error::InvalidForm(format!("result is not classical at {a:?}")));
        }
        entries.push((a, c));
    }
    CsmForm::new(p, n, k, entries)
}

/// `(S * T)(h_1, ..., h_{k+l}) = sum over k-subsets A of S(h_A) T(h_{A^c})`.
pub fn concat(s: &CsmForm, t: &CsmForm) -> Result<CsmForm> {
    s.check_compatible(t)?;
    let (k, l) = (s.arity(), t.arity());
    let total = k + l;
    let f = PrimeField::new(s.p())?;
    form_from_basis(s.p(), s.n(), total, |m| {
        let mut acc = 0;
        for mask in 0u32..(1 << total) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let (mut left, mut right) = (Vec::with_capacity(k), Vec::with_capacity(l));
            for (pos, &i) in m.iter().enumerate() {
                if mask >> pos & 1 == 1 {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            acc = f.add(acc, f.mul(s.coeff(&left), t.coeff(&right)));
        }
        acc
    })
}

/// Sum over the ways to split `slots` into unordered blocks of size `k`, of
/// the product of `T` on the blocks.
fn partition_sum(t: &CsmForm, f: PrimeField, slots: &mut Vec<usize>, k: usize) -> u32 {
    if slots.is_empty() {
        return 1;
    }
    let first = slots.remove(0);
    let rest = slots.clone();
    let mut acc = 0;
    // choose the k - 1 companions of the smallest remaining slot
    let r = rest.len();
    for mask in 0u32..(1 << r) {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let mut block = vec![first];
        let mut others = Vec::with_capacity(r + 1 - k);
        for (pos, &i) in rest.iter().enumerate() {
            if mask >> pos & 1 == 1 {
                block.push(i);
            } else {
                others.push(i);
            }
        }
        let c = t.coeff(&block);
        if c != 0 {
            acc = f.add(acc, f.mul(c, partition_sum(t, f, &mut others, k)));
        }
    }
    slots.insert(0, first);
    acc
}

/// `Sym^m(T)`: sum over partitions of the `mk` slots into `m` blocks of size
/// `k`. Defined for arity at least 2.
pub fn sym_power(t: &CsmForm, m: usize) -> Result<CsmForm> {
    let k = t.arity();
    if k < 2 {
        return Err(Error::InvalidForm("symmetric powers need arity at least 2".into()));
    }
    if m == 0 {
        return Err(Error::InvalidForm("symmetric power must be positive".into()));
    }
    let f = PrimeField::new(t.p())?;
    form_from_basis(t.p(), t.n(), m * k, |a| partition_sum(t, f, &mut a.to_vec(), k))
}

/// A classical polynomial `P` of degree at most `k` with `d^k P = T`.
pub fn antiderivative(t: &CsmForm) -> Result<NCPoly> {
    let (p, n) = (t.p(), t.n());
    let f = PrimeField::new(p)?;
    let mut terms = Vec::new();
    for (a, &c) in t.coeffs() {
        let mut exps = vec![0u32; n];
        for &i in a {
            exps[i] += 1;
        }
        let denom = exps.iter().fold(1, |acc, &e| f.mul(acc, f.factorial(e)));
        let mono = exps.iter().rev().fold(0u64, |acc, &e| acc * p as u64 + e as u64);
        terms.push(Term { depth: 0, mono, coeff: f.mul(c, f.inv(denom)) });
    }
    let form = CanonicalForm::new(p, n, TorusValue::zero(p), terms)?;
    NCPoly::from_canonical(crate::algebra::space::Space::new(p, n)?, form)
}

/// A classical `Q` of degree at most `mk` with `d^{mk} Q = Sym^m(d^k P)`:
/// lift `P` to a root `P~` with `p^M P~ = P`, `M` minimal with `m < p^{M+1}`,
/// and take `binom(N, m) mod p` of the numerator `N` of `P~`.
pub fn binomial_lift_power(poly: &NCPoly, m: u64) -> Result<NCPoly> {
    if !poly.is_classical() {
        return Err(Error::NonClassical("binomial lift needs a classical polynomial"));
    }
    let p = poly.p();
    let mut levels = 0;
    while (m as u128) >= (p as u128).pow(levels + 1) {
        levels += 1;
    }
    let mut root = poly.clone();
    for _ in 0..levels {
        root = root.pth_root()?;
    }
    let numerators = root.table_at(levels + 1);
    debug_assert!(numerators.iter().all(|&v| v < pow_u64(p, levels + 1)));
    Ok(NCPoly::classical_from_fn(*poly.space(), |x| binom_mod_p(numerators[x], m, p)))
}
