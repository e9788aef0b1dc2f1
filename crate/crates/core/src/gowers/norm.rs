use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::counter::{CyclotomicMean, UnityCounter};
use crate::algebra::field::pow_u64;
use crate::algebra::space::{chunk_ranges, Space};
use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;

use super::function::BoundedFunction;

/// Default cap on elementary operations for a norm evaluation.
pub const DEFAULT_NORM_BUDGET: u128 = 1 << 32;

const CHUNKS: usize = 64;

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn tuple_digits(mut idx: usize, size: usize, out: &mut [usize]) {
    for h in out.iter_mut() {
        *h = idx % size;
        idx /= size;
    }
}

/// `||f||_{U^d}^{2^d}` straight from the definition: the product of the
/// `2^d` conjugated shifts, averaged over every `(h_1, ..., h_d, x)`.
pub fn gowers_power_direct(f: &BoundedFunction, d: usize, budget: u128) -> Result<f64> {
    let space = *f.space();
    let size = space.size();
    let tuples = (size as u128).saturating_pow(d as u32);
    check_budget(tuples.saturating_mul(size as u128) << d, budget)?;
    let vals = f.values();
    let partials: Vec<Complex64> = chunk_ranges(tuples as usize, CHUNKS)
        .into_par_iter()
        .map(|range| {
            let mut hs = vec![0usize; d];
            let mut corners = vec![0usize; 1 << d];
            let mut acc = Complex64::new(0.0, 0.0);
            for idx in range {
                tuple_digits(idx, size, &mut hs);
                // corner offsets omega . h
                for (w, c) in corners.iter_mut().enumerate() {
                    let mut off = 0;
                    for (t, &h) in hs.iter().enumerate() {
                        if w >> t & 1 == 1 {
                            off = space.add(off, h);
                        }
                    }
                    *c = off;
                }
                for x in 0..size {
                    let mut prod = Complex64::new(1.0, 0.0);
                    for (w, &off) in corners.iter().enumerate() {
                        let v = vals[space.add(x, off)];
                        prod *= if w.count_ones() % 2 == 1 { v.conj() } else { v };
                    }
                    acc += prod;
                }
            }
            acc
        })
        .collect();
    let total: Complex64 = partials.into_iter().sum();
    Ok(total.re / (tuples as f64 * size as f64))
}

/// `||f||_{U^d}^{2^d}` by `E_h ||Delta_h f||_{U^{d-1}}^{2^{d-1}}` down to
/// `||f||_{U^1}^2 = |E f|^2`.
pub fn gowers_power_recursive(f: &BoundedFunction, d: usize, budget: u128) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidForm("Gowers norms start at d = 1".into()));
    }
    let size = f.space().size() as u128;
    check_budget(size.saturating_pow(d as u32), budget)?;
    Ok(recursive_power(f.space(), f.values(), d))
}

fn recursive_power(space: &Space, vals: &[Complex64], d: usize) -> f64 {
    if d == 1 {
        let m: Complex64 = vals.iter().sum::<Complex64>() / vals.len() as f64;
        return m.norm_sqr();
    }
    let size = space.size();
    let sum: f64 = (0..size)
        .map(|h| {
            let der: Vec<Complex64> = (0..size).map(|x| vals[space.add(x, h)] * vals[x].conj()).collect();
            recursive_power(space, &der, d - 1)
        })
        .sum();
    sum / size as f64
}

/// `||f||_{U^d}`.
pub fn gowers_norm(f: &BoundedFunction, d: usize) -> Result<f64> {
    let power = gowers_power_recursive(f, d, DEFAULT_NORM_BUDGET)?;
    Ok(power.max(0.0).powf(1.0 / (1u64 << d) as f64))
}

/// Exact `||e(P)||_{U^d}^{2^d} = E_{h, x} e(dh_1 ... dh_d P(x))`, from the
/// residue counts of every iterated derivative.
pub fn gowers_power_exact(poly: &NCPoly, d: usize, budget: u128) -> Result<CyclotomicMean> {
    let space = *poly.space();
    let size = space.size();
    check_budget((size as u128).saturating_pow(d as u32 + 1), budget)?;
    let exp = poly.exp();
    let modulus = pow_u64(poly.p(), exp);
    let table = poly.table().to_vec();
    let counter = if d == 0 {
        let mut c = UnityCounter::new(poly.p(), exp);
        for &v in &table {
            c.add_residue(v, 1);
        }
        c
    } else {
        chunk_ranges(size, CHUNKS)
            .into_par_iter()
            .map(|range| {
                let mut c = UnityCounter::new(poly.p(), exp);
                let mut scratch = vec![vec![0u64; size]; d];
                let (head, rest) = scratch.split_first_mut().expect("d >= 1");
                for h in range {
                    derive_into(&space, modulus, &table, h, head);
                    accumulate(&space, modulus, head, rest, &mut c);
                }
                c
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(UnityCounter::new(poly.p(), exp), |mut a, b| {
                a.merge(&b);
                a
            })
    };
    counter.expectation()
}

fn derive_into(space: &Space, modulus: u64, src: &[u64], h: usize, out: &mut [u64]) {
    for (x, o) in out.iter_mut().enumerate() {
        *o = (src[space.add(x, h)] + modulus - src[x]) % modulus;
    }
}

/// Applies one more derivative per remaining scratch level, then counts.
fn accumulate(space: &Space, modulus: u64, src: &[u64], scratch: &mut [Vec<u64>], c: &mut UnityCounter) {
    let Some((head, rest)) = scratch.split_first_mut() else {
        for &v in src {
            c.add_residue(v, 1);
        }
        return;
    };
    for h in 0..space.size() {
        derive_into(space, modulus, src, h, head);
        accumulate(space, modulus, head, rest, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse_poly;
    use num_rational::Ratio;

    #[test]
    fn constant_one_has_norm_one() {
        let s = Space::new(2, 3).unwrap();
        let one = BoundedFunction::one(s);
        for d in 1..4 {
            assert!((gowers_norm(&one, d).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_and_quadratic_phases() {
        let s = Space::new(2, 2).unwrap();
        let lin = parse_poly(&s, "1/2*x1").unwrap();
        let f = BoundedFunction::phase(&lin);
        assert!((gowers_norm(&f, 2).unwrap() - 1.0).abs() < 1e-12);
        let quad = parse_poly(&s, "1/2*x1*x2").unwrap();
        let exact = gowers_power_exact(&quad, 2, DEFAULT_NORM_BUDGET).unwrap();
        assert_eq!(exact.as_rational(), Some(Ratio::new(1, 4)));
        let g = BoundedFunction::phase(&quad);
        assert!((gowers_power_direct(&g, 2, DEFAULT_NORM_BUDGET).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn direct_and_recursive_agree() {
        let mut rng = crate::rng::seeded(11);
        for (p, n, d) in [(2u32, 3usize, 3usize), (3, 2, 2), (2, 4, 2), (5, 1, 3)] {
            let s = Space::new(p, n).unwrap();
            let f = BoundedFunction::random(s, &mut rng);
            let a = gowers_power_direct(&f, d, DEFAULT_NORM_BUDGET).unwrap();
            let b = gowers_power_recursive(&f, d, DEFAULT_NORM_BUDGET).unwrap();
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
