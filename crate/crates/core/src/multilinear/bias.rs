use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::counter::UnityCounter;
use crate::algebra::field::PrimeField;
use crate::algebra::space::{chunk_ranges, gray_steps, Space};
use crate::error::{Error, Result};

use super::table::MultilinearTable;

/// Default operation budget `|V|^(k-1) * n` for bias computations.
pub const DEFAULT_BIAS_BUDGET: u128 = 1 << 30;

/// Fixed number of work chunks, independent of the thread count.
const CHUNKS: usize = 64;

/// The exact bias `E e(iota(T(h_1, ..., h_k)))`, stored as the number of
/// tuples `(h_1, ..., h_{k-1})` on which `T(h_1, ..., h_{k-1}, .)` vanishes
/// over `|V|^(k-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bias {
    pub p: u32,
    pub count: u128,
    pub total: u128,
}

impl Bias {
    pub fn ratio(&self) -> Ratio<u128> {
        Ratio::new(self.count, self.total)
    }

    pub fn value(&self) -> f64 {
        self.count as f64 / self.total as f64
    }

    /// `-log_p` of the bias; infinite for zero bias.
    pub fn neg_log(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        ((self.total as f64).ln() - (self.count as f64).ln()) / (self.p as f64).ln()
    }

    /// The exponent `r` if the bias equals `p^-r` exactly.
    pub fn exact_exponent(&self) -> Option<u32> {
        let r = self.ratio();
        if *r.numer() != 1 {
            return None;
        }
        let mut d = *r.denom();
        let mut e = 0;
        while d > 1 {
            if !d.is_multiple_of(self.p as u128) {
                return None;
            }
            d /= self.p as u128;
            e += 1;
        }
        Some(e)
    }

    pub fn to_string_exact(&self) -> String {
        let r = self.ratio();
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Operation estimate `|V|^(k-1) * n`.
pub fn bias_cost(p: u32, n: usize, k: usize) -> u128 {
    let v = (p as u128).saturating_pow(n as u32);
    v.saturating_pow(k.saturating_sub(1) as u32).saturating_mul(n.max(1) as u128)
}

pub fn bias(t: &MultilinearTable) -> Result<Bias> {
    bias_with_budget(t, DEFAULT_BIAS_BUDGET)
}

/// Exact bias by counting kernels: the innermost two arguments form an
/// `n x n` matrix whose kernel has `p^(n - rank)` vectors.
pub fn bias_with_budget(t: &MultilinearTable, budget: u128) -> Result<Bias> {
    let needed = bias_cost(t.p, t.n, t.k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let space = Space::with_cap(t.p, t.n, u128::MAX)?;
    let p = t.p;
    let v = space.size() as u128;
    let total = v.pow(t.k.saturating_sub(1) as u32);
    let count = match t.k {
        0 => u128::from(t.values[0] == 0),
        1 => u128::from(t.is_zero()),
        2 => kernel_size(&t.values, t.n, space.field()),
        _ => {
            let steps = gray_steps(p, t.n);
            chunk_ranges(space.size(), CHUNKS)
                .into_par_iter()
                .map(|range| {
                    range
                        .map(|h| {
                            let inner = t.contract_first(&space, h);
                            count_gray(&inner, &space, &steps)
                        })
                        .sum::<u128>()
                })
                .collect::<Vec<_>>()
                .into_iter()
                .sum()
        }
    };
    Ok(Bias { p, count, total })
}

/// Number of `(h_1, ..., h_{r-1})` killing the arity-`r` table, walking each
/// argument along a Gray code so every step is a single slice update.
fn count_gray(t: &MultilinearTable, space: &Space, steps: &[(usize, u32)]) -> u128 {
    let f = space.field();
    if t.k == 2 {
        return kernel_size(&t.values, t.n, f);
    }
    let stride = t.n.pow(t.k as u32 - 1);
    let mut cur = MultilinearTable { p: t.p, n: t.n, k: t.k - 1, values: vec![0; stride] };
    let mut count = count_gray(&cur, space, steps);
    for &(coord, delta) in steps {
        let slice = &t.values[coord * stride..(coord + 1) * stride];
        for (c, &s) in cur.values.iter_mut().zip(slice) {
            *c = f.add(*c, f.mul(delta, s));
        }
        count += count_gray(&cur, space, steps);
    }
    count
}

/// `p^(n - rank M)` for the `n x n` matrix `M` (row-major).
fn kernel_size(m: &[u32], n: usize, f: PrimeField) -> u128 {
    let rank = if f.p() == 2 && n <= 64 {
        rank_gf2(m, n)
    } else {
        rank_mod_p(m, n, f)
    };
    (f.p() as u128).pow((n - rank) as u32)
}

fn rank_gf2(m: &[u32], n: usize) -> usize {
    let mut rows: Vec<u64> = (0..n)
        .map(|i| (0..n).fold(0u64, |acc, j| acc | (u64::from(m[i * n + j] & 1) << j)))
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u64 << col;
        if let Some(piv) = (rank..n).find(|&r| rows[r] & bit != 0) {
            rows.swap(rank, piv);
            let pivot = rows[rank];
            for r in 0..n {
                if r != rank && rows[r] & bit != 0 {
                    rows[r] ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

fn rank_mod_p(m: &[u32], n: usize, f: PrimeField) -> usize {
    let mut a = m.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..n).find(|&r| a[r * n + col] != 0) else {
            continue;
        };
        for j in 0..n {
            a.swap(rank * n + j, piv * n + j);
        }
        let inv = f.inv(a[rank * n + col]);
        for r in 0..n {
            if r == rank || a[r * n + col] == 0 {
                continue;
            }
            let factor = f.mul(a[r * n + col], inv);
            for j in col..n {
                let sub = f.mul(factor, a[rank * n + j]);
                a[r * n + j] = f.sub(a[r * n + j], sub);
            }
        }
        rank += 1;
    }
    rank
}

/// Exact `E e(iota(T(h)))` by summing over all of `V^k`; the reference
/// oracle for [`bias`]. Returns the counter of values.
pub fn naive_bias_counter(t: &MultilinearTable) -> Result<UnityCounter> {
    let space = Space::new(t.p, t.n)?;
    let mut counter = UnityCounter::new(t.p, 1);
    let mut args = vec![0usize; t.k];
    let total = space.size().pow(t.k as u32);
    for idx in 0..total {
        let mut r = idx;
        for a in args.iter_mut() {
            *a = r % space.size();
            r /= space.size();
        }
        counter.add_residue(t.eval(&space, &args) as u64, 1);
    }
    Ok(counter)
}
