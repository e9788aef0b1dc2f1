use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::counter::{residue_mean, CyclotomicMean};
use crate::algebra::space::Space;
use crate::error::{Error, Result};
use crate::multilinear::MultilinearTable;
use crate::weighted::Factor;

use super::cube::{enumerate_hk, hk_size};
use super::group::FilteredGroup;

/// Distribution of a map `A -> B = prod Z/m_t` against the uniform one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquidistReport {
    pub domain: u64,
    pub target: u64,
    /// `max_{xi != 0} |E_a e(xi . f(a))|`; the magnitude is algebraic, so it
    /// is reported in floating point alongside exact zero tests.
    pub max_bias: f64,
    pub max_bias_character: Vec<u64>,
    pub all_biases_zero: bool,
    /// `max_b | |{f = b}| / |A| - 1/|B| |`, exactly.
    #[serde(serialize_with = "ratio_string")]
    pub max_deviation: Ratio<i128>,
    /// `deviation <= max bias`, and zero biases exactly when uniform.
    pub fourier_consistent: bool,
}

/// Histogram and character sums of `values` (indices into `prod Z/m_t`,
/// first factor fastest).
pub fn equidistribution_report(orders: &[u64], values: &[usize]) -> Result<EquidistReport> {
    if values.is_empty() {
        return Err(Error::EmptyCounter);
    }
    let target: u64 = orders.iter().product();
    let mut hist = vec![0u64; target as usize];
    for &v in values {
        if v as u64 >= target {
            return Err(Error::InvalidGroup(format!("value {v} outside a group of order {target}")));
        }
        hist[v] += 1;
    }
    let domain = values.len() as u64;
    let max_deviation = hist
        .iter()
        .map(|&c| abs_ratio(Ratio::new(c as i128, domain as i128) - Ratio::new(1, target as i128)))
        .max()
        .unwrap_or_else(|| Ratio::from_integer(0));

    let modulus = orders.iter().fold(1u64, |acc, &m| acc.lcm(&m));
    let digits: Vec<Vec<u64>> = (0..target as usize).map(|b| mixed_digits(b, orders)).collect();
    let biases: Vec<(usize, CyclotomicMean)> = (1..target as usize)
        .into_par_iter()
        .map(|xi| {
            let xd = mixed_digits(xi, orders);
            let mut counts = vec![0u64; modulus as usize];
            for (b, &c) in hist.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let r = xd
                    .iter()
                    .zip(&digits[b])
                    .zip(orders)
                    .map(|((&x, &y), &m)| x * y % m * (modulus / m))
                    .sum::<u64>()
                    % modulus;
                counts[r as usize] += c;
            }
            residue_mean(&counts).map(|mean| (xi, mean))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_bias = 0.0f64;
    let mut arg = 0usize;
    for (xi, mean) in &biases {
        let b = mean.to_complex().norm();
        if b > max_bias + 1e-15 {
            max_bias = b;
            arg = *xi;
        }
    }
    let all_biases_zero = biases.iter().all(|(_, m)| m.is_zero());
    let uniform = max_deviation == Ratio::from_integer(0);
    let dev = *max_deviation.numer() as f64 / *max_deviation.denom() as f64;
    let fourier_consistent = dev <= max_bias + 1e-12 && all_biases_zero == uniform;
    Ok(EquidistReport {
        domain,
        target,
        max_bias,
        max_bias_character: mixed_digits(arg, orders),
        all_biases_zero,
        max_deviation,
        fourier_consistent,
    })
}

fn abs_ratio(r: Ratio<i128>) -> Ratio<i128> {
    if r < Ratio::from_integer(0) {
        -r
    } else {
        r
    }
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn mixed_digits(mut b: usize, orders: &[u64]) -> Vec<u64> {
    orders
        .iter()
        .map(|&m| {
            let d = b as u64 % m;
            b /= m as usize;
            d
        })
        .collect()
}

/// One form applied to every increasing `k`-subset of `d` arguments.
pub fn joint_form_values(space: &Space, forms: &[MultilinearTable], d: usize, budget: u128) -> Result<(Vec<u64>, Vec<usize>)> {
    let size = space.size();
    let needed = (size as u128).saturating_pow(d as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let p = space.p() as u64;
    let mut slots: Vec<(usize, Vec<usize>)> = Vec::new();
    for (f, form) in forms.iter().enumerate() {
        for subset in increasing_subsets(d, form.k) {
            slots.push((f, subset));
        }
    }
    let orders = vec![p; slots.len()];
    let values = (0..needed as usize)
        .into_par_iter()
        .map(|idx| {
            let hs: Vec<usize> = (0..d).map(|t| idx / size.pow(t as u32) % size).collect();
            slots.iter().rev().fold(0usize, |acc, (f, subset)| {
                let args: Vec<usize> = subset.iter().map(|&j| hs[j]).collect();
                acc * p as usize + forms[*f].eval(space, &args) as usize
            })
        })
        .collect();
    Ok((orders, values))
}

/// Equidistribution of `(h_1..h_d) -> (T(h_{j_1}, ..., h_{j_k}))` over all
/// forms and increasing index tuples.
pub fn joint_equidistribution_report(space: &Space, forms: &[MultilinearTable], d: usize, budget: u128) -> Result<EquidistReport> {
    let (orders, values) = joint_form_values(space, forms, d, budget)?;
    equidistribution_report(&orders, &values)
}

fn increasing_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << d)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..d).filter(|&j| m >> j & 1 == 1).collect())
        .collect()
}

/// Equidistribution of `x -> (P_{i,J_i}(x))_i` in `prod Z/p^{J_i+1}`.
pub fn factor_equidistribution(factor: &Factor) -> Result<EquidistReport> {
    let p = factor.space().p() as u64;
    let orders: Vec<u64> = factor.depths().iter().map(|&j| p.pow(j + 1)).collect();
    let values: Vec<usize> = factor
        .top_map()
        .into_iter()
        .map(|a| a.iter().zip(&orders).rev().fold(0usize, |acc, (&v, &m)| acc * m as usize + v.rem_euclid(m as i64) as usize))
        .collect();
    equidistribution_report(&orders, &values)
}

/// How evenly a map sends `HK^k(H)` onto `HK^k(G)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubeDistribution {
    pub k: usize,
    pub source_cubes: u64,
    pub target_cubes: u64,
    pub images_hit: u64,
    /// `max_c | P(image = c) - 1/|HK^k(G)| |` over all target cubes.
    #[serde(serialize_with = "ratio_string")]
    pub max_deviation: Ratio<i128>,
}

pub fn cube_equidistribution(phi: &[usize], h: &FilteredGroup, g: &FilteredGroup, k: usize, budget: u128) -> Result<CubeDistribution> {
    let cubes = enumerate_hk(h, k, budget)?;
    let target = hk_size(g, k);
    if target > i64::MAX as u128 {
        return Err(Error::BudgetExceeded { needed: target, budget: i64::MAX as u128 });
    }
    let mut hist: HashMap<Vec<usize>, u64> = HashMap::new();
    for c in &cubes {
        let image: Vec<usize> = c.entries.iter().map(|&x| phi[x]).collect();
        *hist.entry(image).or_default() += 1;
    }
    let n = cubes.len() as i128;
    let uniform = Ratio::new(1, target as i128);
    let mut max_deviation = if (hist.len() as u128) < target { uniform } else { Ratio::from_integer(0) };
    for &c in hist.values() {
        max_deviation = max_deviation.max(abs_ratio(Ratio::new(c as i128, n) - uniform));
    }
    Ok(CubeDistribution {
        k,
        source_cubes: cubes.len() as u64,
        target_cubes: target as u64,
        images_hit: hist.len() as u64,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_uniform() {
        let r = equidistribution_report(&[5], &[0, 1, 2, 3, 4]).unwrap();
        assert!(r.all_biases_zero);
        assert_eq!(r.max_deviation, Ratio::from_integer(0));
        assert!(r.fourier_consistent);
    }

    #[test]
    fn constant_map_has_full_bias() {
        let r = equidistribution_report(&[4, 2], &[3; 6]).unwrap();
        assert!((r.max_bias - 1.0).abs() < 1e-12);
        assert_eq!(r.max_deviation, Ratio::new(7, 8));
        assert!(r.fourier_consistent);
    }

    #[test]
    fn repeated_form_is_diagonal() {
        let s = Space::new(2, 3).unwrap();
        let dot = MultilinearTable::from_values(2, 3, 2, (0..9).map(|i| (i / 3 == i % 3) as u32).collect()).unwrap();
        let single = joint_equidistribution_report(&s, std::slice::from_ref(&dot), 2, 1 << 20).unwrap();
        let twice = joint_equidistribution_report(&s, &[dot.clone(), dot], 2, 1 << 20).unwrap();
        assert!(single.max_deviation < twice.max_deviation);
        assert!((twice.max_bias - 1.0).abs() < 1e-12);
    }
}
