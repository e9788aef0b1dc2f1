use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::space::Space;
use crate::error::Result;
use crate::ncpoly::enumerate::random_poly;
use crate::rng::{substream, SplitMix64};

use super::function::BoundedFunction;
use super::norm::{gowers_norm, gowers_power_direct, DEFAULT_NORM_BUDGET};

pub const PROPERTY_TOLERANCE: f64 = 1e-8;

/// Aggregate result of one inequality over many random inputs. `margin` is
/// `rhs - lhs` for inequalities and `-|lhs - rhs|` for identities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub trials: u64,
    pub failures: u64,
    pub worst_margin: f64,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    fn new(property: &str) -> Self {
        Self { property: property.into(), trials: 0, failures: 0, worst_margin: f64::INFINITY, first_failure: None }
    }

    fn record(&mut self, margin: f64, describe: impl FnOnce() -> String) {
        self.trials += 1;
        self.worst_margin = self.worst_margin.min(margin);
        if margin < -PROPERTY_TOLERANCE {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_fn(space: Space, rng: &mut SplitMix64) -> BoundedFunction {
    BoundedFunction::random(space, rng)
}

fn random_table(len: usize, rng: &mut SplitMix64) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen::<f64>() * std::f64::consts::TAU))
        .collect()
}

fn norm(f: &BoundedFunction, d: usize) -> Result<f64> {
    gowers_norm(f, d)
}

/// Triangle inequality and homogeneity.
pub fn check_triangle(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "triangle");
    let mut out = PropertyOutcome::new("triangle");
    for t in 0..trials {
        let d = 1 + (t % 3) as usize;
        let (f, g) = (random_fn(space, &mut rng), random_fn(space, &mut rng));
        let lhs = norm(&f.add(&g), d)?;
        let rhs = norm(&f, d)? + norm(&g, d)?;
        out.record(rhs - lhs, || format!("trial {t}, d = {d}: {lhs} > {rhs}"));
        let doubled = norm(&g.scale(Complex64::new(2.0, 0.0)), d)?;
        let twice = 2.0 * norm(&g, d)?;
        out.record(-(doubled - twice).abs(), || format!("trial {t}, d = {d}: ||2g|| = {doubled} != {twice}"));
    }
    Ok(out)
}

/// `||f||_{U^d} <= ||f||_{U^{d+1}}`.
pub fn check_monotonicity(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "monotonicity");
    let mut out = PropertyOutcome::new("monotonicity");
    for t in 0..trials {
        let f = random_fn(space, &mut rng);
        let norms = (1..=3).map(|d| norm(&f, d)).collect::<Result<Vec<_>>>()?;
        for d in 0..2 {
            let (lo, hi) = (norms[d], norms[d + 1]);
            out.record(hi - lo, || format!("trial {t}: U^{} = {lo} > U^{} = {hi}", d + 1, d + 2));
        }
    }
    Ok(out)
}

/// `||f||_{U^d} <= ||f||_{L^{2^d/(d+1)}}`.
pub fn check_lp_bound(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "lp-bound");
    let mut out = PropertyOutcome::new("lp-bound");
    for t in 0..trials {
        let f = random_fn(space, &mut rng);
        for d in 1..=3usize {
            let lhs = norm(&f, d)?;
            let rhs = f.lp_norm((1u64 << d) as f64 / (d + 1) as f64);
            out.record(rhs - lhs, || format!("trial {t}, d = {d}: {lhs} > {rhs}"));
        }
    }
    Ok(out)
}

/// `|E prod_omega f_omega(x + omega . h)| <= prod_omega ||f_omega||_{U^d}`.
pub fn check_first_csg(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "first-cauchy-schwarz-gowers");
    let mut out = PropertyOutcome::new("first-cauchy-schwarz-gowers");
    let size = space.size();
    for t in 0..trials {
        let d = 1 + (t % 3) as usize;
        let fs: Vec<BoundedFunction> = (0..1 << d).map(|_| random_fn(space, &mut rng)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut hs = vec![0usize; d];
        for idx in 0..size.pow(d as u32) {
            let mut r = idx;
            for h in hs.iter_mut() {
                *h = r % size;
                r /= size;
            }
            for x in 0..size {
                let mut prod = Complex64::new(1.0, 0.0);
                for (w, f) in fs.iter().enumerate() {
                    let mut pt = x;
                    for (j, &h) in hs.iter().enumerate() {
                        if w >> j & 1 == 1 {
                            pt = space.add(pt, h);
                        }
                    }
                    prod *= f.values()[pt];
                }
                acc += prod;
            }
        }
        let lhs = acc.norm() / (size as f64).powi(d as i32 + 1);
        let rhs = fs.iter().map(|f| norm(f, d)).product::<Result<f64>>()?;
        out.record(rhs - lhs, || format!("trial {t}, d = {d}: {lhs} > {rhs}"));
    }
    Ok(out)
}

/// `|E f(x_1 + ... + x_d) prod_j F_j(x)| <= ||f||_{U^d}` with `F_j`
/// 1-bounded and independent of `x_j`.
pub fn check_second_csg(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "second-cauchy-schwarz-gowers");
    let mut out = PropertyOutcome::new("second-cauchy-schwarz-gowers");
    let size = space.size();
    for t in 0..trials {
        let d = 1 + (t % 3) as usize;
        let f = random_fn(space, &mut rng);
        let big: Vec<Vec<Complex64>> = (0..d).map(|_| random_table(size.pow(d as u32 - 1), &mut rng)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut xs = vec![0usize; d];
        for idx in 0..size.pow(d as u32) {
            let mut r = idx;
            for x in xs.iter_mut() {
                *x = r % size;
                r /= size;
            }
            let total = xs.iter().fold(0, |a, &x| space.add(a, x));
            let mut prod = f.values()[total];
            for (j, table) in big.iter().enumerate() {
                // index of the tuple with coordinate j removed
                let key = xs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .rev()
                    .fold(0, |a, (_, &x)| a * size + x);
                prod *= table[key];
            }
            acc += prod;
        }
        let lhs = acc.norm() / (size as f64).powi(d as i32);
        let rhs = norm(&f, d)?;
        out.record(rhs - lhs, || format!("trial {t}, d = {d}: {lhs} > {rhs}"));
    }
    Ok(out)
}

/// `||f e(P)||_{U^d} = ||f||_{U^d}` for `deg P <= d - 1`.
pub fn check_modulation(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "modulation");
    let mut out = PropertyOutcome::new("modulation");
    for t in 0..trials {
        let d = 1 + (t % 3) as usize;
        let f = random_fn(space, &mut rng);
        let poly = random_poly(&space, d as u32 - 1, true, &mut rng);
        let lhs = norm(&f.mul(&BoundedFunction::phase(&poly)), d)?;
        let rhs = norm(&f, d)?;
        out.record(-(lhs - rhs).abs(), || format!("trial {t}, d = {d}: {lhs} != {rhs}"));
    }
    Ok(out)
}

/// Agreement of the direct and recursive evaluations of `||f||^{2^d}`.
pub fn check_norm_strategies(space: Space, trials: u64, seed: u64) -> Result<PropertyOutcome> {
    let mut rng = substream(seed, "direct-vs-recursive");
    let mut out = PropertyOutcome::new("direct-vs-recursive");
    for t in 0..trials {
        let d = 1 + (t % 3) as usize;
        let f = random_fn(space, &mut rng);
        let a = gowers_power_direct(&f, d, DEFAULT_NORM_BUDGET)?;
        let b = super::norm::gowers_power_recursive(&f, d, DEFAULT_NORM_BUDGET)?;
        let diff = (a - b).abs();
        out.trials += 1;
        out.worst_margin = out.worst_margin.min(-diff);
        if diff > 1e-9 {
            out.failures += 1;
            out.first_failure.get_or_insert_with(|| format!("trial {t}, d = {d}: {a} vs {b}"));
        }
    }
    Ok(out)
}

/// All six properties plus the strategy cross-check.
pub fn verify_gowers_properties(seed: u64, space: Space, trials: u64) -> Result<Vec<PropertyOutcome>> {
    Ok(vec![
        check_triangle(space, trials, seed)?,
        check_monotonicity(space, trials, seed)?,
        check_lp_bound(space, trials, seed)?,
        check_first_csg(space, trials, seed)?,
        check_second_csg(space, trials, seed)?,
        check_modulation(space, trials, seed)?,
        check_norm_strategies(space, trials, seed)?,
    ])
}
