use rand::Rng;

use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;

use super::extract::dk_direct;

/// Outcome of checking `d^k P(h_1 x p, h_2, ..., h_r) = -d^r(pP)(h_1, ..., h_r)`
/// where `r = k - p + 1` and `h_1` fills the first `p` slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DkpReport {
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<Vec<usize>>,
}

impl DkpReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn check_tuple(poly: &NCPoly, times_p: &NCPoly, k: usize, hs: &[usize]) -> Result<bool> {
    let p = poly.p() as usize;
    let mut left_args = vec![hs[0]; p];
    left_args.extend_from_slice(&hs[1..]);
    debug_assert_eq!(left_args.len(), k);
    let left = dk_direct(poly, &left_args)?;
    let right = dk_direct(times_p, hs)?;
    Ok(left == poly.space().field().neg(right))
}

fn prepare(poly: &NCPoly, k: usize) -> Result<(NCPoly, usize)> {
    let p = poly.p() as usize;
    if k < p {
        return Err(Error::InvalidForm(format!("identity needs k >= p, got k = {k}")));
    }
    if let Some(d) = poly.degree() {
        if d as usize > k {
            return Err(Error::DegreeTooHigh { bound: k as i64, found: d as i64 });
        }
    }
    Ok((poly.mul_by_p(), k - p + 1))
}

/// Checks every tuple in `V^(k-p+1)`.
pub fn check_dkp_exhaustive(poly: &NCPoly, k: usize) -> Result<DkpReport> {
    let (times_p, r) = prepare(poly, k)?;
    let size = poly.space().size();
    let mut report = DkpReport { checked: 0, failures: 0, first_failure: None };
    let mut hs = vec![0usize; r];
    for idx in 0..size.pow(r as u32) {
        let mut rest = idx;
        for h in hs.iter_mut() {
            *h = rest % size;
            rest /= size;
        }
        report.checked += 1;
        if !check_tuple(poly, &times_p, k, &hs)? {
            report.failures += 1;
            report.first_failure.get_or_insert_with(|| hs.clone());
        }
    }
    Ok(report)
}

/// Checks `trials` uniformly random tuples.
pub fn check_dkp_random<R: Rng + ?Sized>(poly: &NCPoly, k: usize, trials: u64, rng: &mut R) -> Result<DkpReport> {
    let (times_p, r) = prepare(poly, k)?;
    let size = poly.space().size();
    let mut report = DkpReport { checked: 0, failures: 0, first_failure: None };
    for _ in 0..trials {
        let hs: Vec<usize> = (0..r).map(|_| rng.gen_range(0..size)).collect();
        report.checked += 1;
        if !check_tuple(poly, &times_p, k, &hs)? {
            report.failures += 1;
            report.first_failure.get_or_insert(hs);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::space::Space;

    #[test]
    fn l_over_eight_exhaustive() {
        let s = Space::new(2, 3).unwrap();
        let l8 = NCPoly::from_table(s, 3, (0..8).map(|x| s.digit_sum(x) as u64).collect()).unwrap();
        let report = check_dkp_exhaustive(&l8, 3).unwrap();
        assert_eq!(report.checked, 64);
        assert!(report.passed());
    }

    #[test]
    fn classical_input_gives_zero_on_repeats() {
        let s = Space::new(3, 2).unwrap();
        let poly = NCPoly::classical_from_fn(s, |x| s.digit(x, 0) * s.digit(x, 0) * s.digit(x, 1) % 3);
        let report = check_dkp_exhaustive(&poly, 3).unwrap();
        assert!(report.passed());
    }
}
