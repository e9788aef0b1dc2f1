//! Standard examples on `F_p^n`: the digit sum `L`, the elementary symmetric
//! polynomials `S_k = binom(L, k) mod 2`, `L / 2^j mod 1`, the one-variable
//! polynomials `|x|/2` and `|x|/4`, and the forms `d^2 S_2`, `d^4 S_4`.

use crate::algebra::binom::binom_mod_p;
use crate::algebra::space::Space;
use crate::error::Result;
use crate::multilinear::{dk_extract, CsmForm, DkForm};
use crate::ncpoly::NCPoly;

/// `L(x) = |x_1| + ... + |x_n|` as an integer, for every `x`.
pub fn digit_sum_table(space: &Space) -> Vec<u64> {
    (0..space.size()).map(|x| space.digit_sum(x) as u64).collect()
}

/// `S_k(x) = binom(L(x), k) mod 2` on `F_2^n`, as a classical polynomial.
pub fn elementary_symmetric(n: usize, k: u64) -> Result<NCPoly> {
    let space = Space::new(2, n)?;
    Ok(NCPoly::classical_from_fn(space, |x| binom_mod_p(space.digit_sum(x) as u64, k, 2)))
}

/// `L / p^j mod 1`.
pub fn digit_sum_over(space: &Space, j: u32) -> Result<NCPoly> {
    NCPoly::from_table(*space, j, digit_sum_table(space))
}

/// `|x|/2` on `F_2`: the classical linear polynomial.
pub fn half_line() -> NCPoly {
    NCPoly::from_table(Space::new(2, 1).expect("F_2"), 1, vec![0, 1]).expect("valid table")
}

/// `|x|/4` on `F_2`: non-classical of degree 2.
pub fn quarter_line() -> NCPoly {
    NCPoly::from_table(Space::new(2, 1).expect("F_2"), 2, vec![0, 1]).expect("valid table")
}

fn csm(poly: &NCPoly, k: usize) -> Result<CsmForm> {
    match dk_extract(poly, k)? {
        DkForm::Csm(f) => Ok(f),
        DkForm::Table(_) => unreachable!("classical input gives a classical form"),
    }
}

/// `B = d^2 S_2` on `F_2^n`: `B(e_i, e_j) = 1` iff `i != j`.
pub fn quadratic_form(n: usize) -> Result<CsmForm> {
    csm(&elementary_symmetric(n, 2)?, 2)
}

/// `d^4 S_4` on `F_2^n`.
pub fn quartic_form(n: usize) -> Result<CsmForm> {
    csm(&elementary_symmetric(n, 4)?, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_polynomials_have_expected_degrees() {
        for k in 0..6u64 {
            let s = elementary_symmetric(6, k).unwrap();
            assert!(s.is_classical());
            assert_eq!(s.degree(), Some(k as u32));
        }
        assert_eq!(elementary_symmetric(3, 4).unwrap().degree(), None);
    }

    #[test]
    fn digit_sum_powers() {
        let s = Space::new(2, 4).unwrap();
        for j in 1..4u32 {
            let l = digit_sum_over(&s, j).unwrap();
            assert_eq!(l.degree(), Some(j));
        }
        assert_eq!(quarter_line().degree(), Some(2));
        assert_eq!(half_line().degree(), Some(1));
    }
}
