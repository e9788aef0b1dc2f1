use crate::algebra::field::pow_u64;
use crate::error::{Error, Result};
use crate::ncpoly::{Degree, NCPoly};

use super::csm::{multisets, CsmForm};
use super::table::MultilinearTable;

/// Result of extracting the top multilinear part of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DkForm {
    Csm(CsmForm),
    Table(MultilinearTable),
}

impl DkForm {
    pub fn to_table(&self) -> MultilinearTable {
        match self {
            DkForm::Csm(f) => f.to_table(),
            DkForm::Table(t) => t.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            DkForm::Csm(f) => f.arity(),
            DkForm::Table(t) => t.k,
        }
    }
}

/// `dh_1 ... dh_k P(x)` as a numerator over `p^P.exp()`, by inclusion-exclusion
/// over the `2^k` subset sums of the directions.
pub fn iterated_derivative_at(poly: &NCPoly, directions: &[usize], x: usize) -> u64 {
    let space = poly.space();
    let modulus = pow_u64(poly.p(), poly.exp()) as u128;
    let k = directions.len();
    let table = poly.table();
    let mut total: u128 = 0;
    for mask in 0u32..(1 << k) {
        let mut point = x;
        for (t, &h) in directions.iter().enumerate() {
            if mask >> t & 1 == 1 {
                point = space.add(point, h);
            }
        }
        let v = table[point] as u128;
        if (k as u32 - mask.count_ones()).is_multiple_of(2) {
            total += v;
        } else {
            total += modulus - v;
        }
    }
    (total % modulus.max(1)) as u64
}

/// The classical value `p * dh_1 ... dh_k P(0)`, or `None` if the derivative
/// is not in `iota(F)`.
fn classical_derivative(poly: &NCPoly, directions: &[usize]) -> Option<u32> {
    let v = iterated_derivative_at(poly, directions, 0);
    if poly.exp() == 0 {
        return Some(0);
    }
    let unit = pow_u64(poly.p(), poly.exp() - 1);
    v.is_multiple_of(unit).then(|| (v / unit) as u32)
}

/// `d^k P(h_1, ..., h_k) = dh_1 ... dh_k P(0)` for `deg P <= k`.
///
/// Classical inputs give a [`CsmForm`]; non-classical ones give the raw
/// symmetric table.
pub fn dk_extract(poly: &NCPoly, k: usize) -> Result<DkForm> {
    let deg: Degree = poly.degree();
    if let Some(d) = deg {
        if d as usize > k {
            return Err(Error::DegreeTooHigh { bound: k as i64, found: d as i64 });
        }
    }
    let space = poly.space();
    let (p, n) = (poly.p(), poly.n());
    let mut table = MultilinearTable::zero(p, n, k);
    for a in multisets(n, k, k) {
        let dirs: Vec<usize> = a.iter().map(|&i| space.basis(i)).collect();
        let v = classical_derivative(poly, &dirs)
            .ok_or_else(|| Error::InvalidForm("derivative leaves iota(F)".into()))?;
        if v != 0 {
            table.set_symmetric(&a, v);
        }
    }
    if poly.is_classical() {
        Ok(DkForm::Csm(table.to_csm()?))
    } else {
        Ok(DkForm::Table(table))
    }
}

/// Directly evaluated `d^k P(h_1, ..., h_k)` in `F_p` (no multilinear
/// extension), for use as an oracle.
pub fn dk_direct(poly: &NCPoly, args: &[usize]) -> Result<u32> {
    classical_derivative(poly, args).ok_or_else(|| Error::InvalidForm("derivative leaves iota(F)".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::space::Space;

    fn elementary(space: Space, k: u64) -> NCPoly {
        NCPoly::classical_from_fn(space, |x| {
            crate::algebra::binom::binom_mod_p(space.digit_sum(x) as u64, k, 2)
        })
    }

    #[test]
    fn quadratic_symmetric_function() {
        let s = Space::new(2, 4).unwrap();
        let b = match dk_extract(&elementary(s, 2), 2).unwrap() {
            DkForm::Csm(f) => f,
            DkForm::Table(_) => panic!("classical input"),
        };
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b.coeff(&[i, j]), u32::from(i != j));
            }
        }
    }

    #[test]
    fn linear_form() {
        let s = Space::new(3, 2).unwrap();
        let x1 = NCPoly::classical_from_fn(s, |x| s.digit(x, 0));
        let DkForm::Csm(t) = dk_extract(&x1, 1).unwrap() else { panic!() };
        for h in 0..9 {
            assert_eq!(t.eval(&s, &[h]), s.digit(h, 0));
        }
        assert!(matches!(dk_extract(&elementary(Space::new(2, 3).unwrap(), 3), 2), Err(Error::DegreeTooHigh { .. })));
    }

    #[test]
    fn extraction_agrees_with_direct_derivatives() {
        let s = Space::new(2, 3).unwrap();
        // L/8 has degree 3 and is not classical
        let l8 = NCPoly::from_table(s, 3, (0..8).map(|x| s.digit_sum(x) as u64).collect()).unwrap();
        let DkForm::Table(t) = dk_extract(&l8, 3).unwrap() else { panic!() };
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    assert_eq!(t.eval(&s, &[a, b, c]), dk_direct(&l8, &[a, b, c]).unwrap());
                }
            }
        }
    }
}
