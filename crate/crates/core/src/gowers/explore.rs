use num_complex::Complex64;

use crate::algebra::field::pow_u64;
use crate::algebra::torus::unit_root;
use crate::error::Result;
use crate::ncpoly::{NCPoly, PolyEnumeration};

use super::function::BoundedFunction;

/// Ties within this tolerance keep the earlier candidate.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Exploration {
    pub best: NCPoly,
    pub correlation: f64,
    pub candidates: u128,
}

/// `|E_x f(x) e(-P(x))|`.
pub fn correlation(f: &BoundedFunction, poly: &NCPoly) -> f64 {
    let modulus = pow_u64(poly.p(), poly.exp());
    let sum: Complex64 = f
        .values()
        .iter()
        .zip(poly.table())
        .map(|(v, &t)| v * unit_root((modulus - t) % modulus, modulus))
        .sum();
    sum.norm() / f.values().len() as f64
}

/// Exhaustive search for the degree `<= s` polynomial, modulo constants,
/// best correlated with `f`. Ties go to the first candidate in enumeration
/// order.
pub fn inverse_explore(f: &BoundedFunction, s: u32) -> Result<Exploration> {
    let en = PolyEnumeration::new(*f.space(), s, true)?;
    let mut iter = en.iter();
    let first = iter.next().expect("the zero polynomial is always enumerated");
    let mut best = Exploration { correlation: correlation(f, &first), best: first, candidates: en.count() };
    let top = en.value_exp();
    let modulus = pow_u64(f.space().p(), top);
    let roots: Vec<Complex64> = (0..modulus).map(|r| unit_root((modulus - r) % modulus, modulus)).collect();
    let size = f.values().len() as f64;
    for poly in iter {
        let scale = pow_u64(poly.p(), top - poly.exp());
        let sum: Complex64 = f.values().iter().zip(poly.table()).map(|(v, &t)| v * roots[(t * scale) as usize]).sum();
        let c = sum.norm() / size;
        if c > best.correlation + TIE_TOLERANCE {
            best.correlation = c;
            best.best = poly;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::space::Space;
    use crate::gowers::norm::gowers_norm;
    use crate::gowers::walsh::max_coefficient;
    use crate::ncpoly::parse_poly;

    #[test]
    fn self_correlation_is_one() {
        let s = Space::new(2, 3).unwrap();
        let q = parse_poly(&s, "1/2*x1*x2 + 1/4*x3").unwrap();
        let found = inverse_explore(&BoundedFunction::phase(&q), 2).unwrap();
        assert!((found.correlation - 1.0).abs() < 1e-12);
        assert_eq!(found.best, q);
    }

    #[test]
    fn linear_search_matches_fourier() {
        let mut rng = crate::rng::seeded(21);
        let s = Space::new(2, 4).unwrap();
        for _ in 0..5 {
            let f = BoundedFunction::random(s, &mut rng);
            let found = inverse_explore(&f, 1).unwrap();
            assert_eq!(found.candidates, 16);
            assert!((found.correlation - max_coefficient(&f).1).abs() < 1e-12);
            let u2 = gowers_norm(&f, 2).unwrap();
            assert!(found.correlation >= u2 * u2 - 1e-12);
        }
    }
}
