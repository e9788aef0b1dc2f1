use crate::error::{Error, Result};
use crate::multilinear::{bias_with_budget, dk_extract, Bias, DEFAULT_BIAS_BUDGET};
use crate::ncpoly::NCPoly;

/// Analytic rank `-log_p E e(d^{s+1} P)` together with the exact bias.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticRank {
    pub bias: Bias,
    pub arank: f64,
}

pub fn analytic_rank(poly: &NCPoly, s: usize) -> Result<AnalyticRank> {
    analytic_rank_with_budget(poly, s, DEFAULT_BIAS_BUDGET)
}

pub fn analytic_rank_with_budget(poly: &NCPoly, s: usize, budget: u128) -> Result<AnalyticRank> {
    if let Some(d) = poly.degree() {
        if d as usize > s + 1 {
            return Err(Error::DegreeTooHigh { bound: s as i64 + 1, found: d as i64 });
        }
    }
    let form = dk_extract(poly, s + 1)?.to_table();
    let bias = bias_with_budget(&form, budget)?;
    // with two or more arguments the last one ranges over a kernel containing 0;
    // a nonzero linear form has bias 0 and infinite rank
    assert!(s == 0 || bias.count > 0, "bias of a multilinear form cannot vanish");
    Ok(AnalyticRank { bias, arank: bias.neg_log().max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::space::Space;
    use crate::ncpoly::parse_poly;

    #[test]
    fn low_degree_has_rank_zero() {
        let s = Space::new(3, 2).unwrap();
        let p = parse_poly(&s, "1/3*x1^2 + 2/3*x1*x2 + 1/9").unwrap();
        assert!(p.degree().unwrap() <= 2);
        let r = analytic_rank(&p, 2).unwrap();
        assert_eq!(r.arank, 0.0);
        assert!(analytic_rank(&p, 0).is_err());
    }

    #[test]
    fn quadratic_forms_over_f3() {
        for n in 2..4 {
            let s = Space::new(3, n).unwrap();
            let text: Vec<String> = (1..=n).map(|i| format!("1/3*x{i}^2")).collect();
            let q = parse_poly(&s, &text.join(" + ")).unwrap();
            let r = analytic_rank(&q, 1).unwrap();
            assert_eq!(r.bias.exact_exponent(), Some(n as u32));
            assert!((r.arank - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn nonzero_linear_phase_has_infinite_rank() {
        let s = Space::new(2, 3).unwrap();
        let r = analytic_rank(&parse_poly(&s, "1/2*x1 + 1/4").unwrap(), 0).unwrap();
        assert_eq!(r.bias.count, 0);
        assert!(r.arank.is_infinite());
        let constant = analytic_rank(&parse_poly(&s, "1/4").unwrap(), 0).unwrap();
        assert_eq!(constant.arank, 0.0);
    }
}
