//! Exact identities among the symmetric polynomials on `F_2^n`, their
//! multilinear parts, and the repeated-argument identity for `d^k P`.

use rand::Rng;
use serde_json::json;

use crate::algebra::binom::binom_exact;
use crate::algebra::space::Space;
use crate::catalog::{digit_sum_over, digit_sum_table, elementary_symmetric, quadratic_form, quartic_form};
use crate::error::{Error, Result};
use crate::gowers::{gowers_power_exact, rank_witness_check, RankWitness};
use crate::multilinear::{
    bias_cost, bias_with_budget, binomial_lift_power, check_dkp_exhaustive, concat, dk_direct, dk_extract,
    naive_bias_counter, sym_power, CsmForm, DkForm, DEFAULT_BIAS_BUDGET,
};
use crate::ncpoly::{random_poly, NCPoly};
use crate::rng::substream;

use super::report::{Check, SuiteParams, SuiteReport};

fn csm_of(poly: &NCPoly, k: usize) -> Result<CsmForm> {
    match dk_extract(poly, k)? {
        DkForm::Csm(f) => Ok(f),
        DkForm::Table(_) => Err(Error::NonClassical("expected a classical polynomial")),
    }
}

/// `B(a, b) = sum_{i != j} a_i b_j mod 2` straight from bit counts.
fn quadratic_oracle(a: usize, b: usize) -> u32 {
    let (sa, sb, common) = (a.count_ones(), b.count_ones(), (a & b).count_ones());
    (sa * sb - common) % 2
}

pub fn lucas(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lucas", params);
    let max_n = params.n_or(10);
    let max_k = params.degree.unwrap_or(10) as u64;
    for n in 1..=max_n {
        let space = Space::new(2, n)?;
        let sym: Vec<NCPoly> = (0..=max_k).map(|k| elementary_symmetric(n, k)).collect::<Result<_>>()?;
        let one = NCPoly::classical_from_fn(space, |_| 1);

        let mut pointwise = Check::new("lucas-product").param("p", 2).param("n", n).param("max_k", max_k);
        let mut canonical = Check::new("lucas-product-polynomial").param("p", 2).param("n", n).param("max_k", max_k);
        let mut monomials = Check::new("symmetric-monomials").param("p", 2).param("n", n).param("max_k", max_k);
        for k in 0..=max_k {
            let bits: Vec<u64> = (0..64).filter(|a| k >> a & 1 == 1).map(|a| 1u64 << a).collect();
            for x in 0..space.size() {
                let product = bits.iter().fold(1, |acc, &b| acc * sym[b as usize].classical_value(x));
                pointwise.case(sym[k as usize].classical_value(x) == product, || json!({ "k": k, "x": space.digits(x) }));
            }
            let mut product = one.clone();
            for &b in &bits {
                product = product.multiply_classical(&sym[b as usize])?;
            }
            canonical.case(product == sym[k as usize], || json!({ "k": k }));

            // S_k is the sum of all squarefree monomials of degree k
            let form = sym[k as usize].canonical();
            let expected = if k as usize > n { 0 } else { binom_exact(n as u64, k).unwrap_or(0) };
            let shape_ok = if k == 0 {
                form.terms().is_empty() && form.alpha().num() == 1 && form.alpha().exp() == 1
            } else {
                form.terms().len() as u128 == expected
                    && form.terms().iter().all(|t| {
                        let e = form.exps(t);
                        t.depth == 0 && t.coeff == 1 && e.iter().all(|&v| v <= 1) && e.iter().sum::<u32>() as u64 == k
                    })
            };
            monomials.case(shape_ok, || json!({ "k": k, "terms": form.terms().len() }));
        }
        report.push(pointwise.finish());
        report.push(canonical.finish());
        report.push(monomials.finish());
    }
    Ok(report)
}

pub fn lam(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lam", params);
    let max_n = params.n_or(12);
    for n in 1..=max_n {
        let space = Space::new(2, n)?;
        let levels: Vec<NCPoly> = (0..)
            .map(|m| 1u64 << m)
            .take_while(|&k| k as usize <= n)
            .map(|k| elementary_symmetric(n, k))
            .collect::<Result<_>>()?;
        let digit_sums = digit_sum_table(&space);
        let mut check = Check::new("digit-sum-binary-expansion").param("p", 2).param("n", n);
        for x in 0..space.size() {
            let total: u64 = levels.iter().enumerate().map(|(m, s)| (s.classical_value(x) as u64) << m).sum();
            check.case(total == digit_sums[x], || json!({ "x": space.digits(x), "L": digit_sums[x], "sum": total }));
        }
        report.push(check.finish());

        if n <= 6 {
            let mut degrees = Check::new("digit-sum-quotient-degree").param("p", 2).param("n", n);
            for j in 1..=4u32 {
                let poly = digit_sum_over(&space, j)?;
                degrees.case(poly.degree() == Some(j), || json!({ "j": j, "degree": poly.degree() }));
            }
            report.push(degrees.finish());
        }
    }
    Ok(report)
}

/// `d^4 S_4 = Sym^2(B)`, the catalog facts about `S_4`, and the bias
/// sequence `E e(d^4 S_4)` against its limit `1/8`.
pub fn df(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("df", params);
    let budget = params.budget_or(DEFAULT_BIAS_BUDGET);
    let default_top = if bias_cost(2, 9, 4) <= budget { 9 } else { 8 };
    let top_n = params.n_or(default_top);
    let trials = params.trials_or(10_000);
    let mut rng = substream(params.seed, "df");

    for n in 1..=top_n.min(6) {
        let space = Space::new(2, n)?;
        let s4 = elementary_symmetric(n, 4)?;
        let b = quadratic_form(n)?;
        let square = sym_power(&b, 2)?;
        let exhaustive = n <= 4;
        let mut check = Check::new("quartic-form-is-symmetric-square")
            .param("n", n)
            .param("mode", if exhaustive { "exhaustive" } else { "random" });
        let size = space.size();
        let test = |args: [usize; 4], check: &mut Check| -> Result<()> {
            let [a, bb, c, d] = args;
            let direct = dk_direct(&s4, &args)?;
            let formula = (quadratic_oracle(a, bb) * quadratic_oracle(c, d)
                + quadratic_oracle(a, c) * quadratic_oracle(bb, d)
                + quadratic_oracle(a, d) * quadratic_oracle(bb, c))
                % 2;
            let via_form = square.eval(&space, &args);
            check.case(direct == formula && formula == via_form, || {
                json!({ "args": args.iter().map(|&h| space.digits(h)).collect::<Vec<_>>(), "direct": direct, "formula": formula, "sym2": via_form })
            });
            Ok(())
        };
        if exhaustive {
            for idx in 0..size.pow(4) {
                test([idx % size, idx / size % size, idx / size.pow(2) % size, idx / size.pow(3)], &mut check)?;
            }
        } else {
            for _ in 0..trials {
                let args = [0; 4].map(|_| rng.gen_range(0..size));
                test(args, &mut check)?;
            }
        }
        report.push(check.finish());

        let mut coeffs = Check::new("quartic-form-coefficients").param("n", n);
        let extracted = quartic_form(n)?;
        coeffs.case(extracted == square, || json!({ "extracted": extracted.to_json(), "sym2": square.to_json() }));
        report.push(coeffs.finish());
    }

    for n in 4..=top_n.min(6) {
        let space = Space::new(2, n)?;
        let s4 = elementary_symmetric(n, 4)?;
        let eighth = digit_sum_over(&space, 3)?;
        let witness = RankWitness::induced(&s4, vec![eighth])?;
        let mut check = Check::new("quartic-catalog").param("n", n);
        let classical = s4.is_classical();
        let degree = s4.degree();
        let witnessed = rank_witness_check(&s4, 3, &witness)?;
        check.case(classical && degree == Some(4) && witnessed, || {
            json!({ "classical": classical, "degree": degree, "witness": witnessed })
        });
        report.push(check.finish());
    }

    // bias sequence
    let mut sequence = Vec::new();
    for n in 4..=top_n {
        let form = quartic_form(n)?.to_table();
        let bias = bias_with_budget(&form, budget)?;
        sequence.push((n, bias));
    }
    if let Some(&(_, first)) = sequence.first() {
        let mut naive = Check::new("quartic-bias-naive").param("n", 4);
        let counter = naive_bias_counter(&quartic_form(4)?.to_table())?;
        let mean = counter.expectation()?;
        let ratio = first.ratio();
        let agrees = mean.as_rational().is_some_and(|r| {
            r.numer() * *ratio.denom() as i128 == *ratio.numer() as i128 * r.denom()
        });
        naive.case(agrees, || json!({ "fast": first.to_string_exact(), "naive": mean.to_complex().re }));
        report.push(naive.finish());
    }
    for n in 4..=top_n.min(5) {
        let mut check = Check::new("quartic-bias-equals-norm-power").param("n", n);
        let s4 = elementary_symmetric(n, 4)?;
        let norm = gowers_power_exact(&s4, 4, u128::MAX)?;
        let bias = sequence.iter().find(|(m, _)| *m == n).map(|&(_, b)| b).expect("computed");
        let ratio = bias.ratio();
        let agrees = norm.as_rational().is_some_and(|r| r.numer() * *ratio.denom() as i128 == *ratio.numer() as i128 * r.denom());
        check.case(agrees, || json!({ "bias": bias.to_string_exact(), "norm_power": norm.to_complex().re }));
        report.push(check.finish());
    }
    let mut monotone = Check::new("quartic-bias-approaches-eighth").param("n_max", top_n);
    let distances: Vec<f64> = sequence.iter().map(|(_, b)| (b.value() - 0.125).abs()).collect();
    for (i, w) in distances.windows(2).enumerate() {
        monotone.case(w[1] <= w[0], || json!({ "n": sequence[i + 1].0, "previous": w[0], "current": w[1] }));
    }
    if let Some(&(n, last)) = sequence.last() {
        if n >= 9 {
            let close = (last.value() - 0.125).abs() <= 0.02;
            monotone.case(close, || json!({ "n": n, "bias": last.value() }));
            let arank_close = (last.neg_log() - 3.0).abs() <= 0.25;
            monotone.case(arank_close, || json!({ "n": n, "arank": last.neg_log() }));
        }
    }
    let series: Vec<_> = sequence
        .iter()
        .map(|(n, b)| json!({ "n": n, "bias": b.to_string_exact(), "value": b.value(), "arank": b.neg_log() }))
        .collect();
    report.push(monotone.detail(series).finish());
    Ok(report)
}

/// Every classical polynomial on `F_2^n` as a squarefree-monomial mask.
fn classical_from_mask(space: Space, mask: u32) -> NCPoly {
    NCPoly::classical_from_fn(space, |x| {
        (0..1usize << space.n()).filter(|&m| mask >> m & 1 == 1 && x & m == m).count() as u32 % 2
    })
}

pub fn symprod(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("symprod", params);
    let mut rng = substream(params.seed, "symprod");

    // product rule over F_2^3 (indices are bit vectors since p = 2)
    let n = params.n_or(3).min(3);
    let space = Space::new(2, n)?;
    let polys: Vec<(u32, NCPoly)> = (0..1u32 << (1 << n))
        .map(|mask| classical_from_mask(space, mask))
        .filter_map(|p| p.degree().filter(|&d| d >= 1).map(|d| (d, p)))
        .collect();
    let forms: Vec<CsmForm> = polys.iter().map(|(d, p)| csm_of(p, *d as usize)).collect::<Result<_>>()?;
    let mut rule = Check::new("product-rule").param("p", 2).param("n", n).param("max_total_degree", 4);
    for (i, (k, pk)) in polys.iter().enumerate() {
        for (j, (l, ql)) in polys.iter().enumerate() {
            if k + l > 4 {
                continue;
            }
            let product = pk.multiply_classical(ql)?;
            let left = csm_of(&product, (k + l) as usize)?;
            let right = concat(&forms[i], &forms[j])?;
            rule.case(left == right, || json!({ "P": pk.to_json(), "Q": ql.to_json() }));
        }
    }
    report.push(rule.finish());

    {
        let space = Space::new(2, 4)?;
        let s1 = elementary_symmetric(4, 1)?;
        let s2 = elementary_symmetric(4, 2)?;
        let left = csm_of(&s1.multiply_classical(&s2)?, 3)?;
        let right = concat(&csm_of(&s1, 1)?, &csm_of(&s2, 2)?)?;
        let mut check = Check::new("product-rule-symmetric").param("n", space.n());
        check.case(left == right, || json!({ "left": left.to_json(), "right": right.to_json() }));
        report.push(check.finish());
    }

    for n in 2..=5 {
        let s2 = elementary_symmetric(n, 2)?;
        let s4 = elementary_symmetric(n, 4)?;
        let q = binomial_lift_power(&s2, 2)?;
        let square = sym_power(&quadratic_form(n)?, 2)?;
        let mut check = Check::new("quartic-from-quadratic").param("p", 2).param("n", n);
        let classical = q.is_classical();
        let top = csm_of(&q, 4)?;
        let gap = q.sub(&s4)?.degree();
        check.case(classical && top == square && gap.is_none_or(|d| d <= 3), || {
            json!({ "Q": q.to_json(), "gap_degree": gap })
        });
        report.push(check.finish());
    }

    {
        let space = Space::new(3, 2)?;
        let mut check = Check::new("lift-power-cubic").param("p", 3).param("n", 2).param("m", 3);
        for _ in 0..params.trials_or(10) {
            let coeffs: Vec<u32> = (0..6).map(|_| rng.gen_range(0..3)).collect();
            let poly = NCPoly::classical_from_fn(space, |x| {
                let (a, b) = (space.digit(x, 0), space.digit(x, 1));
                (coeffs[0] * a * a + coeffs[1] * a * b + coeffs[2] * b * b + coeffs[3] * a + coeffs[4] * b + coeffs[5]) % 3
            });
            if poly.degree() != Some(2) {
                continue;
            }
            let q = binomial_lift_power(&poly, 3)?;
            let left = csm_of(&q, 6)?;
            let right = sym_power(&csm_of(&poly, 2)?, 3)?;
            check.case(left == right, || json!({ "P": poly.to_json() }));
        }
        report.push(check.finish());
    }

    {
        let mut check = Check::new("symmetric-power-factorial").param("p", 5).param("n", 3).param("m", 2);
        for _ in 0..params.trials_or(10) {
            let entries: Vec<(Vec<usize>, u32)> =
                crate::multilinear::multisets(3, 2, 2).into_iter().map(|a| (a, rng.gen_range(0..5))).collect();
            let t = CsmForm::new(5, 3, 2, entries)?;
            let left = sym_power(&t, 2)?.scale(2);
            let right = concat(&t, &t)?;
            check.case(left == right, || json!({ "T": t.to_json() }));
        }
        report.push(check.finish());
    }
    Ok(report)
}

pub fn dkp(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("dkp", params);
    let mut rng = substream(params.seed, "dkp");
    let trials = params.trials_or(20);
    let grid: Vec<(u32, usize)> = match params.p {
        Some(p) => (1..=params.n_or(if p == 2 { 3 } else { 2 })).map(|n| (p, n)).collect(),
        None => vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)],
    };
    for (p, n) in grid {
        let space = Space::new(p, n)?;
        for k in [3usize, 4] {
            if k < p as usize {
                continue;
            }
            let mut check = Check::new("repeated-argument").param("p", p).param("n", n).param("k", k);
            let mut polys: Vec<NCPoly> = (0..trials).map(|_| random_poly(&space, k as u32, true, &mut rng)).collect();
            if p == 2 {
                polys.push(digit_sum_over(&space, k as u32)?);
            }
            for poly in &polys {
                let r = check_dkp_exhaustive(poly, k)?;
                check.cases(r.checked.saturating_sub(1));
                check.case(r.passed(), || json!({ "P": poly.to_json(), "tuple": r.first_failure }));
            }
            report.push(check.finish());

            if k > p as usize {
                let mut swap = Check::new("repeated-argument-swap").param("p", p).param("n", n).param("k", k);
                for poly in &polys {
                    for _ in 0..10 {
                        let hs: Vec<usize> = (0..k - p as usize + 1).map(|_| rng.gen_range(0..space.size())).collect();
                        let mut first = vec![hs[0]; p as usize];
                        first.extend(&hs[1..]);
                        let mut second = vec![hs[0], hs[1]];
                        second.extend(std::iter::repeat_n(hs[1], p as usize - 1));
                        second.extend(&hs[2..]);
                        let a = dk_direct(poly, &first)?;
                        let b = dk_direct(poly, &second)?;
                        swap.case(a == b, || json!({ "P": poly.to_json(), "h": hs }));
                    }
                }
                report.push(swap.finish());
            }
        }
    }
    Ok(report)
}
