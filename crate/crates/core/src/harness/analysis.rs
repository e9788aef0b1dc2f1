//! Gowers-norm inequalities, exact phase norms, analytic-rank symmetries and
//! conditional-expectation identities.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use serde_json::json;

use crate::algebra::space::Space;
use crate::error::Result;
use crate::gowers::{
    analytic_rank, conditional_expectation, conditional_expectation_exact, gowers_norm, gowers_power_exact,
    inner_product_exact, max_coefficient, verify_gowers_properties, Atoms, BoundedFunction, DEFAULT_NORM_BUDGET,
};
use crate::multilinear::{bias, dk_extract, MultilinearTable};
use crate::ncpoly::{random_poly, NCPoly, PolyEnumeration};
use crate::rng::substream;

use super::report::{Check, SuiteParams, SuiteReport};

const TOLERANCE: f64 = 1e-10;

fn to_i128(r: Ratio<u128>) -> Ratio<i128> {
    Ratio::new(*r.numer() as i128, *r.denom() as i128)
}

pub fn gowers_props(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("gowers-props", params);
    let trials = params.trials_or(100);
    let spaces: Vec<(u32, usize)> = match (params.p, params.n) {
        (Some(p), Some(n)) => vec![(p, n)],
        _ => vec![(2, 4), (3, 2)],
    };
    for &(p, n) in &spaces {
        for outcome in verify_gowers_properties(params.seed, Space::new(p, n)?, trials)? {
            let mut check = Check::new(&format!("gowers-{}", outcome.property))
                .param("p", p)
                .param("n", n)
                .detail(json!({ "failures": outcome.failures, "worst_margin": outcome.worst_margin }));
            check.cases(outcome.trials);
            if let Some(first) = &outcome.first_failure {
                check.fail(json!(first));
            }
            report.push(check.finish());
        }
    }

    let mut rng = substream(params.seed, "gowers-props");
    for &(p, max_n) in &[(2u32, 3usize), (3, 2)] {
        for n in 1..=max_n {
            let space = Space::new(p, n)?;
            for s in 0..=2usize {
                let mut exact = Check::new("phase-norm-equals-bias").param("p", p).param("n", n).param("s", s);
                for _ in 0..20 {
                    let poly = random_poly(&space, s as u32 + 1, true, &mut rng);
                    let norm = gowers_power_exact(&poly, s + 1, DEFAULT_NORM_BUDGET)?.as_rational();
                    let rank = analytic_rank(&poly, s)?;
                    exact.case(norm == Some(to_i128(rank.bias.ratio())), || json!({ "P": poly.to_json() }));
                }
                report.push(exact.finish());
            }
        }
    }

    report.push(correlation_bound(&mut rng)?);

    let space = Space::new(2, 6)?;
    let mut inverse = Check::new("u2-inverse").param("p", 2).param("n", 6);
    for _ in 0..trials * 10 {
        let f = BoundedFunction::random(space, &mut rng);
        let (_, top) = max_coefficient(&f);
        let u2 = gowers_norm(&f, 2)?;
        inverse.case(top + TOLERANCE >= u2 * u2, || json!({ "max_coefficient": top, "u2": u2 }));
    }
    report.push(inverse.finish());

    for &(p, n, d) in &[(2u32, 2usize, 3u32), (3, 1, 3)] {
        let space = Space::new(p, n)?;
        let mut symmetric = Check::new("arank-negation").param("p", p).param("n", n).param("d", d);
        for poly in PolyEnumeration::new(space, d, true)?.iter() {
            let plus = analytic_rank(&poly, d as usize - 1)?;
            let minus = analytic_rank(&poly.neg(), d as usize - 1)?;
            symmetric.case(plus.bias == minus.bias, || json!({ "P": poly.to_json() }));
        }
        report.push(symmetric.finish());
    }

    for n in 2..=3usize {
        let space = Space::new(3, n)?;
        let quadric = NCPoly::classical_from_fn(space, |x| space.digits(x).iter().map(|&a| a * a).sum::<u32>() % 3);
        let rank = analytic_rank(&quadric, 1)?;
        let mut check = Check::new("quadric-rank").param("p", 3).param("n", n);
        check.case(to_i128(rank.bias.ratio()) == Ratio::new(1, 3i128.pow(n as u32)), || json!({ "bias": rank.bias.to_string_exact() }));
        report.push(check.finish());
    }
    Ok(report)
}

/// `|E_h e(T(h)) prod_j f_j(h)| <= bias(T)^{1/2^k}` when `f_j` ignores `h_j`,
/// with equality for constant `f_j = 1`.
fn correlation_bound(rng: &mut impl Rng) -> Result<crate::harness::report::CheckRecord> {
    let mut check = Check::new("multilinear-correlation-bound");
    for &(p, n, k) in &[(2u32, 3usize, 2usize), (3, 2, 2), (2, 2, 3), (3, 1, 3)] {
        let space = Space::new(p, n)?;
        let size = space.size();
        let tuples = size.pow(k as u32);
        for _ in 0..40 {
            let poly = random_poly(&space, k as u32, false, rng);
            let form: MultilinearTable = dk_extract(&poly, k)?.to_table();
            let b = bias(&form)?.value();
            let others = size.pow(k as u32 - 1);
            let fs: Vec<Vec<Complex64>> = (0..k)
                .map(|_| {
                    (0..others)
                        .map(|_| Complex64::from_polar(rng.gen::<f64>(), rng.gen::<f64>() * std::f64::consts::TAU))
                        .collect()
                })
                .collect();
            let (mut sum, mut plain) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for idx in 0..tuples {
                let hs: Vec<usize> = (0..k).map(|t| idx / size.pow(t as u32) % size).collect();
                let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * form.eval(&space, &hs) as f64 / p as f64);
                let weight: Complex64 = (0..k)
                    .map(|j| {
                        let rest = hs.iter().enumerate().filter(|&(t, _)| t != j).rev().fold(0, |acc, (_, &h)| acc * size + h);
                        fs[j][rest]
                    })
                    .product();
                sum += phase * weight;
                plain += phase;
            }
            let lhs = sum.norm() / tuples as f64;
            let rhs = b.powf(1.0 / (1u64 << k) as f64);
            let equal = (plain.re / tuples as f64 - b).abs() < TOLERANCE;
            check.case(lhs <= rhs + TOLERANCE && equal, || json!({ "P": poly.to_json(), "k": k, "lhs": lhs, "bound": rhs }));
        }
    }
    Ok(check.finish())
}

pub fn decomposition(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("decomposition", params);
    let n = params.n_or(5);
    let space = Space::new(params.p.unwrap_or(2), n)?;
    let size = space.size();
    let mut rng = substream(params.seed, "decomposition");
    let tag = |name: &str| Check::new(name).param("p", space.p()).param("n", n);
    let mut pythagoras = tag("pythagoras");
    let mut atoms_orthogonal = tag("orthogonal-to-atoms");
    let mut measurable_orthogonal = tag("orthogonal-to-measurable");
    let mut measurable = tag("projection-measurable");
    let mut refinement = tag("energy-increment");
    let mut floating = tag("float-agrees");
    for _ in 0..params.trials_or(100) {
        let f: Vec<Ratio<i128>> = (0..size).map(|_| Ratio::new(rng.gen_range(-4..=4), 4)).collect();
        let count = rng.gen_range(1..=3);
        let polys: Vec<NCPoly> = (0..count).map(|_| random_poly(&space, rng.gen_range(1..=2), true, &mut rng)).collect();
        let factors: Vec<Vec<u64>> = polys.iter().map(|p| p.table().to_vec()).collect();
        let input = || json!({ "f": f.iter().map(|r| r.to_string()).collect::<Vec<_>>(), "factors": polys.iter().map(|p| p.to_json()).collect::<Vec<_>>() });

        let (projection, energy) = conditional_expectation_exact(&f, &factors);
        let rest: Vec<Ratio<i128>> = f.iter().zip(&projection).map(|(a, b)| a - b).collect();
        pythagoras.case(inner_product_exact(&f, &f) == energy + inner_product_exact(&rest, &rest), input);

        let atoms = Atoms::new(size, &factors);
        let zero = Ratio::from_integer(0);
        let atoms_ok = (0..atoms.count()).all(|a| {
            let indicator: Vec<Ratio<i128>> = atoms.labels.iter().map(|&l| Ratio::from_integer((l == a) as i128)).collect();
            inner_product_exact(&rest, &indicator) == zero
        });
        atoms_orthogonal.case(atoms_ok, input);

        let per_atom: Vec<Ratio<i128>> = (0..atoms.count()).map(|_| Ratio::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
        let g: Vec<Ratio<i128>> = atoms.labels.iter().map(|&l| per_atom[l]).collect();
        measurable_orthogonal.case(atoms.measures(&g) && inner_product_exact(&rest, &g) == zero, input);
        measurable.case(atoms.measures(&projection), input);

        let coarse = conditional_expectation_exact(&f, &factors[..1]).1;
        refinement.case(coarse <= energy, input);

        let complex: Vec<Complex64> = f.iter().map(|r| Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)).collect();
        let (approx, approx_energy) = conditional_expectation(&complex, &factors);
        let close = approx
            .iter()
            .zip(&projection)
            .all(|(a, b)| (a.re - *b.numer() as f64 / *b.denom() as f64).abs() < TOLERANCE && a.im.abs() < TOLERANCE)
            && (approx_energy - *energy.numer() as f64 / *energy.denom() as f64).abs() < TOLERANCE;
        floating.case(close, input);
    }
    for check in [pythagoras, atoms_orthogonal, measurable_orthogonal, measurable, refinement, floating] {
        report.push(check.finish());
    }
    Ok(report)
}
