//! Weighted polynomials on `Z^m` and filtered groups with their cubes.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::Rng;
use serde_json::json;

use crate::algebra::binom::binom_exact;
use crate::algebra::space::Space;
use crate::algebra::torus::TorusValue;
use crate::catalog::quadratic_form;
use crate::cubes::{
    check_closure, cube_equidistribution, cube_preservation_check, equidistribution_report, factor_equidistribution,
    hk_size, is_filtered_homomorphism, is_polynomial_map, joint_equidistribution_report, map_sources, map_targets,
    p_adic, sampled_maps, scan_equivalence, small_groups, Directions, FilteredGroup, NamedGroup, SMALL_SHAPES,
};
use crate::error::Result;
use crate::ncpoly::{parse_poly, PolyEnumeration};
use crate::rng::substream;
use crate::weighted::{binomial_expand, multi_indices, periodicity_check, random_weighted, Factor, WeightedPoly};

use super::report::{Check, SuiteParams, SuiteReport};

fn random_degrees(m: usize, rng: &mut impl Rng) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(1..=3)).collect()
}

pub fn weighted(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("weighted", params);
    let mut rng = substream(params.seed, "weighted");
    let trials = params.trials_or(300);

    let mut round_trip = Check::new("binomial-expansion-round-trip");
    let mut degree = Check::new("derivative-degree-equals-term-degree");
    for _ in 0..trials {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let m = rng.gen_range(1..=2);
        let ds = random_degrees(m, &mut rng);
        let d = rng.gen_range(0..=5);
        let f = random_weighted(p, &ds, d, 2, &mut rng)?;
        let table = f.fundamental_table()?;
        round_trip.case(binomial_expand(&table, &ds, d)? == f, || json!({ "f": f.to_json() }));
        let bigger: Vec<u32> = table.period_exps().iter().map(|k| k + 1).collect();
        let ok = table.weighted_degree(&ds)? == f.degree() && f.to_table(bigger)?.weighted_degree(&ds)? == f.degree();
        degree.case(ok, || json!({ "f": f.to_json() }));
    }
    report.push(round_trip.finish());
    report.push(degree.finish());

    let mut single = Check::new("single-term-degree");
    for p in [2u32, 3] {
        for ds in [vec![1], vec![2], vec![1, 2], vec![2, 3], vec![1, 1]] {
            for i in multi_indices(&ds, 5) {
                let base: u32 = i.iter().zip(&ds).map(|(a, b)| a * b).sum();
                for r in 0..3u32 {
                    let want = base + r * (p - 1);
                    if want > 6 {
                        continue;
                    }
                    let v = TorusValue::new(p, 1, r + 1)?;
                    let f = WeightedPoly::new(p, ds.clone(), TorusValue::zero(p), [(i.clone(), v)])?;
                    let measured = f.fundamental_table()?.weighted_degree(&ds)?;
                    single.case(f.degree() == Some(want) && measured == Some(want), || json!({ "p": p, "D": ds, "i": i, "r": r }));
                }
            }
        }
    }
    report.push(single.finish());

    let mut layer = Check::new("root-after-scaling-drops-bottom-layer").param("p", 3).param("D", [1, 2]);
    for _ in 0..trials / 3 {
        let f = random_weighted(3, &[1, 2], 5, 2, &mut rng)?;
        let diff = f.mul_by_p().pth_root()?.add(&f.scale(-1))?;
        layer.case(diff.terms().values().all(|v| v.exp() <= 1) && diff.alpha().exp() <= 1, || json!({ "f": f.to_json() }));
    }
    report.push(layer.finish());

    let mut kummer = Check::new("prime-power-binomial-valuation");
    for p in [2u64, 3, 5] {
        let digit_sum = |mut x: u64| {
            let mut s = 0;
            while x > 0 {
                s += x % p;
                x /= p;
            }
            s
        };
        for k in 0..=4u32 {
            let pk = p.pow(k);
            for l in 1..=pk {
                let t = (0..).take_while(|&t| l % p.pow(t) == 0).last().unwrap_or(0);
                let carries = (digit_sum(l) + digit_sum(pk - l) - digit_sum(pk)) / (p - 1);
                let divisible = binom_exact(pk, l).is_none_or(|b| b % p.pow(k - t) as u128 == 0);
                kummer.case(carries >= (k - t) as u64 && divisible, || json!({ "p": p, "k": k, "l": l }));
            }
        }
    }
    report.push(kummer.finish());

    let mut periodic = Check::new("periodicity-at-true-degree");
    for _ in 0..trials / 3 {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let ds = random_degrees(2, &mut rng);
        let f = random_weighted(p, &ds, 5, 2, &mut rng)?;
        let check = periodicity_check(&f, f.degree().unwrap_or(0))?;
        periodic.case(check.passed(), || json!({ "f": f.to_json(), "report": check }));
    }
    report.push(periodic.finish());

    let space = Space::new(2, 4)?;
    let top = parse_poly(&space, "1/4*x1*x2 + 1/2*x2*x3")?;
    let second = parse_poly(&space, "1/2*x3*x4 + 1/2*x1*x4")?;
    let factor = Factor::from_tops(space, vec![(2, 1, top), (2, 0, second)], true)?;
    let mut pullback = Check::new("pullback-degree-bound").param("p", 2).param("n", 4);
    let mut attempts = 0;
    while pullback.case_count() < trials / 5 && attempts < trials * 10 {
        attempts += 1;
        let f = random_weighted(2, &[2, 2], 4, 1, &mut rng)?;
        let Ok(q) = factor.pullback(&f) else { continue };
        let wd = f.fundamental_table()?.weighted_degree(&[2, 2])?;
        pullback.case(q.degree().unwrap_or(0) <= wd.unwrap_or(0), || json!({ "f": f.to_json() }));
    }
    report.push(pullback.finish());
    Ok(report)
}

fn gaussian_oracle(values: &[usize]) -> (bool, f64) {
    let sums: Vec<(i64, i64)> = (1..4)
        .map(|xi| {
            values.iter().fold((0, 0), |(re, im), &v| match xi * v % 4 {
                0 => (re + 1, im),
                1 => (re, im + 1),
                2 => (re - 1, im),
                _ => (re, im - 1),
            })
        })
        .collect();
    let zero = sums.iter().all(|&s| s == (0, 0));
    let max = sums.iter().map(|&(re, im)| ((re * re + im * im) as f64).sqrt()).fold(0.0, f64::max) / values.len() as f64;
    (zero, max)
}

fn abs(r: Ratio<i128>) -> Ratio<i128> {
    if r < Ratio::from_integer(0) {
        -r
    } else {
        r
    }
}

fn histogram_deviation(hist: &[i128], total: i128) -> Ratio<i128> {
    let uniform = Ratio::new(1, hist.len() as i128);
    hist.iter().map(|&c| abs(Ratio::new(c, total) - uniform)).max().unwrap_or_else(|| Ratio::from_integer(0))
}

pub fn cubes(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cubes", params);
    let scan_cap = params.budget_or(1 << 20);

    let mut covered = BTreeSet::new();
    for named in small_groups(16)? {
        let mut scan_check = Check::new("face-sums-match-taylor").param("group", &named.name);
        let mut closure = Check::new("cubes-closed").param("group", &named.name);
        for k in 0..=3 {
            let size = hk_size(&named.group, k);
            if size > scan_cap {
                continue;
            }
            let scan = scan_equivalence(&named.group, k);
            let total = (named.group.size() as u128).pow(1 << k);
            scan_check.case(scan.total == total && scan.disagreements == 0 && scan.both == size, || {
                json!({ "k": k, "first_disagreement": scan.first_disagreement })
            });
            if k == 3 {
                covered.insert(named.group.orders().to_vec());
            }
            if size <= 1 << 14 {
                closure.case(check_closure(&named.group, k, 1 << 14)?, || json!({ "k": k }));
            }
        }
        report.push(scan_check.finish());
        report.push(closure.finish());
    }
    let mut coverage = Check::new("every-small-shape-scanned-at-k3").param("shapes", SMALL_SHAPES.len());
    coverage.case(covered.len() == SMALL_SHAPES.len(), || json!({ "covered": covered }));
    report.push(coverage.finish());

    let mut rng = substream(params.seed, "cubes");
    let sources = map_sources()?;
    let targets = map_targets()?;
    let count = params.trials_or(1200) as usize;
    let mut equivalence = Check::new("polynomial-iff-cube-preserving");
    let (mut polynomial, mut other) = (0u64, 0u64);
    for case in sampled_maps(&sources, &targets, 256, count, &mut rng)? {
        let h = &sources[case.source].group;
        let g = &targets[case.target].group;
        let verdict = is_polynomial_map(&case.phi, h, g, Directions::Generators)?;
        let cubes = cube_preservation_check(&case.phi, h, g, 3, 1 << 16)?;
        equivalence.case(verdict.polynomial == cubes.preserved, || {
            json!({ "source": sources[case.source].name, "target": targets[case.target].name, "phi": case.phi })
        });
        if verdict.polynomial {
            polynomial += 1;
        } else {
            other += 1;
        }
    }
    let mut equivalence = equivalence.detail(json!({ "polynomial": polynomial, "not_polynomial": other }));
    if polynomial == 0 || other == 0 {
        equivalence.fail(json!({ "polynomial": polynomial, "not_polynomial": other }));
    }
    report.push(equivalence.finish());

    let mut small_sources = sources.clone();
    small_sources.retain(|h| h.group.size() <= 9);
    for shape in [&[9u64][..], &[3, 3]] {
        if let Some(adic) = p_adic(shape) {
            small_sources.push(NamedGroup { name: format!("{shape:?}/adic"), group: adic? });
        }
        small_sources.push(NamedGroup { name: format!("{shape:?}/max1"), group: FilteredGroup::maximal(shape.to_vec(), 1)? });
    }
    let mut generators = Check::new("generator-directions-suffice");
    for case in sampled_maps(&small_sources, &targets, 256, count, &mut rng)? {
        let h = &small_sources[case.source].group;
        let g = &targets[case.target].group;
        let by_gens = is_polynomial_map(&case.phi, h, g, Directions::Generators)?;
        let by_all = is_polynomial_map(&case.phi, h, g, Directions::AllElements)?;
        generators.case(by_gens.polynomial == by_all.polynomial, || json!({ "source": small_sources[case.source].name, "phi": case.phi }));
    }
    report.push(generators.finish());

    let h = FilteredGroup::maximal(vec![2, 2], 1)?;
    let z2 = FilteredGroup::maximal(vec![2], 1)?;
    let mut homomorphisms = Check::new("filtered-homomorphisms-are-polynomial");
    for phi in [vec![0, 1, 0, 1], vec![0, 0, 1, 1], vec![0, 1, 1, 0]] {
        let ok = is_filtered_homomorphism(&phi, &h, &z2) && is_polynomial_map(&phi, &h, &z2, Directions::Generators)?.polynomial;
        homomorphisms.case(ok, || json!({ "phi": phi }));
    }
    report.push(homomorphisms.finish());

    let space = Space::new(2, 2)?;
    let mut polys = Check::new("nonclassical-polynomials-are-polynomial-maps").param("p", 2).param("n", 2);
    for degree_cap in 1..=3usize {
        let target = FilteredGroup::maximal(vec![4], degree_cap)?;
        for poly in PolyEnumeration::new(space, 3, false)?.iter() {
            if poly.exp() > 2 {
                continue;
            }
            let phi: Vec<usize> = poly.table_at(2).into_iter().map(|v| v as usize).collect();
            let verdict = is_polynomial_map(&phi, &h, &target, Directions::Generators)?;
            let degree = poly.degree().map_or(0, |d| d as usize);
            polys.case(verdict.polynomial == (degree <= degree_cap), || json!({ "P": poly.to_json(), "cap": degree_cap }));
        }
    }
    report.push(polys.finish());

    let mut weyl = Check::new("zero-bias-iff-uniform").param("target", "Z4");
    for a in 1..=8u32 {
        for code in 0..4usize.pow(a) {
            let values: Vec<usize> = (0..a).map(|t| code >> (2 * t) & 3).collect();
            let r = equidistribution_report(&[4], &values)?;
            let (oracle_zero, oracle_max) = gaussian_oracle(&values);
            let mut hist = [0usize; 4];
            values.iter().for_each(|&v| hist[v] += 1);
            let uniform = hist.iter().all(|&c| 4 * c == a as usize);
            let ok = r.all_biases_zero == oracle_zero
                && oracle_zero == uniform
                && (r.max_deviation == Ratio::from_integer(0)) == uniform
                && (r.max_bias - oracle_max).abs() < 1e-12
                && r.fourier_consistent;
            weyl.case(ok, || json!({ "values": values }));
        }
    }
    report.push(weyl.finish());

    let n = 5;
    let space = Space::new(2, n)?;
    let form = quadratic_form(n)?.to_table();
    let joint = joint_equidistribution_report(&space, &[form], 3, 1 << 20)?;
    let bilinear = |x: usize, y: usize| ((x.count_ones() * y.count_ones() - (x & y).count_ones()) % 2) as usize;
    let mut hist = [0i128; 8];
    for h1 in 0..space.size() {
        for h2 in 0..space.size() {
            for h3 in 0..space.size() {
                hist[bilinear(h1, h2) + 2 * bilinear(h1, h3) + 4 * bilinear(h2, h3)] += 1;
            }
        }
    }
    let oracle = histogram_deviation(&hist, (space.size() as i128).pow(3));
    let mut joint_check = Check::new("joint-form-histogram")
        .param("n", n)
        .param("d", 3)
        .detail(json!({ "max_deviation": joint.max_deviation.to_string(), "max_bias": joint.max_bias }));
    joint_check.case(joint.max_deviation == oracle && joint.fourier_consistent, || json!({ "oracle": oracle.to_string() }));
    report.push(joint_check.finish());

    let space = Space::new(2, 6)?;
    let top = parse_poly(&space, "1/4*x1*x2 + 1/4*x3*x4 + 1/4*x5*x6")?;
    let second = parse_poly(&space, "1/2*x1*x3 + 1/2*x2*x5")?;
    let factor = Factor::from_tops(space, vec![(2, 1, top.clone()), (2, 0, second.clone())], false)?;
    let equi = factor_equidistribution(&factor)?;
    let mut hist = [0i128; 8];
    for x in 0..space.size() {
        hist[top.value(x).numerator_at(2) as usize + 4 * second.value(x).numerator_at(1) as usize] += 1;
    }
    let oracle = histogram_deviation(&hist, space.size() as i128);
    let mut factor_check = Check::new("factor-histogram")
        .param("n", 6)
        .detail(json!({ "max_deviation": equi.max_deviation.to_string(), "max_bias": equi.max_bias }));
    factor_check.case(equi.max_deviation == oracle && equi.fourier_consistent, || json!({ "oracle": oracle.to_string() }));
    report.push(factor_check.finish());

    let g = FilteredGroup::maximal(vec![4], 2)?;
    let images = cube_equidistribution(&[0, 1], &z2, &g, 2, 1 << 10)?;
    let mut images_check = Check::new("cube-images").detail(&images);
    images_check.case(
        images.source_cubes == 8 && images.images_hit == 8 && images.max_deviation == Ratio::new(1, 8) - Ratio::new(1, 256),
        || json!(images),
    );
    report.push(images_check.finish());
    Ok(report)
}
