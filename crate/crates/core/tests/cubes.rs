use std::collections::HashSet;

use nonclassical::algebra::space::Space;
use nonclassical::catalog::quadratic_form;
use nonclassical::cubes::{
    check_closure, cube_equidistribution, cube_preservation_check, enumerate_hk, equidistribution_report,
    factor_equidistribution, hk_membership, hk_size, hk_taylor, is_filtered_homomorphism, is_polynomial_map,
    joint_equidistribution_report, map_sources, map_targets, sampled_maps, scan_equivalence, small_groups, CubePoint,
    Directions, FilteredGroup, Taylor, SMALL_SHAPES,
};
use nonclassical::ncpoly::{enumerate_polys, parse_poly};
use nonclassical::rng::substream;
use nonclassical::weighted::Factor;
use num_rational::Ratio;

const SCAN_CAP: u128 = 1 << 20;

#[test]
fn face_sums_and_taylor_agree_on_every_tuple() {
    let groups = small_groups(16).unwrap();
    let mut covered_at_top = HashSet::new();
    for named in &groups {
        for k in 0..=3 {
            if hk_size(&named.group, k) > SCAN_CAP {
                continue;
            }
            let scan = scan_equivalence(&named.group, k);
            let size = named.group.size() as u128;
            assert_eq!(scan.total, size.pow(1 << k), "{} k={k}", named.name);
            assert_eq!(scan.disagreements, 0, "{} k={k}: {:?}", named.name, scan.first_disagreement);
            assert_eq!(scan.both, hk_size(&named.group, k), "{} k={k}", named.name);
            if k == 3 {
                covered_at_top.insert(named.group.orders().to_vec());
            }
        }
    }
    assert_eq!(covered_at_top.len(), SMALL_SHAPES.len());
}

#[test]
fn cube_groups_are_closed() {
    for named in small_groups(16).unwrap() {
        for k in 0..=3 {
            if hk_size(&named.group, k) > 1 << 14 {
                continue;
            }
            assert!(check_closure(&named.group, k, 1 << 14).unwrap(), "{} k={k}", named.name);
        }
    }
}

#[test]
fn taylor_expansion_is_injective() {
    for named in small_groups(8).unwrap() {
        let g = &named.group;
        for k in 0..=2usize {
            let len = 1usize << k;
            let total = g.size().pow(len as u32);
            let mut seen = HashSet::new();
            for code in 0..total {
                let coeffs: Vec<usize> = (0..len).map(|j| code / g.size().pow(j as u32) % g.size()).collect();
                let cube = CubePoint::from_taylor(g, k, &coeffs);
                assert!(seen.insert(cube.entries.clone()), "{} k={k}", named.name);
                let in_levels = coeffs.iter().enumerate().all(|(j, &c)| g.in_level(j.count_ones() as usize, c));
                match hk_taylor(&cube, g) {
                    Taylor::Member(back) => {
                        assert!(in_levels);
                        assert_eq!(back, coeffs);
                    }
                    Taylor::Outside { .. } => assert!(!in_levels),
                }
            }
        }
    }
}

#[test]
fn membership_matches_taylor_generated_set() {
    let g = FilteredGroup::new(vec![4], vec![vec![vec![1]], vec![vec![1]], vec![vec![2]]]).unwrap();
    let generated: HashSet<Vec<usize>> = enumerate_hk(&g, 2, 1 << 10).unwrap().into_iter().map(|c| c.entries).collect();
    let members: HashSet<Vec<usize>> = (0..256usize)
        .map(|i| (0..4).map(|t| i >> (2 * t) & 3).collect::<Vec<_>>())
        .filter(|e| hk_membership(&CubePoint::new(2, e.clone()).unwrap(), &g))
        .collect();
    assert_eq!(generated, members);
    assert_eq!(members.len(), 4 * 4 * 4 * 2);
}

#[test]
fn polynomial_maps_are_exactly_the_cube_preserving_maps() {
    let sources = map_sources().unwrap();
    let targets = map_targets().unwrap();
    let mut rng = substream(11, "cube-maps");
    let cases = sampled_maps(&sources, &targets, 256, 1200, &mut rng).unwrap();
    assert!(cases.len() >= 1000);
    let (mut polynomial, mut other) = (0, 0);
    for case in &cases {
        let h = &sources[case.source].group;
        let g = &targets[case.target].group;
        assert!(g.degree().unwrap_or(0) < 3);
        let verdict = is_polynomial_map(&case.phi, h, g, Directions::Generators).unwrap();
        let cubes = cube_preservation_check(&case.phi, h, g, 3, 1 << 16).unwrap();
        assert_eq!(
            verdict.polynomial, cubes.preserved,
            "{} -> {}: {:?}",
            sources[case.source].name, targets[case.target].name, case.phi
        );
        if verdict.polynomial {
            polynomial += 1;
        } else {
            other += 1;
        }
    }
    assert!(polynomial >= 50 && other >= 50, "{polynomial} polynomial, {other} not");
}

#[test]
fn generator_directions_suffice() {
    let mut sources = map_sources().unwrap();
    sources.retain(|h| h.group.size() <= 9);
    for shape in [&[9u64][..], &[3, 3]] {
        sources.push(nonclassical::cubes::NamedGroup {
            name: format!("{shape:?}/adic"),
            group: nonclassical::cubes::p_adic(shape).unwrap().unwrap(),
        });
        sources.push(nonclassical::cubes::NamedGroup {
            name: format!("{shape:?}/max1"),
            group: FilteredGroup::maximal(shape.to_vec(), 1).unwrap(),
        });
    }
    let targets = map_targets().unwrap();
    let mut rng = substream(12, "generator-directions");
    let cases = sampled_maps(&sources, &targets, 256, 1500, &mut rng).unwrap();
    let mut positives = 0;
    for case in &cases {
        let h = &sources[case.source].group;
        let g = &targets[case.target].group;
        let by_gens = is_polynomial_map(&case.phi, h, g, Directions::Generators).unwrap();
        let by_all = is_polynomial_map(&case.phi, h, g, Directions::AllElements).unwrap();
        assert_eq!(by_gens.polynomial, by_all.polynomial, "{:?}", case.phi);
        positives += by_gens.polynomial as usize;
    }
    assert!(positives > 0);
}

#[test]
fn filtered_homomorphisms_and_polynomials_are_polynomial_maps() {
    let h = FilteredGroup::maximal(vec![2, 2], 1).unwrap();
    let g = FilteredGroup::maximal(vec![2], 1).unwrap();
    for phi in [vec![0, 1, 0, 1], vec![0, 0, 1, 1], vec![0, 1, 1, 0]] {
        assert!(is_filtered_homomorphism(&phi, &h, &g));
        assert!(is_polynomial_map(&phi, &h, &g, Directions::Generators).unwrap().polynomial);
    }
    // non-classical polynomials on F_2^2 valued in (1/4)Z/Z
    let space = Space::new(2, 2).unwrap();
    let source = FilteredGroup::maximal(vec![2, 2], 1).unwrap();
    for degree_cap in 1..=3usize {
        let target = FilteredGroup::maximal(vec![4], degree_cap).unwrap();
        for poly in enumerate_polys(space, 3, false).unwrap() {
            if poly.exp() > 2 {
                continue;
            }
            let phi: Vec<usize> = poly.table_at(2).into_iter().map(|v| v as usize).collect();
            let verdict = is_polynomial_map(&phi, &source, &target, Directions::Generators).unwrap();
            let degree = poly.degree().map_or(0, |d| d as usize);
            assert_eq!(verdict.polynomial, degree <= degree_cap, "{:?}", poly.table());
        }
    }
}

fn gaussian_sum(values: &[usize], xi: usize) -> (i64, i64) {
    // sum of i^{xi v}
    values.iter().fold((0, 0), |(re, im), &v| match xi * v % 4 {
        0 => (re + 1, im),
        1 => (re, im + 1),
        2 => (re - 1, im),
        _ => (re, im - 1),
    })
}

#[test]
fn zero_bias_exactly_when_uniform() {
    for a in 1..=8u32 {
        for code in 0..4usize.pow(a) {
            let values: Vec<usize> = (0..a).map(|t| code >> (2 * t) & 3).collect();
            let report = equidistribution_report(&[4], &values).unwrap();
            let sums: Vec<(i64, i64)> = (1..4).map(|xi| gaussian_sum(&values, xi)).collect();
            let oracle_zero = sums.iter().all(|&s| s == (0, 0));
            let oracle_max = sums.iter().map(|&(re, im)| ((re * re + im * im) as f64).sqrt()).fold(0.0, f64::max) / a as f64;
            let mut hist = [0usize; 4];
            values.iter().for_each(|&v| hist[v] += 1);
            let uniform = hist.iter().all(|&c| 4 * c == a as usize);
            assert_eq!(report.all_biases_zero, oracle_zero);
            assert_eq!(oracle_zero, uniform);
            assert_eq!(report.max_deviation == Ratio::from_integer(0), uniform);
            assert!((report.max_bias - oracle_max).abs() < 1e-12);
            assert!(report.fourier_consistent);
        }
    }
}

#[test]
fn joint_quadratic_form_histogram() {
    let n = 5;
    let space = Space::new(2, n).unwrap();
    let b = quadratic_form(n).unwrap().to_table();
    let report = joint_equidistribution_report(&space, &[b], 3, 1 << 20).unwrap();
    // B(x, y) = sum_{i != j} x_i y_j
    let form = |x: usize, y: usize| -> usize {
        let (sx, sy, common) = (x.count_ones(), y.count_ones(), (x & y).count_ones());
        ((sx * sy - common) % 2) as usize
    };
    let size = 1usize << n;
    let mut hist = [0i128; 8];
    for h1 in 0..size {
        for h2 in 0..size {
            for h3 in 0..size {
                hist[form(h1, h2) + 2 * form(h1, h3) + 4 * form(h2, h3)] += 1;
            }
        }
    }
    let total = (size * size * size) as i128;
    let oracle = hist
        .iter()
        .map(|&c| {
            let r = Ratio::new(c, total) - Ratio::new(1, 8);
            if r < Ratio::from_integer(0) {
                -r
            } else {
                r
            }
        })
        .max()
        .unwrap();
    assert_eq!(report.domain, total as u64);
    assert_eq!(report.max_deviation, oracle);
    assert_eq!(report.max_deviation, Ratio::new(7, 128));
    assert!(report.fourier_consistent);
}

#[test]
fn chain_factor_biases_on_six_variables() {
    let space = Space::new(2, 6).unwrap();
    let top = parse_poly(&space, "1/4*x1*x2 + 1/4*x3*x4 + 1/4*x5*x6").unwrap();
    let second = parse_poly(&space, "1/2*x1*x3 + 1/2*x2*x5").unwrap();
    let factor = Factor::from_tops(space, vec![(2, 1, top.clone()), (2, 0, second.clone())], false).unwrap();
    let report = factor_equidistribution(&factor).unwrap();
    let mut hist = [0i128; 8];
    for x in 0..space.size() {
        let a = top.value(x).numerator_at(2) as usize;
        let b = second.value(x).numerator_at(1) as usize;
        hist[a + 4 * b] += 1;
    }
    let oracle = hist
        .iter()
        .map(|&c| {
            let r = Ratio::new(c, 64) - Ratio::new(1, 8);
            if r < Ratio::from_integer(0) {
                -r
            } else {
                r
            }
        })
        .max()
        .unwrap();
    assert_eq!(report.max_deviation, oracle);
    assert!(report.fourier_consistent);
    assert!(!report.all_biases_zero);
}

#[test]
fn cube_images_of_a_polynomial_map() {
    let h = FilteredGroup::maximal(vec![2], 1).unwrap();
    let g = FilteredGroup::maximal(vec![4], 2).unwrap();
    let d = cube_equidistribution(&[0, 1], &h, &g, 2, 1 << 10).unwrap();
    assert_eq!(d.source_cubes, 8);
    assert_eq!(d.target_cubes, 256);
    assert_eq!(d.images_hit, 8);
    assert_eq!(d.max_deviation, Ratio::new(1, 8) - Ratio::new(1, 256));
}
