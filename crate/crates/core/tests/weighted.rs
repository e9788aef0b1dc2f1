use nonclassical::algebra::binom::binom_exact;
use nonclassical::algebra::space::Space;
use nonclassical::algebra::torus::TorusValue;
use nonclassical::ncpoly::parse_poly;
use nonclassical::rng::substream;
use nonclassical::weighted::{
    binomial_expand, multi_indices, periodicity_check, random_weighted, Factor, PeriodicTable, WeightedPoly,
};
use rand::Rng;

fn random_degrees(m: usize, rng: &mut impl Rng) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(1..=3)).collect()
}

#[test]
fn expansion_round_trips_on_random_polys() {
    let mut rng = substream(7, "weighted-round-trip");
    for _ in 0..300 {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let m = rng.gen_range(1..=2);
        let ds = random_degrees(m, &mut rng);
        let d = rng.gen_range(0..=5);
        let f = random_weighted(p, &ds, d, 2, &mut rng).unwrap();
        let table = f.fundamental_table().unwrap();
        let back = binomial_expand(&table, &ds, d).unwrap();
        assert_eq!(back, f);
    }
}

#[test]
fn single_terms_have_the_formula_degree() {
    for p in [2u32, 3] {
        for ds in [vec![1], vec![2], vec![1, 2], vec![2, 3], vec![1, 1]] {
            for i in multi_indices(&ds, 5) {
                let base: u32 = i.iter().zip(&ds).map(|(a, b)| a * b).sum();
                for r in 0..3u32 {
                    let want = base + r * (p - 1);
                    if want > 6 {
                        continue;
                    }
                    let v = TorusValue::new(p, 1, r + 1).unwrap();
                    let f = WeightedPoly::new(p, ds.clone(), TorusValue::zero(p), [(i.clone(), v)]).unwrap();
                    assert_eq!(f.degree(), Some(want));
                    let t = f.fundamental_table().unwrap();
                    assert_eq!(t.weighted_degree(&ds).unwrap(), Some(want), "p={p} D={ds:?} i={i:?} r={r}");
                }
            }
        }
    }
}

#[test]
fn derivative_degree_matches_term_degree() {
    let mut rng = substream(8, "weighted-degree");
    for _ in 0..150 {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let m = rng.gen_range(1..=2);
        let ds = random_degrees(m, &mut rng);
        let d = rng.gen_range(0..=5);
        let f = random_weighted(p, &ds, d, 1, &mut rng).unwrap();
        let t = f.fundamental_table().unwrap();
        assert_eq!(t.weighted_degree(&ds).unwrap(), f.degree(), "{f:?}");
        // a table built on a larger box gives the same answer
        let bigger: Vec<u32> = t.period_exps().iter().map(|k| k + 1).collect();
        assert_eq!(f.to_table(bigger).unwrap().weighted_degree(&ds).unwrap(), f.degree());
    }
}

#[test]
fn roots_raise_degree_by_at_most_p_minus_one() {
    let mut rng = substream(9, "weighted-root");
    for _ in 0..200 {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let m = rng.gen_range(1..=2);
        let ds = random_degrees(m, &mut rng);
        let f = random_weighted(p, &ds, 4, 2, &mut rng).unwrap();
        let g = f.pth_root().unwrap();
        assert_eq!(g.mul_by_p(), f);
        let fd = f.degree().map_or(0, |d| d as i64);
        let gt = g.fundamental_table().unwrap();
        let gd = gt.weighted_degree(&ds).unwrap().map_or(-1, |d| d as i64);
        assert!(gd < fd + p as i64);
        let box_exps = gt.period_exps().to_vec();
        for idx in 0..gt.len() {
            let mut x = vec![0i64; m];
            let mut r = idx;
            for (c, &k) in x.iter_mut().zip(&box_exps) {
                let per = (p as usize).pow(k);
                *c = (r % per) as i64;
                r /= per;
            }
            assert_eq!(g.eval(&x).scale(p as i64), f.eval(&x));
        }
    }
}

#[test]
fn root_after_scaling_drops_only_the_bottom_layer() {
    let mut rng = substream(10, "weighted-scale-root");
    for _ in 0..100 {
        let f = random_weighted(3, &[1, 2], 5, 2, &mut rng).unwrap();
        let back = f.mul_by_p().pth_root().unwrap();
        let diff = back.add(&f.scale(-1)).unwrap();
        assert!(diff.terms().values().all(|v| v.exp() <= 1));
        assert!(diff.alpha().exp() <= 1);
    }
}

#[test]
fn binomials_of_prime_powers_are_divisible() {
    for p in [2u64, 3, 5] {
        for k in 0..=4u32 {
            let pk = p.pow(k);
            for l in 1..=pk {
                let t = (0..).take_while(|&t| l % p.pow(t) == 0).last().unwrap();
                // Kummer: the valuation counts carries when adding l and p^k - l
                let digit_sum = |mut x: u64| {
                    let mut s = 0;
                    while x > 0 {
                        s += x % p;
                        x /= p;
                    }
                    s
                };
                let val = (digit_sum(l) + digit_sum(pk - l) - digit_sum(pk)) / (p - 1);
                assert!(val >= (k - t) as u64, "p={p} k={k} l={l}");
                if let Some(b) = binom_exact(pk, l) {
                    assert_eq!(b % p.pow(k - t) as u128, 0);
                }
            }
        }
    }
}

#[test]
fn periodicity_holds_at_the_true_degree() {
    let mut rng = substream(11, "weighted-periodicity");
    for _ in 0..100 {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let ds = random_degrees(2, &mut rng);
        let f = random_weighted(p, &ds, 5, 2, &mut rng).unwrap();
        let d = f.degree().unwrap_or(0);
        let report = periodicity_check(&f, d).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn pullback_degree_is_bounded_by_weighted_degree() {
    let s = Space::new(2, 4).unwrap();
    let p11 = parse_poly(&s, "1/4*x1*x2 + 1/2*x2*x3").unwrap();
    let p20 = parse_poly(&s, "1/2*x3*x4 + 1/2*x1*x4").unwrap();
    let factor = Factor::from_tops(s, vec![(2, 1, p11), (2, 0, p20)], true).unwrap();
    let mut rng = substream(12, "weighted-pullback");
    let mut checked = 0;
    while checked < 60 {
        let f = random_weighted(2, &[2, 2], 4, 1, &mut rng).unwrap();
        let Ok(q) = factor.pullback(&f) else { continue };
        let wd = f.fundamental_table().unwrap().weighted_degree(&[2, 2]).unwrap();
        assert!(q.degree().unwrap_or(0) <= wd.unwrap_or(0));
        checked += 1;
    }
}

#[test]
fn tables_with_wrong_length_are_rejected() {
    let vals = vec![TorusValue::zero(2); 3];
    assert!(PeriodicTable::new(2, vec![2], &vals).is_err());
}
