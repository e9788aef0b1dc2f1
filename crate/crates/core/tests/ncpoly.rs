use nonclassical::algebra::space::Space;
use nonclassical::algebra::torus::TorusValue;
use nonclassical::ncpoly::enumerate::random_form;
use nonclassical::ncpoly::{format_form, interpolate, parse_poly, random_poly, NCPoly, PolyEnumeration};
use nonclassical::rng::substream;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;

/// `(p, n, d, seed)` for a random polynomial on a small space.
fn poly_params() -> impl Strategy<Value = (u32, usize, u32, u64)> {
    prop_oneof![
        (Just(2u32), 1usize..=5, 0u32..=6, any::<u64>()),
        (Just(3u32), 1usize..=3, 0u32..=6, any::<u64>()),
        (Just(5u32), 1usize..=2, 0u32..=8, any::<u64>()),
    ]
}

fn make(p: u32, n: usize, d: u32, seed: u64, label: &str) -> NCPoly {
    let space = Space::new(p, n).unwrap();
    random_poly(&space, d, true, &mut substream(seed, label))
}

/// Value of a canonical form at `x` as an exact rational mod 1, straight
/// from its terms.
fn form_value(poly: &NCPoly, x: usize) -> Ratio<i128> {
    let space = poly.space();
    let form = poly.canonical();
    let p = form.p() as i128;
    let digits = space.digits(x);
    let alpha = form.alpha();
    let mut total = Ratio::new(alpha.num() as i128, p.pow(alpha.exp()));
    for term in form.terms() {
        let monomial: i128 = form.exps(term).iter().zip(&digits).map(|(&e, &a)| (a as i128).pow(e)).product();
        total += Ratio::new(term.coeff as i128 * monomial, p.pow(term.depth + 1));
    }
    total - total.floor()
}

fn torus_ratio(v: TorusValue) -> Ratio<i128> {
    Ratio::new(v.num() as i128, (v.p() as i128).pow(v.exp()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tables_match_the_canonical_formula((p, n, d, seed) in poly_params()) {
        let poly = make(p, n, d, seed, "formula");
        for x in 0..poly.space().size() {
            prop_assert_eq!(torus_ratio(poly.value(x)), form_value(&poly, x));
        }
    }

    #[test]
    fn cocycle_equation_holds((p, n, d, seed) in poly_params(), h in any::<usize>(), k in any::<usize>()) {
        let poly = make(p, n, d, seed, "cocycle");
        let size = poly.space().size();
        let (h, k) = (h % size, k % size);
        let lhs = poly.derivative(poly.space().add(h, k));
        let rhs = poly.derivative(h).add(&poly.derivative(k).shift(h)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shifting_p_times_is_the_identity((p, n, d, seed) in poly_params(), h in any::<usize>()) {
        let poly = make(p, n, d, seed, "shift");
        let h = h % poly.space().size();
        let back = (0..p).fold(poly.clone(), |acc, _| acc.shift(h));
        prop_assert_eq!(back, poly);
    }

    #[test]
    fn leibniz_rule_for_classical_products(n in 1usize..=4, seed in any::<u64>(), h in any::<usize>()) {
        for p in [2u32, 3] {
            let space = Space::new(p, n).unwrap();
            let mut rng = substream(seed, "leibniz");
            let mut random_classical = || {
                let table: Vec<u32> = (0..space.size()).map(|_| rng.gen_range(0..p)).collect();
                NCPoly::classical_from_fn(space, |x| table[x])
            };
            let (f, g) = (random_classical(), random_classical());
            let h = h % space.size();
            let product = f.multiply_classical(&g).unwrap();
            let (df, dg) = (f.derivative(h), g.derivative(h));
            let rhs = df
                .multiply_classical(&g)
                .unwrap()
                .add(&f.multiply_classical(&dg).unwrap())
                .unwrap()
                .add(&df.multiply_classical(&dg).unwrap())
                .unwrap();
            prop_assert_eq!(product.derivative(h), rhs);
        }
    }

    #[test]
    fn roots_invert_multiplication_by_p((p, n, d, seed) in poly_params()) {
        let poly = make(p, n, d, seed, "roots");
        let root = poly.pth_root().unwrap();
        prop_assert_eq!(root.mul_by_p(), poly.clone());
        let degree = poly.degree().map_or(0, |v| v as i64);
        prop_assert!(root.degree().map_or(-1, |v| v as i64) < degree + p as i64);
        let gap = poly.mul_by_p().pth_root().unwrap().sub(&poly).unwrap();
        prop_assert!(gap.is_classical());
    }

    #[test]
    fn interpolation_inverts_evaluation((p, n, d, seed) in poly_params()) {
        let space = Space::new(p, n).unwrap();
        let form = random_form(&space, d, true, &mut substream(seed, "interpolate"));
        let exp = form.value_exp().max(1);
        let table = form.evaluate(&space, exp);
        prop_assert_eq!(interpolate(&space, exp, &table).unwrap(), form);
    }

    #[test]
    fn text_form_round_trips((p, n, d, seed) in poly_params()) {
        let poly = make(p, n, d, seed, "text");
        let text = format_form(poly.canonical());
        prop_assert_eq!(parse_poly(poly.space(), &text).unwrap(), poly);
    }

    #[test]
    fn derivatives_lower_the_degree((p, n, d, seed) in poly_params(), h in any::<usize>()) {
        let poly = make(p, n, d.max(1), seed, "derivative-degree");
        let h = h % poly.space().size();
        let before = poly.degree().map_or(-1, |v| v as i64);
        let after = poly.derivative(h).degree().map_or(-1, |v| v as i64);
        prop_assert!(after < before.max(0));
    }
}

fn degrees_agree(space: Space, d: u32) -> u128 {
    let en = PolyEnumeration::new(space, d, true).unwrap();
    let stride = if en.count() > 1 << 17 { 97 } else { 1 };
    let mut checked = 0;
    for poly in en.iter().step_by(stride) {
        let found = poly.degree_by_derivatives(poly.default_degree_bound()).unwrap();
        assert_eq!(found, poly.degree(), "{}", format_form(poly.canonical()));
        let bound = match poly.degree() {
            None | Some(0) => 1,
            Some(deg) => (space.p() as usize).pow((deg - 1) / (space.p() - 1) + 1),
        };
        assert!(poly.distinct_values() <= bound);
        checked += 1;
    }
    checked
}

#[test]
fn degree_by_derivatives_matches_canonical_degree() {
    for (p, max_n, max_d) in [(2u32, 3usize, 4u32), (3, 2, 4)] {
        for n in 1..=max_n {
            for d in 0..=max_d {
                let space = Space::new(p, n).unwrap();
                // constants never change the degree of a nonconstant polynomial
                assert!(degrees_agree(space, d) > 0);
            }
        }
    }
}

#[test]
fn documented_examples() {
    let space = Space::new(2, 3).unwrap();
    let poly = parse_poly(&space, "1/4*x1*x2 + 1/2*x3").unwrap();
    assert_eq!(poly.degree(), Some(3));
    assert_eq!(poly.exp(), 2);
    // at (1, 1, 1): 1/4 + 1/2
    let v = poly.value(7);
    assert_eq!((v.num(), v.exp()), (3, 2));
    let mother = parse_poly(&Space::new(2, 1).unwrap(), "1/4*x1").unwrap();
    assert_eq!(mother.degree(), Some(2));
    assert_eq!(mother.mul_by_p(), parse_poly(&Space::new(2, 1).unwrap(), "1/2*x1").unwrap());
}
