//! Root extraction and canonical-form round trips over enumerated and random
//! polynomials, including weighted ones on `Z^m`.

use rand::Rng;
use serde_json::json;

use crate::algebra::field::pow_u64;
use crate::algebra::space::Space;
use crate::error::Result;
use crate::ncpoly::{interpolate, random_poly, NCPoly, PolyEnumeration};
use crate::rng::substream;
use crate::weighted::random_weighted;

use super::report::{Check, SuiteParams, SuiteReport};

/// `(p, n, d, modulo_constants)`; the largest grid is enumerated modulo
/// constants, whose roots are checked separately.
const GRID: &[(u32, usize, u32, bool)] = &[
    (2, 1, 4, false),
    (2, 2, 4, false),
    (2, 3, 4, true),
    (3, 1, 3, false),
    (3, 2, 3, false),
];

/// Largest number of values a degree-`d` polynomial can take.
pub fn value_count_bound(p: u32, degree: Option<u32>) -> u64 {
    match degree {
        None | Some(0) => 1,
        Some(d) => (p as u64).pow((d - 1) / (p - 1) + 1),
    }
}

struct PolyChecks {
    root: Check,
    canonical: Check,
    values: Check,
}

impl PolyChecks {
    fn new(tag: impl Fn(&str) -> Check) -> Self {
        Self { root: tag("root-round-trip"), canonical: tag("canonical-round-trip"), values: tag("value-count-bound") }
    }

    fn run(&mut self, space: &Space, poly: &NCPoly) -> Result<()> {
        let p = space.p();
        let form = poly.canonical();
        let exp = poly.exp();
        let table = poly.table();

        // the root, evaluated independently, times p gives back the values
        let root = form.pth_root()?;
        let root_table = root.evaluate(space, exp + 1);
        let modulus = pow_u64(p, exp);
        let scaled_ok = root_table.iter().zip(table).all(|(r, v)| r % modulus == *v);
        let degree_ok = match (form.degree(), root.degree()) {
            (Some(d), Some(r)) => r < d + p,
            (None, None) => true,
            (None, Some(_)) => false,
            (Some(_), None) => false,
        };
        let back = root.mul_by_p() == *form;
        self.root.case(scaled_ok && degree_ok && back, || json!({ "P": poly.to_json() }));

        let interpolated = interpolate(space, exp, table)?;
        let evaluated = form.evaluate(space, exp);
        self.canonical
            .case(interpolated == *form && evaluated == table, || json!({ "P": poly.to_json(), "table": table }));

        let distinct = poly.distinct_values() as u64;
        let bound = value_count_bound(p, form.degree());
        self.values.case(distinct <= bound, || json!({ "P": poly.to_json(), "values": distinct, "bound": bound }));
        Ok(())
    }

    fn finish(self, report: &mut SuiteReport) {
        report.push(self.root.finish());
        report.push(self.canonical.finish());
        report.push(self.values.finish());
    }
}

pub fn roots(params: &SuiteParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("roots", params);
    let mut rng = substream(params.seed, "roots");

    let grid: Vec<(u32, usize, u32, bool)> = match (params.p, params.n, params.degree) {
        (Some(p), Some(n), Some(d)) => vec![(p, n, d, false)],
        _ => GRID.to_vec(),
    };
    for &(p, n, d, modulo_constants) in &grid {
        let space = Space::new(p, n)?;
        let enumeration = PolyEnumeration::new(space, d, modulo_constants)?;
        let source = if modulo_constants { "enumerated-mod-constants" } else { "enumerated" };
        let grid_tag = |source: &'static str| {
            move |name: &str| Check::new(name).param("p", p).param("n", n).param("d", d).param("source", source)
        };
        let mut checks = PolyChecks::new(grid_tag(source));
        for poly in enumeration.iter() {
            checks.run(&space, &poly)?;
        }
        checks.finish(&mut report);
        if modulo_constants {
            // constants alone, then a sample of polynomials with constants
            let mut with_constants = PolyChecks::new(grid_tag("enumerated-constants"));
            let alpha_exp = crate::ncpoly::enumerate::alpha_exp(p, d);
            for a in 0..pow_u64(p, alpha_exp) {
                let constant = NCPoly::from_table(space, alpha_exp, vec![a; space.size()])?;
                with_constants.run(&space, &constant)?;
                let shifted = random_poly(&space, d, false, &mut rng).add(&constant)?;
                with_constants.run(&space, &shifted)?;
            }
            with_constants.finish(&mut report);
        }
    }

    let mut random = PolyChecks::new(|name: &str| Check::new(name).param("source", "random-larger"));
    let mut inverse = Check::new("root-after-scaling").param("source", "random-larger");
    for _ in 0..params.trials_or(500) {
        let (p, n, d) = match rng.gen_range(0..3) {
            0 => (2, rng.gen_range(4..=6), rng.gen_range(1..=6)),
            1 => (3, rng.gen_range(3..=4), rng.gen_range(1..=5)),
            _ => (5, 2, rng.gen_range(1..=8)),
        };
        let space = Space::new(p, n)?;
        let poly = random_poly(&space, d, true, &mut rng);
        random.run(&space, &poly)?;
        // the poly-level root, scaled back, and the classical gap of root(pP)
        let root = poly.pth_root()?;
        let gap = poly.mul_by_p().pth_root()?.sub(&poly)?;
        inverse.case(root.mul_by_p() == poly && gap.is_classical(), || json!({ "P": poly.to_json() }));
    }
    random.finish(&mut report);
    report.push(inverse.finish());

    let mut weighted = Check::new("weighted-root-round-trip");
    for _ in 0..params.trials_or(300) {
        let p = [2u32, 3][rng.gen_range(0..2)];
        let m = rng.gen_range(1..=2);
        let degrees: Vec<u32> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let d = rng.gen_range(0..=5);
        let f = random_weighted(p, &degrees, d, 2, &mut rng)?;
        let root = f.pth_root()?;
        let degree_ok = match (f.degree(), root.degree()) {
            (Some(a), Some(b)) => b < a + p,
            (None, None) => true,
            _ => false,
        };
        // pointwise on a box around the origin
        let box_ok = (0..5u64.pow(m as u32)).all(|code| {
            let x: Vec<i64> = (0..m).map(|t| (code / 5u64.pow(t as u32) % 5) as i64 - 2).collect();
            root.eval(&x).scale(p as i64) == f.eval(&x)
        });
        weighted.case(root.mul_by_p() == f && degree_ok && box_ok, || json!({ "f": f.to_json() }));
    }
    report.push(weighted.finish());
    Ok(report)
}
