use serde_json::{json, Value};

use nonclassical::algebra::space::{FVec, Space};
use nonclassical::cubes::{
    cube_preservation_check, equidistribution_report, factor_equidistribution, hk_membership, hk_taylor,
    joint_equidistribution_report, is_polynomial_map, CubePoint, Directions, EquidistReport, FilteredGroup, GroupJson,
    Taylor,
};
use nonclassical::gowers::{
    analytic_rank_with_budget, conditional_expectation, gowers_power_exact, gowers_power_recursive, inverse_explore,
    rank_witness_check, BoundedFunction, FunctionJson, RankWitness, WitnessJson, DEFAULT_NORM_BUDGET,
};
use nonclassical::harness::{run_suite, SuiteParams};
use nonclassical::multilinear::{bias_with_budget, CsmForm, CsmJson, DEFAULT_BIAS_BUDGET};
use nonclassical::ncpoly::{format_degree, format_form, interpolate as interpolate_table, NCPoly};
use nonclassical::weighted::{Factor, FactorJson, WeightedJson, WeightedPoly};

use crate::input::{field, parse_json, poly_from_value, read_json, read_poly};
use crate::{CliError, Global, Outcome};

fn ok(json: Value, text: String) -> Result<Outcome, CliError> {
    Ok(Outcome { json, text, passed: true })
}

fn poly_outcome(poly: &NCPoly) -> Result<Outcome, CliError> {
    ok(json!(poly.to_json()), format_form(poly.canonical()))
}

fn point_index(space: &Space, digits: &[u32]) -> Result<usize, CliError> {
    if digits.len() != space.n() {
        return Err(CliError::Usage(format!("expected {} digits, got {}", space.n(), digits.len())));
    }
    Ok(FVec::from_digits(space.p(), digits)?.index())
}

pub fn eval(g: &Global, at: Option<&[u32]>) -> Result<Outcome, CliError> {
    let poly = read_poly(g)?;
    let space = *poly.space();
    match at {
        Some(digits) => {
            let v = poly.value(point_index(&space, digits)?);
            ok(json!({ "x": digits, "value": v.to_json() }), v.to_string())
        }
        None => {
            let rows: Vec<Value> =
                (0..space.size()).map(|x| json!({ "x": space.digits(x), "value": poly.value(x).to_json() })).collect();
            let text = (0..space.size()).map(|x| format!("{:?} {}", space.digits(x), poly.value(x))).collect::<Vec<_>>();
            ok(json!(rows), text.join("\n"))
        }
    }
}

pub fn derive(g: &Global, h: &[u32]) -> Result<Outcome, CliError> {
    let poly = read_poly(g)?;
    let direction = point_index(poly.space(), h)?;
    poly_outcome(&poly.derivative(direction))
}

pub fn degree(g: &Global) -> Result<Outcome, CliError> {
    let poly = read_poly(g)?;
    let form_degree = poly.degree();
    let by_derivatives = poly.degree_by_derivatives(poly.default_degree_bound())?;
    let agree = form_degree == by_derivatives;
    Ok(Outcome {
        json: json!({ "degree": form_degree, "by_derivatives": by_derivatives, "agree": agree }),
        text: format!("degree {} (derivatives: {})", format_degree(form_degree), format_degree(by_derivatives)),
        passed: agree,
    })
}

pub fn interpolate(g: &Global) -> Result<Outcome, CliError> {
    let input = read_json(g)?;
    let p: u32 = parse_json(field(&input, "p")?.clone(), "p")?;
    let n: usize = parse_json(field(&input, "n")?.clone(), "n")?;
    let exp: u32 = parse_json(field(&input, "exp")?.clone(), "exp")?;
    let table: Vec<u64> = parse_json(field(&input, "table")?.clone(), "table")?;
    let space = Space::new(p, n)?;
    let form = interpolate_table(&space, exp, &table)?;
    ok(json!(form.to_json()), format_form(&form))
}

pub fn root(g: &Global) -> Result<Outcome, CliError> {
    poly_outcome(&read_poly(g)?.pth_root()?)
}

pub fn mulp(g: &Global) -> Result<Outcome, CliError> {
    poly_outcome(&read_poly(g)?.mul_by_p())
}

enum FunctionInput {
    Phase(NCPoly),
    Values(BoundedFunction),
}

fn read_function(g: &Global) -> Result<FunctionInput, CliError> {
    let input = read_json_or_text(g)?;
    function_from_value(g, &input)
}

fn read_json_or_text(g: &Global) -> Result<Value, CliError> {
    let raw = crate::input::read_raw(g)?;
    Ok(serde_json::from_str(&raw).unwrap_or(Value::String(raw)))
}

fn function_from_value(g: &Global, value: &Value) -> Result<FunctionInput, CliError> {
    if value.get("values").is_some() {
        let j: FunctionJson = parse_json(value.clone(), "function")?;
        let f = BoundedFunction::from_json(&j)?;
        if let Some(poly) = f.as_phase() {
            return Ok(FunctionInput::Phase(poly.clone()));
        }
        return Ok(FunctionInput::Values(f));
    }
    Ok(FunctionInput::Phase(poly_from_value(g, value)?))
}

impl FunctionInput {
    fn to_function(&self) -> BoundedFunction {
        match self {
            FunctionInput::Phase(p) => BoundedFunction::phase(p),
            FunctionInput::Values(f) => f.clone(),
        }
    }
}

pub fn norm(g: &Global) -> Result<Outcome, CliError> {
    let d = g.degree.unwrap_or(2) as usize;
    let budget = g.budget.unwrap_or(DEFAULT_NORM_BUDGET);
    let (power, exact) = match read_function(g)? {
        FunctionInput::Phase(poly) => {
            let mean = gowers_power_exact(&poly, d, budget)?;
            (mean.to_complex().re, mean.as_rational().map(|r| r.to_string()))
        }
        FunctionInput::Values(f) => (gowers_power_recursive(&f, d, budget)?, None),
    };
    let norm = power.max(0.0).powf(1.0 / (1u64 << d) as f64);
    let mut text = format!("||f||_U{d} = {norm:.12}\npower = {power:.12}");
    if let Some(e) = &exact {
        text.push_str(&format!(" = {e}"));
    }
    ok(json!({ "d": d, "norm": norm, "power": power, "power_exact": exact }), text)
}

pub fn arank(g: &Global, s: usize) -> Result<Outcome, CliError> {
    let poly = read_poly(g)?;
    let r = analytic_rank_with_budget(&poly, s, g.budget.unwrap_or(DEFAULT_BIAS_BUDGET))?;
    ok(
        json!({ "bias": r.bias.to_string_exact(), "arank": r.arank, "bias_float": r.bias.value() }),
        format!("bias {} ({:.6})\narank {:.6}", r.bias.to_string_exact(), r.bias.value(), r.arank),
    )
}

pub fn bias(g: &Global) -> Result<Outcome, CliError> {
    let j: CsmJson = parse_json(read_json(g)?, "multilinear form")?;
    let form = CsmForm::from_json(&j)?;
    let b = bias_with_budget(&form.to_table(), g.budget.unwrap_or(DEFAULT_BIAS_BUDGET))?;
    ok(
        json!({ "bias": b.to_string_exact(), "bias_float": b.value(), "neg_log": b.neg_log(), "exponent": b.exact_exponent() }),
        format!("bias {} ({:.6}), -log_p {:.6}", b.to_string_exact(), b.value(), b.neg_log()),
    )
}

pub fn witness_check(g: &Global) -> Result<Outcome, CliError> {
    let input = read_json(g)?;
    let target = poly_from_value(g, field(&input, "target")?)?;
    let s: u32 = parse_json(field(&input, "s")?.clone(), "s")?;
    let witness = match (input.get("witness"), input.get("polys")) {
        (Some(w), _) => RankWitness::from_json(&parse_json::<WitnessJson>(w.clone(), "witness")?, target.p())?,
        (None, Some(Value::Array(polys))) => {
            let polys = polys.iter().map(|v| poly_from_value(g, v)).collect::<Result<Vec<_>, _>>()?;
            match RankWitness::induced(&target, polys) {
                Ok(w) => w,
                Err(e) => {
                    return Ok(Outcome {
                        json: json!({ "valid": false, "reason": e.to_string() }),
                        text: format!("invalid: {e}"),
                        passed: false,
                    })
                }
            }
        }
        _ => return Err(CliError::Usage("input needs \"witness\" or \"polys\"".into())),
    };
    let valid = rank_witness_check(&target, s, &witness)?;
    Ok(Outcome {
        json: json!({ "valid": valid, "size": witness.polys.len(), "witness": witness.to_json() }),
        text: format!("{} ({} polynomials)", if valid { "valid" } else { "invalid" }, witness.polys.len()),
        passed: valid,
    })
}

pub fn explore(g: &Global) -> Result<Outcome, CliError> {
    let s = g.degree.ok_or_else(|| CliError::Usage("explore needs --degree".into()))?;
    let f = read_function(g)?.to_function();
    let found = inverse_explore(&f, s)?;
    ok(
        json!({ "best": found.best.to_json(), "correlation": found.correlation, "candidates": found.candidates.to_string() }),
        format!(
            "best {} with correlation {:.12} ({} candidates)",
            format_form(found.best.canonical()),
            found.correlation,
            found.candidates
        ),
    )
}

pub fn decompose(g: &Global) -> Result<Outcome, CliError> {
    let input = read_json(g)?;
    let f = function_from_value(g, field(&input, "function")?)?.to_function();
    let Value::Array(factors) = field(&input, "factors")? else {
        return Err(CliError::Usage("\"factors\" must be an array".into()));
    };
    let tables = factors
        .iter()
        .map(|v| {
            let poly = poly_from_value(g, v)?;
            if poly.space() != f.space() {
                return Err(CliError::Usage("factors live on a different space".into()));
            }
            Ok(poly.table().to_vec())
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let (projection, energy) = conditional_expectation(f.values(), &tables);
    let atoms = nonclassical::gowers::Atoms::new(f.values().len(), &tables).count();
    let values: Vec<Value> = projection.iter().map(|c| json!({ "re": c.re, "im": c.im })).collect();
    ok(
        json!({ "atoms": atoms, "energy": energy, "projection": values }),
        format!("{atoms} atoms, energy {energy:.12}"),
    )
}

fn read_weighted(g: &Global) -> Result<WeightedPoly, CliError> {
    let j: WeightedJson = parse_json(read_json(g)?, "weighted polynomial")?;
    Ok(WeightedPoly::from_json(&j)?)
}

pub fn wdegree(g: &Global) -> Result<Outcome, CliError> {
    let f = read_weighted(g)?;
    let measured = f.fundamental_table()?.weighted_degree(f.initial_degrees())?;
    let agree = measured == f.degree();
    Ok(Outcome {
        json: json!({ "degree": f.degree(), "by_derivatives": measured, "agree": agree }),
        text: format!("weighted degree {} (derivatives: {})", format_degree(f.degree()), format_degree(measured)),
        passed: agree,
    })
}

pub fn wroot(g: &Global) -> Result<Outcome, CliError> {
    let root = read_weighted(g)?.pth_root()?;
    let j = root.to_json();
    let text = serde_json::to_string(&j).map_err(|e| CliError::Io(e.to_string()))?;
    ok(json!(j), text)
}

fn read_group(value: &Value) -> Result<FilteredGroup, CliError> {
    Ok(FilteredGroup::from_json(&parse_json::<GroupJson>(value.clone(), "group")?)?)
}

/// Group elements given as digit arrays or as mixed-radix indices.
fn read_elements(group: &FilteredGroup, value: &Value) -> Result<Vec<usize>, CliError> {
    let Value::Array(items) = value else {
        return Err(CliError::Usage("expected an array of group elements".into()));
    };
    items
        .iter()
        .map(|item| match item {
            Value::Number(_) => {
                let idx: usize = parse_json(item.clone(), "element")?;
                if idx >= group.size() {
                    return Err(CliError::Usage(format!("element {idx} outside a group of order {}", group.size())));
                }
                Ok(idx)
            }
            other => Ok(group.index_of(&parse_json::<Vec<u64>>(other.clone(), "element")?)?),
        })
        .collect()
}

pub fn cube_check(g: &Global) -> Result<Outcome, CliError> {
    let input = read_json(g)?;
    let group = read_group(field(&input, "group")?)?;
    let entries = read_elements(&group, field(&input, "cube")?)?;
    if !entries.len().is_power_of_two() {
        return Err(CliError::Usage("a cube has 2^k entries".into()));
    }
    let cube = CubePoint::new(entries.len().trailing_zeros() as usize, entries)?;
    let member = hk_membership(&cube, &group);
    let taylor = match hk_taylor(&cube, &group) {
        Taylor::Member(coeffs) => json!({ "member": true, "coefficients": coeffs.iter().map(|&c| group.digits(c)).collect::<Vec<_>>() }),
        Taylor::Outside { subset, coeff } => json!({ "member": false, "subset": subset, "coefficient": group.digits(coeff) }),
    };
    let agree = taylor["member"] == json!(member);
    Ok(Outcome {
        json: json!({ "k": cube.k, "member": member, "taylor": taylor, "criteria_agree": agree }),
        text: format!("{} HK^{}", if member { "in" } else { "not in" }, cube.k),
        passed: member && agree,
    })
}

pub fn polymap_check(g: &Global) -> Result<Outcome, CliError> {
    let input = read_json(g)?;
    let h = read_group(field(&input, "source")?)?;
    let target = read_group(field(&input, "target")?)?;
    let phi = read_elements(&target, field(&input, "phi")?)?;
    if phi.len() != h.size() {
        return Err(CliError::Usage(format!("phi needs {} values", h.size())));
    }
    let verdict = is_polynomial_map(&phi, &h, &target, Directions::Generators)?;
    let k_max = target.degree().map_or(1, |s| s + 1);
    let cubes = cube_preservation_check(&phi, &h, &target, k_max, g.budget.unwrap_or(1 << 24))?;
    let agree = verdict.polynomial == cubes.preserved;
    Ok(Outcome {
        json: json!({ "polynomial": verdict.polynomial, "verdict": verdict, "cubes": cubes, "criteria_agree": agree }),
        text: format!(
            "{} (cubes up to dimension {k_max} {})",
            if verdict.polynomial { "polynomial" } else { "not polynomial" },
            if cubes.preserved { "preserved" } else { "not preserved" }
        ),
        passed: verdict.polynomial && agree,
    })
}

fn equidist_outcome(report: EquidistReport) -> Result<Outcome, CliError> {
    let text = format!(
        "domain {} target {}: max deviation {}, max bias {:.12}{}",
        report.domain,
        report.target,
        report.max_deviation,
        report.max_bias,
        if report.all_biases_zero { " (equidistributed)" } else { "" }
    );
    Ok(Outcome { passed: report.fourier_consistent, json: json!(report), text })
}

pub fn equidist(g: &Global) -> Result<Outcome, CliError> {
    let input = read_json(g)?;
    if let Some(factor) = input.get("factor") {
        let factor = Factor::from_json(&parse_json::<FactorJson>(factor.clone(), "factor")?)?;
        return equidist_outcome(factor_equidistribution(&factor)?);
    }
    if let Some(Value::Array(forms)) = input.get("forms") {
        let d: usize = parse_json(field(&input, "d")?.clone(), "d")?;
        let forms = forms
            .iter()
            .map(|v| Ok(CsmForm::from_json(&parse_json::<CsmJson>(v.clone(), "multilinear form")?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        let first = forms.first().ok_or_else(|| CliError::Usage("\"forms\" is empty".into()))?;
        let space = Space::new(first.p(), first.n())?;
        let tables: Vec<_> = forms.iter().map(|f| f.to_table()).collect();
        return equidist_outcome(joint_equidistribution_report(&space, &tables, d, g.budget.unwrap_or(1 << 24))?);
    }
    if let Some(Value::Array(polys)) = input.get("polys") {
        let polys = polys.iter().map(|v| poly_from_value(g, v)).collect::<Result<Vec<_>, _>>()?;
        let first = polys.first().ok_or_else(|| CliError::Usage("\"polys\" is empty".into()))?;
        let p = first.p() as u64;
        let orders: Vec<u64> = polys.iter().map(|q| p.pow(q.exp())).collect();
        let values: Vec<usize> = (0..first.space().size())
            .map(|x| polys.iter().zip(&orders).rev().fold(0usize, |acc, (q, &m)| acc * m as usize + q.table()[x] as usize))
            .collect();
        return equidist_outcome(equidistribution_report(&orders, &values)?);
    }
    let orders: Vec<u64> = parse_json(field(&input, "cyclic_orders")?.clone(), "cyclic_orders")?;
    let group = FilteredGroup::maximal(orders.clone(), 0)?;
    let values = read_elements(&group, field(&input, "values")?)?;
    equidist_outcome(equidistribution_report(&orders, &values)?)
}

pub fn verify(g: &Global, suite: &str) -> Result<Outcome, CliError> {
    let params = SuiteParams {
        p: g.p,
        n: g.n,
        degree: g.degree,
        trials: g.trials,
        seed: g.seed,
        budget: g.budget,
    };
    let report = run_suite(suite, &params)?;
    Ok(Outcome { passed: report.passed, text: report.to_text(), json: serde_json::to_value(&report).expect("reports serialize") })
}
