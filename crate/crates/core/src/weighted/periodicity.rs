use serde::Serialize;

use crate::algebra::torus::{TorusJson, TorusValue};
use crate::error::Result;

use super::poly::WeightedPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCheck {
    /// Coordinate, 0-based.
    pub coord: usize,
    /// The shift is `p^j e_coord`.
    pub j: u32,
    pub periodic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopCoefficient {
    pub coord: usize,
    pub j: u32,
    /// `None` when the derivative along `p^j e_coord` is not constant.
    pub derivative: Option<TorusJson>,
    /// `c` with derivative `c / p`, when it has that form.
    pub c: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityReport {
    pub degree_bound: u32,
    pub periods: Vec<PeriodCheck>,
    pub top: Vec<TopCoefficient>,
    /// Whether `f - sum_i c_i a_i / p^{j_i+1}` only depends on the residues
    /// `a_i mod p^{j+1}` with `D_i + j(p-1) < d`.
    pub remainder_reduced: bool,
}

impl PeriodicityReport {
    pub fn passed(&self) -> bool {
        self.periods.iter().all(|c| c.periodic)
            && self.top.iter().all(|t| t.c.is_some())
            && self.remainder_reduced
    }
}

/// Checks the periodicity and top-linear-part structure forced by a weighted
/// degree bound `d`. Shifts `p^j e_i` with `D_i + j(p-1) > d` are tested for
/// the first such `j` and the next one.
pub fn periodicity_check(f: &WeightedPoly, d: u32) -> Result<PeriodicityReport> {
    let p = f.p();
    // a box on which f is genuinely periodic, enlarged to cover every shift tested
    let own = f.period_exps();
    let forced = f.period_exps_for(Some(d));
    let domain: Vec<u32> = own.iter().zip(&forced).map(|(&a, &b)| a.max(b + 1)).collect();
    let table = f.to_table(domain)?;

    let mut periods = Vec::new();
    for (coord, &k) in forced.iter().enumerate() {
        for j in [k, k + 1] {
            periods.push(PeriodCheck { coord, j, periodic: table.has_period(coord, j) });
        }
    }

    let mut top = Vec::new();
    let mut linear = WeightedPoly::zero(p, f.initial_degrees().to_vec())?;
    let mut residue_exps = Vec::new();
    for (coord, &di) in f.initial_degrees().iter().enumerate() {
        let exact = d >= di && (d - di).is_multiple_of(p - 1);
        // residues a_i mod p^{j+1} with D_i + j(p-1) < d
        let below = if di >= d { 0 } else { (d - di - 1) / (p - 1) + 1 };
        residue_exps.push(below);
        if !exact {
            continue;
        }
        let j = (d - di) / (p - 1);
        let der = table.derivative(coord, j);
        let value = der.is_constant().then(|| der.value_at_index(0));
        let c = value.filter(|v| v.exp() <= 1).map(|v| v.numerator_at(1));
        if let Some(c) = c {
            let mut index = vec![0; f.m()];
            index[coord] = 1;
            let coeff = TorusValue::new(p, c as i64, j + 1)?;
            linear = linear.add(&WeightedPoly::new(p, f.initial_degrees().to_vec(), TorusValue::zero(p), [(index, coeff)])?)?;
        }
        top.push(TopCoefficient { coord, j, derivative: value.map(|v| v.to_json()), c });
    }
    let rest = table.sub(&linear.to_table(table.period_exps().to_vec())?)?;
    let remainder_reduced = residue_exps.iter().enumerate().all(|(coord, &k)| rest.has_period(coord, k));

    Ok(PeriodicityReport { degree_bound: d, periods, top, remainder_reduced })
}
