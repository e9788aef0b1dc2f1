use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::torus::{TorusJson, TorusValue};
use crate::error::{Error, Result};
use crate::ncpoly::{NCPoly, PolyJson};

/// A claimed factorization `P = F(Q_1, ..., Q_m)` with each `Q_i` of low
/// degree and `F` given as a lookup table on value tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub polys: Vec<NCPoly>,
    pub table: BTreeMap<Vec<TorusValue>, TorusValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntryJson {
    pub key: Vec<TorusJson>,
    pub value: TorusJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub polys: Vec<PolyJson>,
    pub table: Vec<WitnessEntryJson>,
}

impl RankWitness {
    fn key(&self, x: usize) -> Vec<TorusValue> {
        self.polys.iter().map(|q| q.value(x)).collect()
    }

    /// The table read off from `target` itself; fails if `target` is not a
    /// function of the given polynomials.
    pub fn induced(target: &NCPoly, polys: Vec<NCPoly>) -> Result<Self> {
        let mut w = Self { polys, table: BTreeMap::new() };
        for x in 0..target.space().size() {
            let key = w.key(x);
            let v = target.value(x);
            if let Some(old) = w.table.insert(key, v) {
                if old != v {
                    return Err(Error::InvalidForm("target is not a function of the witness".into()));
                }
            }
        }
        Ok(w)
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            polys: self.polys.iter().map(NCPoly::to_json).collect(),
            table: self
                .table
                .iter()
                .map(|(k, v)| WitnessEntryJson { key: k.iter().map(|t| t.to_json()).collect(), value: v.to_json() })
                .collect(),
        }
    }

    pub fn from_json(j: &WitnessJson, p: u32) -> Result<Self> {
        let polys = j.polys.iter().map(NCPoly::from_json).collect::<Result<Vec<_>>>()?;
        let mut table = BTreeMap::new();
        for e in &j.table {
            let key = e.key.iter().map(|&t| TorusValue::from_json(p, t)).collect::<Result<Vec<_>>>()?;
            table.insert(key, TorusValue::from_json(p, e.value)?);
        }
        Ok(Self { polys, table })
    }
}

/// True iff `P(x) = F(Q_1(x), ..., Q_m(x))` everywhere.
pub fn rank_witness_check(target: &NCPoly, s: u32, w: &RankWitness) -> Result<bool> {
    for q in &w.polys {
        if q.space() != target.space() {
            return Err(Error::DimensionMismatch { expected: target.n(), got: q.n() });
        }
        if let Some(d) = q.degree() {
            if d > s {
                return Err(Error::DegreeTooHigh { bound: s as i64, found: d as i64 });
            }
        }
    }
    for x in 0..target.space().size() {
        let key = w.key(x);
        let Some(v) = w.table.get(&key) else {
            return Err(Error::IncompleteTable(format!("no entry for value tuple {key:?}")));
        };
        if *v != target.value(x) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::space::Space;
    use crate::catalog::{digit_sum_over, elementary_symmetric};
    use crate::ncpoly::parse_poly;

    #[test]
    fn quartic_is_a_function_of_l_over_eight() {
        let n = 6;
        let s4 = elementary_symmetric(n, 4).unwrap();
        let l8 = digit_sum_over(s4.space(), 3).unwrap();
        let w = RankWitness::induced(&s4, vec![l8]).unwrap();
        assert!(rank_witness_check(&s4, 3, &w).unwrap());
        let back = RankWitness::from_json(&w.to_json(), 2).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn trivial_and_failing_witnesses() {
        let s = Space::new(2, 2).unwrap();
        let c = parse_poly(&s, "1/4").unwrap();
        let w = RankWitness::induced(&c, vec![]).unwrap();
        assert!(rank_witness_check(&c, 0, &w).unwrap());

        let x1 = parse_poly(&s, "1/2*x1").unwrap();
        let x2 = parse_poly(&s, "1/2*x2").unwrap();
        assert!(RankWitness::induced(&x1, vec![x2.clone()]).is_err());
        let mut table = BTreeMap::new();
        table.insert(vec![TorusValue::zero(2)], TorusValue::zero(2));
        table.insert(vec![TorusValue::iota(2, 1)], TorusValue::iota(2, 1));
        let w = RankWitness { polys: vec![x2.clone()], table };
        assert!(!rank_witness_check(&x1, 1, &w).unwrap());
        let partial = RankWitness { polys: vec![x2], table: BTreeMap::new() };
        assert!(matches!(rank_witness_check(&x1, 1, &partial), Err(Error::IncompleteTable(_))));
    }
}
