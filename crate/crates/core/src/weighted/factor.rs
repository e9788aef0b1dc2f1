use serde::{Deserialize, Serialize};

use crate::algebra::field::pow_u64;
use crate::algebra::space::Space;
use crate::algebra::torus::TorusValue;
use crate::error::{Error, Result};
use crate::ncpoly::{NCPoly, PolyJson};

use super::poly::WeightedPoly;
use super::table::PeriodicTable;

/// One index of a factor: a chain `P_0, ..., P_J` with `p P_j = P_{j-1}`
/// and `p P_0 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorChain {
    pub initial_degree: u32,
    pub chain: Vec<NCPoly>,
}

impl FactorChain {
    pub fn depth(&self) -> u32 {
        self.chain.len() as u32 - 1
    }
}

/// A factor on `F_p^n`. Regularity is not decidable on a finite space and is
/// carried as a caller-supplied flag.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    space: Space,
    chains: Vec<FactorChain>,
    assumed_regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub p: u32,
    pub n: usize,
    #[serde(default)]
    pub regular: bool,
    pub chains: Vec<ChainJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    #[serde(rename = "D")]
    pub initial_degree: u32,
    #[serde(rename = "J")]
    pub depth: u32,
    pub polys: Vec<PolyJson>,
}

impl Factor {
    pub fn new(space: Space, chains: Vec<FactorChain>, assumed_regular: bool) -> Result<Self> {
        let p = space.p();
        for (i, c) in chains.iter().enumerate() {
            if c.initial_degree < 2 {
                return Err(Error::InvalidForm(format!("chain {i}: initial degree must be at least 2")));
            }
            if c.chain.is_empty() {
                return Err(Error::InvalidForm(format!("chain {i} is empty")));
            }
            for (j, poly) in c.chain.iter().enumerate() {
                if poly.space() != &space {
                    return Err(Error::InvalidForm(format!("chain {i}: polynomial {j} lives on another space")));
                }
                if poly.exp() > j as u32 + 1 {
                    return Err(Error::InvalidForm(format!("chain {i}: P_{j} leaves (1/p^{})Z/Z", j + 1)));
                }
                let below = if j == 0 { NCPoly::zero(space) } else { c.chain[j - 1].clone() };
                if poly.mul_by_p() != below {
                    return Err(Error::InvalidForm(format!("chain {i}: p P_{j} != P_{}", j as i64 - 1)));
                }
                let bound = c.initial_degree + j as u32 * (p - 1);
                if let Some(d) = poly.degree() {
                    if d > bound {
                        return Err(Error::DegreeTooHigh { bound: bound as i64, found: d as i64 });
                    }
                }
            }
        }
        Ok(Self { space, chains, assumed_regular })
    }

    /// Builds each chain from its top polynomial by repeated multiplication by p.
    pub fn from_tops(space: Space, tops: Vec<(u32, u32, NCPoly)>, assumed_regular: bool) -> Result<Self> {
        let chains = tops
            .into_iter()
            .map(|(initial_degree, depth, top)| {
                let mut chain = vec![top];
                for _ in 0..depth {
                    let next = chain.last().expect("nonempty").mul_by_p();
                    chain.push(next);
                }
                chain.reverse();
                FactorChain { initial_degree, chain }
            })
            .collect();
        Self::new(space, chains, assumed_regular)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }
    pub fn chains(&self) -> &[FactorChain] {
        &self.chains
    }
    pub fn assumed_regular(&self) -> bool {
        self.assumed_regular
    }
    pub fn dimension(&self) -> usize {
        self.chains.len()
    }
    pub fn initial_degrees(&self) -> Vec<u32> {
        self.chains.iter().map(|c| c.initial_degree).collect()
    }
    pub fn depths(&self) -> Vec<u32> {
        self.chains.iter().map(FactorChain::depth).collect()
    }

    /// `max_i D_i + J_i (p - 1)`, or `None` for the empty factor.
    pub fn degree(&self) -> Option<u32> {
        let p = self.space.p();
        self.chains.iter().map(|c| c.initial_degree + c.depth() * (p - 1)).max()
    }

    /// Appends p-th roots until chain `i` has depth `depths[i]`.
    pub fn depth_extend(&self, depths: &[u32], max_degree: u32) -> Result<Self> {
        if depths.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: depths.len() });
        }
        let p = self.space.p();
        let mut chains = self.chains.clone();
        for (c, &target) in chains.iter_mut().zip(depths) {
            if target < c.depth() {
                return Err(Error::InvalidForm("depth extension cannot shrink a chain".into()));
            }
            let weight = c.initial_degree + target * (p - 1);
            if weight > max_degree {
                return Err(Error::DegreeTooHigh { bound: max_degree as i64, found: weight as i64 });
            }
            while c.depth() < target {
                let root = c.chain.last().expect("nonempty").pth_root()?;
                c.chain.push(root);
            }
        }
        Self::new(self.space, chains, self.assumed_regular)
    }

    /// Drops every `P_{i,j}` with `D_i + j(p-1) > d`, and chains left empty.
    pub fn retract(&self, d: u32) -> Self {
        let p = self.space.p();
        let chains = self
            .chains
            .iter()
            .filter_map(|c| {
                let keep = c
                    .chain
                    .iter()
                    .enumerate()
                    .take_while(|(j, _)| c.initial_degree + *j as u32 * (p - 1) <= d)
                    .count();
                (keep > 0).then(|| FactorChain { initial_degree: c.initial_degree, chain: c.chain[..keep].to_vec() })
            })
            .collect();
        Self { space: self.space, chains, assumed_regular: self.assumed_regular }
    }

    /// Numerators `a_i` with `P_{i,J_i}(x) = a_i / p^{J_i + 1}`.
    pub fn top_numerators(&self, x: usize) -> Vec<i64> {
        self.chains
            .iter()
            .map(|c| c.chain.last().expect("nonempty").value(x).numerator_at(c.depth() + 1) as i64)
            .collect()
    }

    /// The map `x -> (P_{i,J_i}(x))_i` as numerator tuples.
    pub fn top_map(&self) -> Vec<Vec<i64>> {
        (0..self.space.size()).map(|x| self.top_numerators(x)).collect()
    }

    /// `Q(x) = f(a_1, ..., a_m)`; `f` must have period `p^{J_i+1}` in
    /// coordinate `i`.
    pub fn pullback(&self, f: &WeightedPoly) -> Result<NCPoly> {
        if f.p() != self.space.p() || f.initial_degrees() != self.initial_degrees().as_slice() {
            return Err(Error::InvalidForm("weighted polynomial does not match the factor".into()));
        }
        let box_exps: Vec<u32> =
            f.period_exps().iter().zip(self.depths()).map(|(&k, j)| k.max(j + 1)).collect();
        let table: PeriodicTable = f.to_table(box_exps)?;
        for (i, j) in self.depths().into_iter().enumerate() {
            if !table.has_period(i, j + 1) {
                return Err(Error::InvalidForm(format!(
                    "map is not periodic with period {} in coordinate {}",
                    pow_u64(self.space.p(), j + 1),
                    i + 1
                )));
            }
        }
        NCPoly::from_fn(self.space, |x| table.value(&self.top_numerators(x)))
    }

    pub fn to_json(&self) -> FactorJson {
        FactorJson {
            p: self.space.p(),
            n: self.space.n(),
            regular: self.assumed_regular,
            chains: self
                .chains
                .iter()
                .map(|c| ChainJson {
                    initial_degree: c.initial_degree,
                    depth: c.depth(),
                    polys: c.chain.iter().map(NCPoly::to_json).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &FactorJson) -> Result<Self> {
        let space = Space::new(j.p, j.n)?;
        let chains = j
            .chains
            .iter()
            .map(|c| {
                if c.polys.len() != c.depth as usize + 1 {
                    return Err(Error::InvalidForm(format!("declared depth {} but {} polynomials", c.depth, c.polys.len())));
                }
                let chain = c.polys.iter().map(NCPoly::from_json).collect::<Result<Vec<_>>>()?;
                Ok(FactorChain { initial_degree: c.initial_degree, chain })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, chains, j.regular)
    }
}

/// `x -> value` helper for building chains from closed forms.
pub fn poly_from_numerators(space: Space, exp: u32, f: impl Fn(usize) -> i64) -> Result<NCPoly> {
    let p = space.p();
    NCPoly::from_fn(space, |x| TorusValue::new(p, f(x), exp).expect("exponent within range"))
}
