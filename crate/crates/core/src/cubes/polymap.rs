use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::cube::{enumerate_hk, hk_membership, CubePoint};
use super::group::FilteredGroup;

/// Which directions the derivative test draws from `H_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Directions {
    /// The generating sets the filtration was declared with.
    Generators,
    /// Every nonzero element of each level.
    AllElements,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyMapVerdict {
    pub polynomial: bool,
    /// Failing directions as `(level, element)` pairs, and the point `x`.
    pub witness: Option<(Vec<(usize, usize)>, usize)>,
}

/// `(Delta_h f)(x) = f(x + h) - f(x)`.
fn derive(h_group: &FilteredGroup, g_group: &FilteredGroup, f: &[usize], h: usize) -> Vec<usize> {
    (0..f.len()).map(|x| g_group.sub(f[h_group.add(x, h)], f[x])).collect()
}

/// Tests `Delta_{h_1} ... Delta_{h_m} phi(x) in G_{i_1 + ... + i_m}` for
/// directions `h_t in H_{i_t}`, `i_t >= 1`. Once the level sum exceeds
/// `deg(G)` the derivative must vanish and deeper derivatives are skipped.
pub fn is_polynomial_map(phi: &[usize], h: &FilteredGroup, g: &FilteredGroup, dirs: Directions) -> Result<PolyMapVerdict> {
    if phi.len() != h.size() {
        return Err(Error::DimensionMismatch { expected: h.size(), got: phi.len() });
    }
    if phi.iter().any(|&v| v >= g.size()) {
        return Err(Error::InvalidGroup("map value outside the target group".into()));
    }
    let top = g.degree().map_or(0, |d| d + 1);
    let mut directions = Vec::new();
    for i in 1..=top {
        let elems: Vec<usize> = match dirs {
            Directions::Generators => h.level_generators(i).to_vec(),
            Directions::AllElements => h.level_elements(i).into_iter().filter(|&e| e != 0).collect(),
        };
        directions.extend(elems.into_iter().map(|e| (i, e)));
    }
    let mut path = Vec::new();
    let witness = search(h, g, phi, 0, &directions, 0, &mut path);
    Ok(PolyMapVerdict { polynomial: witness.is_none(), witness })
}

fn search(
    h: &FilteredGroup,
    g: &FilteredGroup,
    f: &[usize],
    level: usize,
    dirs: &[(usize, usize)],
    first: usize,
    path: &mut Vec<(usize, usize)>,
) -> Option<(Vec<(usize, usize)>, usize)> {
    if let Some(x) = (0..f.len()).find(|&x| !g.in_level(level, f[x])) {
        return Some((path.clone(), x));
    }
    if g.degree().is_none_or(|d| level > d) {
        return None;
    }
    for (t, &(i, e)) in dirs.iter().enumerate().skip(first) {
        let der = derive(h, g, f, e);
        path.push((i, e));
        let found = search(h, g, &der, level + i, dirs, t, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeCheck {
    pub k: usize,
    pub cubes: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubePreservation {
    pub preserved: bool,
    pub per_dimension: Vec<CubeCheck>,
    /// First cube of `H` whose image is not a cube, with its dimension.
    pub counterexample: Option<(usize, Vec<usize>)>,
}

/// Checks that `phi` maps every `k`-cube of `H` to a `k`-cube of `G` for
/// `k <= k_max`.
pub fn cube_preservation_check(
    phi: &[usize],
    h: &FilteredGroup,
    g: &FilteredGroup,
    k_max: usize,
    budget: u128,
) -> Result<CubePreservation> {
    if phi.len() != h.size() {
        return Err(Error::DimensionMismatch { expected: h.size(), got: phi.len() });
    }
    let mut per_dimension = Vec::new();
    let mut counterexample = None;
    let mut spent: u128 = 0;
    for k in 0..=k_max {
        let cubes = enumerate_hk(h, k, budget.saturating_sub(spent))?;
        spent += cubes.len() as u128;
        let bad: Vec<&CubePoint> = cubes
            .par_iter()
            .filter(|c| {
                let image = CubePoint { k, entries: c.entries.iter().map(|&x| phi[x]).collect() };
                !hk_membership(&image, g)
            })
            .collect();
        if counterexample.is_none() {
            counterexample = bad.first().map(|c| (k, c.entries.clone()));
        }
        per_dimension.push(CubeCheck { k, cubes: cubes.len() as u64, failures: bad.len() as u64 });
    }
    Ok(CubePreservation { preserved: counterexample.is_none(), per_dimension, counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::group::is_filtered_homomorphism;

    #[test]
    fn identity_and_translation() {
        let g = FilteredGroup::new(vec![4], vec![vec![vec![1]], vec![vec![1]], vec![vec![2]]]).unwrap();
        let id: Vec<usize> = (0..4).collect();
        assert!(is_filtered_homomorphism(&id, &g, &g));
        assert!(is_polynomial_map(&id, &g, &g, Directions::Generators).unwrap().polynomial);
        assert!(cube_preservation_check(&id, &g, &g, 3, 1 << 20).unwrap().preserved);
        let shift: Vec<usize> = (0..4).map(|x| (x + 3) % 4).collect();
        assert!(is_polynomial_map(&shift, &g, &g, Directions::Generators).unwrap().polynomial);
    }

    #[test]
    fn mother_q_on_f2() {
        // x -> x/4 from F_2 (degree <= 1) into (1/4)Z/Z (degree <= 2)
        let h = FilteredGroup::maximal(vec![2], 1).unwrap();
        let g = FilteredGroup::maximal(vec![4], 2).unwrap();
        let q = vec![0, 1];
        assert!(is_polynomial_map(&q, &h, &g, Directions::Generators).unwrap().polynomial);
        let r = cube_preservation_check(&q, &h, &g, 3, 1 << 20).unwrap();
        assert!(r.preserved);
        let g1 = FilteredGroup::maximal(vec![4], 1).unwrap();
        assert!(!is_polynomial_map(&q, &h, &g1, Directions::Generators).unwrap().polynomial);
        assert!(!cube_preservation_check(&q, &h, &g1, 3, 1 << 20).unwrap().preserved);
    }

    #[test]
    fn nonconstant_into_degree_zero() {
        let h = FilteredGroup::maximal(vec![2, 2], 1).unwrap();
        let g = FilteredGroup::maximal(vec![2], 0).unwrap();
        let iota = vec![0, 1, 0, 1];
        let v = is_polynomial_map(&iota, &h, &g, Directions::Generators).unwrap();
        assert!(!v.polynomial);
        assert_eq!(v.witness.unwrap().0, vec![(1, 1)]);
        let r = cube_preservation_check(&iota, &h, &g, 3, 1 << 20).unwrap();
        assert!(!r.preserved);
        assert_eq!(r.per_dimension[0].failures, 0);
        assert!(r.per_dimension[1].failures > 0);
    }
}
