use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::group::FilteredGroup;

/// A tuple `(g_omega)` indexed by `omega in {0,1}^k`. Index `t` encodes
/// `omega` with `omega_1` as the most significant bit, so index order is
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubePoint {
    pub k: usize,
    pub entries: Vec<usize>,
}

/// Outcome of solving for Taylor coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Taylor {
    /// `coeffs[J]` for every subset mask `J`.
    Member(Vec<usize>),
    /// The first `J` (in lexicographic order) whose coefficient leaves `G_{|J|}`.
    Outside { subset: usize, coeff: usize },
}

impl CubePoint {
    pub fn new(k: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != 1 << k {
            return Err(Error::DimensionMismatch { expected: 1 << k, got: entries.len() });
        }
        Ok(Self { k, entries })
    }

    pub fn constant(k: usize, g: usize) -> Self {
        Self { k, entries: vec![g; 1 << k] }
    }

    /// `g_omega = sum_{J subset of omega} g_J`.
    pub fn from_taylor(group: &FilteredGroup, k: usize, coeffs: &[usize]) -> Self {
        let entries = (0..1usize << k)
            .map(|w| submasks(w).fold(0, |acc, j| group.add(acc, coeffs[j])))
            .collect();
        Self { k, entries }
    }

    pub fn to_json(&self, group: &FilteredGroup) -> Vec<Vec<u64>> {
        self.entries.iter().map(|&g| group.digits(g)).collect()
    }

    pub fn from_json(group: &FilteredGroup, j: &[Vec<u64>]) -> Result<Self> {
        let k = j.len().trailing_zeros() as usize;
        let entries = j.iter().map(|d| group.index_of(d)).collect::<Result<Vec<_>>>()?;
        Self::new(k, entries)
    }
}

/// All submasks of `mask`, including `0` and `mask`.
pub(crate) fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// `sum_{omega in F} (-1)^{|omega|} v_omega` over the face with free
/// coordinates `free` through the vertex `base` (disjoint masks).
fn face_sum(group: &FilteredGroup, entries: &[usize], free: usize, base: usize) -> usize {
    submasks(free).fold(0, |acc, s| {
        let w = base | s;
        let v = entries[w];
        if w.count_ones() % 2 == 1 {
            group.sub(acc, v)
        } else {
            group.add(acc, v)
        }
    })
}

/// Membership by alternating sums over every face: a face of dimension `i`
/// must sum into `G_i`.
pub fn hk_membership(cube: &CubePoint, group: &FilteredGroup) -> bool {
    let full = (1usize << cube.k) - 1;
    (0..=full).all(|free| {
        let dim = free.count_ones() as usize;
        submasks(full & !free).all(|base| group.in_level(dim, face_sum(group, &cube.entries, free, base)))
    })
}

/// Taylor coefficients by Mobius inversion over subsets.
pub fn hk_taylor(cube: &CubePoint, group: &FilteredGroup) -> Taylor {
    let coeffs: Vec<usize> = (0..1usize << cube.k)
        .map(|j| {
            submasks(j).fold(0, |acc, w| {
                let v = cube.entries[w];
                if (j ^ w).count_ones() % 2 == 1 {
                    group.sub(acc, v)
                } else {
                    group.add(acc, v)
                }
            })
        })
        .collect();
    for (j, &c) in coeffs.iter().enumerate() {
        if !group.in_level(j.count_ones() as usize, c) {
            return Taylor::Outside { subset: j, coeff: c };
        }
    }
    Taylor::Member(coeffs)
}

/// `|HK^k(G)| = prod_J |G_{|J|}|`.
pub fn hk_size(group: &FilteredGroup, k: usize) -> u128 {
    (0..1usize << k).map(|j| group.level_size(j.count_ones() as usize) as u128).product()
}

/// Every `k`-cube, generated from its Taylor coefficients.
pub fn enumerate_hk(group: &FilteredGroup, k: usize, budget: u128) -> Result<Vec<CubePoint>> {
    let needed = hk_size(group, k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let choices: Vec<Vec<usize>> =
        (0..1usize << k).map(|j| group.level_elements(j.count_ones() as usize)).collect();
    let mut out = Vec::with_capacity(needed as usize);
    let mut pick = vec![0usize; choices.len()];
    loop {
        let coeffs: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        out.push(CubePoint::from_taylor(group, k, &coeffs));
        let mut t = 0;
        loop {
            if t == pick.len() {
                return Ok(out);
            }
            pick[t] += 1;
            if pick[t] < choices[t].len() {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
    }
}

/// Counts from comparing the two membership criteria on all of `G^{2^k}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceScan {
    pub total: u128,
    pub both: u128,
    pub neither: u128,
    pub disagreements: u128,
    pub first_disagreement: Option<Vec<usize>>,
}

impl EquivalenceScan {
    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.both += other.both;
        self.neither += other.neither;
        self.disagreements += other.disagreements;
        self.first_disagreement = self.first_disagreement.or(other.first_disagreement);
        self
    }
}

/// Compares the face-sum and Taylor criteria on every tuple in `G^{2^k}`.
/// Entries are assigned in index order; each prefix is judged by the
/// constraints it already determines, and once both criteria have failed
/// the remaining subtree is counted without being visited.
pub fn scan_equivalence(group: &FilteredGroup, k: usize) -> EquivalenceScan {
    let size = group.size();
    (0..size)
        .into_par_iter()
        .map(|g0| {
            let mut entries = vec![0usize; 1 << k];
            entries[0] = g0;
            let mut scan = EquivalenceScan::default();
            let (tay, mem) = prefix_checks(group, &entries, 0);
            descend(group, k, &mut entries, 1, tay, mem, &mut scan);
            scan
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(EquivalenceScan::default(), EquivalenceScan::merge)
}

/// Taylor condition for `J = t` and face conditions for faces whose largest
/// vertex is `t`.
fn prefix_checks(group: &FilteredGroup, entries: &[usize], t: usize) -> (bool, bool) {
    let coeff = submasks(t).fold(0, |acc, w| {
        if (t ^ w).count_ones() % 2 == 1 {
            group.sub(acc, entries[w])
        } else {
            group.add(acc, entries[w])
        }
    });
    let tay = group.in_level(t.count_ones() as usize, coeff);
    let mem = submasks(t).all(|free| group.in_level(free.count_ones() as usize, face_sum(group, entries, free, t & !free)));
    (tay, mem)
}

fn descend(
    group: &FilteredGroup,
    k: usize,
    entries: &mut Vec<usize>,
    t: usize,
    tay: bool,
    mem: bool,
    scan: &mut EquivalenceScan,
) {
    let len = 1usize << k;
    if !tay && !mem {
        let rest = (group.size() as u128).pow((len - t) as u32);
        scan.total += rest;
        scan.neither += rest;
        return;
    }
    if t == len {
        scan.total += 1;
        if tay && mem {
            scan.both += 1;
        } else {
            scan.disagreements += 1;
            scan.first_disagreement.get_or_insert_with(|| entries.clone());
        }
        return;
    }
    for g in 0..group.size() {
        entries[t] = g;
        let (a, b) = prefix_checks(group, entries, t);
        descend(group, k, entries, t + 1, tay && a, mem && b, scan);
    }
    entries[t] = 0;
}

/// Closure of `HK^k(G)` under adding each face generator, over every cube.
pub fn check_closure(group: &FilteredGroup, k: usize, budget: u128) -> Result<bool> {
    let cubes = enumerate_hk(group, k, budget)?;
    let full = (1usize << k) - 1;
    let mut gens = Vec::new();
    for fixed in 0..=full {
        let codim = fixed.count_ones() as usize;
        for &g in group.level_generators(codim) {
            // face {omega : omega_j = 1 for j in fixed}
            let entries = (0..=full).map(|w| if w & fixed == fixed { g } else { 0 }).collect();
            gens.push(CubePoint { k, entries });
        }
    }
    Ok(cubes.par_iter().all(|c| {
        gens.iter().all(|g| {
            let sum = CubePoint { k, entries: c.entries.iter().zip(&g.entries).map(|(&a, &b)| group.add(a, b)).collect() };
            hk_membership(&sum, group)
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> FilteredGroup {
        FilteredGroup::new(vec![4], vec![vec![vec![1]], vec![vec![1]], vec![vec![2]]]).unwrap()
    }

    #[test]
    fn constant_cubes() {
        let g = z4();
        let c = CubePoint::constant(2, 3);
        assert!(hk_membership(&c, &g));
        assert_eq!(hk_taylor(&c, &g), Taylor::Member(vec![3, 0, 0, 0]));
    }

    #[test]
    fn two_dimensional_examples() {
        let g = z4();
        // (v, v+b, v+a, v+a+b) with omega_1 the high bit
        let (v, a, b) = (1, 2, 3);
        let c = CubePoint::new(2, vec![v, (v + b) % 4, (v + a) % 4, (v + a + b) % 4]).unwrap();
        assert!(hk_membership(&c, &g));
        assert_eq!(hk_taylor(&c, &g), Taylor::Member(vec![v, b, a, 0]));
        let z2 = FilteredGroup::maximal(vec![2], 1).unwrap();
        let bad = CubePoint::new(2, vec![0, 1, 1, 1]).unwrap();
        assert!(!hk_membership(&bad, &z2));
        assert!(matches!(hk_taylor(&bad, &z2), Taylor::Outside { subset: 3, .. }));
    }

    #[test]
    fn enumeration_matches_membership() {
        let g = z4();
        let cubes = enumerate_hk(&g, 2, 1 << 20).unwrap();
        assert_eq!(cubes.len() as u128, hk_size(&g, 2));
        let members: Vec<Vec<usize>> = (0..256usize)
            .map(|i| vec![i & 3, i >> 2 & 3, i >> 4 & 3, i >> 6])
            .filter(|e| hk_membership(&CubePoint { k: 2, entries: e.clone() }, &g))
            .collect();
        let mut a: Vec<Vec<usize>> = cubes.into_iter().map(|c| c.entries).collect();
        a.sort();
        let mut b = members;
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn scan_counts_everything() {
        let g = z4();
        for k in 0..=3 {
            let s = scan_equivalence(&g, k);
            assert_eq!(s.total, 4u128.pow(1 << k));
            assert_eq!(s.disagreements, 0);
            assert_eq!(s.both, hk_size(&g, k));
        }
        assert!(check_closure(&g, 2, 1 << 20).unwrap());
    }
}
