use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group handled; filtration levels are stored as explicit sets.
pub const MAX_GROUP_ORDER: u64 = 1 << 16;

/// A finite abelian group `prod Z/m_t` with a filtration
/// `G_0 >= G_1 >= ... >= G_s`, and `G_i = {0}` beyond the listed levels.
/// Elements are indices in mixed radix, first factor fastest.
#[derive(Clone, Debug)]
pub struct FilteredGroup {
    orders: Vec<u64>,
    generators: Vec<Vec<usize>>,
    levels: Vec<Vec<bool>>,
    level_sizes: Vec<u64>,
    size: usize,
    add_table: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub cyclic_orders: Vec<u64>,
    pub filtration: Vec<Vec<Vec<u64>>>,
}

impl PartialEq for FilteredGroup {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders && self.trimmed_levels() == other.trimmed_levels()
    }
}

impl FilteredGroup {
    /// Builds the filtration from generating sets of each level.
    pub fn new(orders: Vec<u64>, generators: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic orders must be positive".into()));
        }
        let size = orders.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m).filter(|&s| s <= MAX_GROUP_ORDER));
        let Some(size) = size else {
            return Err(Error::InvalidGroup(format!("order exceeds {MAX_GROUP_ORDER}")));
        };
        let mut group = Self {
            orders,
            generators: Vec::new(),
            levels: Vec::new(),
            level_sizes: Vec::new(),
            size: size as usize,
            add_table: None,
        };
        if group.size <= 1024 {
            let n = group.size;
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = group.add_slow(a, b) as u32;
                }
            }
            group.add_table = Some(table);
        }
        for (i, gens) in generators.iter().enumerate() {
            let idx = gens
                .iter()
                .map(|g| group.index_of(g))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::InvalidGroup(format!("level {i}: {e}")))?;
            let set = group.span(&idx);
            if let Some(prev) = group.levels.last() {
                if set.iter().zip(prev).any(|(&inner, &outer)| inner && !outer) {
                    return Err(Error::InvalidGroup(format!("level {i} is not contained in level {}", i - 1)));
                }
            }
            group.level_sizes.push(set.iter().filter(|&&b| b).count() as u64);
            group.levels.push(set);
            group.generators.push(idx.into_iter().filter(|&g| g != 0).collect());
        }
        Ok(group)
    }

    /// `G_i = G` for `i <= degree`, trivial above.
    pub fn maximal(orders: Vec<u64>, degree: usize) -> Result<Self> {
        let basis: Vec<Vec<u64>> = (0..orders.len())
            .map(|t| (0..orders.len()).map(|u| (u == t) as u64).collect())
            .collect();
        Self::new(orders, vec![basis; degree + 1])
    }

    /// The filtration on `prod_i (1/p^{J_i+1})Z/Z` (numerators mod
    /// `p^{J_i+1}`) whose level `k` is generated by `p^j e_i` with
    /// `k <= D_i + j(p-1)`.
    pub fn torus(p: u32, depths: &[u32], initial_degrees: &[u32]) -> Result<Self> {
        if depths.len() != initial_degrees.len() {
            return Err(Error::DimensionMismatch { expected: depths.len(), got: initial_degrees.len() });
        }
        let p64 = p as u64;
        let orders: Vec<u64> = depths.iter().map(|&j| p64.pow(j + 1)).collect();
        let top = depths.iter().zip(initial_degrees).map(|(&j, &d)| d + j * (p - 1)).max().unwrap_or(0);
        let levels = (0..=top)
            .map(|k| {
                let mut gens = Vec::new();
                for (i, (&ji, &di)) in depths.iter().zip(initial_degrees).enumerate() {
                    for j in 0..=ji {
                        if k <= di + j * (p - 1) {
                            let mut g = vec![0u64; orders.len()];
                            g[i] = p64.pow(j);
                            gens.push(g);
                        }
                    }
                }
                gens
            })
            .collect();
        Self::new(orders, levels)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }
    pub fn size(&self) -> usize {
        self.size
    }

    /// Largest `i` with `G_i` nontrivial; `None` if even `G_0` is trivial.
    pub fn degree(&self) -> Option<usize> {
        self.level_sizes.iter().rposition(|&s| s > 1)
    }

    pub fn in_level(&self, i: usize, g: usize) -> bool {
        match self.levels.get(i) {
            Some(set) => set[g],
            None => g == 0,
        }
    }

    pub fn level_size(&self, i: usize) -> u64 {
        self.level_sizes.get(i).copied().unwrap_or(1)
    }

    pub fn level_elements(&self, i: usize) -> Vec<usize> {
        (0..self.size).filter(|&g| self.in_level(i, g)).collect()
    }

    /// The declared generators of `G_i` (empty beyond the listed levels).
    pub fn level_generators(&self, i: usize) -> &[usize] {
        self.generators.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn digits(&self, mut g: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&m| {
                let d = g as u64 % m;
                g /= m as usize;
                d
            })
            .collect()
    }

    pub fn index_of(&self, digits: &[u64]) -> Result<usize> {
        if digits.len() != self.orders.len() {
            return Err(Error::DimensionMismatch { expected: self.orders.len(), got: digits.len() });
        }
        Ok(digits.iter().zip(&self.orders).rev().fold(0usize, |acc, (&d, &m)| acc * m as usize + (d % m) as usize))
    }

    fn add_slow(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let (mut out, mut stride) = (0, 1);
        for &m in &self.orders {
            let m = m as usize;
            out += ((a % m + b % m) % m) * stride;
            a /= m;
            b /= m;
            stride *= m;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.add_table {
            Some(t) => t[a * self.size + b] as usize,
            None => self.add_slow(a, b),
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        let (mut a, mut out, mut stride) = (a, 0, 1);
        for &m in &self.orders {
            let m = m as usize;
            out += ((m - a % m) % m) * stride;
            a /= m;
            stride *= m;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `n * a` for any integer `n`.
    pub fn mul(&self, n: i64, a: usize) -> usize {
        let base = if n < 0 { self.neg(a) } else { a };
        let mut out = 0;
        for _ in 0..n.unsigned_abs() {
            out = self.add(out, base);
        }
        out
    }

    fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.add(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    fn trimmed_levels(&self) -> &[Vec<bool>] {
        let keep = self.degree().map_or(0, |d| d + 1);
        &self.levels[..keep.min(self.levels.len())]
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            cyclic_orders: self.orders.clone(),
            filtration: self
                .generators
                .iter()
                .map(|gens| gens.iter().map(|&g| self.digits(g)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &GroupJson) -> Result<Self> {
        Self::new(j.cyclic_orders.clone(), j.filtration.clone())
    }
}

/// A map `H -> G` as a table of element indices.
pub type GroupMap = Vec<usize>;

/// Whether `phi` is a homomorphism carrying each `H_i` into `G_i`.
pub fn is_filtered_homomorphism(phi: &[usize], h: &FilteredGroup, g: &FilteredGroup) -> bool {
    (0..h.size()).all(|a| (0..h.size()).all(|b| phi[h.add(a, b)] == g.add(phi[a], phi[b])))
        && (0..=h.degree().map_or(0, |d| d + 1)).all(|i| h.level_elements(i).iter().all(|&x| g.in_level(i, phi[x])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_filtration() {
        let g = FilteredGroup::new(vec![4], vec![vec![vec![1]], vec![vec![1]], vec![vec![2]]]).unwrap();
        assert_eq!(g.degree(), Some(2));
        assert_eq!(g.level_elements(2), vec![0, 2]);
        assert_eq!(g.level_elements(3), vec![0]);
        assert_eq!(g.add(3, 3), 2);
        assert_eq!(g.neg(1), 3);
        assert_eq!(g.mul(-3, 1), 1);
        assert!(FilteredGroup::new(vec![4], vec![vec![vec![2]], vec![vec![1]]]).is_err());
    }

    #[test]
    fn torus_levels() {
        // depths (1, 0), initial degrees (2, 2), p = 2: orders 4 and 2
        let t = FilteredGroup::torus(2, &[1, 0], &[2, 2]).unwrap();
        assert_eq!(t.orders(), &[4, 2]);
        assert_eq!(t.degree(), Some(3));
        assert_eq!(t.level_size(2), 8);
        assert_eq!(t.level_elements(3), vec![0, 2]);
    }

    #[test]
    fn json_round_trip() {
        let g = FilteredGroup::new(vec![4, 2], vec![vec![vec![1, 0], vec![0, 1]], vec![vec![2, 1]]]).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert!(text.starts_with("{\"cyclic_orders\":[4,2]"));
        let back = FilteredGroup::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.index_of(&[2, 1]).unwrap(), 6);
    }
}
