use rand::Rng;

use crate::algebra::space::Space;
use crate::error::Result;
use crate::ncpoly::random_poly;

use super::group::FilteredGroup;

/// Every product of cyclic prime-power groups of order at most 16.
pub const SMALL_SHAPES: &[&[u64]] = &[
    &[2],
    &[3],
    &[4],
    &[2, 2],
    &[5],
    &[2, 3],
    &[7],
    &[8],
    &[4, 2],
    &[2, 2, 2],
    &[9],
    &[3, 3],
    &[2, 5],
    &[11],
    &[4, 3],
    &[2, 2, 3],
    &[13],
    &[2, 7],
    &[3, 5],
    &[16],
    &[8, 2],
    &[4, 4],
    &[4, 2, 2],
    &[2, 2, 2, 2],
];

#[derive(Clone, Debug)]
pub struct NamedGroup {
    pub name: String,
    pub group: FilteredGroup,
}

fn shape_name(orders: &[u64]) -> String {
    orders.iter().map(|m| format!("Z{m}")).collect::<Vec<_>>().join("x")
}

fn prime_of(orders: &[u64]) -> Option<u64> {
    let p = (2..=orders[0]).find(|d| orders[0].is_multiple_of(*d))?;
    orders.iter().all(|&m| {
        let mut m = m;
        while m % p == 0 {
            m /= p;
        }
        m == 1
    })
    .then_some(p)
}

/// `G_i = p^i G` for a p-group.
pub fn p_adic(orders: &[u64]) -> Option<Result<FilteredGroup>> {
    let p = prime_of(orders)?;
    let top = orders.iter().map(|&m| m.ilog(p) as usize).max().unwrap_or(0);
    let levels = (0..top)
        .map(|i| {
            (0..orders.len())
                .map(|t| (0..orders.len()).map(|u| if u == t { p.pow(i as u32) } else { 0 }).collect())
                .collect()
        })
        .collect();
    Some(FilteredGroup::new(orders.to_vec(), levels))
}

/// Each shape with maximal filtrations of degree 0 to 3, the p-adic
/// filtration, and a few torus filtrations of order at most `max_order`.
pub fn small_groups(max_order: u64) -> Result<Vec<NamedGroup>> {
    let mut out = Vec::new();
    for &shape in SMALL_SHAPES {
        if shape.iter().product::<u64>() > max_order {
            continue;
        }
        let name = shape_name(shape);
        for degree in 0..=3 {
            out.push(NamedGroup { name: format!("{name}/max{degree}"), group: FilteredGroup::maximal(shape.to_vec(), degree)? });
        }
        if let Some(g) = p_adic(shape) {
            out.push(NamedGroup { name: format!("{name}/adic"), group: g? });
        }
    }
    let tori: &[(u32, &[u32], &[u32])] =
        &[(2, &[1], &[1]), (2, &[1, 0], &[1, 1]), (2, &[2], &[1]), (2, &[1, 1], &[1, 2]), (3, &[1], &[1]), (2, &[1, 0], &[2, 2])];
    for &(p, depths, degrees) in tori {
        let g = FilteredGroup::torus(p, depths, degrees)?;
        if g.size() as u64 <= max_order {
            out.push(NamedGroup { name: format!("T{p}{depths:?}{degrees:?}"), group: g });
        }
    }
    Ok(out)
}

/// A map between two members of a group list.
#[derive(Clone, Debug)]
pub struct MapCase {
    pub source: usize,
    pub target: usize,
    pub phi: Vec<usize>,
}

/// Sources for map sampling: `|HK^3(H)|` stays in the low thousands.
pub fn map_sources() -> Result<Vec<NamedGroup>> {
    let named = |name: &str, group: FilteredGroup| NamedGroup { name: name.into(), group };
    Ok(vec![
        named("Z2/max1", FilteredGroup::maximal(vec![2], 1)?),
        named("Z2/max2", FilteredGroup::maximal(vec![2], 2)?),
        named("Z2xZ2/max1", FilteredGroup::maximal(vec![2, 2], 1)?),
        named("Z2xZ2xZ2/max1", FilteredGroup::maximal(vec![2, 2, 2], 1)?),
        named("Z3/max1", FilteredGroup::maximal(vec![3], 1)?),
        named("Z3/max2", FilteredGroup::maximal(vec![3], 2)?),
        named("Z4/max1", FilteredGroup::maximal(vec![4], 1)?),
        named("Z4/adic", p_adic(&[4]).expect("2-group")?),
        named("Z4/Z4,Z4,2Z4", FilteredGroup::new(vec![4], vec![vec![vec![1]], vec![vec![1]], vec![vec![2]]])?),
        named("Z8/adic", p_adic(&[8]).expect("2-group")?),
        named("Z4xZ2/max1", FilteredGroup::maximal(vec![4, 2], 1)?),
    ])
}

/// Targets for map sampling: order at most 8 and degree at most 2.
pub fn map_targets() -> Result<Vec<NamedGroup>> {
    let named = |name: &str, group: FilteredGroup| NamedGroup { name: name.into(), group };
    Ok(vec![
        named("Z2/max0", FilteredGroup::maximal(vec![2], 0)?),
        named("Z2/max1", FilteredGroup::maximal(vec![2], 1)?),
        named("Z2/max2", FilteredGroup::maximal(vec![2], 2)?),
        named("Z3/max1", FilteredGroup::maximal(vec![3], 1)?),
        named("Z4/max1", FilteredGroup::maximal(vec![4], 1)?),
        named("Z4/max2", FilteredGroup::maximal(vec![4], 2)?),
        named("Z4/adic", p_adic(&[4]).expect("2-group")?),
        named("Z4/Z4,Z4,2Z4", FilteredGroup::new(vec![4], vec![vec![vec![1]], vec![vec![1]], vec![vec![2]]])?),
        named("Z2xZ2/max1", FilteredGroup::maximal(vec![2, 2], 1)?),
        named("Z8/Z8,2Z8,4Z8", FilteredGroup::new(vec![8], vec![vec![vec![1]], vec![vec![2]], vec![vec![4]]])?),
        named("T2[1,0][1,1]", FilteredGroup::torus(2, &[1, 0], &[1, 1])?),
    ])
}

/// Every map for pairs with at most `exhaustive_limit` maps; then random
/// maps and maps `F_2^n -> Z/4` read off random non-classical polynomials
/// until `count` cases exist.
pub fn sampled_maps<R: Rng + ?Sized>(
    sources: &[NamedGroup],
    targets: &[NamedGroup],
    exhaustive_limit: u64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<MapCase>> {
    let mut out = Vec::new();
    for (s, h) in sources.iter().enumerate() {
        for (t, g) in targets.iter().enumerate() {
            let total = (g.group.size() as u64).checked_pow(h.group.size() as u32);
            if total.is_some_and(|n| n <= exhaustive_limit) {
                for code in 0..total.expect("checked") {
                    let phi = (0..h.group.size())
                        .map(|x| (code / (g.group.size() as u64).pow(x as u32) % g.group.size() as u64) as usize)
                        .collect();
                    out.push(MapCase { source: s, target: t, phi });
                }
            }
        }
    }
    let cube_sources: Vec<(usize, usize)> = sources
        .iter()
        .enumerate()
        .filter(|(_, h)| h.group.orders().iter().all(|&m| m == 2) && h.group.degree() == Some(1))
        .map(|(s, h)| (s, h.group.orders().len()))
        .collect();
    let quarter_targets: Vec<usize> =
        targets.iter().enumerate().filter(|(_, g)| g.group.orders() == [4]).map(|(t, _)| t).collect();
    while out.len() < count {
        if rng.gen_bool(0.5) && !cube_sources.is_empty() && !quarter_targets.is_empty() {
            let (s, n) = cube_sources[rng.gen_range(0..cube_sources.len())];
            let t = quarter_targets[rng.gen_range(0..quarter_targets.len())];
            let space = Space::new(2, n)?;
            let d = rng.gen_range(1..=3);
            let poly = random_poly(&space, d, true, rng);
            if poly.exp() > 2 {
                continue;
            }
            out.push(MapCase { source: s, target: t, phi: poly.table_at(2).into_iter().map(|v| v as usize).collect() });
        } else {
            let s = rng.gen_range(0..sources.len());
            let t = rng.gen_range(0..targets.len());
            let phi = (0..sources[s].group.size()).map(|_| rng.gen_range(0..targets[t].group.size())).collect();
            out.push(MapCase { source: s, target: t, phi });
        }
    }
    Ok(out)
}
