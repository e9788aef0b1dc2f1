//! Filtered finite abelian groups, their Host-Kra cube groups, polynomial
//! maps between them, and equidistribution of maps into them.

mod cube;
mod equidist;
mod family;
mod group;
mod polymap;

pub use cube::{check_closure, enumerate_hk, hk_membership, hk_size, hk_taylor, scan_equivalence, CubePoint, EquivalenceScan, Taylor};
pub use equidist::{
    cube_equidistribution, equidistribution_report, factor_equidistribution, joint_equidistribution_report, joint_form_values, CubeDistribution,
    EquidistReport,
};
pub use family::{map_sources, map_targets, p_adic, sampled_maps, small_groups, MapCase, NamedGroup, SMALL_SHAPES};
pub use group::{is_filtered_homomorphism, FilteredGroup, GroupJson, GroupMap, MAX_GROUP_ORDER};
pub use polymap::{cube_preservation_check, is_polynomial_map, CubeCheck, CubePreservation, Directions, PolyMapVerdict};
