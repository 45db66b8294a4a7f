//! Shared fixtures for the criterion benches.

use variastar_core::graphmap::random_grid;
use variastar_core::search::dijkstra;
use variastar_core::{
    BaseHeuristic, Connectivity, GridMap, HeuristicSpec, KinematicState, NodeRef, SearchOptions, Vec3, WeightParams,
};

/// A solvable corner-to-corner planning instance.
pub struct Instance {
    pub seed: u64,
    pub map: GridMap,
    pub start: NodeRef,
    pub goal: NodeRef,
}

/// First `count` seeds whose opposite corners are connected under `conn`.
pub fn solvable_instances(
    count: usize,
    dims: (usize, usize, usize),
    density: f64,
    conn: Connectivity,
) -> Vec<Instance> {
    let start = NodeRef::cell(0, 0, 0);
    let goal = NodeRef::cell(dims.0 - 1, dims.1 - 1, dims.2 - 1);
    let opts = SearchOptions { record_trace: false, ..SearchOptions::with_connectivity(conn) };
    (0..)
        .filter_map(|seed| {
            let map = random_grid(seed, dims, density).expect("valid grid parameters");
            let solved = dijkstra(&map, &start, &goal, &opts).ok()?.is_found();
            solved.then_some(Instance { seed, map, start, goal })
        })
        .take(count)
        .collect()
}

/// Velocity-weighted Euclidean heuristic with velocity along the main diagonal.
pub fn aligned_weighted(w_max: f64) -> HeuristicSpec {
    let v = Vec3::new(1.0, 1.0, 0.0);
    let params = WeightParams::with_bounds(v, v.norm() / w_max, 0.1, w_max).expect("valid weight bounds");
    HeuristicSpec::velocity_weighted(BaseHeuristic::Euclidean, params)
}

/// Projectile launched from the origin.
pub fn projectile() -> KinematicState {
    KinematicState::new(Vec3::ZERO, Vec3::new(3.0, -2.0, 15.0), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_solvable_and_distinct() {
        let instances = solvable_instances(4, (16, 16, 1), 0.3, Connectivity::Eight);
        assert_eq!(instances.len(), 4);
        assert!(instances.windows(2).all(|w| w[0].seed < w[1].seed));
    }
}
