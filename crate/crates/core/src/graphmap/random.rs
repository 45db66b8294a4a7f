use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

use super::GridMap;

/// Seeded random occupancy grid with unit cells.
///
/// Each cell is occupied independently with probability `density`. The
/// corner cells `(0,0,0)` and `(w-1,h-1,d-1)` are always free, since they
/// serve as start and goal in the benchmark suites.
pub fn random_grid(seed: u64, dims: (usize, usize, usize), density: f64) -> Result<GridMap> {
    if !(0.0..1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density must lie in [0, 1), got {density}")));
    }
    let (w, h, d) = dims;
    let mut map = GridMap::new(w, h, d, 1.0)?;
    // ChaCha keeps the stream identical across platforms and rand versions.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let occupied: Vec<bool> = (0..map.len()).map(|_| rng.gen::<f64>() < density).collect();
    map = GridMap::from_occupancy(w, h, d, 1.0, occupied)?;
    map.set_occupied(0, 0, 0, false)?;
    map.set_occupied(w - 1, h - 1, d - 1, false)?;
    Ok(map)
}
