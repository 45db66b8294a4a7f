use crate::{Error, Result, Vec3};

use super::{Connectivity, Domain, NodeRef};

/// Occupancy grid with per-cell traversal multipliers.
///
/// Cell `(i, j, k)` is stored at `i + width * (j + height * k)`; `i` runs
/// along x, `j` along y (text rows) and `k` along z (layers).
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    width: usize,
    height: usize,
    depth: usize,
    cell_size: f64,
    occupied: Vec<bool>,
    cost_multiplier: Vec<f64>,
}

impl GridMap {
    /// An all-free map.
    pub fn new(width: usize, height: usize, depth: usize, cell_size: f64) -> Result<Self> {
        let len = checked_len(width, height, depth)?;
        Self::from_occupancy(width, height, depth, cell_size, vec![false; len])
    }

    pub fn from_occupancy(
        width: usize,
        height: usize,
        depth: usize,
        cell_size: f64,
        occupied: Vec<bool>,
    ) -> Result<Self> {
        let len = checked_len(width, height, depth)?;
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidParameter(format!("cell size must be positive, got {cell_size}")));
        }
        if occupied.len() != len {
            return Err(Error::InvalidParameter(format!(
                "occupancy has {} entries, expected {len}",
                occupied.len()
            )));
        }
        Ok(GridMap {
            width,
            height,
            depth,
            cell_size,
            occupied,
            cost_multiplier: vec![1.0; len],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn in_bounds(&self, i: usize, j: usize, k: usize) -> bool {
        i < self.width && j < self.height && k < self.depth
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> Option<usize> {
        self.in_bounds(i, j, k).then(|| i + self.width * (j + self.height * k))
    }

    pub fn coords(&self, index: usize) -> (usize, usize, usize) {
        let i = index % self.width;
        let rest = index / self.width;
        (i, rest % self.height, rest / self.height)
    }

    pub fn is_occupied(&self, i: usize, j: usize, k: usize) -> bool {
        self.index(i, j, k).is_none_or(|idx| self.occupied[idx])
    }

    pub fn set_occupied(&mut self, i: usize, j: usize, k: usize, occupied: bool) -> Result<()> {
        let idx = self.require(i, j, k)?;
        self.occupied[idx] = occupied;
        Ok(())
    }

    pub fn cost_multiplier(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        self.index(i, j, k).map(|idx| self.cost_multiplier[idx])
    }

    pub fn set_cost_multiplier(&mut self, i: usize, j: usize, k: usize, multiplier: f64) -> Result<()> {
        if !(multiplier >= 1.0 && multiplier.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cost multiplier must be finite and >= 1, got {multiplier}"
            )));
        }
        let idx = self.require(i, j, k)?;
        self.cost_multiplier[idx] = multiplier;
        Ok(())
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupied
    }

    /// Cell center in world coordinates.
    pub fn center(&self, index: usize) -> Vec3 {
        let (i, j, k) = self.coords(index);
        Vec3::new(
            (i as f64 + 0.5) * self.cell_size,
            (j as f64 + 0.5) * self.cell_size,
            (k as f64 + 0.5) * self.cell_size,
        )
    }

    fn require(&self, i: usize, j: usize, k: usize) -> Result<usize> {
        self.index(i, j, k).ok_or_else(|| Error::OutOfBounds {
            node: NodeRef::cell(i, j, k).to_string(),
        })
    }

    fn free_at(&self, i: isize, j: isize, k: isize) -> Option<usize> {
        if i < 0 || j < 0 || k < 0 {
            return None;
        }
        self.index(i as usize, j as usize, k as usize)
            .filter(|&idx| !self.occupied[idx])
    }
}

fn checked_len(width: usize, height: usize, depth: usize) -> Result<usize> {
    if width == 0 || height == 0 || depth == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid dimensions must be positive, got {width}x{height}x{depth}"
        )));
    }
    width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(depth))
        .ok_or_else(|| Error::InvalidParameter("grid dimensions overflow".into()))
}

impl Domain for GridMap {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn index_of(&self, node: &NodeRef) -> Result<usize> {
        match *node {
            NodeRef::Cell { i, j, k } => self.require(i, j, k),
            NodeRef::Node(_) => Err(Error::UnknownNode(format!("{node} is not a grid cell"))),
        }
    }

    fn node_ref(&self, index: usize) -> NodeRef {
        let (i, j, k) = self.coords(index);
        NodeRef::cell(i, j, k)
    }

    fn is_blocked(&self, index: usize) -> bool {
        self.occupied[index]
    }

    fn check_connectivity(&self, conn: Connectivity) -> Result<()> {
        if conn.is_planar() == (self.depth == 1) {
            Ok(())
        } else {
            Err(Error::ConnectivityMismatch {
                connectivity: conn.to_string(),
                depth: self.depth,
            })
        }
    }

    /// Moves to each free cell of the stencil. A move changing more than
    /// one axis is only generated when every cell reached by a proper
    /// subset of its axis steps is free too (no corner cutting).
    fn successors(&self, index: usize, conn: Connectivity, out: &mut Vec<(usize, f64)>) {
        let (i, j, k) = self.coords(index);
        let (i, j, k) = (i as isize, j as isize, k as isize);
        let dk_range = if conn.is_planar() { 0..=0 } else { -1..=1 };
        let here = self.cost_multiplier[index];
        for dk in dk_range {
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    let axes = (di != 0) as u8 + (dj != 0) as u8 + (dk != 0) as u8;
                    if axes == 0 || (!conn.is_diagonal() && axes > 1) {
                        continue;
                    }
                    let Some(target) = self.free_at(i + di, j + dj, k + dk) else {
                        continue;
                    };
                    if axes > 1 && !self.sub_moves_free((i, j, k), (di, dj, dk)) {
                        continue;
                    }
                    let step = (axes as f64).sqrt() * self.cell_size;
                    let cost = step * 0.5 * (here + self.cost_multiplier[target]);
                    out.push((target, cost));
                }
            }
        }
    }

    fn position(&self, index: usize) -> Option<Vec3> {
        Some(self.center(index))
    }
}

impl GridMap {
    fn sub_moves_free(&self, (i, j, k): (isize, isize, isize), (di, dj, dk): (isize, isize, isize)) -> bool {
        // bit b of mask selects axis b; full and empty masks are skipped
        (1u8..7).all(|mask| {
            let (si, sj, sk) = (
                if mask & 1 != 0 { di } else { 0 },
                if mask & 2 != 0 { dj } else { 0 },
                if mask & 4 != 0 { dk } else { 0 },
            );
            let proper = (si, sj, sk) != (0, 0, 0) && (si, sj, sk) != (di, dj, dk);
            // masks selecting a zero axis collapse onto another mask
            !proper || self.free_at(i + si, j + sj, k + sk).is_some()
        })
    }
}
