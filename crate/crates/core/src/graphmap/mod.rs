//! Search domains: occupancy grids and explicit weighted graphs.
//!
//! Both domains expose a dense `0..node_count()` index space through the
//! [`Domain`] trait, which is what the planners in [`crate::search`] run on.
//! Callers address nodes with [`NodeRef`] and never see the dense indices.

mod fixture;
mod graph;
mod grid;
mod mapfile;
mod random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

pub use fixture::figure2_fixture;
pub use graph::{ExplicitGraph, GraphNode};
pub use grid::GridMap;
pub use mapfile::parse_map_text;
pub use random::random_grid;

/// A node of either domain kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRef {
    Cell { i: usize, j: usize, k: usize },
    Node(usize),
}

impl NodeRef {
    pub const fn cell(i: usize, j: usize, k: usize) -> Self {
        NodeRef::Cell { i, j, k }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::Cell { i, j, k } => write!(f, "{i}:{j}:{k}"),
            NodeRef::Node(id) => write!(f, "#{id}"),
        }
    }
}

/// Grid move set. `Four`/`Eight` are planar, `Six`/`TwentySix` volumetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
    Six,
    TwentySix,
}

impl Connectivity {
    pub fn is_planar(self) -> bool {
        matches!(self, Connectivity::Four | Connectivity::Eight)
    }

    /// Whether diagonal moves are allowed.
    pub fn is_diagonal(self) -> bool {
        matches!(self, Connectivity::Eight | Connectivity::TwentySix)
    }

    /// The natural default for a map of the given depth.
    pub fn default_for_depth(depth: usize) -> Self {
        if depth > 1 {
            Connectivity::TwentySix
        } else {
            Connectivity::Eight
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connectivity::Four => "four",
            Connectivity::Eight => "eight",
            Connectivity::Six => "six",
            Connectivity::TwentySix => "twenty_six",
        })
    }
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "4" | "four" => Ok(Connectivity::Four),
            "8" | "eight" => Ok(Connectivity::Eight),
            "6" | "six" => Ok(Connectivity::Six),
            "26" | "twenty_six" | "twentysix" => Ok(Connectivity::TwentySix),
            other => Err(Error::InvalidParameter(format!("unknown connectivity `{other}`"))),
        }
    }
}

/// A graph the planners can search.
///
/// Implementations are immutable while searched, so a single domain can be
/// shared by many concurrent queries.
pub trait Domain: Sync {
    fn node_count(&self) -> usize;

    /// Dense index of `node`; fails when the node does not exist.
    fn index_of(&self, node: &NodeRef) -> Result<usize>;

    fn node_ref(&self, index: usize) -> NodeRef;

    fn is_blocked(&self, index: usize) -> bool;

    fn check_connectivity(&self, conn: Connectivity) -> Result<()>;

    /// Appends `(neighbor, edge cost)` pairs for `index` to `out`.
    fn successors(&self, index: usize, conn: Connectivity, out: &mut Vec<(usize, f64)>);

    /// World position, when the domain has geometry.
    fn position(&self, index: usize) -> Option<Vec3>;

    /// Per-node heuristic table, indexed densely.
    fn heuristic_table(&self) -> Option<&[f64]> {
        None
    }

    fn label(&self, index: usize) -> String {
        self.node_ref(index).to_string()
    }

    /// Cost of the edge `from -> to`, if it exists.
    fn edge_cost(&self, from: usize, to: usize, conn: Connectivity) -> Option<f64> {
        let mut out = Vec::new();
        self.successors(from, conn, &mut out);
        out.into_iter()
            .filter(|&(n, _)| n == to)
            .map(|(_, c)| c)
            .min_by(f64::total_cmp)
    }
}

/// Neighbors of a grid cell with their edge costs.
pub fn neighbors(map: &GridMap, node: &NodeRef, conn: Connectivity) -> Result<Vec<(NodeRef, f64)>> {
    map.check_connectivity(conn)?;
    let index = map.index_of(node)?;
    if map.is_blocked(index) {
        return Err(Error::Occupied { node: node.to_string() });
    }
    let mut out = Vec::new();
    map.successors(index, conn, &mut out);
    Ok(out.into_iter().map(|(n, c)| (map.node_ref(n), c)).collect())
}

/// Center of a grid cell in world coordinates.
pub fn world_coords(map: &GridMap, node: &NodeRef) -> Result<Vec3> {
    let index = map.index_of(node)?;
    Ok(map.center(index))
}
