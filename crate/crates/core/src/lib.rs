//! Shortest-path planning with velocity-weighted A*.
//!
//! The crate is organised around a handful of modules:
//!
//! * [`graphmap`]: search domains (occupancy grids and explicit graphs),
//!   the 2D map text format and random instance generation.
//! * [`heuristics`]: distance heuristics and the velocity weight that scales
//!   them.
//! * [`search`]: Dijkstra (the exact oracle) and A* with a full expansion
//!   trace.
//! * [`dynamics`]: point-mass Lagrangian mechanics under uniform gravity.
//! * [`variational`]: discrete minimisation of arc length and action.
//! * [`harness`]: scenarios, heuristic comparison reports and SVG output.

pub mod dynamics;
mod error;
pub mod geometry;
pub mod graphmap;
pub mod harness;
pub mod heuristics;
pub mod search;
pub mod variational;

pub use dynamics::{KinematicState, MechanicsParams, Trajectory};
pub use error::{Error, Result};
pub use geometry::Vec3;
pub use graphmap::{Connectivity, Domain, ExplicitGraph, GridMap, NodeRef};
pub use harness::{BenchReport, BenchSuite, Scenario};
pub use heuristics::{BaseHeuristic, HeuristicSpec, WeightParams};
pub use search::{PlanResult, PlanStatus, SearchOptions};
pub use variational::{DiscretePath, MinimizeOptions};
