//! Heuristic cost functions and the velocity weight.
//!
//! A [`HeuristicSpec`] is a base distance estimate optionally scaled by a
//! per-node velocity weight: the projection of a fixed vehicle velocity onto
//! the direction from the node to the goal, normalised by a reference speed
//! and clamped to `[w_min, w_max]`. Because the weight lives beside the base
//! rather than wrapping another spec, weighted specs cannot nest.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graphmap::{Domain, NodeRef};
use crate::{Error, Result, Vec3};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

pub const DEFAULT_W_MIN: f64 = 0.1;
pub const DEFAULT_W_MAX: f64 = 10.0;

pub fn h_manhattan(a: Vec3, b: Vec3, scale: f64) -> f64 {
    let d = (b - a).abs();
    scale * (d.x + d.y + d.z)
}

pub fn h_euclidean(a: Vec3, b: Vec3) -> f64 {
    a.distance(b)
}

/// Exact move cost on an empty unit grid with diagonal moves: octile distance
/// in the plane, and `d1 + (√2−1)·d2 + (√3−√2)·d3` for sorted axis deltas in 3D.
pub fn h_diagonal(a: Vec3, b: Vec3) -> f64 {
    let d = (b - a).abs();
    let mut s = [d.x, d.y, d.z];
    s.sort_by(|p, q| q.total_cmp(p));
    s[0] + (SQRT_2 - 1.0) * s[1] + (SQRT_3 - SQRT_2) * s[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    /// Vehicle velocity, m/s.
    pub velocity: Vec3,
    /// Reference speed the projected velocity is divided by, m/s.
    pub v_ref: f64,
    pub w_min: f64,
    pub w_max: f64,
}

impl WeightParams {
    /// Defaults: `v_ref = ‖velocity‖` (so the weight is the cosine of the
    /// alignment) and bounds `[0.1, 10]`.
    pub fn new(velocity: Vec3) -> Result<Self> {
        Self::with_bounds(velocity, velocity.norm(), DEFAULT_W_MIN, DEFAULT_W_MAX)
    }

    pub fn with_bounds(velocity: Vec3, v_ref: f64, w_min: f64, w_max: f64) -> Result<Self> {
        let params = WeightParams { velocity, v_ref, w_min, w_max };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.velocity.is_finite() {
            return Err(Error::InvalidParameter("velocity must be finite".into()));
        }
        if !(self.v_ref > 0.0 && self.v_ref.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "reference speed must be positive, got {}",
                self.v_ref
            )));
        }
        if !(self.w_min > 0.0 && self.w_min <= self.w_max && self.w_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight bounds must satisfy 0 < w_min <= w_max, got [{}, {}]",
                self.w_min, self.w_max
            )));
        }
        Ok(())
    }
}

/// Clamped, normalised projection of the velocity onto the direction from
/// `pos` to `goal`. Undefined (an error) when `pos == goal`.
pub fn velocity_weight(pos: Vec3, goal: Vec3, params: &WeightParams) -> Result<f64> {
    let dir = (goal - pos).normalized().ok_or(Error::UndefinedDirection)?;
    let raw = params.velocity.dot(dir) / params.v_ref;
    Ok(raw.clamp(params.w_min, params.w_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseHeuristic {
    Zero,
    Manhattan { scale: f64 },
    Euclidean,
    Diagonal,
    /// Per-node values from the domain's heuristic table.
    Table,
}

impl BaseHeuristic {
    fn is_geometric(self) -> bool {
        !matches!(self, BaseHeuristic::Zero | BaseHeuristic::Table)
    }

    fn at(self, pos: Vec3, goal: Vec3) -> f64 {
        match self {
            BaseHeuristic::Zero | BaseHeuristic::Table => 0.0,
            BaseHeuristic::Manhattan { scale } => h_manhattan(pos, goal, scale),
            BaseHeuristic::Euclidean => h_euclidean(pos, goal),
            BaseHeuristic::Diagonal => h_diagonal(pos, goal),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSpec {
    pub base: BaseHeuristic,
    pub weight: Option<WeightParams>,
}

impl HeuristicSpec {
    pub const fn plain(base: BaseHeuristic) -> Self {
        HeuristicSpec { base, weight: None }
    }

    pub const fn zero() -> Self {
        Self::plain(BaseHeuristic::Zero)
    }

    pub const fn euclidean() -> Self {
        Self::plain(BaseHeuristic::Euclidean)
    }

    pub const fn diagonal() -> Self {
        Self::plain(BaseHeuristic::Diagonal)
    }

    pub const fn table() -> Self {
        Self::plain(BaseHeuristic::Table)
    }

    pub const fn manhattan(scale: f64) -> Self {
        Self::plain(BaseHeuristic::Manhattan { scale })
    }

    pub fn velocity_weighted(base: BaseHeuristic, params: WeightParams) -> Self {
        HeuristicSpec { base, weight: Some(params) }
    }

    pub fn validate(&self) -> Result<()> {
        if let BaseHeuristic::Manhattan { scale } = self.base {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(Error::InvalidHeuristic(format!("manhattan scale must be positive, got {scale}")));
            }
        }
        match &self.weight {
            Some(w) => w.validate(),
            None => Ok(()),
        }
    }

    /// Upper bound on the weight factor (1 when unweighted).
    pub fn max_weight(&self) -> f64 {
        self.weight.map_or(1.0, |w| w.w_max)
    }

    /// Heuristic value between two positions. `Table` has no positional form.
    pub fn at_positions(&self, pos: Vec3, goal: Vec3) -> Result<f64> {
        self.validate()?;
        if self.base == BaseHeuristic::Table {
            return Err(Error::InvalidHeuristic("table heuristic needs a graph".into()));
        }
        if pos == goal {
            return Ok(0.0);
        }
        let base = self.base.at(pos, goal);
        match &self.weight {
            Some(w) => Ok(velocity_weight(pos, goal, w)? * base),
            None => Ok(base),
        }
    }
}

/// Heuristic value of `node` toward `goal` within `domain`.
pub fn evaluate<D: Domain + ?Sized>(spec: &HeuristicSpec, domain: &D, node: &NodeRef, goal: &NodeRef) -> Result<f64> {
    let node = domain.index_of(node)?;
    let goal = domain.index_of(goal)?;
    Ok(Evaluator::new(spec, domain, goal)?.eval(node))
}

/// A spec bound to a domain and goal, checked once so per-node evaluation
/// cannot fail.
pub(crate) struct Evaluator<'a, D: Domain + ?Sized> {
    base: BaseHeuristic,
    weight: Option<WeightParams>,
    domain: &'a D,
    table: Option<&'a [f64]>,
    goal: usize,
    goal_pos: Vec3,
}

impl<'a, D: Domain + ?Sized> Evaluator<'a, D> {
    pub(crate) fn new(spec: &HeuristicSpec, domain: &'a D, goal: usize) -> Result<Self> {
        spec.validate()?;
        let table = match spec.base {
            BaseHeuristic::Table => {
                let table = domain
                    .heuristic_table()
                    .ok_or_else(|| Error::InvalidHeuristic("domain has no heuristic table".into()))?;
                if table.len() < domain.node_count() {
                    return Err(Error::TableMiss(domain.label(table.len())));
                }
                Some(table)
            }
            _ => None,
        };
        if spec.base.is_geometric() || spec.weight.is_some() {
            if let Some(missing) = (0..domain.node_count()).find(|&n| domain.position(n).is_none()) {
                return Err(Error::MissingPosition(domain.label(missing)));
            }
        }
        Ok(Evaluator {
            base: spec.base,
            weight: spec.weight,
            domain,
            table,
            goal,
            goal_pos: domain.position(goal).unwrap_or_default(),
        })
    }

    pub(crate) fn eval(&self, node: usize) -> f64 {
        if node == self.goal {
            return 0.0;
        }
        let pos = || self.domain.position(node).unwrap_or_default();
        let base = match self.table {
            Some(table) => table[node],
            None => self.base.at(pos(), self.goal_pos),
        };
        match &self.weight {
            // coincident positions: a geometric base is already 0 there
            Some(w) => velocity_weight(pos(), self.goal_pos, w).map_or(0.0, |weight| weight * base),
            None => base,
        }
    }
}

impl fmt::Display for BaseHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseHeuristic::Zero => f.write_str("zero"),
            BaseHeuristic::Manhattan { scale } => write!(f, "manhattan:{scale}"),
            BaseHeuristic::Euclidean => f.write_str("euclidean"),
            BaseHeuristic::Diagonal => f.write_str("diagonal"),
            BaseHeuristic::Table => f.write_str("table"),
        }
    }
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.weight {
            None => self.base.fmt(f),
            Some(w) => write!(
                f,
                "velocity:{}:{}:{}:{}:{}",
                self.base, w.velocity, w.v_ref, w.w_min, w.w_max
            ),
        }
    }
}

fn number(token: &str) -> Result<f64> {
    token
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidHeuristic(format!("`{token}` is not a number")))
}

fn parse_vec3(token: &str) -> Result<Vec3> {
    let parts: Vec<&str> = token.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidHeuristic(format!("expected vx,vy,vz, got `{token}`")));
    }
    Ok(Vec3::new(number(parts[0])?, number(parts[1])?, number(parts[2])?))
}

impl FromStr for HeuristicSpec {
    type Err = Error;

    /// Canonical forms: `zero`, `euclidean`, `diagonal`, `table`,
    /// `manhattan[:scale]`, and
    /// `velocity:<base>:vx,vy,vz[:v_ref[:w_min[:w_max]]]`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let mut tokens = text.split(':').peekable();
        let head = tokens.next().unwrap_or_default().to_ascii_lowercase();
        let weighted = head == "velocity";
        let name = if weighted {
            tokens
                .next()
                .ok_or_else(|| Error::InvalidHeuristic("velocity spec is missing its base".into()))?
                .to_ascii_lowercase()
        } else {
            head
        };
        let base = match name.as_str() {
            "zero" => BaseHeuristic::Zero,
            "euclidean" => BaseHeuristic::Euclidean,
            "diagonal" | "octile" => BaseHeuristic::Diagonal,
            "table" => BaseHeuristic::Table,
            "manhattan" => {
                let scale = match tokens.peek() {
                    Some(t) if !t.contains(',') => number(tokens.next().unwrap())?,
                    _ => 1.0,
                };
                BaseHeuristic::Manhattan { scale }
            }
            "velocity" => return Err(Error::InvalidHeuristic("velocity weighting cannot nest".into())),
            other => return Err(Error::InvalidHeuristic(format!("unknown heuristic `{other}`"))),
        };

        let spec = if weighted {
            let velocity = parse_vec3(
                tokens
                    .next()
                    .ok_or_else(|| Error::InvalidHeuristic("velocity spec is missing vx,vy,vz".into()))?,
            )?;
            let v_ref = tokens.next().map(number).transpose()?.unwrap_or(velocity.norm());
            let w_min = tokens.next().map(number).transpose()?.unwrap_or(DEFAULT_W_MIN);
            let w_max = tokens.next().map(number).transpose()?.unwrap_or(DEFAULT_W_MAX);
            HeuristicSpec::velocity_weighted(base, WeightParams { velocity, v_ref, w_min, w_max })
        } else {
            HeuristicSpec::plain(base)
        };
        if let Some(extra) = tokens.next() {
            return Err(Error::InvalidHeuristic(format!("unexpected `{extra}` in `{text}`")));
        }
        spec.validate().map_err(|e| match e {
            Error::InvalidParameter(m) => Error::InvalidHeuristic(m),
            other => other,
        })?;
        Ok(spec)
    }
}
