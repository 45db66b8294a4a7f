//! Discrete calculus of variations.
//!
//! Two functionals are minimised over waypoints with fixed endpoints:
//!
//! * arc length `Σ ‖p_{i+1} − p_i‖`, whose minimiser is the straight chord;
//! * the action of a point mass sampled uniformly in time,
//!   `Σ Δt [½ m ‖(q_{i+1} − q_i)/Δt‖² − m g (z_i + z_{i+1})/2]`, whose
//!   minimiser is the free-fall parabola.
//!
//! Both use plain gradient descent with a step that halves whenever a trial
//! step would increase the objective and grows after accepted steps.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dynamics::{KinematicState, MechanicsParams, Trajectory};
use crate::{Error, Result, Vec3};

pub const DEFAULT_POINTS: usize = 33;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePath {
    points: Vec<Vec3>,
}

impl DiscretePath {
    /// At least three finite waypoints; the first and last are the fixed
    /// endpoints.
    pub fn new(points: Vec<Vec3>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a path needs at least 3 waypoints, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("waypoints must be finite".into()));
        }
        Ok(DiscretePath { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Vec3 {
        self.points[0]
    }

    pub fn last(&self) -> Vec3 {
        self.points[self.points.len() - 1]
    }

    /// CSV with header `index,x,y,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,x,y,z\n");
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{},{}", p.x, p.y, p.z);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Converged once the largest waypoint move of a step is below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial step size; adapted during descent.
    pub step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { tol: 1e-9, max_iter: 100_000, step: 0.1 }
    }
}

impl MinimizeOptions {
    fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 || self.max_iter == 0 || !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid minimize options {self:?}")));
        }
        Ok(())
    }
}

/// Outcome of a converged minimisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimized<T> {
    pub result: T,
    /// Trial steps taken, accepted or not.
    pub iterations: usize,
    /// Objective before descent, then after every accepted step.
    pub history: Vec<f64>,
}

pub fn arc_length(path: &DiscretePath) -> f64 {
    polyline_length(&path.points)
}

fn polyline_length(points: &[Vec3]) -> f64 {
    points.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Gradient of the arc length with respect to every waypoint; endpoint
/// entries are zero. A zero-length segment contributes nothing.
pub fn arc_length_gradient(points: &[Vec3]) -> Vec<Vec3> {
    let unit: Vec<Vec3> = points
        .windows(2)
        .map(|w| (w[1] - w[0]).normalized().unwrap_or(Vec3::ZERO))
        .collect();
    let mut grad = vec![Vec3::ZERO; points.len()];
    for i in 1..points.len() - 1 {
        grad[i] = unit[i - 1] - unit[i];
    }
    grad
}

/// Largest distance from an interior waypoint to the line through the
/// endpoints.
pub fn chord_deviation(path: &DiscretePath) -> f64 {
    let (a, b) = (path.first(), path.last());
    let Some(dir) = (b - a).normalized() else {
        return path.points.iter().map(|p| p.distance(a)).fold(0.0, f64::max);
    };
    path.points
        .iter()
        .map(|&p| {
            let r = p - a;
            (r - dir * r.dot(dir)).norm()
        })
        .fold(0.0, f64::max)
}

/// The path expressed in the frame of its chord: `(distance along the chord,
/// signed offset along the in-plane perpendicular)` per waypoint.
pub fn chord_frame_samples(path: &DiscretePath) -> Result<Vec<(f64, f64)>> {
    let (a, b) = (path.first(), path.last());
    let dir = (b - a).normalized().ok_or_else(|| Error::InvalidParameter("zero-length chord".into()))?;
    let perp = dir.any_orthogonal().expect("non-zero chord");
    Ok(path
        .points
        .iter()
        .map(|&p| ((p - a).dot(dir), (p - a).dot(perp)))
        .collect())
}

/// Chord from `a` to `b` with `n_points` evenly spaced waypoints, displaced
/// perpendicular to the chord by `amplitude · sin(π s)`, `s ∈ [0, 1]`.
pub fn perturbed_chord(a: Vec3, b: Vec3, n_points: usize, amplitude: f64) -> Result<DiscretePath> {
    let perp = (b - a)
        .any_orthogonal()
        .ok_or_else(|| Error::InvalidParameter("endpoints coincide".into()))?;
    let last = n_points.saturating_sub(1).max(1) as f64;
    let mut points: Vec<Vec3> = (0..n_points)
        .map(|i| {
            let s = i as f64 / last;
            a + (b - a) * s + perp * (amplitude * (std::f64::consts::PI * s).sin())
        })
        .collect();
    // Exact endpoints, free of the rounding in `a + (b - a) * 1`.
    if n_points > 0 {
        points[0] = a;
        points[n_points - 1] = b;
    }
    DiscretePath::new(points)
}

struct Descent {
    x: Vec<Vec3>,
    iterations: usize,
    history: Vec<f64>,
    converged: bool,
    /// Largest gradient entry at the final iterate.
    gmax: f64,
}

/// Backtracking gradient descent; callers zero the gradient of fixed points.
fn descend(
    mut x: Vec<Vec3>,
    objective: impl Fn(&[Vec3]) -> f64,
    gradient: impl Fn(&[Vec3]) -> Vec<Vec3>,
    opts: &MinimizeOptions,
) -> Result<Descent> {
    opts.validate()?;
    let mut f = objective(&x);
    let mut history = vec![f];
    let mut step = opts.step;
    let mut grad = gradient(&x);
    let mut trial = x.clone();
    let mut gmax = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        gmax = grad.iter().map(|g| g.norm()).fold(0.0, f64::max);
        if gmax == 0.0 {
            converged = true;
            break;
        }
        iterations += 1;
        for ((t, p), g) in trial.iter_mut().zip(&x).zip(&grad) {
            *t = *p - *g * step;
        }
        let ft = objective(&trial);
        if ft <= f {
            let moved = step * gmax;
            std::mem::swap(&mut x, &mut trial);
            f = ft;
            history.push(f);
            grad = gradient(&x);
            if moved < opts.tol {
                converged = true;
                break;
            }
            step *= 1.2;
        } else {
            step *= 0.5;
            // no representable decrease remains above the tolerance
            if step * gmax < opts.tol {
                converged = true;
                break;
            }
        }
    }
    Ok(Descent { x, iterations, history, converged, gmax })
}

/// Shortest discrete path between `a` and `b`.
///
/// Each interior waypoint keeps its position along the chord and moves only
/// perpendicular to it, so the path is a graph over the chord coordinate.
/// Starts from `init` when given, otherwise from [`perturbed_chord`] with an
/// amplitude of 0.2 chord lengths.
pub fn minimize_arclength(
    a: Vec3,
    b: Vec3,
    n_points: usize,
    init: Option<&DiscretePath>,
    opts: &MinimizeOptions,
) -> Result<Minimized<DiscretePath>> {
    if n_points < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 points, got {n_points}")));
    }
    let dir = (b - a)
        .normalized()
        .ok_or_else(|| Error::InvalidParameter("endpoints coincide: the chord has zero length".into()))?;
    let start = match init {
        Some(path) => {
            if path.len() != n_points || path.first() != a || path.last() != b {
                return Err(Error::InvalidParameter(
                    "initial path must have n_points waypoints and the given endpoints".into(),
                ));
            }
            path.clone()
        }
        None => perturbed_chord(a, b, n_points, 0.2 * a.distance(b))?,
    };

    let projected = |points: &[Vec3]| {
        let mut g = arc_length_gradient(points);
        for v in &mut g {
            *v -= dir * v.dot(dir);
        }
        g
    };
    let run = descend(start.points, polyline_length, projected, opts)?;
    let result = DiscretePath::new(run.x)?;
    if !run.converged {
        return Err(Error::NotConverged { iterations: run.iterations, residual: chord_deviation(&result) });
    }
    Ok(Minimized { result, iterations: run.iterations, history: run.history })
}

/// Largest `|d/dx (y′ / √(1 + y′²))|` over interior samples, using central
/// differences for both derivatives. This is the Euler-equation residual of
/// the arc-length integrand `√(1 + y′²)`, which has no explicit `y`
/// dependence. Needs at least 5 samples with uniform, increasing `x`.
pub fn euler_residual(samples: &[(f64, f64)]) -> Result<f64> {
    let n = samples.len();
    if n < 5 {
        return Err(Error::InvalidParameter(format!("need at least 5 samples, got {n}")));
    }
    let dx = (samples[n - 1].0 - samples[0].0) / (n - 1) as f64;
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Error::NonUniformSampling { index: 1 });
    }
    let jitter = 1e-9 * dx.max(1.0);
    if let Some(i) = (1..n).find(|&i| ((samples[i].0 - samples[i - 1].0) - dx).abs() > jitter) {
        return Err(Error::NonUniformSampling { index: i });
    }
    // flux[i] is evaluated at sample i + 1
    let flux: Vec<f64> = samples
        .windows(3)
        .map(|w| {
            let slope = (w[2].1 - w[0].1) / (2.0 * dx);
            slope / (1.0 + slope * slope).sqrt()
        })
        .collect();
    Ok(flux
        .windows(3)
        .map(|w| ((w[2] - w[0]) / (2.0 * dx)).abs())
        .fold(0.0, f64::max))
}

/// Discrete action of positions sampled every `dt`, with segment velocities
/// and midpoint-averaged potential.
pub fn discrete_action(positions: &[Vec3], dt: f64, params: &MechanicsParams) -> f64 {
    let (m, g) = (params.mass, params.gravity);
    positions
        .windows(2)
        .map(|w| {
            let v = (w[1] - w[0]) * (1.0 / dt);
            dt * (0.5 * m * v.norm_squared() - m * g * 0.5 * (w[0].z + w[1].z))
        })
        .sum()
}

/// Gradient of [`discrete_action`]; endpoint entries are zero.
pub fn discrete_action_gradient(positions: &[Vec3], dt: f64, params: &MechanicsParams) -> Vec<Vec3> {
    let (m, g) = (params.mass, params.gravity);
    let mut grad = vec![Vec3::ZERO; positions.len()];
    for i in 1..positions.len() - 1 {
        let lap = positions[i] * 2.0 - positions[i - 1] - positions[i + 1];
        grad[i] = lap * (m / dt) - Vec3::UNIT_Z * (m * g * dt);
    }
    grad
}

/// Least-action trajectory between two fixed events `(time, position)`.
///
/// Positions are sampled at `n_points` uniform times and start from the
/// straight line between the endpoints unless `init` (one position per
/// sample) is given. Velocities of the result are second-order finite
/// differences of the converged positions.
pub fn minimize_action(
    a: (f64, Vec3),
    b: (f64, Vec3),
    n_points: usize,
    params: &MechanicsParams,
    init: Option<&[Vec3]>,
    opts: &MinimizeOptions,
) -> Result<Minimized<Trajectory>> {
    let (t0, p0) = a;
    let (t1, p1) = b;
    if t1.partial_cmp(&t0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidParameter(format!("end time {t1} must exceed start time {t0}")));
    }
    if n_points < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 points, got {n_points}")));
    }
    let dt = (t1 - t0) / (n_points - 1) as f64;
    let start: Vec<Vec3> = match init {
        Some(points) => {
            if points.len() != n_points || points[0] != p0 || points[n_points - 1] != p1 {
                return Err(Error::InvalidParameter(
                    "initial positions must have n_points entries and the given endpoints".into(),
                ));
            }
            points.to_vec()
        }
        None => (0..n_points)
            .map(|i| p0 + (p1 - p0) * (i as f64 / (n_points - 1) as f64))
            .collect(),
    };

    let run = descend(
        start,
        |x| discrete_action(x, dt, params),
        |x| discrete_action_gradient(x, dt, params),
        opts,
    )?;
    if !run.converged {
        return Err(Error::NotConverged { iterations: run.iterations, residual: run.gmax });
    }
    let positions = run.x;
    let time = |i: usize| if i == n_points - 1 { t1 } else { t0 + i as f64 * dt };
    let samples = (0..n_points)
        .map(|i| KinematicState::new(positions[i], finite_velocity(&positions, i, dt), time(i)))
        .collect();
    Ok(Minimized { result: Trajectory::new(samples)?, iterations: run.iterations, history: run.history })
}

/// Second-order accurate velocity at sample `i`.
fn finite_velocity(p: &[Vec3], i: usize, dt: f64) -> Vec3 {
    let n = p.len();
    if i == 0 {
        (p[1] * 4.0 - p[0] * 3.0 - p[2]) * (1.0 / (2.0 * dt))
    } else if i == n - 1 {
        (p[n - 1] * 3.0 - p[n - 2] * 4.0 + p[n - 3]) * (1.0 / (2.0 * dt))
    } else {
        (p[i + 1] - p[i - 1]) * (1.0 / (2.0 * dt))
    }
}
