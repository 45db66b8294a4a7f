//! Point-mass mechanics under uniform gravity.
//!
//! The Lagrangian is `L = ½ m ‖v‖² − m g z`. Its Euler–Lagrange equations
//! give `ẍ = 0`, `ÿ = 0`, `z̈ = −g`, solved here in closed form
//! ([`analytic_state`]) and numerically ([`integrate_rk4`]).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KinematicState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub time: f64,
}

impl KinematicState {
    pub fn new(position: Vec3, velocity: Vec3, time: f64) -> Self {
        KinematicState { position, velocity, time }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.velocity.is_finite() && self.time.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicsParams {
    /// kg
    pub mass: f64,
    /// m/s², acting along −z.
    pub gravity: f64,
}

impl Default for MechanicsParams {
    fn default() -> Self {
        MechanicsParams { mass: 1.0, gravity: STANDARD_GRAVITY }
    }
}

impl MechanicsParams {
    pub fn new(mass: f64, gravity: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !(gravity >= 0.0 && gravity.is_finite()) {
            return Err(Error::InvalidParameter(format!("gravity must be >= 0, got {gravity}")));
        }
        Ok(MechanicsParams { mass, gravity })
    }

    /// Constant acceleration of the equations of motion.
    pub fn acceleration(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, -self.gravity)
    }
}

/// Time-ordered samples of a motion; at least two, strictly increasing time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<KinematicState>", into = "Vec<KinematicState>")]
pub struct Trajectory {
    samples: Vec<KinematicState>,
}

impl Trajectory {
    pub fn new(samples: Vec<KinematicState>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a trajectory needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter(format!("sample {i} is not finite")));
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].time <= w[0].time) {
            return Err(Error::InvalidParameter(format!(
                "sample times must strictly increase (index {})",
                i + 1
            )));
        }
        Ok(Trajectory { samples })
    }

    pub fn samples(&self) -> &[KinematicState] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &KinematicState {
        &self.samples[0]
    }

    pub fn last(&self) -> &KinematicState {
        &self.samples[self.samples.len() - 1]
    }

    /// CSV with header `t,x,y,z,vx,vy,vz`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,vx,vy,vz\n");
        for s in &self.samples {
            let (p, v) = (s.position, s.velocity);
            let _ = writeln!(out, "{},{},{},{},{},{},{}", s.time, p.x, p.y, p.z, v.x, v.y, v.z);
        }
        out
    }
}

impl TryFrom<Vec<KinematicState>> for Trajectory {
    type Error = Error;

    fn try_from(samples: Vec<KinematicState>) -> Result<Self> {
        Trajectory::new(samples)
    }
}

impl From<Trajectory> for Vec<KinematicState> {
    fn from(t: Trajectory) -> Self {
        t.samples
    }
}

pub fn kinetic_energy(state: &KinematicState, params: &MechanicsParams) -> f64 {
    0.5 * params.mass * state.velocity.norm_squared()
}

pub fn potential_energy(state: &KinematicState, params: &MechanicsParams) -> f64 {
    params.mass * params.gravity * state.position.z
}

/// `L = T − V`, joules.
pub fn lagrangian(state: &KinematicState, params: &MechanicsParams) -> f64 {
    kinetic_energy(state, params) - potential_energy(state, params)
}

/// `T + V`, joules.
pub fn total_energy(state: &KinematicState, params: &MechanicsParams) -> f64 {
    kinetic_energy(state, params) + potential_energy(state, params)
}

/// Trapezoidal quadrature of the Lagrangian over the samples, J·s.
pub fn action(traj: &Trajectory, params: &MechanicsParams) -> f64 {
    traj.samples
        .windows(2)
        .map(|w| 0.5 * (w[1].time - w[0].time) * (lagrangian(&w[0], params) + lagrangian(&w[1], params)))
        .sum()
}

/// Closed-form solution of the equations of motion at time `t`.
pub fn analytic_state(initial: &KinematicState, t: f64, params: &MechanicsParams) -> KinematicState {
    let dt = t - initial.time;
    let (p, v) = (initial.position, initial.velocity);
    let g = params.gravity;
    KinematicState {
        position: Vec3::new(p.x + v.x * dt, p.y + v.y * dt, p.z + v.z * dt - 0.5 * g * dt * dt),
        velocity: Vec3::new(v.x, v.y, v.z - g * dt),
        time: t,
    }
}

/// Closed-form trajectory sampled every `dt` from `initial.time` to `t_end`
/// inclusive. Sample `i` is at `t0 + i·dt` exactly; the last is at `t_end`.
pub fn sample_analytic(initial: &KinematicState, dt: f64, t_end: f64, params: &MechanicsParams) -> Result<Trajectory> {
    let times = sample_times(initial.time, dt, t_end)?;
    Trajectory::new(times.into_iter().map(|t| analytic_state(initial, t, params)).collect())
}

fn sample_times(t0: f64, dt: f64, t_end: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite() && t0.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid time step {dt}")));
    }
    if t_end <= t0 {
        return Err(Error::InvalidParameter(format!("end time {t_end} must exceed start time {t0}")));
    }
    let span = t_end - t0;
    // steps whose end lands within a hair of t_end are not split off
    let full = ((span / dt) * (1.0 - 1e-12)).floor() as usize;
    let mut times: Vec<f64> = (0..=full).map(|i| t0 + i as f64 * dt).collect();
    if t_end - times[full] > 1e-12 * span.max(1.0) {
        times.push(t_end);
    } else {
        times[full] = t_end;
    }
    Ok(times)
}

fn derivative(state: (Vec3, Vec3), accel: Vec3) -> (Vec3, Vec3) {
    (state.1, accel)
}

/// Classic fourth-order Runge–Kutta on `(ẍ, ÿ, z̈) = (0, 0, −g)`. The last
/// step is shortened so the final sample falls exactly on `t_end`.
pub fn integrate_rk4(initial: &KinematicState, dt: f64, t_end: f64, params: &MechanicsParams) -> Result<Trajectory> {
    if !initial.is_finite() {
        return Err(Error::InvalidParameter("initial state must be finite".into()));
    }
    let times = sample_times(initial.time, dt, t_end)?;
    let accel = params.acceleration();
    let mut samples = Vec::with_capacity(times.len());
    let mut state = (initial.position, initial.velocity);
    samples.push(*initial);
    for w in times.windows(2) {
        let h = w[1] - w[0];
        let k1 = derivative(state, accel);
        let k2 = derivative((state.0 + k1.0 * (h / 2.0), state.1 + k1.1 * (h / 2.0)), accel);
        let k3 = derivative((state.0 + k2.0 * (h / 2.0), state.1 + k2.1 * (h / 2.0)), accel);
        let k4 = derivative((state.0 + k3.0 * h, state.1 + k3.1 * h), accel);
        state = (
            state.0 + (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (h / 6.0),
            state.1 + (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (h / 6.0),
        );
        samples.push(KinematicState::new(state.0, state.1, w[1]));
    }
    Trajectory::new(samples)
}

/// Signed speed toward `goal`: velocity projected on the unit direction
/// from the current position to the goal, m/s.
pub fn resultant_velocity_toward(state: &KinematicState, goal: Vec3) -> Result<f64> {
    let dir = (goal - state.position).normalized().ok_or(Error::UndefinedDirection)?;
    Ok(state.velocity.dot(dir))
}

/// Largest equation-of-motion violation per axis over interior samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EomResidual {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EomResidual {
    pub fn max(&self) -> f64 {
        self.x.max(self.y).max(self.z)
    }
}

/// Central-difference accelerations compared with `(0, 0, −g)`:
/// `|ẍ|`, `|ÿ|`, `|z̈ + g|`, each maximised over interior samples.
/// Requires at least three samples, uniform in time to 1e-9.
pub fn eom_residual(traj: &Trajectory, params: &MechanicsParams) -> Result<EomResidual> {
    let s = traj.samples();
    if s.len() < 3 {
        return Err(Error::InvalidParameter("eom residual needs at least 3 samples".into()));
    }
    let dt = (s[s.len() - 1].time - s[0].time) / (s.len() - 1) as f64;
    if let Some(i) = (1..s.len()).find(|&i| ((s[i].time - s[i - 1].time) - dt).abs() > 1e-9) {
        return Err(Error::NonUniformSampling { index: i });
    }
    let mut r = EomResidual { x: 0.0, y: 0.0, z: 0.0 };
    for w in s.windows(3) {
        let acc = (w[2].position - w[1].position * 2.0 + w[0].position) * (1.0 / (dt * dt));
        r.x = r.x.max(acc.x.abs());
        r.y = r.y.max(acc.y.abs());
        r.z = r.z.max((acc.z + params.gravity).abs());
    }
    Ok(r)
}
