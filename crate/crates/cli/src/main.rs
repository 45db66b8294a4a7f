//! `variastar`: plan scenarios, benchmark heuristics, and check the
//! variational and dynamics solvers from the command line.

mod args;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use variastar_core::dynamics::{
    analytic_state, eom_residual, integrate_rk4, kinetic_energy, potential_energy, sample_analytic, total_energy,
    STANDARD_GRAVITY,
};
use variastar_core::harness::{compare_heuristics, emit_report, render_path_svg, ReportFormat};
use variastar_core::search::trace_csv;
use variastar_core::variational::{
    arc_length, chord_deviation, chord_frame_samples, euler_residual, minimize_arclength, perturbed_chord,
};
use variastar_core::{
    BenchSuite, Connectivity, KinematicState, MechanicsParams, MinimizeOptions, NodeRef, Scenario, Vec3,
};

#[derive(Parser)]
#[command(name = "variastar", version, about = "Velocity-weighted A* planning and variational mechanics checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and print a JSON summary.
    Plan {
        scenario: PathBuf,
        /// Write an SVG rendering of the path (grid maps only).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// z-layer to render; defaults to the start cell's layer.
        #[arg(long)]
        layer: Option<usize>,
        /// Write the expansion trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compare heuristics against the Dijkstra oracle on seeded random grids.
    Bench {
        /// Seed range, `A..B` or `A..=B`.
        #[arg(long, value_parser = args::parse_seeds)]
        seeds: std::ops::Range<u64>,
        /// Grid size, `WxH` or `WxHxD`.
        #[arg(long, value_parser = args::parse_dims)]
        dims: (usize, usize, usize),
        /// Occupancy probability per cell, in [0, 1).
        #[arg(long)]
        density: f64,
        /// Heuristic specs; repeat the flag or separate with `;`.
        #[arg(long, required = true)]
        heuristics: Vec<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Defaults to eight for 2D grids and twenty_six for 3D.
        #[arg(long)]
        connectivity: Option<Connectivity>,
        #[arg(long)]
        no_reopen: bool,
        /// Report zero wall time so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Minimize arc length between two points and print the path as CSV.
    Geodesic {
        #[arg(long, value_parser = args::parse_point)]
        from: Vec3,
        #[arg(long, value_parser = args::parse_point)]
        to: Vec3,
        #[arg(long, default_value_t = 33)]
        points: usize,
        /// Initial sinusoidal displacement; defaults to 0.2 chord lengths.
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Integrate a projectile with RK4 and compare with the closed form.
    DynamicsCheck {
        #[arg(long, value_parser = args::parse_point, allow_hyphen_values = true)]
        v0: Vec3,
        #[arg(long, value_parser = args::parse_point, allow_hyphen_values = true, default_value = "0,0,0")]
        p0: Vec3,
        /// Duration in seconds.
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = STANDARD_GRAVITY)]
        gravity: f64,
        /// Fail when any check exceeds this.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the RK4 trajectory as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Plan { scenario, svg, layer, trace } => plan(scenario, svg, layer, trace),
        Command::Bench { seeds, dims, density, heuristics, out, format, connectivity, no_reopen, no_timing } => {
            let mut suite = BenchSuite::new(seeds, dims, density);
            if let Some(conn) = connectivity {
                suite.connectivity = conn;
            }
            suite.allow_reopen = !no_reopen;
            suite.timing = !no_timing;
            let specs = args::parse_heuristics(&heuristics).map_err(anyhow::Error::msg)?;
            if specs.is_empty() {
                bail!("no heuristics given besides the dijkstra oracle");
            }
            let report = thread_pool()?.install(|| compare_heuristics(&suite, &specs))?;
            write_output(out.as_ref(), &emit_report(&report, format))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Geodesic { from, to, points, amplitude, tol } => {
            let amplitude = amplitude.unwrap_or(0.2 * from.distance(to));
            let init = perturbed_chord(from, to, points, amplitude)?;
            let opts = MinimizeOptions { tol, ..MinimizeOptions::default() };
            let run = minimize_arclength(from, to, points, Some(&init), &opts)?;
            let euler = euler_residual(&chord_frame_samples(&run.result)?)?;
            eprintln!(
                "length {:.12} deviation {:.3e} euler residual {:.3e} iterations {}",
                arc_length(&run.result),
                chord_deviation(&run.result),
                euler,
                run.iterations
            );
            write_output(None, &run.result.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DynamicsCheck { v0, p0, t, dt, mass, gravity, tol, csv } => {
            dynamics_check(KinematicState::new(p0, v0, 0.0), t, dt, MechanicsParams::new(mass, gravity)?, tol, csv)
        }
    }
}

/// Rayon pool capped by `VARIASTAR_THREADS` when set.
fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("VARIASTAR_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("VARIASTAR_THREADS=`{v}` is not a count"))?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

/// Finite values as numbers, everything else as null.
fn number(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

fn plan(path: PathBuf, svg: Option<PathBuf>, layer: Option<usize>, trace: Option<PathBuf>) -> Result<ExitCode> {
    let scenario = Scenario::load_file(&path).with_context(|| format!("loading {}", path.display()))?;
    let outcome = scenario.run()?;
    let domain = scenario.domain.as_domain();
    let labels: Vec<String> = outcome
        .result
        .path
        .iter()
        .map(|n| domain.index_of(n).map(|i| domain.label(i)))
        .collect::<Result<_, _>>()?;

    if let Some(out) = svg {
        let Some(map) = scenario.domain.grid() else {
            bail!("--svg needs a grid map");
        };
        let layer = layer.unwrap_or(match scenario.start {
            NodeRef::Cell { k, .. } => k,
            NodeRef::Node(_) => 0,
        });
        let text = render_path_svg(map, layer, &scenario.start, &scenario.goal, &outcome.result)?;
        write_output(Some(&out), &text)?;
    }
    if let Some(out) = trace {
        write_output(Some(&out), &trace_csv(&outcome.result))?;
    }

    let row = &outcome.row;
    let summary = json!({
        "name": scenario.name,
        "algorithm": scenario.algorithm.label(),
        "status": outcome.result.status,
        "path": labels,
        "cost": number(outcome.result.cost),
        "optimal": number(outcome.oracle.cost),
        "ratio": number(row.ratio),
        "expansions": row.expansions,
        "reopenings": row.reopenings,
        "wall_ms": row.wall_ms,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(ExitCode::SUCCESS)
}

fn dynamics_check(
    initial: KinematicState,
    t_end: f64,
    dt: f64,
    params: MechanicsParams,
    tol: f64,
    csv: Option<PathBuf>,
) -> Result<ExitCode> {
    let traj = integrate_rk4(&initial, dt, t_end, &params)?;
    let e0 = total_energy(&initial, &params);
    let mut position_error = 0.0f64;
    let mut energy_drift = 0.0f64;
    for s in traj.samples() {
        position_error = position_error.max(s.position.distance(analytic_state(&initial, s.time, &params).position));
        energy_drift = energy_drift.max((total_energy(s, &params) - e0).abs());
    }
    let scale = traj
        .samples()
        .iter()
        .map(|s| kinetic_energy(s, &params) + potential_energy(s, &params).abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let energy_drift = energy_drift / scale;
    let eom = eom_residual(&sample_analytic(&initial, dt, t_end, &params)?, &params)?.max();
    let pass = position_error < tol && energy_drift < tol && eom < tol;
    if let Some(out) = csv {
        write_output(Some(&out), &traj.to_csv())?;
    }
    let summary = json!({
        "samples": traj.len(),
        "max_position_error": position_error,
        "relative_energy_drift": energy_drift,
        "eom_residual": eom,
        "final_position": traj.last().position.to_array(),
        "tolerance": tol,
        "pass": pass,
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
