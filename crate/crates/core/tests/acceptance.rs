//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use variastar_core::dynamics::{
    action, analytic_state, eom_residual, integrate_rk4, kinetic_energy, potential_energy, sample_analytic,
    total_energy,
};
use variastar_core::graphmap::{figure2_fixture, random_grid};
use variastar_core::harness::{compare_heuristics, emit_report, ReportFormat, REPORT_CSV_HEADER};
use variastar_core::search::{astar, dijkstra};
use variastar_core::variational::{
    arc_length, chord_deviation, chord_frame_samples, euler_residual, minimize_action, minimize_arclength,
    perturbed_chord,
};
use variastar_core::{
    BaseHeuristic, BenchSuite, Connectivity, HeuristicSpec, KinematicState, MechanicsParams, MinimizeOptions,
    NodeRef, SearchOptions, Trajectory, Vec3, WeightParams,
};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fmt_ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn figure2_regression() -> Outcome {
    let (graph, s, g) = figure2_fixture();
    let opts = SearchOptions::default();
    let spec = HeuristicSpec::table();
    let t0 = Instant::now();
    let r = astar(&graph, &s, &g, &spec, &opts).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();

    let order: Vec<&str> = r.trace.iter().map(|e| e.label.as_str()).collect();
    let found: Vec<(&str, f64)> = r.discovered.iter().skip(1).map(|e| (e.label.as_str(), e.f)).collect();
    let path: Vec<&str> = r.path.iter().map(|n| graph.nodes()[graph_id(n)].label.as_str()).collect();
    let expected_found = [("A", 4.0), ("G", 10.0), ("B", 7.0), ("C", 4.0), ("G", 6.0), ("D", 11.0)];
    let ok = order == ["S", "A", "C", "G"]
        && found == expected_found
        && path == ["S", "A", "C", "G"]
        && r.cost == 6.0
        && elapsed < Duration::from_millis(1);
    check(
        ok,
        format!("order {order:?}, discovered {found:?}, path {path:?}, cost {}, {}", r.cost, fmt_ms(elapsed)),
    )
}

fn graph_id(node: &NodeRef) -> usize {
    match node {
        NodeRef::Node(id) => *id,
        NodeRef::Cell { .. } => unreachable!("fixture nodes are graph nodes"),
    }
}

/// Instance `seed` of the randomized suite shared by criteria 2 and 3.
fn suite_instance(seed: u64) -> (u64, (usize, usize, usize), f64) {
    let dims = if seed.is_multiple_of(2) { (32, 32, 1) } else { (12, 12, 12) };
    let density = [0.1, 0.25, 0.4][(seed % 3) as usize];
    (seed, dims, density)
}

fn corners(dims: (usize, usize, usize)) -> (NodeRef, NodeRef) {
    (NodeRef::cell(0, 0, 0), NodeRef::cell(dims.0 - 1, dims.1 - 1, dims.2 - 1))
}

/// Connectivities paired with the admissible heuristics tested under them.
fn admissible_sets(depth: usize) -> [(Connectivity, Vec<HeuristicSpec>); 2] {
    let common = [HeuristicSpec::zero(), HeuristicSpec::euclidean(), HeuristicSpec::diagonal()];
    let (axis, full) = if depth == 1 {
        (Connectivity::Four, Connectivity::Eight)
    } else {
        (Connectivity::Six, Connectivity::TwentySix)
    };
    let mut axis_specs = common.to_vec();
    axis_specs.push(HeuristicSpec::manhattan(1.0));
    [(full, common.to_vec()), (axis, axis_specs)]
}

fn oracle_equivalence() -> Outcome {
    let t0 = Instant::now();
    let checks: Vec<Result<usize, String>> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let (seed, dims, density) = suite_instance(seed);
            let map = random_grid(seed, dims, density).map_err(|e| e.to_string())?;
            let (s, g) = corners(dims);
            let mut runs = 0;
            for (conn, specs) in admissible_sets(dims.2) {
                let opts = SearchOptions { record_trace: false, ..SearchOptions::with_connectivity(conn) };
                let oracle = dijkstra(&map, &s, &g, &opts).map_err(|e| e.to_string())?;
                for spec in specs {
                    let r = astar(&map, &s, &g, &spec, &opts).map_err(|e| e.to_string())?;
                    let agree = r.status == oracle.status
                        && (!oracle.is_found() || (r.cost - oracle.cost).abs() <= 1e-9);
                    if !agree {
                        return Err(format!(
                            "seed {seed} {conn} {spec}: {:?} {} vs oracle {:?} {}",
                            r.status, r.cost, oracle.status, oracle.cost
                        ));
                    }
                    runs += 1;
                }
            }
            Ok(runs)
        })
        .collect();
    let elapsed = t0.elapsed();
    let mut runs = 0;
    for c in checks {
        runs += c?;
    }
    check(
        elapsed < Duration::from_secs(60),
        format!("1000 grids, {runs} A* runs agree with dijkstra within 1e-9, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn bounded_suboptimality() -> Outcome {
    let checks: Vec<Result<(usize, f64), String>> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let (seed, dims, density) = suite_instance(seed);
            let map = random_grid(seed, dims, density).map_err(|e| e.to_string())?;
            let (s, g) = corners(dims);
            let conn = Connectivity::default_for_depth(dims.2);
            let opts = SearchOptions { allow_reopen: true, record_trace: false, ..SearchOptions::with_connectivity(conn) };
            let oracle = dijkstra(&map, &s, &g, &opts).map_err(|e| e.to_string())?;
            if !oracle.is_found() {
                return Ok((0, 1.0));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let (mut runs, mut worst) = (0, 1.0f64);
            for w_max in [1.5, 2.0, 5.0] {
                for base in [BaseHeuristic::Euclidean, BaseHeuristic::Diagonal] {
                    let planar = dims.2 == 1;
                    let v = Vec3::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        if planar { 0.0 } else { rng.gen_range(-1.0..1.0) },
                    );
                    if v.norm() < 1e-6 {
                        continue;
                    }
                    // A reference speed below |v| lets aligned nodes reach w_max.
                    let v_ref = v.norm() * rng.gen_range(0.1..1.0);
                    let params = WeightParams::with_bounds(v, v_ref, 0.1, w_max).map_err(|e| e.to_string())?;
                    let spec = HeuristicSpec::velocity_weighted(base, params);
                    let r = astar(&map, &s, &g, &spec, &opts).map_err(|e| e.to_string())?;
                    if !r.is_found() || r.cost > w_max * oracle.cost + 1e-9 {
                        return Err(format!("seed {seed} {spec}: cost {} vs optimal {}", r.cost, oracle.cost));
                    }
                    worst = worst.max(r.cost / oracle.cost);
                    runs += 1;
                }
            }
            Ok((runs, worst))
        })
        .collect();
    let (mut runs, mut worst) = (0, 1.0f64);
    for c in checks {
        let (n, w) = c?;
        runs += n;
        worst = worst.max(w);
    }
    Ok(format!("{runs} weighted runs within w_max x optimal + 1e-9, worst ratio {worst:.4}"))
}

fn dynamics() -> Outcome {
    let params = MechanicsParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut starts = vec![KinematicState::new(Vec3::ZERO, Vec3::new(3.0, -2.0, 15.0), 0.0)];
    for _ in 0..4 {
        let p = Vec3::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(0.0..50.0));
        let v = Vec3::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        starts.push(KinematicState::new(p, v, 0.0));
    }
    let (mut pos_err, mut energy_err, mut eom) = (0.0f64, 0.0f64, 0.0f64);
    for initial in &starts {
        let traj = integrate_rk4(initial, 1e-3, 10.0, &params).map_err(|e| e.to_string())?;
        let e0 = total_energy(initial, &params);
        let scale = traj
            .samples()
            .iter()
            .map(|s| kinetic_energy(s, &params) + potential_energy(s, &params).abs())
            .fold(0.0, f64::max);
        for s in traj.samples() {
            pos_err = pos_err.max(s.position.distance(analytic_state(initial, s.time, &params).position));
            energy_err = energy_err.max((total_energy(s, &params) - e0).abs() / scale);
        }
        let exact = sample_analytic(initial, 1e-3, 10.0, &params).map_err(|e| e.to_string())?;
        eom = eom.max(eom_residual(&exact, &params).map_err(|e| e.to_string())?.max());
    }
    check(
        pos_err < 1e-6 && energy_err < 1e-6 && eom < 1e-6,
        format!("max position error {pos_err:.2e}, relative energy drift {energy_err:.2e}, eom residual {eom:.2e}"),
    )
}

fn geodesic() -> Outcome {
    let (a, b) = (Vec3::planar(0.0, 0.0), Vec3::planar(1.0, 1.0));
    let t0 = Instant::now();
    let init = perturbed_chord(a, b, 33, 0.2).map_err(|e| e.to_string())?;
    let run = minimize_arclength(a, b, 33, Some(&init), &MinimizeOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let deviation = chord_deviation(&run.result);
    let rel_len = (arc_length(&run.result) - 2f64.sqrt()).abs() / 2f64.sqrt();
    let euler = euler_residual(&chord_frame_samples(&run.result).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    check(
        deviation < 1e-3 && rel_len < 1e-6 && euler < 1e-3 && elapsed < Duration::from_secs(5),
        format!(
            "deviation {deviation:.2e}, relative length error {rel_len:.2e}, euler residual {euler:.2e}, {} iterations, {}",
            run.iterations,
            fmt_ms(elapsed)
        ),
    )
}

fn least_action() -> Outcome {
    let params = MechanicsParams::default();
    let run = minimize_action((0.0, Vec3::ZERO), (1.0, Vec3::ZERO), 101, &params, None, &MinimizeOptions::default())
        .map_err(|e| e.to_string())?;
    let apex = run.result.samples().iter().map(|s| s.position.z).fold(f64::MIN, f64::max);

    // Returns to the origin at t = 1.
    let initial = KinematicState::new(Vec3::ZERO, Vec3::new(0.0, 0.0, params.gravity / 2.0), 0.0);
    let exact = sample_analytic(&initial, 1e-4, 1.0, &params).map_err(|e| e.to_string())?;
    let base = action(&exact, &params);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut min_gap = f64::INFINITY;
    for _ in 0..100 {
        let modes: Vec<(f64, Vec3)> = (1..=rng.gen_range(1..=4))
            .map(|_| {
                let k = rng.gen_range(1..=6) as f64;
                let amp = Vec3::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2));
                (k, amp)
            })
            .collect();
        let perturbed: Vec<KinematicState> = exact
            .samples()
            .iter()
            .map(|s| {
                let (mut dp, mut dv) = (Vec3::ZERO, Vec3::ZERO);
                for &(k, amp) in &modes {
                    let w = k * std::f64::consts::PI;
                    dp += amp * (w * s.time).sin();
                    dv += amp * (w * (w * s.time).cos());
                }
                KinematicState::new(s.position + dp, s.velocity + dv, s.time)
            })
            .collect();
        let traj = Trajectory::new(perturbed).map_err(|e| e.to_string())?;
        min_gap = min_gap.min(action(&traj, &params) - base);
    }
    check(
        (apex - 1.22625).abs() <= 1e-3 && min_gap > 1e-9,
        format!("apex {apex:.6}, smallest action increase over 100 perturbations {min_gap:.3e}"),
    )
}

fn benchmark_aggregate() -> Outcome {
    let mut suite = BenchSuite::new(0..100, (24, 24, 1), 0.25);
    suite.connectivity = Connectivity::Eight;
    suite.timing = false;
    let v = Vec3::new(1.0, 1.0, 0.0);
    let weighted = HeuristicSpec::velocity_weighted(
        BaseHeuristic::Euclidean,
        WeightParams::with_bounds(v, v.norm() / 2.0, 0.1, 2.0).map_err(|e| e.to_string())?,
    );
    let specs = [HeuristicSpec::euclidean(), weighted];
    let report = compare_heuristics(&suite, &specs).map_err(|e| e.to_string())?;
    report.validate().map_err(|e| e.to_string())?;
    let csv = emit_report(&report, ReportFormat::Csv);
    let rerun = emit_report(&compare_heuristics(&suite, &specs).map_err(|e| e.to_string())?, ReportFormat::Csv);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?
        .install(|| compare_heuristics(&suite, &specs))
        .map_err(|e| e.to_string())?;
    let single = emit_report(&single, ReportFormat::Csv);

    let mean = |label: &str| report.aggregate(label).map(|a| a.mean_expansions).unwrap_or(f64::NAN);
    let (d, e, w) = (mean("dijkstra"), mean(&specs[0].to_string()), mean(&specs[1].to_string()));
    let header_ok = csv.lines().next() == Some(REPORT_CSV_HEADER);
    let identical = csv == rerun && csv == single;
    check(
        d > e && e > w && header_ok && identical,
        format!(
            "mean expansions dijkstra {d:.1} > euclidean {e:.1} > weighted {w:.1}; header ok {header_ok}; \
             reruns identical {identical}; {} unreachable",
            report.unreachable
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Check; 7] = [
        ("figure-2 regression", figure2_regression),
        ("oracle equivalence", oracle_equivalence),
        ("bounded suboptimality", bounded_suboptimality),
        ("dynamics", dynamics),
        ("geodesic", geodesic),
        ("least action", least_action),
        ("benchmark aggregate", benchmark_aggregate),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
