use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphmap::{random_grid, Connectivity, NodeRef};
use crate::heuristics::HeuristicSpec;
use crate::search::{astar, dijkstra, PlanResult, PlanStatus, SearchOptions};
use crate::{Error, Result};

use super::csv_field;

pub const REPORT_CSV_HEADER: &str = "instance,heuristic,cost,optimal,ratio,expansions,reopenings,wall_ms";

/// One planner run on one instance, next to the oracle's optimal cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub heuristic: String,
    pub cost: f64,
    pub optimal: f64,
    /// `cost / optimal`, or 1 when both are zero.
    pub ratio: f64,
    pub expansions: usize,
    pub reopenings: usize,
    /// Informational only; zero when timing is disabled.
    pub wall_ms: f64,
}

fn ratio(cost: f64, optimal: f64) -> f64 {
    if optimal == 0.0 && cost == 0.0 {
        1.0
    } else {
        cost / optimal
    }
}

impl ReportRow {
    pub fn new(instance: &str, heuristic: &str, result: &PlanResult, optimal: f64, wall_ms: f64) -> Self {
        ReportRow {
            instance: instance.to_string(),
            heuristic: heuristic.to_string(),
            cost: result.cost,
            optimal,
            ratio: ratio(result.cost, optimal),
            expansions: result.expansions,
            reopenings: result.reopenings,
            wall_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub heuristic: String,
    pub instances: usize,
    pub mean_ratio: f64,
    pub median_ratio: f64,
    pub max_ratio: f64,
    pub mean_expansions: f64,
    pub median_expansions: f64,
    pub mean_reopenings: f64,
    pub mean_wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Sorted by instance, then heuristic label.
    pub rows: Vec<ReportRow>,
    /// One per heuristic label, sorted by label.
    pub aggregates: Vec<AggregateRow>,
    /// Instances with no path, excluded from `rows`.
    pub unreachable: usize,
}

impl BenchReport {
    /// Builds aggregates for `rows`, which must already be in report order.
    pub fn from_rows(rows: Vec<ReportRow>, unreachable: usize) -> Self {
        let mut labels: Vec<&str> = rows.iter().map(|r| r.heuristic.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        let aggregates = labels
            .iter()
            .map(|&label| {
                let mine: Vec<&ReportRow> = rows.iter().filter(|r| r.heuristic == label).collect();
                let n = mine.len() as f64;
                let ratios: Vec<f64> = mine.iter().map(|r| r.ratio).collect();
                let expansions: Vec<f64> = mine.iter().map(|r| r.expansions as f64).collect();
                AggregateRow {
                    heuristic: label.to_string(),
                    instances: mine.len(),
                    mean_ratio: ratios.iter().sum::<f64>() / n,
                    median_ratio: median(&ratios),
                    max_ratio: ratios.iter().copied().fold(f64::MIN, f64::max),
                    mean_expansions: expansions.iter().sum::<f64>() / n,
                    median_expansions: median(&expansions),
                    mean_reopenings: mine.iter().map(|r| r.reopenings as f64).sum::<f64>() / n,
                    mean_wall_ms: mine.iter().map(|r| r.wall_ms).sum::<f64>() / n,
                }
            })
            .collect();
        BenchReport { rows, aggregates, unreachable }
    }

    pub fn aggregate(&self, heuristic: &str) -> Option<&AggregateRow> {
        self.aggregates.iter().find(|a| a.heuristic == heuristic)
    }

    /// Checks every row: the stored ratio matches `cost / optimal` to 1e-12
    /// and is at least `1 − 1e-9`.
    pub fn validate(&self) -> Result<()> {
        for row in &self.rows {
            let recomputed = ratio(row.cost, row.optimal);
            if (recomputed - row.ratio).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "{}/{}: stored ratio {} differs from cost/optimal {}",
                    row.instance, row.heuristic, row.ratio, recomputed
                )));
            }
            if row.ratio < 1.0 - 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "{}/{}: ratio {} is below 1",
                    row.instance, row.heuristic, row.ratio
                )));
            }
        }
        Ok(())
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// A family of seeded random grids, each searched from the `(0,0,0)` corner
/// to the opposite corner.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSuite {
    pub seeds: std::ops::Range<u64>,
    pub dims: (usize, usize, usize),
    pub density: f64,
    pub connectivity: Connectivity,
    pub allow_reopen: bool,
    /// Record wall time per run. Off makes reports byte-reproducible.
    pub timing: bool,
}

impl BenchSuite {
    pub fn new(seeds: std::ops::Range<u64>, dims: (usize, usize, usize), density: f64) -> Self {
        BenchSuite {
            seeds,
            dims,
            density,
            connectivity: Connectivity::default_for_depth(dims.2),
            allow_reopen: true,
            timing: true,
        }
    }
}

/// Solves every suite instance with Dijkstra (rows labelled `dijkstra`) and
/// with A* under each heuristic. Runs instances in parallel on the current
/// rayon pool; the output does not depend on the degree of parallelism.
pub fn compare_heuristics(suite: &BenchSuite, heuristics: &[HeuristicSpec]) -> Result<BenchReport> {
    if heuristics.is_empty() {
        return Err(Error::InvalidParameter("at least one heuristic is required".into()));
    }
    if suite.seeds.is_empty() {
        return Err(Error::InvalidParameter("the seed range is empty".into()));
    }
    for h in heuristics {
        h.validate()?;
    }
    let mut labelled: Vec<(String, &HeuristicSpec)> = heuristics.iter().map(|h| (h.to_string(), h)).collect();
    labelled.sort_by(|a, b| a.0.cmp(&b.0));
    labelled.dedup_by(|a, b| a.0 == b.0);

    let (w, h, d) = suite.dims;
    let start = NodeRef::cell(0, 0, 0);
    let goal = NodeRef::cell(w - 1, h - 1, d - 1);
    let opts = SearchOptions {
        connectivity: suite.connectivity,
        allow_reopen: suite.allow_reopen,
        max_expansions: None,
        record_trace: false,
    };
    let timed = |f: &dyn Fn() -> Result<PlanResult>| -> Result<(PlanResult, f64)> {
        let clock = Instant::now();
        let r = f()?;
        let ms = if suite.timing { clock.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        Ok((r, ms))
    };

    let seeds: Vec<u64> = suite.seeds.clone().collect();
    let per_instance: Vec<Option<Vec<ReportRow>>> = seeds
        .par_iter()
        .map(|&seed| -> Result<Option<Vec<ReportRow>>> {
            let map = random_grid(seed, suite.dims, suite.density)?;
            let instance = seed.to_string();
            let (oracle, oracle_ms) = timed(&|| dijkstra(&map, &start, &goal, &opts))?;
            if oracle.status != PlanStatus::Found {
                return Ok(None);
            }
            let mut rows = vec![ReportRow::new(&instance, "dijkstra", &oracle, oracle.cost, oracle_ms)];
            for (label, spec) in &labelled {
                let (r, ms) = timed(&|| astar(&map, &start, &goal, spec, &opts))?;
                rows.push(ReportRow::new(&instance, label, &r, oracle.cost, ms));
            }
            rows.sort_by(|a, b| a.heuristic.cmp(&b.heuristic));
            Ok(Some(rows))
        })
        .collect::<Result<_>>()?;

    let unreachable = per_instance.iter().filter(|r| r.is_none()).count();
    let rows = per_instance.into_iter().flatten().flatten().collect();
    Ok(BenchReport::from_rows(rows, unreachable))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown report format `{other}`"))),
        }
    }
}

/// CSV rows under [`REPORT_CSV_HEADER`], or pretty JSON of the whole report.
pub fn emit_report(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = format!("{REPORT_CSV_HEADER}\n");
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    csv_field(&r.instance),
                    csv_field(&r.heuristic),
                    r.cost,
                    r.optimal,
                    r.ratio,
                    r.expansions,
                    r.reopenings,
                    r.wall_ms
                );
            }
            out
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
            out
        }
    }
}

pub fn parse_report_json(text: &str) -> Result<BenchReport> {
    serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("report JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{BaseHeuristic, WeightParams};
    use crate::Vec3;

    fn suite(seeds: std::ops::Range<u64>) -> BenchSuite {
        BenchSuite { timing: false, ..BenchSuite::new(seeds, (16, 16, 1), 0.25) }
    }

    #[test]
    fn euclidean_rows_are_optimal() {
        let report = compare_heuristics(&suite(0..100), &[HeuristicSpec::zero(), HeuristicSpec::euclidean()]).unwrap();
        report.validate().unwrap();
        let euclid: Vec<_> = report.rows.iter().filter(|r| r.heuristic == "euclidean").collect();
        assert_eq!(euclid.len() + report.unreachable, 100);
        assert!(euclid.iter().all(|r| (r.ratio - 1.0).abs() < 1e-9));
        assert!(report.rows.iter().filter(|r| r.heuristic == "zero").all(|r| (r.ratio - 1.0).abs() < 1e-9));
    }

    #[test]
    fn weighted_rows_respect_the_bound() {
        let params = WeightParams::with_bounds(Vec3::new(1.0, 1.0, 0.0), 0.5, 0.1, 2.0).unwrap();
        let spec = HeuristicSpec::velocity_weighted(BaseHeuristic::Euclidean, params);
        let report = compare_heuristics(&suite(0..100), &[spec]).unwrap();
        report.validate().unwrap();
        assert!(report.rows.iter().all(|r| r.ratio <= 2.0 + 1e-9));
    }

    #[test]
    fn rows_sorted_by_instance_then_label() {
        let report = compare_heuristics(
            &suite(0..5),
            &[HeuristicSpec::zero(), HeuristicSpec::euclidean(), HeuristicSpec::diagonal()],
        )
        .unwrap();
        let first: Vec<_> = report.rows.iter().take(4).map(|r| r.heuristic.as_str()).collect();
        assert_eq!(first, ["diagonal", "dijkstra", "euclidean", "zero"]);
        let labels: Vec<_> = report.aggregates.iter().map(|a| a.heuristic.as_str()).collect();
        assert_eq!(labels, ["diagonal", "dijkstra", "euclidean", "zero"]);
    }

    #[test]
    fn usage_errors() {
        assert!(compare_heuristics(&suite(0..5), &[]).is_err());
        assert!(compare_heuristics(&suite(3..3), &[HeuristicSpec::zero()]).is_err());
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(emit_report(&BenchReport::default(), ReportFormat::Csv), format!("{REPORT_CSV_HEADER}\n"));
        let row = ReportRow {
            instance: "7".into(),
            heuristic: "velocity:euclidean:1,1,0:0.5:0.1:2".into(),
            cost: 3.0,
            optimal: 2.0,
            ratio: 1.5,
            expansions: 12,
            reopenings: 1,
            wall_ms: 0.0,
        };
        let csv = emit_report(&BenchReport::from_rows(vec![row], 0), ReportFormat::Csv);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().nth(1).unwrap(), "7,\"velocity:euclidean:1,1,0:0.5:0.1:2\",3,2,1.5,12,1,0");
    }

    #[test]
    fn json_round_trip() {
        let report = compare_heuristics(
            &BenchSuite { timing: true, ..suite(0..10) },
            &[HeuristicSpec::euclidean(), HeuristicSpec::diagonal()],
        )
        .unwrap();
        let parsed = parse_report_json(&emit_report(&report, ReportFormat::Json)).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn validate_catches_tampering() {
        let mut report = compare_heuristics(&suite(0..3), &[HeuristicSpec::euclidean()]).unwrap();
        report.rows[0].ratio += 1e-6;
        assert!(report.validate().is_err());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
