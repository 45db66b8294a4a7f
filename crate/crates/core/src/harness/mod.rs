//! Scenario files, heuristic comparison reports and SVG rendering.

mod report;
mod scenario;
mod svg;

pub use report::{
    compare_heuristics, emit_report, parse_report_json, AggregateRow, BenchReport, BenchSuite, ReportFormat, ReportRow,
    REPORT_CSV_HEADER,
};
pub use scenario::{run_scenario, Algorithm, LoadedDomain, LoadedScenario, MapSource, NodeSpec, Scenario, ScenarioOptions, ScenarioOutcome, VoxelMap};
pub use svg::render_path_svg;

/// Quotes a CSV field when it contains a separator, quote or newline.
pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
