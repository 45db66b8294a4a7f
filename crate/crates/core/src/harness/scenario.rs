use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graphmap::{figure2_fixture, parse_map_text, random_grid, Connectivity, Domain, ExplicitGraph, GridMap, NodeRef};
use crate::heuristics::{HeuristicSpec, WeightParams};
use crate::search::{astar, dijkstra, PlanResult, SearchOptions};
use crate::{Error, Result, Vec3};

use super::ReportRow;

/// A planning query as stored in scenario JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub map: MapSource,
    pub start: NodeSpec,
    pub goal: NodeSpec,
    /// Canonical heuristic text, or `dijkstra` for the exact planner.
    #[serde(default = "default_heuristic")]
    pub heuristic: String,
    /// Vehicle velocity; weights the heuristic when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<Connectivity>,
    #[serde(default)]
    pub options: ScenarioOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Permit `start == goal`.
    #[serde(default)]
    pub allow_same_endpoints: bool,
}

fn default_heuristic() -> String {
    "euclidean".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOptions {
    #[serde(default = "yes")]
    pub reopen: bool,
    #[serde(default)]
    pub max_expansions: Option<usize>,
}

fn yes() -> bool {
    true
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        ScenarioOptions { reopen: true, max_expansions: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSource {
    /// Inline 2D map text.
    Text(String),
    /// Path to a 2D map file, relative to the scenario file.
    File(PathBuf),
    /// Occupied voxels of a 3D map.
    Voxels(VoxelMap),
    /// A built-in graph; only `figure2` exists.
    Fixture(String),
    Random { seed: u64, dims: [usize; 3], density: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoxelMap {
    pub dims: [usize; 3],
    #[serde(default)]
    pub occupied: Vec<[usize; 3]>,
    #[serde(default = "unit_cell")]
    pub cell_size: f64,
}

fn unit_cell() -> f64 {
    1.0
}

/// A grid cell as `[i, j]` / `[i, j, k]`, or a graph node label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeSpec {
    Cell(Vec<usize>),
    Label(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedDomain {
    Grid(GridMap),
    Graph(ExplicitGraph),
}

impl LoadedDomain {
    pub fn as_domain(&self) -> &dyn Domain {
        match self {
            LoadedDomain::Grid(m) => m,
            LoadedDomain::Graph(g) => g,
        }
    }

    pub fn grid(&self) -> Option<&GridMap> {
        match self {
            LoadedDomain::Grid(m) => Some(m),
            LoadedDomain::Graph(_) => None,
        }
    }

    fn resolve(&self, spec: &NodeSpec) -> Result<NodeRef> {
        match (self, spec) {
            (LoadedDomain::Grid(map), NodeSpec::Cell(c)) => {
                let node = match c.as_slice() {
                    [i, j] => NodeRef::cell(*i, *j, 0),
                    [i, j, k] => NodeRef::cell(*i, *j, *k),
                    _ => return Err(Error::InvalidScenario(format!("cell must have 2 or 3 indices, got {c:?}"))),
                };
                map.index_of(&node)?;
                Ok(node)
            }
            (LoadedDomain::Graph(graph), NodeSpec::Label(label)) => graph
                .node_by_label(label)
                .ok_or_else(|| Error::UnknownNode(label.clone())),
            (LoadedDomain::Grid(_), NodeSpec::Label(l)) => {
                Err(Error::InvalidScenario(format!("grid maps address cells by index, got label `{l}`")))
            }
            (LoadedDomain::Graph(_), NodeSpec::Cell(c)) => {
                Err(Error::InvalidScenario(format!("graphs address nodes by label, got cell {c:?}")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Dijkstra,
    AStar(HeuristicSpec),
}

impl Algorithm {
    pub fn label(&self) -> String {
        match self {
            Algorithm::Dijkstra => "dijkstra".into(),
            Algorithm::AStar(spec) => spec.to_string(),
        }
    }
}

/// A scenario with its map resolved and its fields validated.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub name: String,
    pub domain: LoadedDomain,
    pub start: NodeRef,
    pub goal: NodeRef,
    pub algorithm: Algorithm,
    pub options: SearchOptions,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub result: PlanResult,
    /// Dijkstra's run on the same query.
    pub oracle: PlanResult,
    pub row: ReportRow,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Reads a scenario file; relative map paths resolve against its directory.
    pub fn load_file(path: &Path) -> Result<LoadedScenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Scenario::from_json(&text)?.load(path.parent())
    }

    pub fn load(&self, base_dir: Option<&Path>) -> Result<LoadedScenario> {
        let domain = match &self.map {
            MapSource::Text(text) => LoadedDomain::Grid(parse_map_text(text)?),
            MapSource::File(file) => {
                let path = match base_dir {
                    Some(dir) if file.is_relative() => dir.join(file),
                    _ => file.clone(),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                LoadedDomain::Grid(parse_map_text(&text)?)
            }
            MapSource::Voxels(v) => {
                let [w, h, d] = v.dims;
                let mut map = GridMap::new(w, h, d, v.cell_size)?;
                for &[i, j, k] in &v.occupied {
                    map.set_occupied(i, j, k, true)?;
                }
                LoadedDomain::Grid(map)
            }
            MapSource::Fixture(name) if name == "figure2" => LoadedDomain::Graph(figure2_fixture().0),
            MapSource::Fixture(name) => return Err(Error::InvalidScenario(format!("unknown fixture `{name}`"))),
            MapSource::Random { seed, dims, density } => {
                LoadedDomain::Grid(random_grid(*seed, (dims[0], dims[1], dims[2]), *density)?)
            }
        };

        let start = domain.resolve(&self.start)?;
        let goal = domain.resolve(&self.goal)?;
        if start == goal && !self.allow_same_endpoints {
            return Err(Error::InvalidScenario("start equals goal (set allow_same_endpoints)".into()));
        }

        let algorithm = if self.heuristic.trim().eq_ignore_ascii_case("dijkstra") {
            if self.velocity.is_some() {
                return Err(Error::InvalidScenario("dijkstra takes no velocity".into()));
            }
            Algorithm::Dijkstra
        } else {
            let mut spec: HeuristicSpec = self.heuristic.parse()?;
            if let Some(v) = self.velocity {
                if spec.weight.is_some() {
                    return Err(Error::InvalidScenario("velocity given both in the heuristic and the scenario".into()));
                }
                spec.weight = Some(WeightParams::new(v)?);
            }
            Algorithm::AStar(spec)
        };

        let connectivity = match (&domain, self.connectivity) {
            (_, Some(c)) => c,
            (LoadedDomain::Grid(m), None) => Connectivity::default_for_depth(m.depth()),
            (LoadedDomain::Graph(_), None) => Connectivity::default(),
        };
        let options = SearchOptions {
            connectivity,
            allow_reopen: self.options.reopen,
            max_expansions: self.options.max_expansions,
            record_trace: true,
        };
        Ok(LoadedScenario {
            name: self.name.clone().unwrap_or_else(|| "scenario".into()),
            domain,
            start,
            goal,
            algorithm,
            options,
        })
    }
}

impl LoadedScenario {
    pub fn run(&self) -> Result<ScenarioOutcome> {
        let domain = self.domain.as_domain();
        let clock = Instant::now();
        let result = match &self.algorithm {
            Algorithm::Dijkstra => dijkstra(domain, &self.start, &self.goal, &self.options)?,
            Algorithm::AStar(spec) => astar(domain, &self.start, &self.goal, spec, &self.options)?,
        };
        let wall_ms = clock.elapsed().as_secs_f64() * 1e3;
        let oracle_opts = SearchOptions { record_trace: false, max_expansions: None, ..self.options };
        let oracle = dijkstra(domain, &self.start, &self.goal, &oracle_opts)?;
        let row = ReportRow::new(&self.name, &self.algorithm.label(), &result, oracle.cost, wall_ms);
        Ok(ScenarioOutcome { result, oracle, row })
    }
}

/// Loads and runs a scenario whose map paths are absolute or relative to
/// the working directory.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioOutcome> {
    scenario.load(None)?.run()
}
