//! JSON experiment specifications.
//!
//! A spec names an experiment kind, a master seed, and whichever sections the
//! kind needs: `graphs` (analyze, simulate, ensemble), `sim` (simulate),
//! `ensemble` (ensemble) or `grid` (sweep, predict). Unknown keys are rejected.

use std::fmt;
use std::path::{Path, PathBuf};

use coinwalk_core::generators::{Family, MaxDegreeRule, WeightSpec, DEFAULT_REGULAR_RETRIES};
use coinwalk_core::graph::Graph;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Analyze,
    Simulate,
    Ensemble,
    Sweep,
    Predict,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Analyze => "analyze",
            Kind::Simulate => "simulate",
            Kind::Ensemble => "ensemble",
            Kind::Sweep => "sweep",
            Kind::Predict => "predict",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Maximum-degree rule for power-law weights: a number or `"sqrt_nd"`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawMaxDegree")]
pub enum MaxDegree {
    Value(f64),
    SqrtNd,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMaxDegree {
    Number(f64),
    Name(String),
}

impl TryFrom<RawMaxDegree> for MaxDegree {
    type Error = String;

    fn try_from(raw: RawMaxDegree) -> Result<MaxDegree, String> {
        match raw {
            RawMaxDegree::Number(m) => Ok(MaxDegree::Value(m)),
            RawMaxDegree::Name(s) if s == "sqrt_nd" => Ok(MaxDegree::SqrtNd),
            RawMaxDegree::Name(s) => Err(format!("m must be a number or \"sqrt_nd\", got \"{s}\"")),
        }
    }
}

impl From<MaxDegree> for MaxDegreeRule {
    fn from(m: MaxDegree) -> MaxDegreeRule {
        match m {
            MaxDegree::Value(v) => MaxDegreeRule::Explicit(v),
            MaxDegree::SqrtNd => MaxDegreeRule::SqrtNd,
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_regular_retries() -> u32 {
    DEFAULT_REGULAR_RETRIES
}

/// One graph recipe, tagged by `family`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Complete {
        n: usize,
    },
    Circulant {
        n: usize,
        k: usize,
    },
    RandomRegular {
        n: usize,
        r: usize,
        #[serde(default = "default_regular_retries")]
        max_retries: u32,
        #[serde(default)]
        require_connected: Option<u32>,
    },
    Gnp {
        n: usize,
        p: f64,
        #[serde(default)]
        self_loops: bool,
        #[serde(default)]
        require_connected: Option<u32>,
    },
    PowerLaw {
        n: usize,
        gamma: f64,
        d: f64,
        m: MaxDegree,
        #[serde(default = "default_true")]
        self_loops: bool,
        #[serde(default)]
        require_connected: Option<u32>,
    },
    UniformWeights {
        n: usize,
        w: f64,
        #[serde(default = "default_true")]
        self_loops: bool,
        #[serde(default)]
        require_connected: Option<u32>,
    },
    Weights {
        weights: Vec<f64>,
        #[serde(default = "default_true")]
        self_loops: bool,
        #[serde(default)]
        require_connected: Option<u32>,
    },
    Edges {
        n: usize,
        edges: Vec<(u32, u32)>,
        #[serde(default)]
        self_loops: bool,
    },
    EdgeList {
        path: PathBuf,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        self_loops: bool,
    },
}

impl GraphSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GraphSpec::Complete { .. } => "complete",
            GraphSpec::Circulant { .. } => "circulant",
            GraphSpec::RandomRegular { .. } => "random_regular",
            GraphSpec::Gnp { .. } => "gnp",
            GraphSpec::PowerLaw { .. } => "power_law",
            GraphSpec::UniformWeights { .. } => "uniform_weights",
            GraphSpec::Weights { .. } => "weights",
            GraphSpec::Edges { .. } => "edges",
            GraphSpec::EdgeList { .. } => "edge_list",
        }
    }

    pub fn require_connected(&self) -> Option<u32> {
        match self {
            GraphSpec::RandomRegular { require_connected, .. }
            | GraphSpec::Gnp { require_connected, .. }
            | GraphSpec::PowerLaw { require_connected, .. }
            | GraphSpec::UniformWeights { require_connected, .. }
            | GraphSpec::Weights { require_connected, .. } => *require_connected,
            _ => None,
        }
    }

    /// Cheap parameter checks that do not need to build anything.
    fn validate(&self) -> Result<(), String> {
        match self {
            GraphSpec::Complete { n }
            | GraphSpec::Circulant { n, .. }
            | GraphSpec::RandomRegular { n, .. }
            | GraphSpec::Gnp { n, .. }
            | GraphSpec::PowerLaw { n, .. }
            | GraphSpec::UniformWeights { n, .. }
            | GraphSpec::Edges { n, .. }
                if *n == 0 =>
            {
                Err("n must be at least 1".into())
            }
            GraphSpec::Gnp { p, .. } if !(*p > 0.0 && *p <= 1.0) => Err(format!("p must lie in (0, 1], got {p}")),
            GraphSpec::PowerLaw { gamma, d, m, .. } => {
                if !(*gamma > 2.0) {
                    return Err("gamma must exceed 2".into());
                }
                if !(*d > 0.0) {
                    return Err("d must be positive".into());
                }
                match m {
                    MaxDegree::Value(m) if !(*m > *d) => Err(format!("m must exceed d, got m={m}, d={d}")),
                    _ => Ok(()),
                }
            }
            GraphSpec::UniformWeights { w, .. } if !(*w > 0.0) => Err("w must be positive".into()),
            GraphSpec::Weights { weights, .. } if weights.is_empty() => Err("weights must be non-empty".into()),
            _ => Ok(()),
        }
    }

    /// The generator family, reading edge-list files relative to `base`.
    pub fn to_family(&self, base: &Path) -> coinwalk_core::Result<Family> {
        Ok(match self.clone() {
            GraphSpec::Complete { n } => Family::Complete { n },
            GraphSpec::Circulant { n, k } => Family::Circulant { n, k },
            GraphSpec::RandomRegular { n, r, max_retries, .. } => Family::RandomRegular { n, r, max_retries },
            GraphSpec::Gnp { n, p, self_loops, .. } => Family::Gnp { n, p, self_loops },
            GraphSpec::PowerLaw { n, gamma, d, m, self_loops, .. } => Family::ExpectedDegree {
                weights: WeightSpec::PowerLaw { n, gamma, d, m: m.into() },
                self_loops,
            },
            GraphSpec::UniformWeights { n, w, self_loops, .. } => {
                Family::ExpectedDegree { weights: WeightSpec::Uniform { n, w }, self_loops }
            }
            GraphSpec::Weights { weights, self_loops, .. } => {
                Family::ExpectedDegree { weights: WeightSpec::Explicit(weights), self_loops }
            }
            GraphSpec::Edges { n, edges, self_loops } => Family::Edges { n, edges, self_loops },
            GraphSpec::EdgeList { path, n, self_loops } => {
                let path = if path.is_absolute() { path } else { base.join(path) };
                let file = std::io::BufReader::new(std::fs::File::open(&path)?);
                let g = Graph::read_edge_list(file, n, self_loops)?;
                Family::Edges { n: g.n(), edges: g.edges().collect(), self_loops }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub t: f64,
    pub beta: f64,
    pub replicates: usize,
    #[serde(default = "default_init_mode")]
    pub init_mode: String,
}

fn default_init_mode() -> String {
    "stationary".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub replicates: usize,
}

/// Power-law parameter grid; points run with `gamma` outer and `n` inner.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Vec<usize>,
    pub gamma: Vec<f64>,
    pub d: f64,
    #[serde(default = "default_sqrt_nd")]
    pub m: MaxDegree,
    #[serde(default = "default_one")]
    pub graphs_per_point: usize,
    #[serde(default = "default_true")]
    pub self_loops: bool,
}

fn default_sqrt_nd() -> MaxDegree {
    MaxDegree::SqrtNd
}

fn default_one() -> usize {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Relative paths resolve against the spec file's directory.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub graphs: Vec<GraphSpec>,
    #[serde(default)]
    pub sim: Option<SimSection>,
    #[serde(default)]
    pub ensemble: Option<EnsembleSection>,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub output: OutputSection,
    /// Directory that relative edge-list paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn invalid(field: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Invalid { field: field.into(), msg: msg.into() }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<ExperimentSpec, CliError> {
        let spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            msg: strip_position(&e.to_string()),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    /// The kind to run: the one stated in the file, defaulting to `requested`.
    /// A sweep spec may also be run as `predict`.
    pub fn resolve_kind(&self, requested: Option<Kind>) -> Result<Kind, CliError> {
        match (self.kind, requested) {
            (None, None) => Err(invalid("kind", "no experiment kind given")),
            (Some(k), None) | (None, Some(k)) => Ok(k),
            (Some(Kind::Sweep), Some(Kind::Predict)) => Ok(Kind::Predict),
            (Some(a), Some(b)) if a == b => Ok(a),
            (Some(a), Some(b)) => Err(invalid("kind", format!("spec is a {a} experiment, not {b}"))),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (i, g) in self.graphs.iter().enumerate() {
            g.validate().map_err(|msg| invalid(format!("graphs[{i}]"), msg))?;
        }
        if let Some(sim) = &self.sim {
            if !(sim.t >= 0.0) || !sim.t.is_finite() {
                return Err(invalid("sim.t", "t must be finite and non-negative"));
            }
            if !(sim.beta >= 0.0) || !sim.beta.is_finite() {
                return Err(invalid("sim.beta", "beta must be finite and non-negative"));
            }
            if sim.replicates < 2 {
                return Err(invalid("sim.replicates", "at least 2 replicates are needed for a standard error"));
            }
            if sim.init_mode != "stationary" {
                return Err(invalid("sim.init_mode", "only stationary initialisation is supported"));
            }
        }
        if let Some(e) = &self.ensemble {
            if e.replicates < 2 {
                return Err(invalid("ensemble.replicates", "at least 2 replicates are needed"));
            }
        }
        if let Some(grid) = &self.grid {
            if grid.n.is_empty() || grid.gamma.is_empty() {
                return Err(invalid("grid", "n and gamma lists must be non-empty"));
            }
            if grid.n.contains(&0) {
                return Err(invalid("grid.n", "n must be at least 1"));
            }
            if grid.gamma.iter().any(|g| !(*g > 2.0)) {
                return Err(invalid("grid.gamma", "gamma must exceed 2"));
            }
            if !(grid.d > 0.0) {
                return Err(invalid("grid.d", "d must be positive"));
            }
            if let MaxDegree::Value(m) = grid.m {
                if !(m > grid.d) {
                    return Err(invalid("grid.m", "m must exceed d"));
                }
            }
            if grid.graphs_per_point == 0 {
                return Err(invalid("grid.graphs_per_point", "must be at least 1"));
            }
        }
        if let Some(kind) = self.kind {
            self.check_sections(kind)?;
        }
        Ok(())
    }

    /// Checks that the sections `kind` needs are present.
    pub fn check_sections(&self, kind: Kind) -> Result<(), CliError> {
        match kind {
            Kind::Analyze | Kind::Simulate | Kind::Ensemble if self.graphs.is_empty() => {
                Err(invalid("graphs", format!("{kind} needs at least one graph")))
            }
            Kind::Simulate if self.sim.is_none() => Err(invalid("sim", "simulate needs a sim section")),
            Kind::Ensemble if self.ensemble.is_none() => Err(invalid("ensemble", "ensemble needs an ensemble section")),
            Kind::Sweep | Kind::Predict if self.grid.is_none() => Err(invalid("grid", format!("{kind} needs a grid"))),
            _ => Ok(()),
        }
    }
}

/// serde_json appends " at line L column C"; the error carries those separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Reads and validates a spec file.
pub fn parse_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let mut spec = ExperimentSpec::from_json(&text)?;
    spec.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        ExperimentSpec::from_json(text).unwrap_err().to_string()
    }

    #[test]
    fn minimal_simulate() {
        let spec = ExperimentSpec::from_json(
            r#"{"kind": "simulate", "seed": 7,
                "graphs": [{"family": "complete", "n": 10}],
                "sim": {"t": 100, "beta": 0.1, "replicates": 10000}}"#,
        )
        .unwrap();
        assert_eq!(spec.kind, Some(Kind::Simulate));
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.graphs, vec![GraphSpec::Complete { n: 10 }]);
        assert_eq!(spec.sim.as_ref().unwrap().init_mode, "stationary");
    }

    #[test]
    fn gamma_below_two() {
        let e = err(r#"{"kind": "analyze", "graphs": [{"family": "power_law", "n": 100, "gamma": 1.5, "d": 5, "m": 20}]}"#);
        assert!(e.contains("gamma must exceed 2"), "{e}");
        let e = err(r#"{"kind": "sweep", "grid": {"n": [100], "gamma": [1.5], "d": 5}}"#);
        assert!(e.contains("gamma must exceed 2"), "{e}");
    }

    #[test]
    fn unknown_keys_named() {
        let e = err(r#"{"kind": "analyze", "graphs": [{"family": "power_law", "n": 100, "gama": 2.5, "d": 5, "m": 20}]}"#);
        assert!(e.contains("gama"), "{e}");
        let e = err(r#"{"kind": "sweep", "grid": {"n": [100], "gamma": [2.5], "d": 5, "sed": 1}}"#);
        assert!(e.contains("sed"), "{e}");
        let e = err(r#"{"kind": "analyze", "graphz": []}"#);
        assert!(e.contains("graphz"), "{e}");
    }

    #[test]
    fn parse_errors_carry_position() {
        match ExperimentSpec::from_json("{\n  \"kind\": \"analyze\",\n  \"seed\": ,\n}") {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn max_degree_forms() {
        let grid = |m: &str| format!(r#"{{"kind": "sweep", "grid": {{"n": [100], "gamma": [2.5], "d": 5, "m": {m}}}}}"#);
        let spec = ExperimentSpec::from_json(&grid("\"sqrt_nd\"")).unwrap();
        assert_eq!(spec.grid.unwrap().m, MaxDegree::SqrtNd);
        let spec = ExperimentSpec::from_json(&grid("40")).unwrap();
        assert_eq!(spec.grid.unwrap().m, MaxDegree::Value(40.0));
        assert!(err(&grid("\"sqrt\"")).contains("sqrt_nd"));
        assert!(err(&grid("4")).contains("m must exceed d"));
    }

    #[test]
    fn missing_sections() {
        assert!(err(r#"{"kind": "simulate", "graphs": [{"family": "complete", "n": 3}]}"#).contains("sim"));
        assert!(err(r#"{"kind": "analyze"}"#).contains("graphs"));
        assert!(err(r#"{"kind": "sweep"}"#).contains("grid"));
    }

    #[test]
    fn sim_constraints() {
        let sim = |s: &str| {
            format!(r#"{{"kind": "simulate", "graphs": [{{"family": "complete", "n": 3}}], "sim": {s}}}"#)
        };
        assert!(err(&sim(r#"{"t": -1, "beta": 0, "replicates": 10}"#)).contains("sim.t"));
        assert!(err(&sim(r#"{"t": 1, "beta": 0, "replicates": 1}"#)).contains("sim.replicates"));
        assert!(err(&sim(r#"{"t": 1, "beta": 0, "replicates": 10, "init_mode": "fixed"}"#)).contains("stationary"));
    }

    #[test]
    fn kind_resolution() {
        let spec = ExperimentSpec::from_json(r#"{"kind": "sweep", "grid": {"n": [100], "gamma": [3], "d": 5}}"#).unwrap();
        assert_eq!(spec.resolve_kind(Some(Kind::Predict)).unwrap(), Kind::Predict);
        assert_eq!(spec.resolve_kind(None).unwrap(), Kind::Sweep);
        assert!(spec.resolve_kind(Some(Kind::Analyze)).is_err());
    }

    #[test]
    fn family_defaults() {
        let spec = ExperimentSpec::from_json(
            r#"{"graphs": [{"family": "uniform_weights", "n": 4, "w": 2},
                           {"family": "gnp", "n": 4, "p": 0.5}]}"#,
        )
        .unwrap();
        match &spec.graphs[0] {
            GraphSpec::UniformWeights { self_loops, .. } => assert!(*self_loops),
            g => panic!("{g:?}"),
        }
        match &spec.graphs[1] {
            GraphSpec::Gnp { self_loops, .. } => assert!(!*self_loops),
            g => panic!("{g:?}"),
        }
    }
}
