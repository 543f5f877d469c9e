//! Effective run configuration, echoed into every output.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hyperbeta::{Damping, Variant};
use serde::{Deserialize, Serialize};

use crate::CliResult;

pub const CONFIG_PREFIX: &str = "# config: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fixedpoint,
    Ips,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Edges,
    Degrees,
}

/// Iteration controls of the fixed-point fitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solver {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: String,
}

impl Default for Solver {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 5000,
            damping: Damping::default().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub input: PathBuf,
    pub model: Variant,
    pub n: usize,
    pub sizes: Vec<usize>,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    /// Only used by the fixed-point method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub model: Variant,
    pub n: usize,
    pub sizes: Vec<usize>,
    /// Parameter file; without it and without `density`, every `β_i = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<PathBuf>,
    /// Uniform draws with a fixed number of edges instead of model draws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    pub replicates: usize,
    pub seed: u64,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtConfig {
    pub input: PathBuf,
    pub n: usize,
    pub sizes: Vec<usize>,
    /// Hypergraphs behind averaged degrees; taken from the block count for edge lists.
    pub observations: usize,
    #[serde(flatten)]
    pub solver: Solver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub model: Variant,
    pub n: usize,
    pub sizes: Vec<usize>,
    pub densities: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub solver: Solver,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Fit(FitConfig),
    Simulate(SimulateConfig),
    Lrt(LrtConfig),
    ScanExistence(ScanConfig),
}

impl RunConfig {
    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Fit(_) => "fit",
            RunConfig::Simulate(_) => "simulate",
            RunConfig::Lrt(_) => "lrt",
            RunConfig::ScanExistence(_) => "scan-existence",
        }
    }

    /// The `# config: {...}` line that opens text outputs.
    pub fn comment_line(&self) -> String {
        format!(
            "{CONFIG_PREFIX}{}\n",
            serde_json::to_string(self).expect("config serializes")
        )
    }
}

/// Reads a configuration from a JSON output (its `config` member), a bare
/// configuration object, or a text output opening with a `# config:` line.
pub fn load(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let parse = |s: &str| -> CliResult<RunConfig> {
        serde_json::from_str(s)
            .map_err(|e| format!("invalid config in {}: {e}", path.display()).into())
    };
    if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
        let inner = value.get("config").cloned().unwrap_or(value);
        return serde_json::from_value(inner)
            .map_err(|e| format!("invalid config in {}: {e}", path.display()).into());
    }
    match text.lines().find_map(|l| l.strip_prefix(CONFIG_PREFIX)) {
        Some(line) => parse(line),
        None => Err(format!("no configuration found in {}", path.display()).into()),
    }
}

pub fn parse_damping(s: &str) -> CliResult<Damping> {
    Ok(s.parse::<Damping>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit() -> RunConfig {
        RunConfig::Fit(FitConfig {
            input: "d.txt".into(),
            model: Variant::Uniform,
            n: 10,
            sizes: vec![3],
            method: Method::Fixedpoint,
            tol: 1e-10,
            max_iter: 5000,
            damping: Some("fallback".into()),
            format: Format::Json,
        })
    }

    #[test]
    fn round_trips_through_json_and_comment() {
        let c = fit();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(r#"{"command":"fit""#));
        assert_eq!(serde_json::from_str::<RunConfig>(&json).unwrap(), c);

        let dir = tempfile::tempdir().unwrap();
        let text = dir.path().join("out.txt");
        std::fs::write(&text, format!("{}n=3\n1 2\n", c.comment_line())).unwrap();
        assert_eq!(load(&text).unwrap(), c);

        let wrapped = dir.path().join("out.json");
        std::fs::write(
            &wrapped,
            format!(r#"{{"config": {json}, "status": "converged"}}"#),
        )
        .unwrap();
        assert_eq!(load(&wrapped).unwrap(), c);
    }

    #[test]
    fn flattened_solver() {
        let c = RunConfig::Lrt(LrtConfig {
            input: "x".into(),
            n: 10,
            sizes: vec![2, 3],
            observations: 5,
            solver: Solver::default(),
        });
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["damping"], "fallback");
        assert_eq!(v["command"], "lrt");
        assert_eq!(serde_json::from_value::<RunConfig>(v).unwrap(), c);
    }
}
