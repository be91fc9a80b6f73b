//! Run manifests: what to solve, with which settings, and where results go.
//! Assembled from defaults, an optional JSON config file, and CLI flags,
//! in that precedence order.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

use dmulti_mads::{
    Blackbox, BuiltinProblem, Error, ExternalBlackbox, ProblemSpec, Result, SolverConfig, Variant,
};

/// Short variant code used on the command line and in artifact files.
pub fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::ExtremeBarrier => "eb",
        Variant::TwoPhase => "teb",
        Variant::ProgressiveBarrier => "pb",
        Variant::Penalty => "penalty",
    }
}

pub fn parse_variant(s: &str) -> Result<Variant> {
    match s.to_lowercase().as_str() {
        "eb" => Ok(Variant::ExtremeBarrier),
        "teb" => Ok(Variant::TwoPhase),
        "pb" => Ok(Variant::ProgressiveBarrier),
        "penalty" => Ok(Variant::Penalty),
        _ => Err(Error::Config(format!(
            "unknown variant {s:?} (available: eb, teb, pb, penalty)"
        ))),
    }
}

/// Solver settings as they appear in a JSON config file. Every field is
/// optional; unknown keys are rejected so typos fail loudly.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub variant: Option<String>,
    pub budget: Option<usize>,
    pub tau: Option<f64>,
    pub w_plus: Option<i32>,
    pub rho: Option<f64>,
    pub delta0: Option<f64>,
    pub mesh_tol: Option<f64>,
    pub eps_penalty: Option<f64>,
    pub rng_seed: Option<u64>,
    pub opportunistic: Option<bool>,
    pub speculative: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))
    }

    pub fn apply(&self, cfg: &mut SolverConfig<f64>) -> Result<()> {
        if let Some(v) = &self.variant {
            cfg.variant = parse_variant(v)?;
        }
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            };
        }
        take!(budget);
        take!(tau);
        take!(w_plus);
        take!(rho);
        take!(delta0);
        take!(mesh_tol);
        take!(eps_penalty);
        take!(rng_seed);
        take!(opportunistic);
        take!(speculative);
        Ok(())
    }
}

/// Which blackbox a manifest runs: a builtin by name, or an external
/// command with an explicit problem signature.
#[derive(Debug, Clone)]
pub enum ProblemSelector {
    Builtin(String),
    External { cmd: String, timeout: Duration, spec: ProblemSpec<f64> },
}

impl ProblemSelector {
    /// Canonical label for summaries and file headers.
    pub fn label(&self) -> String {
        match self {
            ProblemSelector::Builtin(name) => name.clone(),
            ProblemSelector::External { spec, .. } => spec.name.clone(),
        }
    }

    pub fn spec(&self) -> Result<ProblemSpec<f64>> {
        match self {
            ProblemSelector::Builtin(name) => {
                Ok(BuiltinProblem::by_name(name)?.spec().clone())
            }
            ProblemSelector::External { spec, .. } => Ok(spec.clone()),
        }
    }

    /// Fixture name for the reference front, when one can exist.
    pub fn fixture_name(&self) -> Option<&str> {
        match self {
            ProblemSelector::Builtin(name) => Some(name),
            ProblemSelector::External { .. } => None,
        }
    }

    /// Fresh blackbox instance for one run.
    pub fn instantiate(&self) -> Result<Box<dyn Blackbox<f64>>> {
        match self {
            ProblemSelector::Builtin(name) => Ok(Box::new(BuiltinProblem::by_name(name)?)),
            ProblemSelector::External { cmd, timeout, spec } => {
                Ok(Box::new(ExternalBlackbox::new(cmd, *timeout, spec.clone())?))
            }
        }
    }
}

/// One solve request: problem, settings, starts, output directory, and the
/// seeds to replicate over. Invariant: replications equals the seed count.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub problem: ProblemSelector,
    pub config: SolverConfig<f64>,
    pub starts: Vec<Vec<f64>>,
    pub out: PathBuf,
    pub replications: usize,
    pub seeds: Vec<u64>,
}

impl RunManifest {
    pub fn validate(&self) -> Result<()> {
        if self.replications != self.seeds.len() {
            return Err(Error::Config(format!(
                "replications = {} but {} seeds given",
                self.replications,
                self.seeds.len()
            )));
        }
        if self.starts.is_empty() {
            return Err(Error::Config("at least one start point is required".into()));
        }
        self.config.validate()
    }
}

/// Starts file: one point per line, fields separated by whitespace or
/// commas; blank lines and lines starting with # are skipped.
pub fn read_starts_file(path: &Path, n: usize) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read starts {}: {e}", path.display())))?;
    let mut starts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let point: std::result::Result<Vec<f64>, _> = line
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(str::parse::<f64>)
            .collect();
        let point = point.map_err(|e| {
            Error::Config(format!("{}:{}: bad number: {e}", path.display(), lineno + 1))
        })?;
        if point.len() != n {
            return Err(Error::Config(format!(
                "{}:{}: start has {} coordinates, expected {n}",
                path.display(),
                lineno + 1,
                point.len()
            )));
        }
        starts.push(point);
    }
    if starts.is_empty() {
        return Err(Error::Config(format!("no start points in {}", path.display())));
    }
    Ok(starts)
}

/// Comma-separated float list from a flag value.
pub fn parse_float_list(what: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|e| Error::Config(format!("bad {what} entry {t:?}: {e}")))
        })
        .collect()
}

/// Comma-separated name list from a flag value.
pub fn parse_name_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}
