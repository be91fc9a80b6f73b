//! Command-line grammar and its translation into manifests.

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use dmulti_mads::{problems, BuiltinProblem, Error, ProblemSpec, Result, SolverConfig};

use crate::commands::BenchSpec;
use crate::manifest::{
    parse_float_list, parse_name_list, parse_variant, ConfigFile, ProblemSelector, RunManifest,
};

#[derive(Parser)]
#[command(
    name = "dmads",
    version,
    about = "Constrained multiobjective blackbox solver: direct multisearch with progressive-barrier constraint handling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run one solve and write front/history artifacts
    Solve(SolveArgs),
    /// Run a benchmark cross product and write data profiles
    Bench(BenchArgs),
    /// Regenerate brute-force reference fronts
    RefFront(RefFrontArgs),
}

#[derive(Args)]
pub struct SolveArgs {
    /// Builtin problem name (bnh, srn, tnk, osy, constr, cdtlz2)
    #[arg(long)]
    pub problem: Option<String>,
    /// External blackbox command; needs --n, --m, --j, --lower, --upper,
    /// and --starts-file
    #[arg(long)]
    pub external_cmd: Option<String>,
    /// Decision variables of the external problem
    #[arg(long)]
    pub n: Option<usize>,
    /// Objectives of the external problem
    #[arg(long)]
    pub m: Option<usize>,
    /// Relaxable constraints of the external problem
    #[arg(long)]
    pub j: Option<usize>,
    /// Comma-separated lower bounds
    #[arg(long)]
    pub lower: Option<String>,
    /// Comma-separated upper bounds
    #[arg(long)]
    pub upper: Option<String>,
    /// Per-evaluation timeout for the external command, seconds
    #[arg(long, default_value_t = 3600.0)]
    pub external_timeout_secs: f64,
    /// Constraint handling: eb, teb, pb, or penalty
    #[arg(long)]
    pub variant: Option<String>,
    /// Evaluation budget, start points included
    #[arg(long)]
    pub budget: Option<usize>,
    /// RNG seed (base seed when --replications > 1)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Frame shrink factor in (0, 1)
    #[arg(long)]
    pub tau: Option<f64>,
    /// Frame-center selection window exponent
    #[arg(long)]
    pub wplus: Option<i32>,
    /// Feasible-success threshold for frame-center ordering
    #[arg(long)]
    pub rho: Option<f64>,
    /// Initial frame size in mesh-scale units
    #[arg(long)]
    pub delta0: Option<f64>,
    /// Stop when every active frame's mesh size is below this
    #[arg(long)]
    pub mesh_tol: Option<f64>,
    /// Penalty variant weight (objectives gain violation/eps)
    #[arg(long)]
    pub eps_penalty: Option<f64>,
    /// JSON config file mirroring solver settings; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Start points, one per line; defaults to the builtin's known starts
    #[arg(long)]
    pub starts_file: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// Independent replications; seeds are seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
}

impl SolveArgs {
    fn selector(&self) -> Result<ProblemSelector> {
        match (&self.problem, &self.external_cmd) {
            (Some(_), Some(_)) => {
                Err(Error::Config("give either --problem or --external-cmd, not both".into()))
            }
            (None, None) => Err(Error::Config("one of --problem or --external-cmd is required".into())),
            (Some(name), None) => {
                // Resolve now so an unknown name fails before any setup.
                let spec = BuiltinProblem::by_name(name)?;
                Ok(ProblemSelector::Builtin(dmulti_mads::Blackbox::spec(&spec).name.clone()))
            }
            (None, Some(cmd)) => {
                let need = |flag: &str, ok: bool| {
                    if ok {
                        Ok(())
                    } else {
                        Err(Error::Config(format!("--external-cmd requires {flag}")))
                    }
                };
                need("--n", self.n.is_some())?;
                need("--m", self.m.is_some())?;
                need("--j", self.j.is_some())?;
                need("--lower", self.lower.is_some())?;
                need("--upper", self.upper.is_some())?;
                need("--starts-file", self.starts_file.is_some())?;
                if !(self.external_timeout_secs > 0.0) {
                    return Err(Error::Config("--external-timeout-secs must be positive".into()));
                }
                let spec = ProblemSpec::new(
                    "external",
                    self.n.unwrap(),
                    self.m.unwrap(),
                    self.j.unwrap(),
                    parse_float_list("--lower", self.lower.as_ref().unwrap())?,
                    parse_float_list("--upper", self.upper.as_ref().unwrap())?,
                )?;
                Ok(ProblemSelector::External {
                    cmd: cmd.clone(),
                    timeout: Duration::from_secs_f64(self.external_timeout_secs),
                    spec,
                })
            }
        }
    }

    pub fn into_manifest(self) -> Result<RunManifest> {
        let selector = self.selector()?;

        let mut cfg = SolverConfig::<f64>::default();
        if let Some(path) = &self.config {
            ConfigFile::load(path)?.apply(&mut cfg)?;
        }
        if let Some(v) = &self.variant {
            cfg.variant = parse_variant(v)?;
        }
        macro_rules! flag {
            ($field:ident, $arg:ident) => {
                if let Some(v) = self.$arg {
                    cfg.$field = v;
                }
            };
        }
        flag!(budget, budget);
        flag!(rng_seed, seed);
        flag!(tau, tau);
        flag!(w_plus, wplus);
        flag!(rho, rho);
        flag!(delta0, delta0);
        flag!(mesh_tol, mesh_tol);
        flag!(eps_penalty, eps_penalty);

        let spec = selector.spec()?;
        let starts = match &self.starts_file {
            Some(path) => crate::manifest::read_starts_file(path, spec.n)?,
            None => match &selector {
                ProblemSelector::Builtin(name) => {
                    let p = BuiltinProblem::by_name(name)?;
                    vec![p.feasible_start().to_vec(), p.infeasible_start().to_vec()]
                }
                ProblemSelector::External { .. } => unreachable!("checked in selector()"),
            },
        };

        if self.replications == 0 {
            return Err(Error::Config("--replications must be at least 1".into()));
        }
        let seeds: Vec<u64> =
            (0..self.replications as u64).map(|i| cfg.rng_seed.wrapping_add(i)).collect();

        Ok(RunManifest {
            problem: selector,
            config: cfg,
            starts,
            out: self.out,
            replications: self.replications,
            seeds,
        })
    }
}

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated builtin problems
    #[arg(long, default_value = "bnh,srn,tnk,osy,constr,cdtlz2")]
    pub problems: String,
    /// Comma-separated variants to compare
    #[arg(long, default_value = "pb,teb,penalty")]
    pub variants: String,
    /// Evaluation budget per cell
    #[arg(long, default_value_t = 5000)]
    pub budget: usize,
    /// Base seed; replications use seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Replications per (problem, variant)
    #[arg(long, default_value_t = 3)]
    pub replications: usize,
    /// Comma-separated solve tolerances for the data profiles
    #[arg(long, default_value = "0.1")]
    pub eps_tau: String,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

impl BenchArgs {
    pub fn into_spec(self) -> Result<BenchSpec> {
        if self.replications == 0 {
            return Err(Error::Config("--replications must be at least 1".into()));
        }
        let variants = parse_name_list(&self.variants)
            .iter()
            .map(|v| parse_variant(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(BenchSpec {
            problems: parse_name_list(&self.problems),
            variants,
            budget: self.budget,
            seeds: (0..self.replications as u64).map(|i| self.seed.wrapping_add(i)).collect(),
            eps_taus: parse_float_list("--eps-tau", &self.eps_tau)?,
            out: self.out,
        })
    }
}

#[derive(Args)]
pub struct RefFrontArgs {
    /// Builtin problem name, or "all"
    #[arg(long, default_value = "all")]
    pub problem: String,
    /// Output directory; defaults to the committed fixture directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid resolution per dimension (sampled problems ignore this)
    #[arg(long, default_value_t = problems::REF_GRID_PER_DIM)]
    pub grid: usize,
}
