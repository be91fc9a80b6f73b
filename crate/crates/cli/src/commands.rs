//! The three subcommands: solve, bench, and ref-front. Each returns the
//! one-line summaries for stdout; artifacts go to the output directory.

use std::fs;
use std::path::{Path, PathBuf};

use dmulti_mads::{
    data_profile, first_solved_eval, load_reference_front, reference_front, run, write_front_csv,
    BuiltinProblem, Error, ReferenceData, Result, RunResult, SolveRecord, SolverConfig, Variant,
};

use crate::artifacts;
use crate::manifest::{variant_name, RunManifest};

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))
}

/// Run every seed in the manifest, writing one artifact set per seed.
pub fn cmd_solve(manifest: &RunManifest) -> Result<Vec<String>> {
    manifest.validate()?;
    let spec = manifest.problem.spec()?;
    let reference = match manifest.problem.fixture_name() {
        Some(name) => Some(ReferenceData::from_front(load_reference_front(name)?)?),
        None => None,
    };
    let multi = manifest.seeds.len() > 1;
    let mut lines = Vec::new();
    for &seed in &manifest.seeds {
        let mut cfg = manifest.config.clone();
        cfg.rng_seed = seed;
        let dir = if multi {
            manifest.out.join(format!("seed_{seed}"))
        } else {
            manifest.out.clone()
        };
        ensure_dir(&dir)?;
        let mut bb = manifest.problem.instantiate()?;
        let result = run(bb.as_mut(), &manifest.starts, &cfg)?;

        artifacts::write_front_csv(&dir.join("front.csv"), &spec, &result.pareto_approx)?;
        artifacts::write_infeasible_csv(
            &dir.join("infeasible_front.csv"),
            &spec,
            &result.infeasible_front,
        )?;
        artifacts::write_history_csv(&dir.join("history.csv"), &spec, &result)?;
        if let Some(reference) = &reference {
            let stride = (cfg.budget / 100).max(1);
            let rows = dmulti_mads::convergence_profile(&result.history, reference, stride)?;
            artifacts::write_profile_csv(&dir.join("convergence_profile.csv"), &rows)?;
        }
        artifacts::write_run_json(
            &dir.join("run.json"),
            &manifest.problem.label(),
            &cfg,
            &manifest.starts,
            &result,
        )?;

        lines.push(format!(
            "{} {} seed={} evals={} stop={} front={} infeasible={} out={}",
            manifest.problem.label(),
            variant_name(cfg.variant),
            seed,
            result.eval_count,
            artifacts::stop_reason_name(result.stop_reason),
            result.pareto_approx.len(),
            result.infeasible_front.len(),
            dir.display(),
        ));
    }
    Ok(lines)
}

/// Benchmark settings: the cross product to run and where to write it.
#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub problems: Vec<String>,
    pub variants: Vec<Variant>,
    pub budget: usize,
    pub seeds: Vec<u64>,
    pub eps_taus: Vec<f64>,
    pub out: PathBuf,
}

/// Outcome of one (problem, variant, seed) cell.
struct Cell {
    problem: String,
    n: usize,
    variant: Variant,
    seed: u64,
    result: std::result::Result<RunResult<f64>, String>,
    /// First solving evaluation per eps_tau, aligned with BenchSpec.eps_taus.
    solved_at: Vec<Option<usize>>,
}

/// Run the benchmark cross product serially in a fixed order and write one
/// data-profile CSV per (variant, eps_tau) plus a results index. A failed
/// cell is recorded as unsolved and the sweep continues.
pub fn cmd_bench(bench: &BenchSpec) -> Result<Vec<String>> {
    if bench.problems.is_empty() {
        return Err(Error::Config("problem list must not be empty".into()));
    }
    if bench.variants.is_empty() {
        return Err(Error::Config("variant list must not be empty".into()));
    }
    if bench.seeds.is_empty() {
        return Err(Error::Config("at least one seed is required".into()));
    }
    if bench.eps_taus.is_empty() {
        return Err(Error::Config("eps_tau list must not be empty".into()));
    }
    ensure_dir(&bench.out)?;

    // References and problem signatures up front so a missing fixture
    // fails before any solve time is spent.
    let mut references = Vec::new();
    for name in &bench.problems {
        let problem = BuiltinProblem::by_name(name)?;
        let reference = ReferenceData::from_front(load_reference_front(name)?)?;
        references.push((problem, reference));
    }

    let mut cells = Vec::new();
    for &variant in &bench.variants {
        for (problem, reference) in &references {
            for &seed in &bench.seeds {
                let spec = dmulti_mads::Blackbox::spec(problem).clone();
                let starts =
                    vec![problem.feasible_start().to_vec(), problem.infeasible_start().to_vec()];
                let cfg = SolverConfig {
                    variant,
                    budget: bench.budget,
                    rng_seed: seed,
                    ..SolverConfig::default()
                };
                let mut bb = problem.clone();
                let result = run(&mut bb, &starts, &cfg).map_err(|e| e.to_string());
                let solved_at = match &result {
                    Ok(r) => bench
                        .eps_taus
                        .iter()
                        .map(|&eps| first_solved_eval(&r.history, reference, eps))
                        .collect::<Result<Vec<_>>>()?,
                    Err(_) => vec![None; bench.eps_taus.len()],
                };
                cells.push(Cell {
                    problem: spec.name.clone(),
                    n: spec.n,
                    variant,
                    seed,
                    result,
                    solved_at,
                });
            }
        }
    }

    // Groups of n+1 evaluations fit ceil(budget/(n+1)) times in a cell's
    // budget; size the profile to the largest cell.
    let k_max = cells
        .iter()
        .map(|c| bench.budget.div_ceil(c.n + 1))
        .max()
        .unwrap_or(1);
    for &variant in &bench.variants {
        for (ei, &eps) in bench.eps_taus.iter().enumerate() {
            let records: Vec<SolveRecord> = cells
                .iter()
                .filter(|c| c.variant == variant)
                .map(|c| SolveRecord { n: c.n, solved_at: c.solved_at[ei] })
                .collect();
            let rows = data_profile(&records, k_max);
            let path =
                bench.out.join(format!("data_profile_{}_eps{eps}.csv", variant_name(variant)));
            artifacts::write_data_profile_csv(&path, &rows)?;
        }
    }

    let cell_values: Vec<serde_json::Value> = cells
        .iter()
        .map(|c| {
            let solved: serde_json::Map<String, serde_json::Value> = bench
                .eps_taus
                .iter()
                .zip(&c.solved_at)
                .map(|(eps, at)| (format!("{eps}"), serde_json::json!(at)))
                .collect();
            match &c.result {
                Ok(r) => serde_json::json!({
                    "problem": c.problem,
                    "variant": variant_name(c.variant),
                    "seed": c.seed,
                    "n": c.n,
                    "eval_count": r.eval_count,
                    "stop_reason": artifacts::stop_reason_name(r.stop_reason),
                    "front_size": r.pareto_approx.len(),
                    "solved_at": solved,
                    "error": serde_json::Value::Null,
                }),
                Err(msg) => serde_json::json!({
                    "problem": c.problem,
                    "variant": variant_name(c.variant),
                    "seed": c.seed,
                    "n": c.n,
                    "solved_at": solved,
                    "error": msg,
                }),
            }
        })
        .collect();
    let index = serde_json::json!({
        "format_version": 1,
        "budget": bench.budget,
        "problems": bench.problems,
        "variants": bench.variants.iter().copied().map(variant_name).collect::<Vec<_>>(),
        "seeds": bench.seeds,
        "eps_tau": bench.eps_taus,
        "k_max": k_max,
        "cells": cell_values,
    });
    let mut text = serde_json::to_string_pretty(&index)
        .map_err(|e| Error::Config(format!("cannot encode results.json: {e}")))?;
    text.push('\n');
    fs::write(bench.out.join("results.json"), text)
        .map_err(|e| Error::Config(format!("cannot write results.json: {e}")))?;

    let failed = cells.iter().filter(|c| c.result.is_err()).count();
    Ok(vec![format!(
        "bench problems={} variants={} seeds={} cells={} failed={} out={}",
        bench.problems.len(),
        bench.variants.len(),
        bench.seeds.len(),
        cells.len(),
        failed,
        bench.out.display(),
    )])
}

/// Regenerate reference-front fixtures by brute force.
pub fn cmd_ref_front(problem: &str, out: &Path, grid: usize) -> Result<Vec<String>> {
    let names: Vec<&str> = if problem == "all" {
        BuiltinProblem::names().to_vec()
    } else {
        vec![problem]
    };
    ensure_dir(out)?;
    let mut lines = Vec::new();
    for name in names {
        let p = BuiltinProblem::by_name(name)?;
        let front = reference_front(&p, grid)?;
        let path = out.join(format!("{}_front.csv", dmulti_mads::Blackbox::spec(&p).name));
        write_front_csv(&path, &front)?;
        lines.push(format!("{} points={} out={}", name, front.len(), path.display()));
    }
    Ok(lines)
}
