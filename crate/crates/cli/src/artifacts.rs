//! CSV and JSON artifact writers. All numbers are written with 17
//! significant digits so files round-trip bit-exactly and rerunning the
//! same manifest reproduces byte-identical output.

use std::fs;
use std::path::Path;

use dmulti_mads::{
    Error, Evaluation, IncumbentEntry, ProblemSpec, Result, RunResult, SolverConfig, StopReason,
};

use crate::manifest::variant_name;

pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn stop_reason_name(reason: StopReason) -> &'static str {
    match reason {
        StopReason::Budget => "budget",
        StopReason::MeshTol => "mesh_tol",
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn push_row(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn header(out: &mut String, groups: &[(&str, usize)], tail: &[&str]) {
    let mut cols: Vec<String> = Vec::new();
    for (prefix, count) in groups {
        cols.extend((1..=*count).map(|i| format!("{prefix}_{i}")));
    }
    cols.extend(tail.iter().map(|s| s.to_string()));
    push_row(out, &cols);
}

/// front.csv: the feasible nondominated points, x columns then f columns.
pub fn write_front_csv(path: &Path, spec: &ProblemSpec<f64>, front: &[Evaluation<f64>]) -> Result<()> {
    let mut text = String::new();
    header(&mut text, &[("x", spec.n), ("f", spec.m)], &[]);
    for e in front {
        let fields: Vec<String> = e.x.iter().chain(&e.f).copied().map(fmt17).collect();
        push_row(&mut text, &fields);
    }
    write_text(path, &text)
}

/// infeasible_front.csv: x, f, and the violation h.
pub fn write_infeasible_csv(
    path: &Path,
    spec: &ProblemSpec<f64>,
    front: &[IncumbentEntry<f64>],
) -> Result<()> {
    let mut text = String::new();
    header(&mut text, &[("x", spec.n), ("f", spec.m)], &["h"]);
    for entry in front {
        let e = &entry.eval;
        let mut fields: Vec<String> = e.x.iter().chain(&e.f).copied().map(fmt17).collect();
        fields.push(fmt17(e.h));
        push_row(&mut text, &fields);
    }
    write_text(path, &text)
}

/// history.csv: every budget-consuming evaluation in order.
pub fn write_history_csv(
    path: &Path,
    spec: &ProblemSpec<f64>,
    result: &RunResult<f64>,
) -> Result<()> {
    let mut text = String::new();
    let mut cols: Vec<String> = vec!["eval_index".into(), "iteration".into(), "kind".into()];
    cols.extend((1..=spec.n).map(|i| format!("x_{i}")));
    cols.extend((1..=spec.m).map(|i| format!("f_{i}")));
    cols.extend((1..=spec.j).map(|i| format!("c_{i}")));
    cols.push("h".into());
    push_row(&mut text, &cols);
    for rec in &result.history {
        let e = &rec.eval;
        let mut fields = vec![
            rec.eval_index.to_string(),
            rec.iteration.to_string(),
            rec.kind.as_str().to_string(),
        ];
        fields.extend(e.x.iter().chain(&e.f).chain(&e.c).copied().map(fmt17));
        fields.push(fmt17(e.h));
        push_row(&mut text, &fields);
    }
    write_text(path, &text)
}

/// convergence_profile.csv: evaluation count versus normalized hypervolume.
pub fn write_profile_csv(path: &Path, rows: &[(usize, f64)]) -> Result<()> {
    let mut text = String::from("evals,normalized_hv\n");
    for (evals, value) in rows {
        push_row(&mut text, &[evals.to_string(), fmt17(*value)]);
    }
    write_text(path, &text)
}

/// data_profile CSV: group count versus fraction of cells solved.
pub fn write_data_profile_csv(path: &Path, rows: &[(usize, f64)]) -> Result<()> {
    let mut text = String::from("k,fraction\n");
    for (k, fraction) in rows {
        push_row(&mut text, &[k.to_string(), fmt17(*fraction)]);
    }
    write_text(path, &text)
}

pub fn config_json(cfg: &SolverConfig<f64>) -> serde_json::Value {
    serde_json::json!({
        "variant": variant_name(cfg.variant),
        "budget": cfg.budget,
        "tau": cfg.tau,
        "w_plus": cfg.w_plus,
        "rho": cfg.rho,
        "delta0": cfg.delta0,
        "mesh_tol": cfg.mesh_tol,
        "eps_penalty": cfg.eps_penalty,
        "rng_seed": cfg.rng_seed,
        "opportunistic": cfg.opportunistic,
        "speculative": cfg.speculative,
    })
}

/// run.json: machine-readable run summary with a config echo.
pub fn write_run_json(
    path: &Path,
    problem: &str,
    cfg: &SolverConfig<f64>,
    starts: &[Vec<f64>],
    result: &RunResult<f64>,
) -> Result<()> {
    let value = serde_json::json!({
        "format_version": 1,
        "problem": problem,
        "config": config_json(cfg),
        "starts": starts,
        "eval_count": result.eval_count,
        "stop_reason": stop_reason_name(result.stop_reason),
        "iterations": result.iterations.len(),
        "front_size": result.pareto_approx.len(),
        "infeasible_front_size": result.infeasible_front.len(),
    });
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::Config(format!("cannot encode run.json: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}
