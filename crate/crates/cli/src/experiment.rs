use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use qnfl_core::exper::{
    aggregate, emit_csv, emit_plot, run_experiment, Aggregate, Experiment, ExperimentConfig,
};

use crate::commands::usage;
use crate::{ExpArgs, Format};

/// Recursively overlays `patch` onto `base` (objects merge, anything else replaces).
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k).or_insert(Value::Null), v);
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Desk defaults for the requested qubit count, then the config file, then flags.
pub fn resolve(exp: Experiment, a: &ExpArgs) -> Result<ExperimentConfig> {
    let n = a.qubits.unwrap_or(3);
    let mut value = serde_json::to_value(ExperimentConfig::desk_for(exp, n))?;
    if let Some(path) = &a.config {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let patch: Value = serde_json::from_str(&text)
            .map_err(|e| usage(format!("--config {}: {e}", path.display())))?;
        merge(&mut value, patch);
    }
    let mut cfg: ExperimentConfig =
        serde_json::from_value(value).map_err(|e| usage(format!("invalid config: {e}")))?;
    if cfg.experiment != exp {
        return Err(usage(format!(
            "config file is for {}, but the subcommand runs {}",
            cfg.experiment, exp
        )));
    }
    if let Some(n) = a.qubits {
        cfg.n_qubits = n;
    }
    if let Some(v) = a.reps {
        cfg.repetitions = v;
    }
    if let Some(v) = a.layers {
        cfg.layers = v;
    }
    if let Some(v) = a.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = &a.t_list {
        cfg.t_values = v.clone();
    }
    if let Some(v) = &a.rbar_list {
        if exp != Experiment::VaryingRank {
            return Err(usage("--rbar-list only applies to exp1"));
        }
        cfg.r_bar_values = v.clone();
    }
    if let Some(v) = a.rank {
        if exp == Experiment::VaryingRank {
            return Err(usage(
                "--rank only applies to exp2 and exp3; use --rbar-list for exp1",
            ));
        }
        cfg.fixed_rank = Some(v);
    }
    if let Some(v) = a.max_iters {
        cfg.trainer.max_iters = v;
    }
    if let Some(v) = a.lr {
        cfg.trainer.lr = v;
    }
    if let Some(v) = a.target_loss {
        cfg.trainer.target_loss = v;
    }
    if a.fixed_iterations {
        cfg.trainer.fixed_iterations = true;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn print_table(agg: &Aggregate) {
    println!(
        "{:>4} {:>4} {:>4} {:>4} {:>5} {:>9} {:>9} {:>9} {:>10}",
        "d", "t", "rank", "n", "conv", "risk", "std", "bound", "mean_loss"
    );
    for c in &agg.cells {
        println!(
            "{:>4} {:>4} {:>4} {:>4} {:>5} {:>9.4} {:>9.4} {:>9.4} {:>10.2e}",
            c.d,
            c.t,
            c.rank_spec,
            c.n,
            c.n_converged,
            c.mean_risk,
            c.std_risk,
            c.bound,
            c.mean_loss
        );
    }
    if agg.excluded > 0 {
        println!(
            "excluded {} rows that failed the structure check",
            agg.excluded
        );
    }
}

fn write_summary(
    agg: &Aggregate,
    cfg: &ExperimentConfig,
    dir: &Path,
    format: Format,
) -> Result<PathBuf> {
    match format {
        Format::Csv => {
            let path = dir.join("summary.csv");
            let mut w = csv::Writer::from_path(&path)?;
            for c in &agg.cells {
                w.serialize(c)?;
            }
            w.flush()?;
            Ok(path)
        }
        Format::Json => {
            let path = dir.join("summary.json");
            let body = json!({ "config": cfg, "excluded": agg.excluded, "cells": agg.cells });
            std::fs::write(&path, serde_json::to_string_pretty(&body)? + "\n")?;
            Ok(path)
        }
    }
}

pub fn run(exp: Experiment, a: ExpArgs) -> Result<()> {
    let cfg = resolve(exp, &a)?;
    let dir = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results").join(exp.name()));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let records = match a.jobs {
        Some(0) => return Err(usage("--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| run_experiment(&cfg))?,
        None => run_experiment(&cfg)?,
    };
    let agg = aggregate(&records);
    let config_json = serde_json::to_string_pretty(&cfg)?;

    std::fs::write(dir.join("config.json"), config_json.clone() + "\n")?;
    emit_csv(&records, &dir.join("records.csv"))?;
    let summary = write_summary(&agg, &cfg, &dir, a.format)?;
    let title = format!("{} (d = {}, {} reps)", exp.name(), cfg.d(), cfg.repetitions);
    emit_plot(&agg, &dir.join("plot.svg"), &title, Some(&config_json))?;

    print_table(&agg);
    eprintln!(
        "wrote {}, {}, {} and {}",
        dir.join("records.csv").display(),
        summary.display(),
        dir.join("plot.svg").display(),
        dir.join("config.json").display()
    );
    Ok(())
}
