use std::path::{Path, PathBuf};

use qwsearch::{predicted_probability, run, run_skw1, Algorithm, PauliSelection, ProductSearch, RunOptions, RunResult64};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::families::{Family, Prepared};
use crate::output::{write_csv, write_json, Aggregates, DeviationCheck, ResultRow, Summary, RESULT_COLUMNS, SCHEMA_VERSION};

pub struct Outcome {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
}

impl ExperimentConfig {
    /// Runner options for one seed.
    pub fn run_options(&self, seed: u64) -> RunOptions {
        RunOptions {
            metric: self.metric,
            targets: self.targets.clone(),
            oskw_normalization: self.oskw_normalization,
            engine: self.engine,
            pauli: PauliSelection::Auto,
            search: ProductSearch {
                restarts: self.restarts,
                sweep_cap: self.tolerances.optimizer_sweep_cap,
                tolerance: self.tolerances.optimizer_convergence,
                seed,
                warm_start: true,
            },
            measure_entanglement: true,
            tolerances: self.tolerances.clone(),
            guards: self.guards.clone(),
        }
    }
}

fn invariant_from(message: String) -> HarnessError {
    match message.split_once(':') {
        Some((name, detail)) => HarnessError::invariant(name.trim(), detail.trim()),
        None => HarnessError::invariant(message, ""),
    }
}

/// Checks that `p_pred` is what the emitted measures predict.
pub fn check_prediction(variant: Algorithm, result: &RunResult64) -> Result<()> {
    let recomputed = predicted_probability(variant, &result.resource)?;
    if (recomputed - result.p_pred).abs() > 1e-12 {
        return Err(HarnessError::invariant("prediction consistency", format!("stored {} vs recomputed {recomputed}", result.p_pred)));
    }
    Ok(())
}

fn run_one(cfg: &ExperimentConfig, family: &Family, seed: u64) -> Result<ResultRow> {
    let opts = cfg.run_options(seed);
    let plan = cfg.plan();
    let result = match family.build(cfg.directions(), seed)? {
        Prepared::Pure(state) => run(cfg.variant, &state, Some(plan), &opts)?,
        Prepared::Mixed(ensemble) => run_skw1(&ensemble, &plan, &opts)?,
    };
    result.check_invariants(cfg.oskw_normalization).map_err(invariant_from)?;
    check_prediction(cfg.variant, &result)?;
    let row = ResultRow {
        experiment_id: cfg.experiment_id.clone(),
        variant: cfg.variant.name().to_string(),
        n: cfg.n,
        tau: result.plan.tau,
        seed,
        state: family.to_string(),
        f_c: result.resource.f_c,
        e_g: result.resource.e_g,
        c_f: result.resource.c_f,
        p_avg: result.p_avg,
        p_pred: result.p_pred,
        abs_dev: result.abs_dev,
        leaked_weight: result.leaked_weight,
        wall_ms: result.wall_ms,
    };
    row.check()?;
    Ok(row)
}

/// Runs every (seed, state) pair. Rows come back in config order: seeds
/// outer, states inner, whatever order the workers finish in.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    let jobs: Vec<(u64, &Family)> = cfg.seeds.iter().flat_map(|&s| cfg.states.iter().map(move |f| (s, f))).collect();
    let rows = jobs.par_iter().map(|(seed, family)| run_one(cfg, family, *seed)).collect::<Result<Vec<_>>>()?;

    let plan = cfg.plan();
    let (constant, vertex_count) = if cfg.variant == Algorithm::Oskw1 {
        (cfg.tolerances.oskw_deviation_constant, 1usize << cfg.directions())
    } else {
        (cfg.tolerances.deviation_constant, 1usize << cfg.directions())
    };
    let aggregates = Aggregates::of(&rows);
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        experiment_id: cfg.experiment_id.clone(),
        variant: cfg.variant.name().to_string(),
        n: cfg.n,
        directions: cfg.directions(),
        tau: plan.tau,
        tau_rule: plan.rule.as_str().to_string(),
        tau_exact: plan.tau_exact,
        columns: RESULT_COLUMNS.iter().map(|c| c.to_string()).collect(),
        config: cfg.entries.clone(),
        deviation_check: DeviationCheck::new(constant, vertex_count, aggregates.abs_dev_max),
        aggregates,
    };
    if cfg.enforce_bound && !summary.deviation_check.within_bound {
        let c = &summary.deviation_check;
        return Err(HarnessError::invariant(
            "deviation bound",
            format!("max |p_avg - p_pred| = {} exceeds {}/sqrt({}) = {}", c.max_abs_dev, c.constant, c.vertex_count, c.bound),
        ));
    }
    Ok(Outcome { rows, summary })
}

/// Runs the experiment and writes its CSV and JSON summary. Returns the two
/// paths written.
pub fn run_and_write(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<(PathBuf, PathBuf, Outcome)> {
    let outcome = run_experiment(cfg)?;
    let (csv, json) = cfg.output_paths(out_dir);
    write_csv(&csv, &outcome.rows)?;
    write_json(&json, &outcome.summary)?;
    Ok((csv, json, outcome))
}
