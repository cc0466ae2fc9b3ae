//! Success probability against each resource measure, one series per
//! modified algorithm.
//!
//! * `skw1_fc`: SKW-1 over `normalize((1 - t) η + t e_0)`, `t ∈ [0, 1]`
//! * `skw2_eg`: SKW-2 over `cos α |0…0⟩ + sin α |1…1⟩`, `α ∈ [0, π/4]`
//! * `skw3_cf`: SKW-3 over tilted states, `λ ∈ [0, 1]`

use std::f64::consts::FRAC_PI_4;

use qwsearch::{run, Algorithm, IterationPlan, ProductSearch, RunOptions};
use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::experiment::check_prediction;
use crate::families::Family;
use crate::output::CurveRow;

#[derive(Debug, Clone)]
pub struct CurveOptions {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub restarts: usize,
}

struct Point {
    series: &'static str,
    variant: Algorithm,
    measure: &'static str,
    family: Family,
}

fn points(samples: usize) -> Vec<Point> {
    let grid = |k: usize| k as f64 / (samples - 1) as f64;
    let mut out = Vec::with_capacity(3 * samples);
    out.extend((0..samples).map(|k| Point {
        series: "skw1_fc",
        variant: Algorithm::Skw1,
        measure: "f_c",
        family: Family::Interpolated { t: grid(k), index: 0 },
    }));
    out.extend((0..samples).map(|k| Point {
        series: "skw2_eg",
        variant: Algorithm::Skw2,
        measure: "E_g",
        // The last point is exactly π/4, the GHZ state.
        family: Family::GhzAngle { alpha: if k + 1 == samples { FRAC_PI_4 } else { FRAC_PI_4 * grid(k) } },
    }));
    out.extend((0..samples).map(|k| Point {
        series: "skw3_cf",
        variant: Algorithm::Skw3,
        measure: "C_f",
        family: Family::Tilted { lambda: grid(k), index: 0 },
    }));
    out
}

pub fn sweep_resource_curves(opts: &CurveOptions) -> Result<Vec<CurveRow>> {
    if opts.samples < 2 {
        return Err(HarnessError::Config(format!("--samples must be at least 2, found {}", opts.samples)));
    }
    if opts.n < 2 {
        return Err(HarnessError::Config(format!("--n must be at least 2, found {}", opts.n)));
    }
    let plan = IterationPlan::skw_optimal(opts.n);
    points(opts.samples)
        .par_iter()
        .map(|p| {
            let state = p.family.build_pure(opts.n, opts.seed)?;
            let run_opts = RunOptions {
                search: ProductSearch::new(opts.restarts, opts.seed),
                measure_entanglement: false,
                ..RunOptions::default()
            };
            let r = run(p.variant, &state, Some(plan), &run_opts)?;
            check_prediction(p.variant, &r)?;
            let measure_value = match p.variant {
                Algorithm::Skw2 => r.resource.e_g,
                Algorithm::Skw3 => r.resource.c_f,
                _ => Some(r.resource.f_c),
            }
            .ok_or_else(|| HarnessError::invariant("measure present", format!("{} missing for {}", p.measure, p.family)))?;
            Ok(CurveRow {
                series: p.series.to_string(),
                variant: p.variant.name().to_string(),
                n: opts.n,
                tau: plan.tau,
                seed: opts.seed,
                state: p.family.to_string(),
                measure: p.measure.to_string(),
                measure_value,
                f_c: r.resource.f_c,
                e_g: r.resource.e_g,
                c_f: r.resource.c_f,
                p_avg: r.p_avg,
                p_pred: r.p_pred,
                abs_dev: r.abs_dev,
                wall_ms: r.wall_ms,
            })
        })
        .collect()
}
