//! The oracle suite behind the `verify` subcommand.

use qwsearch::oracle::{build_dense_evolution, dense_evolve, dense_initial_vector, grid_product_overlap, verify_resource_identities};
use qwsearch::{evolve, maximize_product_overlap, Guards, IterationPlan, NodeState64, ProductSearch, Tolerances, WalkKind, WalkSpec64, WalkerState};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: String, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn dense_checks(n: usize, seed: u64, guards: &Guards) -> Result<Vec<Check>> {
    let psi = NodeState64::random(n, seed)?;
    let mut out = Vec::new();
    for (kind, label) in [(WalkKind::Standard, "V"), (WalkKind::Optimized, "V_opt")] {
        let spec = WalkSpec64::new(n, 0, kind)?;
        let op = build_dense_evolution(&spec, guards)?;
        let defect = op.unitarity_defect();
        out.push(check(format!("n={n} dense {label} unitary"), defect <= 1e-12, format!("defect {defect:.3e}")));
        let mut dense = dense_initial_vector(&psi);
        let mut walker = WalkerState::compose(n, &psi)?;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            dense = dense_evolve(&op, &dense, 1);
            walker = evolve(&walker, &spec, &IterationPlan::explicit(1))?;
            worst = walker.amplitudes().iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(worst, f64::max);
        }
        out.push(check(format!("n={n} matrix-free {label} = dense, tau <= 50"), worst <= 1e-12, format!("max deviation {worst:.3e}")));
    }
    Ok(out)
}

/// Runs the oracle checks for every `n` in `2..=max_n`.
pub fn verify_suite(max_n: usize, trials: usize, seed: u64, tol: &Tolerances, guards: &Guards) -> Result<Vec<Check>> {
    if max_n < 2 || max_n > guards.identity_max_qubits {
        return Err(qwsearch::Error::Guard { what: "verify --max-n", size: max_n, limit: guards.identity_max_qubits }.into());
    }
    let mut out = Vec::new();
    for n in 2..=max_n {
        if n <= guards.dense_max_dimension {
            out.extend(dense_checks(n, seed, guards)?);
        }
        let r = verify_resource_identities(n, trials, seed, tol, guards)?;
        out.push(check(
            format!("n={n} layer overlap = 1 - E_g^2"),
            r.layer_passes == r.trials,
            format!("{}/{} within 1e-8, worst {:.3e}", r.layer_passes, r.trials, r.worst_layer_deviation),
        ));
        out.push(check(
            format!("n={n} Pauli enumeration = max |a_i|^2"),
            r.pauli_passes == r.trials,
            format!("{}/{} within 1e-12, worst {:.3e}", r.pauli_passes, r.trials, r.worst_pauli_deviation),
        ));
        if n <= guards.grid_max_qubits && n >= 3 {
            let mut worst: f64 = 0.0;
            for k in 0..trials as u64 {
                let s = NodeState64::random(n, seed.wrapping_add(k))?;
                let opt = maximize_product_overlap(&s, &ProductSearch::from_tolerances(tol, seed.wrapping_add(k)))?;
                let grid = grid_product_overlap(&s, guards.grid_max_resolution, guards)?;
                worst = worst.max((opt.overlap - grid).abs());
            }
            out.push(check(format!("n={n} optimizer vs grid oracle"), worst <= 2e-3, format!("max gap {worst:.3e}")));
        }
    }
    Ok(out)
}
