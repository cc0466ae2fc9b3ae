//! Coined quantum-walk search on the `n`-dimensional hypercube, with the
//! resource measures of the initial node-register state that govern its
//! success probability.
//!
//! Numeric types are generic over [`Real`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the precision.
//!
//! ```
//! use qwsearch::{run_skw1, IterationPlan, NodeState64, RunOptions};
//!
//! let eta = NodeState64::uniform(6).unwrap();
//! let result = run_skw1(&eta, &IterationPlan::skw_optimal(6), &RunOptions::default()).unwrap();
//! assert!((result.p_pred - 0.5).abs() < 1e-12);
//! assert!(result.p_avg > 0.3);
//! ```

pub mod error;
pub mod kernel;
pub mod oracle;
pub mod resources;
pub mod runners;
pub mod scalar;
pub mod settings;
pub mod state;
pub mod walk;

pub use error::{Error, Result};
pub use kernel::TranslationKernel;
pub use resources::{
    best_pauli_basis, coherence_fraction, enumerate_pauli_layers, even_coherence_fraction, fidelity_coherence,
    groverian_entanglement, maximize_product_overlap, optimize_local_layer_for_eta_overlap, LocalLayer, Pauli,
    ProductSearch, ResourceReport,
};
pub use runners::{
    predicted_probability, run, run_oskw1, run_skw1, run_skw2, run_skw3, Algorithm, Engine, OskwNormalization,
    PauliSelection, RunOptions, RunResult, SuccessMetric, TargetSelection,
};
pub use scalar::{Amp, Real};
pub use settings::{Guards, Tolerances};
pub use state::{MixedEnsemble, NodeState, StateInput, WalkerState};
pub use walk::{apply_perturbed_coin, apply_shift, evolve, Coin, IterationPlan, TauRule, WalkKind, WalkSpec};

pub type NodeState64 = NodeState<f64>;
pub type NodeState32 = NodeState<f32>;
pub type MixedEnsemble64 = MixedEnsemble<f64>;
pub type MixedEnsemble32 = MixedEnsemble<f32>;
pub type WalkerState64 = WalkerState<f64>;
pub type WalkerState32 = WalkerState<f32>;
pub type WalkSpec64 = WalkSpec<f64>;
pub type WalkSpec32 = WalkSpec<f32>;
pub type LocalLayer64 = LocalLayer<f64>;
pub type ResourceReport64 = ResourceReport<f64>;
pub type RunResult64 = RunResult<f64>;
pub type RunResult32 = RunResult<f32>;
pub type DenseOperator64 = oracle::DenseOperator<f64>;
