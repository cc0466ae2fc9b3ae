//! Experiment harness around [`qwsearch`]: key-value configs, state
//! families, probability-versus-resource sweeps, the oracle suite, and
//! CSV/JSON output.

pub mod config;
pub mod error;
pub mod experiment;
pub mod families;
pub mod curves;
pub mod measures;
pub mod output;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use experiment::{run_and_write, run_experiment, Outcome};
pub use families::{parse_state_spec, Family};
pub use curves::{sweep_resource_curves, CurveOptions};
pub use measures::{measure_state, MeasuresReport};
pub use output::{CurveRow, ResultRow};
pub use verify::{verify_suite, Check};
