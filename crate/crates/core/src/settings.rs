//! Tolerances and size guards, gathered in one place.
//!
//! Every numeric threshold used for validation or convergence lives here so
//! that callers can tighten, relax or push a guard up on bigger machines
//! without touching the algorithms.

/// Numerical tolerances. Values are tuned for `f64`; routines operating in
/// `f32` widen them through [`crate::Real::admissible`].
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a state's squared norm from one.
    pub norm: f64,
    /// Allowed deviation of ensemble weights from summing to one.
    pub ensemble_weights: f64,
    /// Max entrywise deviation of `U^† U` from the identity.
    pub unitary: f64,
    /// The product-overlap optimizer stops when a sweep improves the overlap
    /// by less than this.
    pub optimizer_convergence: f64,
    /// Hard cap on optimizer sweeps per restart.
    pub optimizer_sweep_cap: usize,
    /// Default number of optimizer restarts.
    pub optimizer_restarts: usize,
    /// Constant `c` in the `c / sqrt(N)` bound on the finite-size deviation
    /// of the SKW-family success probability from its prediction.
    pub deviation_constant: f64,
    /// Same constant for the optimized (even-parity) walk.
    pub oskw_deviation_constant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-10,
            ensemble_weights: 1e-12,
            unitary: 1e-12,
            optimizer_convergence: 1e-12,
            optimizer_sweep_cap: 500,
            optimizer_restarts: 32,
            deviation_constant: 3.0,
            oskw_deviation_constant: 6.0,
        }
    }
}

/// Size guards for exhaustive or dense routines.
#[derive(Debug, Clone, PartialEq)]
pub struct Guards {
    /// Largest qubit count for exhaustive `3^n` Pauli-layer enumeration.
    pub pauli_enumeration_max_qubits: usize,
    /// Largest hypercube dimension for dense operator materialization.
    pub dense_max_dimension: usize,
    /// Largest qubit count for the product-state grid oracle.
    pub grid_max_qubits: usize,
    /// Largest angular resolution for the grid oracle.
    pub grid_max_resolution: usize,
    /// Largest qubit count for the inner-identity verifier.
    pub identity_max_qubits: usize,
    /// Above this hypercube dimension runners average over a sampled subset
    /// of targets instead of all of them.
    pub exact_targets_max_dimension: usize,
    /// Target sample size used beyond `exact_targets_max_dimension`.
    pub sampled_targets: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            pauli_enumeration_max_qubits: 12,
            dense_max_dimension: 5,
            grid_max_qubits: 3,
            grid_max_resolution: 64,
            identity_max_qubits: 6,
            exact_targets_max_dimension: 10,
            sampled_targets: 1024,
        }
    }
}
