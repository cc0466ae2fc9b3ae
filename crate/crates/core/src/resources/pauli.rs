use num_complex::Complex;

use crate::error::{Error, Result};
use crate::resources::{LocalLayer, Pauli};
use crate::scalar::Real;
use crate::settings::Guards;
use crate::state::NodeState;

/// Result of the exhaustive Pauli-layer search.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOptimum<T> {
    /// Gate on each qubit, index `j` for qubit `j`.
    pub gates: Vec<Pauli>,
    pub layer: LocalLayer<T>,
    /// `|⟨0…0|(⊗ V_j)|ψ⟩|²`.
    pub achieved: T,
}

/// Evaluates `⟨0…0|(⊗ V_j)|ψ⟩` for all `3^n` Pauli layers and keeps the
/// largest modulus (first one found on ties).
///
/// Contracts the most significant qubit against row 0 of each gate and
/// recurses, so the total work is `O(3^n)` rather than `O(6^n)`.
pub fn enumerate_pauli_layers<T: Real>(state: &NodeState<T>, guards: &Guards) -> Result<PauliOptimum<T>> {
    let n = state.qubits();
    if n > guards.pauli_enumeration_max_qubits {
        return Err(Error::Guard { what: "Pauli enumeration", size: n, limit: guards.pauli_enumeration_max_qubits });
    }
    let mut search = Search { best: None, gates: vec![Pauli::Z; n] };
    search.descend(state.amplitudes(), n);
    let (achieved, gates) = search.best.expect("at least one layer");
    Ok(PauliOptimum { layer: LocalLayer::pauli(&gates), gates, achieved })
}

struct Search<T> {
    best: Option<(T, Vec<Pauli>)>,
    gates: Vec<Pauli>,
}

impl<T: Real> Search<T> {
    fn descend(&mut self, amps: &[Complex<T>], m: usize) {
        if m == 0 {
            let value = amps[0].norm_sqr();
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.gates.clone()));
            }
            return;
        }
        let half = amps.len() / 2;
        let (low, high) = amps.split_at(half);
        let minus_i = Complex::new(T::zero(), -T::one());
        for gate in Pauli::ALL {
            self.gates[m - 1] = gate;
            // Row 0 of X is (0, 1), of Y is (0, -i), of Z is (1, 0).
            match gate {
                Pauli::X => self.descend(high, m - 1),
                Pauli::Y => {
                    let next: Vec<_> = high.iter().map(|a| a * minus_i).collect();
                    self.descend(&next, m - 1)
                }
                Pauli::Z => self.descend(low, m - 1),
            }
        }
    }
}

/// The Pauli layer realizing `max_i |a_i|²` in closed form: `X` on every bit
/// set in the best basis index, `Z` elsewhere.
pub fn analytic_pauli_layer<T: Real>(state: &NodeState<T>) -> PauliOptimum<T> {
    let (index, achieved) = super::best_pauli_basis(state);
    let gates: Vec<Pauli> = (0..state.qubits()).map(|j| if index >> j & 1 == 1 { Pauli::X } else { Pauli::Z }).collect();
    PauliOptimum { layer: LocalLayer::pauli(&gates), gates, achieved }
}
