//! Resource measures of a node-register state.
//!
//! * coherence fraction `f_c = ⟨η|ρ|η⟩`
//! * fidelity coherence `C_f = sqrt(1 - max_i |a_i|²)`
//! * Groverian entanglement `E_g = sqrt(1 - Λ²)`, `Λ²` the best product overlap

mod layer;
mod pauli;
mod product;

pub use layer::{LocalLayer, Pauli, Qubit2x2};
pub use pauli::{analytic_pauli_layer, enumerate_pauli_layers, PauliOptimum};
pub use product::{maximize_product_overlap, optimize_local_layer_for_eta_overlap, LayerOptimum, ProductOptimum, ProductSearch};

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;
use crate::state::{NodeState, StateInput};

/// `|⟨η|ψ⟩|²` for a pure state, `Σ_μ p_μ |⟨η|ψ_μ⟩|²` for an ensemble.
pub fn coherence_fraction<'a, T: Real>(input: impl Into<StateInput<'a, T>>) -> T {
    input
        .into()
        .weighted()
        .into_iter()
        .map(|(p, s)| {
            let sum: Complex<T> = s.amplitudes().iter().copied().sum();
            p * sum.norm_sqr() / T::lit(s.len() as f64)
        })
        .sum()
}

/// `|⟨η^e|ψ⟩|²` with `η^e` uniform over the even-parity vertices.
pub fn even_coherence_fraction<T: Real>(state: &NodeState<T>) -> T {
    let sum: Complex<T> = state.amplitudes().iter().enumerate().filter(|(x, _)| x.count_ones() % 2 == 0).map(|(_, a)| *a).sum();
    sum.norm_sqr() / T::lit((state.len() / 2) as f64)
}

/// `sqrt(1 - max_i |a_i|²)`.
pub fn fidelity_coherence<T: Real>(state: &NodeState<T>) -> T {
    (T::one() - best_pauli_basis(state).1).max(T::zero()).sqrt()
}

/// Index of the largest `|a_i|²` (smallest index on ties) and its value.
pub fn best_pauli_basis<T: Real>(state: &NodeState<T>) -> (usize, T) {
    state.probabilities().enumerate().fold((0, T::neg_infinity()), |best, (i, p)| if p > best.1 { (i, p) } else { best })
}

/// Measures of one initial state. `c_f` and the entanglement fields are
/// absent for mixed inputs or when not computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceReport<T> {
    pub f_c: T,
    pub c_f: Option<T>,
    /// Estimate from above: the optimizer lower-bounds the best overlap.
    pub e_g: Option<T>,
    /// Best product overlap `Λ²` found.
    pub e_g_overlap: Option<T>,
    pub restarts_used: usize,
    pub converged: bool,
}

impl<T: Real> ResourceReport<T> {
    /// Coherence fraction, plus `C_f` for pure inputs. No optimization.
    pub fn coherence<'a>(input: impl Into<StateInput<'a, T>>) -> Self {
        let input = input.into();
        let c_f = match input {
            StateInput::Pure(s) => Some(fidelity_coherence(s)),
            StateInput::Mixed(_) => None,
        };
        Self { f_c: coherence_fraction(input), c_f, e_g: None, e_g_overlap: None, restarts_used: 0, converged: true }
    }

    pub fn with_product_optimum(mut self, opt: &ProductOptimum<T>) -> Self {
        self.e_g = Some((T::one() - opt.overlap).max(T::zero()).sqrt());
        self.e_g_overlap = Some(opt.overlap);
        self.restarts_used = opt.restarts_used;
        self.converged = opt.converged;
        self
    }
}

/// All three measures of a pure state, `E_g` by [`maximize_product_overlap`].
pub fn groverian_entanglement<T: Real>(state: &NodeState<T>, search: &ProductSearch) -> Result<ResourceReport<T>> {
    let opt = maximize_product_overlap(state, search)?;
    Ok(ResourceReport::coherence(state).with_product_optimum(&opt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::MixedEnsemble;

    #[test]
    fn coherence_fraction_values() {
        let eta = NodeState::<f64>::uniform(3).unwrap();
        let e0 = NodeState::<f64>::basis(3, 0).unwrap();
        assert!((coherence_fraction(&eta) - 1.0).abs() < 1e-15);
        assert!((coherence_fraction(&e0) - 0.125).abs() < 1e-15);
        let rho = MixedEnsemble::new(vec![(0.5, eta), (0.5, e0)]).unwrap();
        assert!((coherence_fraction(&rho) - 9.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn fidelity_coherence_values() {
        assert_eq!(fidelity_coherence(&NodeState::<f64>::basis(3, 6).unwrap()), 0.0);
        let eta = NodeState::<f64>::uniform(5).unwrap();
        assert!((fidelity_coherence(&eta) - (1.0 - 1.0 / 32.0f64).sqrt()).abs() < 1e-15);
        let s = NodeState::<f64>::from_real(&[0.5f64.sqrt(), 0.3f64.sqrt(), 0.2f64.sqrt(), 0.0]).unwrap();
        assert!((fidelity_coherence(&s) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn best_basis() {
        assert_eq!(best_pauli_basis(&NodeState::<f64>::basis(3, 5).unwrap()), (5, 1.0));
        let (i, p) = best_pauli_basis(&NodeState::<f64>::uniform(2).unwrap());
        assert_eq!(i, 0);
        assert!((p - 0.25).abs() < 1e-16);
        let s = NodeState::<f64>::from_real(&[0.3f64.sqrt(), 0.5f64.sqrt(), 0.2f64.sqrt(), 0.0]).unwrap();
        let (i, p) = best_pauli_basis(&s);
        assert_eq!(i, 1);
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entanglement_of_known_states() {
        let search = ProductSearch::new(32, 11);
        // |+⟩ ⊗ |0⟩ ⊗ |1⟩, qubit 0 = |+⟩.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![0.0; 8];
        amps[0b100] = h;
        amps[0b101] = h;
        let prod = NodeState::from_real(&amps).unwrap();
        let r = groverian_entanglement(&prod, &search).unwrap();
        assert!(r.e_g.unwrap() < 1e-8);

        let r = groverian_entanglement(&NodeState::<f64>::ghz(3).unwrap(), &search).unwrap();
        assert!((r.e_g.unwrap() - h).abs() < 1e-6);
        let r = groverian_entanglement(&NodeState::<f64>::w(3).unwrap(), &search).unwrap();
        assert!((r.e_g.unwrap() - 5f64.sqrt() / 3.0).abs() < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn even_fraction() {
        let s = NodeState::<f64>::even_uniform(4).unwrap();
        assert!((even_coherence_fraction(&s) - 1.0).abs() < 1e-15);
        let s = NodeState::<f64>::basis(4, 0b0110).unwrap();
        assert!((even_coherence_fraction(&s) - 1.0 / 8.0).abs() < 1e-15);
    }
}
