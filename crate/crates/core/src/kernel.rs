//! Target sweep by vertex-translation covariance.
//!
//! Translating every vertex by `t` commutes with `S` and `C0 ⊗ I` and moves
//! the marked vertex from `0` to `t`, so `V_t = T_t V_0 T_t`. The amplitude at
//! `(d, t)` after `τ` steps from `|S^c⟩ ⊗ ψ` is therefore the XOR-correlation
//!
//! ```text
//! A_d(t) = Σ_x G_d[x] ψ[x ⊕ t],   G_d[x] = ⟨d, 0| V_0^τ |S^c, x⟩,
//! ```
//!
//! which the Walsh–Hadamard transform diagonalizes. `G_d` comes from one
//! backward walk of `|d, 0⟩` under `V_0^†`. A full target sweep costs
//! `n` backward walks once, then `O(n N log N)` per initial state.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::runners::SuccessMetric;
use crate::scalar::{czero, Real};
use crate::state::{NodeState, WalkerState};
use crate::walk::{coin_in_place, shift_in_place, Coin, IterationPlan, WalkKind, WalkSpec};

/// In-place unnormalized Walsh–Hadamard transform.
pub(crate) fn walsh_hadamard<T: Real>(v: &mut [Complex<T>]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

fn adjoint<T: Real>(coin: &Coin<T>, n: usize) -> Coin<T> {
    match coin {
        Coin::Matrix(m) => Coin::Matrix((0..n * n).map(|k| m[(k % n) * n + k / n].conj()).collect()),
        c => c.clone(),
    }
}

/// Precomputed per-direction responses for one walk and step count.
#[derive(Debug, Clone)]
pub struct TranslationKernel<T> {
    directions: usize,
    /// Walsh–Hadamard transforms of `G_d`, one per direction.
    spectra: Vec<Vec<Complex<T>>>,
}

impl<T: Real> TranslationKernel<T> {
    /// Builds the kernel for the walk described by `spec` (its target is
    /// ignored; the reference target is vertex 0).
    pub fn new(spec: &WalkSpec<T>, plan: &IterationPlan) -> Result<Self> {
        let n = spec.directions();
        let nodes = spec.node_count();
        let reference = spec.retarget(0)?;
        let coin0_adj = adjoint(reference.coin0(), n);
        let coin1_adj = adjoint(reference.coin1(), n);
        let inv_sqrt_n = T::lit(n as f64).sqrt().recip();
        let spectra = (0..n)
            .map(|d| -> Result<Vec<Complex<T>>> {
                let mut phi = WalkerState::basis(n, d, 0)?;
                let amps = phi.amplitudes_mut();
                for _ in 0..plan.tau {
                    shift_in_place(amps, n);
                    if reference.kind() == WalkKind::Optimized {
                        coin_in_place(amps, n, &coin0_adj, None);
                        shift_in_place(amps, n);
                    }
                    coin_in_place(amps, n, &coin0_adj, Some((0, &coin1_adj)));
                }
                let mut g: Vec<Complex<T>> = (0..nodes)
                    .map(|x| ((0..n).map(|k| amps[k * nodes + x]).sum::<Complex<T>>() * inv_sqrt_n).conj())
                    .collect();
                walsh_hadamard(&mut g);
                Ok(g)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { directions: n, spectra })
    }

    /// Success probability at every vertex `t`, indexed by `t`, for the walk
    /// marked at `t` and started from `|S^c⟩ ⊗ ψ`.
    pub fn probabilities(&self, state: &NodeState<T>, metric: SuccessMetric) -> Result<Vec<T>> {
        if state.qubits() != self.directions {
            return Err(Error::DimensionMismatch { expected: self.directions, found: state.qubits() });
        }
        let nodes = state.len();
        let mut psi = state.amplitudes().to_vec();
        walsh_hadamard(&mut psi);
        let scale = T::lit(nodes as f64).recip();
        let mut marginal = vec![T::zero(); nodes];
        let mut coherent = vec![czero::<T>(); nodes];
        let mut buf = vec![czero::<T>(); nodes];
        for spectrum in &self.spectra {
            buf.iter_mut().zip(spectrum.iter().zip(&psi)).for_each(|(b, (g, p))| *b = g * p);
            walsh_hadamard(&mut buf);
            for t in 0..nodes {
                let a = buf[t] * scale;
                marginal[t] = marginal[t] + a.norm_sqr();
                coherent[t] += a;
            }
        }
        Ok(match metric {
            SuccessMetric::VertexMarginal => marginal,
            SuccessMetric::CoinProjected => {
                let n = T::lit(self.directions as f64);
                coherent.into_iter().map(|a| a.norm_sqr() / n).collect()
            }
        })
    }
}
