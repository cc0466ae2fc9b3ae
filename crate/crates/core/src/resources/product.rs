//! Best product-state overlap by alternating single-qubit maximization.
//!
//! With every factor but `j` held fixed, `|⟨u_0 … u_{n-1}|ψ⟩|²` is maximized
//! over `u_j` by the normalized partial contraction of `ψ` against the other
//! factors, and the maximum equals that contraction's squared norm. Sweeping
//! over `j` therefore never decreases the overlap. Sweeps repeat until the
//! gain drops below a tolerance; independent restarts guard against local
//! maxima.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::resources::{best_pauli_basis, LocalLayer};
use crate::scalar::{czero, creal, Real};
use crate::settings::Tolerances;
use crate::state::NodeState;

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSearch {
    pub restarts: usize,
    pub sweep_cap: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Start restart 0 from the computational basis state of largest weight
    /// instead of a random product state.
    pub warm_start: bool,
}

impl ProductSearch {
    pub fn new(restarts: usize, seed: u64) -> Self {
        let tol = Tolerances::default();
        Self {
            restarts,
            sweep_cap: tol.optimizer_sweep_cap,
            tolerance: tol.optimizer_convergence,
            seed,
            warm_start: true,
        }
    }

    pub fn from_tolerances(tol: &Tolerances, seed: u64) -> Self {
        Self {
            restarts: tol.optimizer_restarts,
            sweep_cap: tol.optimizer_sweep_cap,
            tolerance: tol.optimizer_convergence,
            seed,
            warm_start: true,
        }
    }
}

/// Best product state found.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOptimum<T> {
    /// Normalized single-qubit factors, factor `j` for qubit `j`.
    pub factors: Vec<[Complex<T>; 2]>,
    /// `|⟨u_0 … u_{n-1}|ψ⟩|²`.
    pub overlap: T,
    pub restarts_used: usize,
    /// Whether the winning restart met the tolerance before the sweep cap.
    pub converged: bool,
    pub sweeps: usize,
}

/// Contracts `ψ` with `conj(u_k)` for every `k ≠ j`, leaving a 2-vector over
/// qubit `j`. `buf` is scratch of length `ψ.len()`.
fn contract_except<T: Real>(psi: &[Complex<T>], factors: &[[Complex<T>; 2]], j: usize, buf: &mut Vec<Complex<T>>) -> [Complex<T>; 2] {
    buf.clear();
    buf.extend_from_slice(psi);
    let mut len = psi.len();
    for k in (j + 1..factors.len()).rev() {
        let (u0, u1) = (factors[k][0].conj(), factors[k][1].conj());
        let half = len / 2;
        for x in 0..half {
            buf[x] = u0 * buf[x] + u1 * buf[x + half];
        }
        len = half;
    }
    for u in factors.iter().take(j) {
        let (u0, u1) = (u[0].conj(), u[1].conj());
        let half = len / 2;
        for y in 0..half {
            buf[y] = u0 * buf[2 * y] + u1 * buf[2 * y + 1];
        }
        len = half;
    }
    [buf[0], buf[1]]
}

fn overlap_of<T: Real>(psi: &[Complex<T>], factors: &[[Complex<T>; 2]], buf: &mut Vec<Complex<T>>) -> T {
    let v = contract_except(psi, factors, 0, buf);
    (factors[0][0].conj() * v[0] + factors[0][1].conj() * v[1]).norm_sqr()
}

struct Climb<T> {
    factors: Vec<[Complex<T>; 2]>,
    overlap: T,
    converged: bool,
    sweeps: usize,
}

fn climb<T: Real>(psi: &[Complex<T>], mut factors: Vec<[Complex<T>; 2]>, search: &ProductSearch) -> Climb<T> {
    let mut buf = Vec::with_capacity(psi.len());
    let mut overlap = overlap_of(psi, &factors, &mut buf);
    let tol = T::lit(search.tolerance);
    for sweep in 1..=search.sweep_cap {
        let mut current = overlap;
        for j in 0..factors.len() {
            let v = contract_except(psi, &factors, j, &mut buf);
            let norm2 = v[0].norm_sqr() + v[1].norm_sqr();
            if norm2 > T::zero() {
                let inv = norm2.sqrt().recip();
                factors[j] = [v[0] * inv, v[1] * inv];
                current = norm2;
            }
        }
        let gain = current - overlap;
        overlap = overlap.max(current);
        if gain < tol {
            return Climb { factors, overlap, converged: true, sweeps: sweep };
        }
    }
    Climb { factors, overlap, converged: false, sweeps: search.sweep_cap }
}

fn random_factors<T: Real>(n: usize, seed: u64, stream: u64) -> Vec<[Complex<T>; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..n)
        .map(|_| {
            let mut g = || -> f64 { StandardNormal.sample(&mut rng) };
            let v = [Complex::new(g(), g()), Complex::new(g(), g())];
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [
                Complex::new(T::lit(v[0].re / norm), T::lit(v[0].im / norm)),
                Complex::new(T::lit(v[1].re / norm), T::lit(v[1].im / norm)),
            ]
        })
        .collect()
}

fn basis_factors<T: Real>(n: usize, index: usize) -> Vec<[Complex<T>; 2]> {
    (0..n)
        .map(|j| if index >> j & 1 == 1 { [czero(), creal(T::one())] } else { [creal(T::one()), czero()] })
        .collect()
}

/// Maximizes `|⟨product|ψ⟩|²` over product states. Restarts run in parallel,
/// each from its own `(seed, restart)` stream, so the result does not depend
/// on scheduling.
pub fn maximize_product_overlap<T: Real>(state: &NodeState<T>, search: &ProductSearch) -> Result<ProductOptimum<T>> {
    if search.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let n = state.qubits();
    let psi = state.amplitudes();
    let climbs: Vec<Climb<T>> = (0..search.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 && search.warm_start {
                basis_factors(n, best_pauli_basis(state).0)
            } else {
                random_factors(n, search.seed, r as u64)
            };
            climb(psi, start, search)
        })
        .collect();
    let mut best = 0;
    for (i, c) in climbs.iter().enumerate() {
        if c.overlap > climbs[best].overlap {
            best = i;
        }
    }
    let c = climbs.into_iter().nth(best).expect("at least one restart");
    Ok(ProductOptimum {
        factors: c.factors,
        overlap: c.overlap.min(T::one()),
        restarts_used: search.restarts,
        converged: c.converged,
        sweeps: c.sweeps,
    })
}

/// Layer `⊗ U_j` maximizing `|⟨η|(⊗ U_j)|ψ⟩|²`, with the achieved value
/// evaluated by applying the layer to the state.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerOptimum<T> {
    pub layer: LocalLayer<T>,
    pub achieved: T,
    pub product: ProductOptimum<T>,
}

/// Each `U_j` maps the optimal product factor `|u_j⟩` to `|+⟩`, so
/// `⟨η|(⊗ U_j)|ψ⟩ = ⟨u_0 … u_{n-1}|ψ⟩`.
pub fn optimize_local_layer_for_eta_overlap<T: Real>(state: &NodeState<T>, search: &ProductSearch) -> Result<LayerOptimum<T>> {
    let product = maximize_product_overlap(state, search)?;
    let layer = LocalLayer::new(product.factors.iter().map(|u| LocalLayer::rotation_to_plus(*u)).collect())?;
    let eta = NodeState::uniform(state.qubits())?;
    let achieved = eta.overlap(&state.apply_local_layer(&layer)?)?.norm_sqr();
    Ok(LayerOptimum { layer, achieved, product })
}
