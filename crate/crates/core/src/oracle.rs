//! Brute-force verifiers for small instances.
//!
//! Nothing here reuses the matrix-free kernels of [`crate::walk`] or the
//! alternating optimizer: operators are materialized entry by entry from
//! their definitions and product overlaps are searched on an angle grid.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::resources::{enumerate_pauli_layers, optimize_local_layer_for_eta_overlap, ProductSearch};
use crate::scalar::{czero, creal, Real};
use crate::settings::{Guards, Tolerances};
use crate::state::NodeState;
use crate::walk::{Coin, WalkKind, WalkSpec};

/// Dense square matrix over the coin ⊗ node basis, row-major, basis element
/// `(d, x)` at index `d * 2^n + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> DenseOperator<T> {
    fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![czero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = creal(T::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == czero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.entries.chunks_exact(self.dim).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Max entrywise deviation of `M^† M` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = p.get(i, j) - if i == j { creal(T::one()) } else { czero() };
                worst = worst.max(z.norm().as_f64());
            }
        }
        worst
    }
}

fn coin_entry<T: Real>(coin: &Coin<T>, n: usize, r: usize, c: usize) -> Complex<T> {
    let delta = if r == c { T::one() } else { T::zero() };
    match coin {
        Coin::Grover => creal(T::lit(2.0) / T::lit(n as f64) - delta),
        Coin::NegativeIdentity => creal(-delta),
        Coin::Matrix(m) => m[r * n + c],
    }
}

fn check_dense_guard(directions: usize, guards: &Guards) -> Result<()> {
    if directions > guards.dense_max_dimension {
        return Err(Error::Guard { what: "dense operator dimension", size: directions, limit: guards.dense_max_dimension });
    }
    Ok(())
}

/// `S = Σ_{d,x} |d, x ⊕ e_d⟩⟨d, x|`.
pub fn dense_shift<T: Real>(directions: usize, guards: &Guards) -> Result<DenseOperator<T>> {
    check_dense_guard(directions, guards)?;
    let nodes = 1usize << directions;
    let mut m = DenseOperator::zeros(directions * nodes);
    for d in 0..directions {
        for x in 0..nodes {
            let from = d * nodes + x;
            let to = d * nodes + (x ^ (1 << d));
            m.entries[to * m.dim + from] = creal(T::one());
        }
    }
    Ok(m)
}

/// `C0 ⊗ I + (C1 − C0) ⊗ |t⟩⟨t|`, or `C0 ⊗ I` when `perturbed` is false.
pub fn dense_coin<T: Real>(spec: &WalkSpec<T>, perturbed: bool, guards: &Guards) -> Result<DenseOperator<T>> {
    let n = spec.directions();
    check_dense_guard(n, guards)?;
    let nodes = spec.node_count();
    let mut m = DenseOperator::zeros(n * nodes);
    for x in 0..nodes {
        let coin = if perturbed && x == spec.target() { spec.coin1() } else { spec.coin0() };
        for r in 0..n {
            for c in 0..n {
                m.entries[(r * nodes + x) * m.dim + c * nodes + x] = coin_entry(coin, n, r, c);
            }
        }
    }
    Ok(m)
}

/// Explicit `V = S C`, or `V_opt = S (C0 ⊗ I) S C` for the optimized walk.
pub fn build_dense_evolution<T: Real>(spec: &WalkSpec<T>, guards: &Guards) -> Result<DenseOperator<T>> {
    let s = dense_shift(spec.directions(), guards)?;
    let c = dense_coin(spec, true, guards)?;
    let v = s.mul(&c);
    Ok(match spec.kind() {
        WalkKind::Standard => v,
        WalkKind::Optimized => s.mul(&dense_coin(spec, false, guards)?).mul(&v),
    })
}

/// `|S^c⟩ ⊗ ψ` built directly as a flat vector.
pub fn dense_initial_vector<T: Real>(state: &NodeState<T>) -> Vec<Complex<T>> {
    let n = state.qubits();
    let c = T::lit(n as f64).sqrt().recip();
    (0..n * state.len()).map(|i| state.amplitudes()[i % state.len()] * c).collect()
}

/// `V^τ (|S^c⟩ ⊗ ψ)` by repeated dense matrix-vector products.
pub fn dense_evolve<T: Real>(op: &DenseOperator<T>, start: &[Complex<T>], tau: usize) -> Vec<Complex<T>> {
    (0..tau).fold(start.to_vec(), |v, _| op.apply(&v))
}

/// Reference vertex-marginal success probability for one target.
pub fn dense_success_probability<T: Real>(spec: &WalkSpec<T>, state: &NodeState<T>, tau: usize, guards: &Guards) -> Result<T> {
    let op = build_dense_evolution(spec, guards)?;
    let out = dense_evolve(&op, &dense_initial_vector(state), tau);
    let nodes = spec.node_count();
    Ok((0..spec.directions()).map(|d| out[d * nodes + spec.target()].norm_sqr()).sum())
}

/// 2×2 singular value: largest `σ²` of `[[a, b], [c, d]]`.
fn top_singular_sqr<T: Real>(m: [Complex<T>; 4]) -> T {
    let fro: T = m.iter().map(|z| z.norm_sqr()).sum();
    let det = (m[0] * m[3] - m[1] * m[2]).norm();
    let disc = (fro * fro - T::lit(4.0) * det * det).max(T::zero());
    (fro + disc.sqrt()) * T::lit(0.5)
}

/// Max of `|⟨u_0 … u_{n-1}|ψ⟩|²` over product states whose first `n − 2`
/// qubits lie on a Bloch-angle grid `u = (cos θ/2, e^{iφ} sin θ/2)`,
/// `θ = πk/r` (`k = 0..=r`), `φ = 2πl/r` (`l < r`). The last two qubits are
/// maximized exactly through the top singular value of the residual 2×2
/// matrix, so the value is attained by a real product state: a lower bound on
/// the true optimum that is non-decreasing under resolution doubling.
pub fn grid_product_overlap<T: Real>(state: &NodeState<T>, resolution: usize, guards: &Guards) -> Result<T> {
    let n = state.qubits();
    if n > guards.grid_max_qubits {
        return Err(Error::Guard { what: "grid oracle qubits", size: n, limit: guards.grid_max_qubits });
    }
    if resolution == 0 || resolution > guards.grid_max_resolution {
        return Err(Error::Guard { what: "grid oracle resolution", size: resolution, limit: guards.grid_max_resolution });
    }
    let points: Vec<[Complex<T>; 2]> = (0..=resolution)
        .flat_map(|k| {
            let theta = T::PI() * T::lit(k as f64 / resolution as f64);
            let (c, s) = ((theta / T::lit(2.0)).cos(), (theta / T::lit(2.0)).sin());
            // At the poles φ is irrelevant.
            let phis = if k == 0 || k == resolution { 1 } else { resolution };
            (0..phis).map(move |l| {
                let phi = T::TAU() * T::lit(l as f64 / resolution as f64);
                [creal(c), Complex::from_polar(s, phi)]
            })
        })
        .collect();
    let grid_qubits = n - 2;
    let cells = points.len().pow(grid_qubits as u32);
    let best = (0..cells)
        .into_par_iter()
        .map(|cell| {
            // Contract the grid qubits (bits 0..n-2) against conj(u).
            let mut v: Vec<Complex<T>> = state.amplitudes().to_vec();
            let mut rest = cell;
            for _ in 0..grid_qubits {
                let u = points[rest % points.len()];
                rest /= points.len();
                v = (0..v.len() / 2).map(|y| u[0].conj() * v[2 * y] + u[1].conj() * v[2 * y + 1]).collect();
            }
            // v is indexed by (bit n-1, bit n-2) → [v0, v1, v2, v3].
            top_singular_sqr([v[0], v[1], v[2], v[3]])
        })
        .reduce(|| T::zero(), T::max);
    Ok(best.min(T::one()))
}

/// Outcome of [`verify_resource_identities`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub qubits: usize,
    pub trials: usize,
    /// Trials where the local-layer overlap matched `1 − E_g²` within 1e−8.
    pub layer_passes: usize,
    /// Trials where Pauli enumeration matched `max_i |a_i|²` within 1e−12.
    pub pauli_passes: usize,
    pub worst_layer_deviation: f64,
    pub worst_pauli_deviation: f64,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.layer_passes == self.trials && self.pauli_passes == self.trials
    }
}

/// Checks, on seeded Haar states, the two exact reductions behind the SKW-2
/// and SKW-3 predictions: the best `|⟨η|(⊗U_j)ψ⟩|²` equals the best product
/// overlap `1 − E_g²`, and the best `|⟨0|(⊗V_j)ψ⟩|²` over Pauli layers equals
/// `max_i |a_i|²`.
pub fn verify_resource_identities(n: usize, trials: usize, seed: u64, tol: &Tolerances, guards: &Guards) -> Result<IdentityReport> {
    if n > guards.identity_max_qubits {
        return Err(Error::Guard { what: "identity verifier qubits", size: n, limit: guards.identity_max_qubits });
    }
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let state = NodeState::<f64>::random(n, seed.wrapping_add(k))?;
            let search = ProductSearch::from_tolerances(tol, seed.wrapping_add(k));
            let layer = optimize_local_layer_for_eta_overlap(&state, &search)?;
            let e_g = (1.0 - layer.product.overlap).max(0.0).sqrt();
            let layer_dev = (layer.achieved - (1.0 - e_g * e_g)).abs();
            let pauli = enumerate_pauli_layers(&state, guards)?;
            let max_prob = state.probabilities().fold(0.0, f64::max);
            Ok((layer_dev, (pauli.achieved - max_prob).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport {
        qubits: n,
        trials,
        layer_passes: outcomes.iter().filter(|(l, _)| *l <= 1e-8).count(),
        pauli_passes: outcomes.iter().filter(|(_, p)| *p <= 1e-12).count(),
        worst_layer_deviation: outcomes.iter().map(|o| o.0).fold(0.0, f64::max),
        worst_pauli_deviation: outcomes.iter().map(|o| o.1).fold(0.0, f64::max),
    })
}
