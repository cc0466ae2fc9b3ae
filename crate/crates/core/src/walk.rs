//! Matrix-free coined walk on the hypercube.
//!
//! The shift `S` moves `(d, x)` to `(d, x ⊕ 2^d)`. The perturbed coin applies
//! `C0` at every unmarked vertex and `C1` at the target. One SKW step is
//! `V = S C`; one step of the optimized walk is `V_opt = S (C0 ⊗ I) S C`.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{czero, Real};
use crate::settings::Tolerances;
use crate::state::WalkerState;

/// Coin acting on the `n`-dimensional direction space of one vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum Coin<T> {
    /// `G = (2/n) J - I`.
    Grover,
    /// `-I`.
    NegativeIdentity,
    /// Dense `n × n` unitary, row-major.
    Matrix(Vec<Complex<T>>),
}

impl<T: Real> Coin<T> {
    /// Dense `n × n` coin, validated for unitarity.
    pub fn matrix(n: usize, entries: Vec<Complex<T>>, tol: &Tolerances) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        let dev = unitary_deviation(n, &entries);
        if dev > T::admissible(tol.unitary) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Coin::Matrix(entries))
    }

    fn dimension_ok(&self, n: usize) -> bool {
        match self {
            Coin::Matrix(m) => m.len() == n * n,
            _ => true,
        }
    }

    /// Applies the coin to one vertex's direction amplitudes.
    fn apply_column(&self, col: &mut [Complex<T>], scratch: &mut Vec<Complex<T>>) {
        let n = col.len();
        match self {
            Coin::Grover => {
                let s: Complex<T> = col.iter().copied().sum::<Complex<T>>() * (T::lit(2.0) / T::lit(n as f64));
                for a in col.iter_mut() {
                    *a = s - *a;
                }
            }
            Coin::NegativeIdentity => col.iter_mut().for_each(|a| *a = -*a),
            Coin::Matrix(m) => {
                scratch.clear();
                scratch.extend_from_slice(col);
                for (r, out) in col.iter_mut().enumerate() {
                    *out = m[r * n..(r + 1) * n].iter().zip(scratch.iter()).map(|(u, v)| u * v).sum();
                }
            }
        }
    }
}

/// Max entrywise deviation of `M^† M` from the identity, `M` row-major `n × n`.
pub(crate) fn unitary_deviation<T: Real>(n: usize, m: &[Complex<T>]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let s: Complex<T> = (0..n).map(|k| m[k * n + i].conj() * m[k * n + j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s.re.as_f64() - want).hypot(s.im.as_f64()));
        }
    }
    worst
}

/// Which evolution operator is iterated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkKind {
    /// `V = S C`.
    Standard,
    /// `V_opt = S (C0 ⊗ I) S C`, confined to even-parity vertices.
    Optimized,
}

/// Search instance: hypercube dimension, marked vertex and coins.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec<T> {
    directions: usize,
    target: usize,
    kind: WalkKind,
    coin0: Coin<T>,
    coin1: Coin<T>,
}

impl<T: Real> WalkSpec<T> {
    /// Grover coin away from the target, `-I` at the target.
    pub fn new(directions: usize, target: usize, kind: WalkKind) -> Result<Self> {
        Self::with_coins(directions, target, kind, Coin::Grover, Coin::NegativeIdentity)
    }

    pub fn with_coins(directions: usize, target: usize, kind: WalkKind, coin0: Coin<T>, coin1: Coin<T>) -> Result<Self> {
        if directions < 2 {
            return Err(Error::TooFewQubits(directions));
        }
        let nodes = 1usize << directions;
        if target >= nodes {
            return Err(Error::IndexOutOfRange { index: target, count: nodes });
        }
        if kind == WalkKind::Optimized && target.count_ones() % 2 == 1 {
            return Err(Error::OddParityTarget(target));
        }
        for coin in [&coin0, &coin1] {
            if !coin.dimension_ok(directions) {
                return Err(Error::DimensionMismatch { expected: directions * directions, found: 0 });
            }
        }
        Ok(Self { directions, target, kind, coin0, coin1 })
    }

    pub fn directions(&self) -> usize {
        self.directions
    }

    pub fn node_count(&self) -> usize {
        1 << self.directions
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn coin0(&self) -> &Coin<T> {
        &self.coin0
    }

    pub fn coin1(&self) -> &Coin<T> {
        &self.coin1
    }

    /// Same instance with a different marked vertex.
    pub fn retarget(&self, target: usize) -> Result<Self> {
        Self::with_coins(self.directions, target, self.kind, self.coin0.clone(), self.coin1.clone())
    }

    fn check(&self, state: &WalkerState<T>) -> Result<()> {
        if state.directions() != self.directions {
            return Err(Error::DimensionMismatch { expected: self.directions, found: state.directions() });
        }
        Ok(())
    }
}

/// How the iteration count was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TauRule {
    Explicit,
    /// `round((π/2) sqrt(2^(n-1)))`.
    SkwOptimal,
    /// `round((π/(2√2)) sqrt(N))`, `N` the vertex count of the walk.
    OskwOptimal,
}

impl TauRule {
    pub fn as_str(self) -> &'static str {
        match self {
            TauRule::Explicit => "explicit",
            TauRule::SkwOptimal => "skw_optimal",
            TauRule::OskwOptimal => "oskw_optimal",
        }
    }
}

/// Number of evolution steps, with the real-valued formula it was rounded
/// from when one applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationPlan {
    pub tau: usize,
    pub rule: TauRule,
    pub tau_exact: Option<f64>,
}

impl IterationPlan {
    pub fn explicit(tau: usize) -> Self {
        Self { tau, rule: TauRule::Explicit, tau_exact: None }
    }

    /// Optimal SKW step count for an `n`-dimensional hypercube.
    pub fn skw_optimal(n: usize) -> Self {
        let exact = PI / 2.0 * 2f64.powi(n as i32 - 1).sqrt();
        Self { tau: exact.round() as usize, rule: TauRule::SkwOptimal, tau_exact: Some(exact) }
    }

    /// Optimal step count of the even-parity walk over `node_count` vertices.
    pub fn oskw_optimal(node_count: usize) -> Self {
        let exact = PI / (2.0 * 2f64.sqrt()) * (node_count as f64).sqrt();
        Self { tau: exact.round() as usize, rule: TauRule::OskwOptimal, tau_exact: Some(exact) }
    }
}

/// Applies `S` in place: each row `d` swaps `x` with `x ⊕ 2^d`.
pub(crate) fn shift_in_place<T: Copy>(amps: &mut [T], directions: usize) {
    let nodes = 1usize << directions;
    for (d, row) in amps.chunks_exact_mut(nodes).enumerate() {
        let bit = 1usize << d;
        for x in (0..nodes).filter(|x| x & bit == 0) {
            row.swap(x, x | bit);
        }
    }
}

/// Applies `C0` at every vertex, or `C0` everywhere except `marked` where
/// `C1` acts instead.
pub(crate) fn coin_in_place<T: Real>(
    amps: &mut [Complex<T>],
    directions: usize,
    coin0: &Coin<T>,
    marked: Option<(usize, &Coin<T>)>,
) {
    let nodes = 1usize << directions;
    let saved: Option<Vec<Complex<T>>> = marked.map(|(t, _)| (0..directions).map(|d| amps[d * nodes + t]).collect());
    match coin0 {
        Coin::Grover => {
            let mut sums = vec![czero::<T>(); nodes];
            for row in amps.chunks_exact(nodes) {
                sums.iter_mut().zip(row).for_each(|(s, a)| *s += *a);
            }
            let scale = T::lit(2.0) / T::lit(directions as f64);
            sums.iter_mut().for_each(|s| *s = *s * scale);
            for row in amps.chunks_exact_mut(nodes) {
                row.iter_mut().zip(&sums).for_each(|(a, s)| *a = *s - *a);
            }
        }
        Coin::NegativeIdentity => amps.iter_mut().for_each(|a| *a = -*a),
        Coin::Matrix(_) => {
            let mut col = vec![czero::<T>(); directions];
            let mut scratch = Vec::with_capacity(directions);
            for x in 0..nodes {
                (0..directions).for_each(|d| col[d] = amps[d * nodes + x]);
                coin0.apply_column(&mut col, &mut scratch);
                (0..directions).for_each(|d| amps[d * nodes + x] = col[d]);
            }
        }
    }
    if let (Some((t, coin1)), Some(mut col)) = (marked, saved) {
        let mut scratch = Vec::with_capacity(directions);
        coin1.apply_column(&mut col, &mut scratch);
        (0..directions).for_each(|d| amps[d * nodes + t] = col[d]);
    }
}

/// `S |state⟩`.
pub fn apply_shift<T: Real>(state: &WalkerState<T>) -> WalkerState<T> {
    let mut out = state.clone();
    shift_in_place(out.amplitudes_mut(), state.directions());
    out
}

/// `C |state⟩` with the perturbation at the walk's target.
pub fn apply_perturbed_coin<T: Real>(state: &WalkerState<T>, spec: &WalkSpec<T>) -> Result<WalkerState<T>> {
    spec.check(state)?;
    let mut out = state.clone();
    coin_in_place(out.amplitudes_mut(), spec.directions, &spec.coin0, Some((spec.target, &spec.coin1)));
    Ok(out)
}

/// One application of `V` (or `V_opt`) in place.
pub(crate) fn step_in_place<T: Real>(amps: &mut [Complex<T>], spec: &WalkSpec<T>) {
    let n = spec.directions;
    coin_in_place(amps, n, &spec.coin0, Some((spec.target, &spec.coin1)));
    shift_in_place(amps, n);
    if spec.kind == WalkKind::Optimized {
        coin_in_place(amps, n, &spec.coin0, None);
        shift_in_place(amps, n);
    }
}

/// Applies `V^τ` (or `V_opt^τ`).
pub fn evolve<T: Real>(state: &WalkerState<T>, spec: &WalkSpec<T>, plan: &IterationPlan) -> Result<WalkerState<T>> {
    spec.check(state)?;
    let mut out = state.clone();
    for _ in 0..plan.tau {
        step_in_place(out.amplitudes_mut(), spec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::NodeState;

    type C = Complex<f64>;

    #[test]
    fn shift_moves_along_direction() {
        let w = WalkerState::<f64>::basis(3, 0, 0b000).unwrap();
        assert_eq!(apply_shift(&w), WalkerState::basis(3, 0, 0b001).unwrap());
        let w = WalkerState::<f64>::basis(3, 2, 0b011).unwrap();
        assert_eq!(apply_shift(&w), WalkerState::basis(3, 2, 0b111).unwrap());
    }

    #[test]
    fn shift_is_an_involution() {
        let w = WalkerState::compose(4, &NodeState::<f64>::random(4, 2).unwrap()).unwrap();
        assert_eq!(apply_shift(&apply_shift(&w)), w);
        let u = WalkerState::compose(4, &NodeState::<f64>::uniform(4).unwrap()).unwrap();
        assert_eq!(apply_shift(&u), u);
    }

    #[test]
    fn grover_coin_is_swap_for_two_directions() {
        // Vertex 1 is unmarked; coin amplitudes (1, 0) at vertex 1.
        let w = WalkerState::<f64>::basis(2, 0, 1).unwrap();
        let spec = WalkSpec::new(2, 3, WalkKind::Standard).unwrap();
        let out = apply_perturbed_coin(&w, &spec).unwrap();
        assert!((out.amplitude(0, 1) - C::new(0.0, 0.0)).norm() < 1e-15);
        assert!((out.amplitude(1, 1) - C::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn marked_vertex_gets_negated() {
        let mut amps = vec![C::new(0.0, 0.0); 3 * 8];
        amps[5] = C::new(0.6, 0.0);
        amps[8 + 5] = C::new(0.0, 0.8);
        let w = WalkerState::from_amplitudes(3, amps).unwrap();
        let spec = WalkSpec::new(3, 5, WalkKind::Standard).unwrap();
        let out = apply_perturbed_coin(&w, &spec).unwrap();
        assert_eq!(out.amplitude(0, 5), C::new(-0.6, 0.0));
        assert_eq!(out.amplitude(1, 5), C::new(0.0, -0.8));
        assert_eq!(out.amplitude(2, 5), C::new(0.0, 0.0));
    }

    #[test]
    fn uniform_coin_is_grover_fixed_point() {
        let node = NodeState::<f64>::basis(4, 3).unwrap();
        let w = WalkerState::compose(4, &node).unwrap();
        let spec = WalkSpec::new(4, 0, WalkKind::Standard).unwrap();
        let out = apply_perturbed_coin(&w, &spec).unwrap();
        for d in 0..4 {
            assert!((out.amplitude(d, 3) - C::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dense_coin_matches_builtin_grover() {
        let n = 3;
        let g: Vec<C> = (0..n * n)
            .map(|k| C::new(2.0 / n as f64 - if k / n == k % n { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let tol = Tolerances::default();
        let custom = WalkSpec::with_coins(n, 2, WalkKind::Standard, Coin::matrix(n, g, &tol).unwrap(), Coin::NegativeIdentity)
            .unwrap();
        let builtin = WalkSpec::new(n, 2, WalkKind::Standard).unwrap();
        let w = WalkerState::compose(n, &NodeState::random(n, 4).unwrap()).unwrap();
        let plan = IterationPlan::explicit(7);
        let a = evolve(&w, &custom, &plan).unwrap();
        let b = evolve(&w, &builtin, &plan).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-13);
        }
        assert!(matches!(
            Coin::matrix(2, vec![C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)], &tol),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn zero_steps_is_identity_and_norm_survives_long_runs() {
        let w = WalkerState::compose(6, &NodeState::<f64>::random(6, 9).unwrap()).unwrap();
        let spec = WalkSpec::new(6, 17, WalkKind::Standard).unwrap();
        assert_eq!(evolve(&w, &spec, &IterationPlan::explicit(0)).unwrap(), w);
        let out = evolve(&w, &spec, &IterationPlan::explicit(100)).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spec_validation() {
        assert!(WalkSpec::<f64>::new(3, 8, WalkKind::Standard).is_err());
        assert_eq!(WalkSpec::<f64>::new(3, 1, WalkKind::Optimized), Err(Error::OddParityTarget(1)));
        assert!(WalkSpec::<f64>::new(3, 3, WalkKind::Optimized).is_ok());
        let spec = WalkSpec::<f64>::new(3, 0, WalkKind::Standard).unwrap();
        let w = WalkerState::compose(2, &NodeState::uniform(2).unwrap()).unwrap();
        assert!(evolve(&w, &spec, &IterationPlan::explicit(1)).is_err());
    }

    #[test]
    fn iteration_counts() {
        let p = IterationPlan::skw_optimal(8);
        assert_eq!(p.tau, 18);
        assert!((p.tau_exact.unwrap() - 17.771531752633464).abs() < 1e-12);
        assert_eq!(IterationPlan::skw_optimal(10).tau, 36);
        let p = IterationPlan::oskw_optimal(512);
        assert_eq!(p.tau, 25);
        assert_eq!(p.rule, TauRule::OskwOptimal);
    }
}
