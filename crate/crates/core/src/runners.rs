//! End-to-end search runs: prepare the initial walker, evolve once per
//! marked vertex and average the success probability over targets.
//!
//! | algorithm | preprocessing of ψ                         | prediction        |
//! |-----------|--------------------------------------------|-------------------|
//! | SKW-1     | none                                       | `f_c / 2`         |
//! | SKW-2     | best local layer `⊗ U_j`                   | `(1 - E_g²) / 2`  |
//! | SKW-3     | best Pauli layer, then `H^{⊗n}`            | `(1 - C_f²) / 2`  |
//! | OSKW-1    | even-parity projection, `V_opt` walk       | `|⟨η^e|ψ^e⟩|²`    |
//!
//! Predictions drop the finite-size `O(1/sqrt(N))` residual.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::TranslationKernel;
use crate::resources::{
    analytic_pauli_layer, enumerate_pauli_layers, even_coherence_fraction, fidelity_coherence,
    maximize_product_overlap, optimize_local_layer_for_eta_overlap, LocalLayer, PauliOptimum, ProductSearch,
    ResourceReport,
};
use crate::scalar::Real;
use crate::settings::{Guards, Tolerances};
use crate::state::{NodeState, StateInput, WalkerState};
use crate::walk::{evolve, IterationPlan, WalkKind, WalkSpec};

/// Search algorithm variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Skw1,
    Skw2,
    Skw3,
    Oskw1,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Skw1 => "skw1",
            Algorithm::Skw2 => "skw2",
            Algorithm::Skw3 => "skw3",
            Algorithm::Oskw1 => "oskw1",
        }
    }

    pub fn walk_kind(self) -> WalkKind {
        match self {
            Algorithm::Oskw1 => WalkKind::Optimized,
            _ => WalkKind::Standard,
        }
    }

    /// Default iteration plan for a walk on a `directions`-dimensional cube.
    pub fn default_plan(self, directions: usize) -> IterationPlan {
        match self {
            Algorithm::Oskw1 => IterationPlan::oskw_optimal(1 << directions),
            _ => IterationPlan::skw_optimal(directions),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "skw" | "skw1" => Ok(Algorithm::Skw1),
            "skw2" => Ok(Algorithm::Skw2),
            "skw3" => Ok(Algorithm::Skw3),
            "oskw" | "oskw1" => Ok(Algorithm::Oskw1),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm '{s}'"))),
        }
    }
}

/// What counts as success at the marked vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SuccessMetric {
    /// `Σ_d |amp(d, target)|²`: probability of reading the target from the
    /// node register.
    #[default]
    VertexMarginal,
    /// `|⟨S^c ⊗ target|ψ_τ⟩|²`.
    CoinProjected,
}

/// Which marked vertices are averaged over.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TargetSelection {
    /// Every admissible target up to `Guards::exact_targets_max_dimension`,
    /// a seeded uniform sample of `Guards::sampled_targets` beyond.
    #[default]
    Auto,
    All,
    Sampled { count: usize, seed: u64 },
    Explicit(Vec<usize>),
}

/// Divisor of the OSKW target average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OskwNormalization {
    /// Mean over the `N/2` even-parity targets.
    #[default]
    EvenTargets,
    /// Sum over even targets divided by the full vertex count `N`.
    AllVertices,
}

/// How per-target amplitudes are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// One full walk per target.
    #[default]
    Direct,
    /// One backward walk for a reference target, then XOR-convolution over
    /// all targets (see [`TranslationKernel`]). Standard coins only.
    Translation,
}

/// How the SKW-3 Pauli layer is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PauliSelection {
    /// Exhaustive within the enumeration guard, analytic beyond.
    #[default]
    Auto,
    Exhaustive,
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub metric: SuccessMetric,
    pub targets: TargetSelection,
    pub oskw_normalization: OskwNormalization,
    pub engine: Engine,
    pub pauli: PauliSelection,
    pub search: ProductSearch,
    /// Also estimate `E_g` for algorithms whose prediction does not need it.
    pub measure_entanglement: bool,
    pub tolerances: Tolerances,
    pub guards: Guards,
}

impl Default for RunOptions {
    fn default() -> Self {
        let tolerances = Tolerances::default();
        Self {
            metric: SuccessMetric::default(),
            targets: TargetSelection::default(),
            oskw_normalization: OskwNormalization::default(),
            engine: Engine::default(),
            pauli: PauliSelection::default(),
            search: ProductSearch::from_tolerances(&tolerances, 0),
            measure_entanglement: false,
            tolerances,
            guards: Guards::default(),
        }
    }
}

/// Outcome of one run over all (or sampled) targets.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub algorithm: Algorithm,
    /// Hypercube dimension (node-register qubit count).
    pub qubits: usize,
    pub plan: IterationPlan,
    pub per_target: Vec<(usize, T)>,
    pub p_avg: T,
    pub p_pred: T,
    pub abs_dev: T,
    pub resource: ResourceReport<T>,
    /// Layer applied to ψ before the walk (SKW-2, SKW-3).
    pub layer: Option<LocalLayer<T>>,
    /// Odd-parity weight discarded by OSKW-1.
    pub leaked_weight: Option<T>,
    /// Set when targets were sampled rather than exhausted.
    pub sampled_targets: Option<usize>,
    pub seed: u64,
    pub wall_ms: f64,
}

impl<T: Real> RunResult<T> {
    /// Checks the result's own invariants; returns the name of the first
    /// violated one.
    pub fn check_invariants(&self, oskw: OskwNormalization) -> std::result::Result<(), String> {
        let slack = T::lit(T::admissible(1e-12));
        if let Some((t, p)) = self.per_target.iter().find(|(_, p)| !(*p >= -slack && *p <= T::one() + slack)) {
            return Err(format!("probability range: target {t} has probability {p}"));
        }
        let mean = average(&self.per_target, self.algorithm, self.qubits, oskw, self.sampled_targets.is_some());
        if (mean - self.p_avg).abs() > T::lit(T::admissible(1e-14)) {
            return Err(format!("target average: stored {} vs recomputed {}", self.p_avg, mean));
        }
        for (name, v) in [("p_avg", self.p_avg), ("p_pred", self.p_pred), ("f_c", self.resource.f_c)] {
            if !(v >= -slack && v <= T::one() + slack) {
                return Err(format!("probability range: {name} = {v}"));
            }
        }
        Ok(())
    }
}

fn average<T: Real>(per_target: &[(usize, T)], alg: Algorithm, qubits: usize, oskw: OskwNormalization, sampled: bool) -> T {
    let sum: T = per_target.iter().map(|(_, p)| *p).sum();
    let count = if alg == Algorithm::Oskw1 && oskw == OskwNormalization::AllVertices && !sampled {
        1usize << qubits
    } else {
        per_target.len()
    };
    sum / T::lit(count as f64)
}

/// Closed-form prediction from the resource measures; no simulation.
pub fn predicted_probability<T: Real>(algorithm: Algorithm, resource: &ResourceReport<T>) -> Result<T> {
    let half = T::lit(0.5);
    Ok(match algorithm {
        Algorithm::Skw1 => resource.f_c * half,
        Algorithm::Skw2 => {
            let e = resource.e_g.ok_or(Error::MissingResource("E_g"))?;
            (T::one() - e * e) * half
        }
        Algorithm::Skw3 => {
            let c = resource.c_f.ok_or(Error::MissingResource("C_f"))?;
            (T::one() - c * c) * half
        }
        Algorithm::Oskw1 => resource.f_c,
    })
}

fn admissible_targets(kind: WalkKind, directions: usize) -> Vec<usize> {
    let all = 0..1usize << directions;
    match kind {
        WalkKind::Standard => all.collect(),
        WalkKind::Optimized => all.filter(|x| x.count_ones() % 2 == 0).collect(),
    }
}

fn select_targets(kind: WalkKind, directions: usize, opts: &RunOptions) -> Result<(Vec<usize>, bool)> {
    let admissible = admissible_targets(kind, directions);
    let sampled = |count: usize, seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = count.min(admissible.len());
        let mut picked: Vec<usize> = sample(&mut rng, admissible.len(), count).into_iter().map(|i| admissible[i]).collect();
        picked.sort_unstable();
        picked
    };
    Ok(match &opts.targets {
        TargetSelection::All => (admissible, false),
        TargetSelection::Auto if directions <= opts.guards.exact_targets_max_dimension => (admissible, false),
        TargetSelection::Auto => (sampled(opts.guards.sampled_targets, opts.search.seed), true),
        TargetSelection::Sampled { count, seed } => {
            let s = sampled(*count, *seed);
            let partial = s.len() < admissible.len();
            (s, partial)
        }
        TargetSelection::Explicit(list) => {
            for &t in list {
                WalkSpec::<f64>::new(directions, t, kind)?;
            }
            (list.clone(), true)
        }
    })
}

/// Per-target success probabilities of `Σ_μ p_μ` walks started from
/// `|S^c⟩ ⊗ |ψ_μ⟩`.
fn sweep_targets<T: Real>(
    members: &[(T, &NodeState<T>)],
    kind: WalkKind,
    plan: &IterationPlan,
    targets: &[usize],
    opts: &RunOptions,
) -> Result<Vec<(usize, T)>> {
    let directions = members[0].1.qubits();
    match opts.engine {
        Engine::Direct => {
            let walkers = members
                .iter()
                .map(|(p, s)| Ok((*p, WalkerState::compose(directions, s)?)))
                .collect::<Result<Vec<_>>>()?;
            targets
                .par_iter()
                .map(|&t| {
                    let spec = WalkSpec::new(directions, t, kind)?;
                    let mut total = T::zero();
                    for (p, w) in &walkers {
                        let out = evolve(w, &spec, plan)?;
                        let prob = match opts.metric {
                            SuccessMetric::VertexMarginal => out.success_probability(t)?,
                            SuccessMetric::CoinProjected => out.gamma_probability(t)?,
                        };
                        total = total + *p * prob;
                    }
                    Ok((t, total))
                })
                .collect()
        }
        Engine::Translation => {
            let kernel = TranslationKernel::new(&WalkSpec::new(directions, 0, kind)?, plan)?;
            let mut totals = vec![T::zero(); 1 << directions];
            for (p, s) in members {
                let probs = kernel.probabilities(s, opts.metric)?;
                totals.iter_mut().zip(probs).for_each(|(acc, q)| *acc = *acc + *p * q);
            }
            Ok(targets.iter().map(|&t| (t, totals[t])).collect())
        }
    }
}

struct Prepared<'a, T: Clone> {
    members: Vec<(T, std::borrow::Cow<'a, NodeState<T>>)>,
    resource: ResourceReport<T>,
    layer: Option<LocalLayer<T>>,
    leaked: Option<T>,
}

fn finish<T: Real>(
    algorithm: Algorithm,
    prepared: Prepared<'_, T>,
    plan: &IterationPlan,
    opts: &RunOptions,
    started: Instant,
) -> Result<RunResult<T>> {
    let directions = prepared.members[0].1.qubits();
    let kind = algorithm.walk_kind();
    let (targets, partial) = select_targets(kind, directions, opts)?;
    let members: Vec<(T, &NodeState<T>)> = prepared.members.iter().map(|(p, s)| (*p, s.as_ref())).collect();
    let per_target = sweep_targets(&members, kind, plan, &targets, opts)?;
    let p_avg = average(&per_target, algorithm, directions, opts.oskw_normalization, partial);
    let p_pred = predicted_probability(algorithm, &prepared.resource)?;
    Ok(RunResult {
        algorithm,
        qubits: directions,
        plan: *plan,
        per_target,
        p_avg,
        p_pred,
        abs_dev: (p_avg - p_pred).abs(),
        resource: prepared.resource,
        layer: prepared.layer,
        leaked_weight: prepared.leaked,
        sampled_targets: partial.then_some(targets.len()),
        seed: opts.search.seed,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

fn with_entanglement<T: Real>(report: ResourceReport<T>, state: &NodeState<T>, opts: &RunOptions) -> Result<ResourceReport<T>> {
    if !opts.measure_entanglement {
        return Ok(report);
    }
    Ok(report.with_product_optimum(&maximize_product_overlap(state, &opts.search)?))
}

/// SKW-1: walk from `|S^c⟩ ⊗ ψ` (or the ensemble) as given. With `ψ = η` this
/// is the original SKW search.
pub fn run_skw1<'a, T: Real>(input: impl Into<StateInput<'a, T>>, plan: &IterationPlan, opts: &RunOptions) -> Result<RunResult<T>> {
    let started = Instant::now();
    let input = input.into();
    let mut resource = ResourceReport::coherence(input);
    if let StateInput::Pure(s) = input {
        resource = with_entanglement(resource, s, opts)?;
    }
    let members = input.weighted().into_iter().map(|(p, s)| (p, std::borrow::Cow::Borrowed(s))).collect();
    finish(Algorithm::Skw1, Prepared { members, resource, layer: None, leaked: None }, plan, opts, started)
}

/// SKW-2: apply the local layer maximizing the overlap with `η`, then walk.
pub fn run_skw2<T: Real>(state: &NodeState<T>, plan: &IterationPlan, opts: &RunOptions) -> Result<RunResult<T>> {
    let started = Instant::now();
    let best = optimize_local_layer_for_eta_overlap(state, &opts.search)?;
    let resource = ResourceReport::coherence(state).with_product_optimum(&best.product);
    let prepared = state.apply_local_layer(&best.layer)?;
    let members = vec![(T::one(), std::borrow::Cow::Owned(prepared))];
    finish(Algorithm::Skw2, Prepared { members, resource, layer: Some(best.layer), leaked: None }, plan, opts, started)
}

/// The SKW-3 Pauli layer under the configured selection rule.
pub fn select_pauli_layer<T: Real>(state: &NodeState<T>, opts: &RunOptions) -> Result<PauliOptimum<T>> {
    let within_guard = state.qubits() <= opts.guards.pauli_enumeration_max_qubits;
    match opts.pauli {
        PauliSelection::Exhaustive => enumerate_pauli_layers(state, &opts.guards),
        PauliSelection::Auto if within_guard => enumerate_pauli_layers(state, &opts.guards),
        PauliSelection::Auto | PauliSelection::Analytic => Ok(analytic_pauli_layer(state)),
    }
}

/// SKW-3: apply the best Pauli layer, then Hadamards on every qubit, then walk.
pub fn run_skw3<T: Real>(state: &NodeState<T>, plan: &IterationPlan, opts: &RunOptions) -> Result<RunResult<T>> {
    let started = Instant::now();
    let pauli = select_pauli_layer(state, opts)?;
    let layer = pauli.layer.then(&LocalLayer::hadamard(state.qubits()))?;
    let resource = with_entanglement(ResourceReport::coherence(state), state, opts)?;
    let prepared = state.apply_local_layer(&layer)?;
    let members = vec![(T::one(), std::borrow::Cow::Owned(prepared))];
    finish(Algorithm::Skw3, Prepared { members, resource, layer: Some(layer), leaked: None }, plan, opts, started)
}

/// OSKW-1: project ψ (on `2^(n+1)` vertices) onto even parity, renormalize
/// and run the optimized walk over even targets. The reported `f_c` is taken
/// against `η^e` and `C_f` of the projected state.
pub fn run_oskw1<T: Real>(state: &NodeState<T>, plan: &IterationPlan, opts: &RunOptions) -> Result<RunResult<T>> {
    let started = Instant::now();
    let (even, leaked) = state.project_even_parity()?;
    let mut resource = ResourceReport::coherence(&even);
    resource.f_c = even_coherence_fraction(&even);
    resource.c_f = Some(fidelity_coherence(&even));
    let resource = with_entanglement(resource, &even, opts)?;
    let members = vec![(T::one(), std::borrow::Cow::Owned(even))];
    finish(Algorithm::Oskw1, Prepared { members, resource, layer: None, leaked: Some(leaked) }, plan, opts, started)
}

/// Dispatches on the algorithm with its default plan when `plan` is `None`.
pub fn run<T: Real>(algorithm: Algorithm, state: &NodeState<T>, plan: Option<IterationPlan>, opts: &RunOptions) -> Result<RunResult<T>> {
    let plan = plan.unwrap_or_else(|| algorithm.default_plan(state.qubits()));
    match algorithm {
        Algorithm::Skw1 => run_skw1(state, &plan, opts),
        Algorithm::Skw2 => run_skw2(state, &plan, opts),
        Algorithm::Skw3 => run_skw3(state, &plan, opts),
        Algorithm::Oskw1 => run_oskw1(state, &plan, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::MixedEnsemble;

    #[test]
    fn predictions() {
        let mut r = ResourceReport { f_c: 1.0f64, c_f: None, e_g: None, e_g_overlap: None, restarts_used: 0, converged: true };
        assert_eq!(predicted_probability(Algorithm::Skw1, &r).unwrap(), 0.5);
        assert_eq!(predicted_probability(Algorithm::Skw2, &r), Err(Error::MissingResource("E_g")));
        assert_eq!(predicted_probability(Algorithm::Skw3, &r), Err(Error::MissingResource("C_f")));
        r.e_g = Some(1.0);
        r.c_f = Some(0.0);
        assert_eq!(predicted_probability(Algorithm::Skw2, &r).unwrap(), 0.0);
        assert_eq!(predicted_probability(Algorithm::Skw3, &r).unwrap(), 0.5);
        assert_eq!(predicted_probability(Algorithm::Oskw1, &r).unwrap(), 1.0);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Skw1, Algorithm::Skw2, Algorithm::Skw3, Algorithm::Oskw1] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("SKW-2".parse::<Algorithm>().unwrap(), Algorithm::Skw2);
        assert!("grover".parse::<Algorithm>().is_err());
    }

    #[test]
    fn small_skw1_is_consistent() {
        let s = NodeState::<f64>::random(4, 3).unwrap();
        let r = run_skw1(&s, &IterationPlan::skw_optimal(4), &RunOptions::default()).unwrap();
        assert_eq!(r.per_target.len(), 16);
        r.check_invariants(OskwNormalization::EvenTargets).unwrap();
        assert!((r.p_pred - r.resource.f_c / 2.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_run_is_weighted_mean() {
        let a = NodeState::<f64>::uniform(4).unwrap();
        let b = NodeState::<f64>::random(4, 8).unwrap();
        let rho = MixedEnsemble::new(vec![(0.25, a.clone()), (0.75, b.clone())]).unwrap();
        let plan = IterationPlan::skw_optimal(4);
        let opts = RunOptions::default();
        let ra = run_skw1(&a, &plan, &opts).unwrap();
        let rb = run_skw1(&b, &plan, &opts).unwrap();
        let rm = run_skw1(&rho, &plan, &opts).unwrap();
        for ((pa, pb), pm) in ra.per_target.iter().zip(&rb.per_target).zip(&rm.per_target) {
            assert!((0.25 * pa.1 + 0.75 * pb.1 - pm.1).abs() < 1e-14);
        }
        assert!(rm.resource.c_f.is_none());
    }

    #[test]
    fn sampled_targets_are_recorded() {
        let s = NodeState::<f64>::uniform(5).unwrap();
        let opts = RunOptions { targets: TargetSelection::Sampled { count: 7, seed: 1 }, ..RunOptions::default() };
        let r = run_skw1(&s, &IterationPlan::explicit(3), &opts).unwrap();
        assert_eq!(r.sampled_targets, Some(7));
        assert_eq!(r.per_target.len(), 7);
        let opts = RunOptions { targets: TargetSelection::Explicit(vec![0, 40]), ..RunOptions::default() };
        assert!(run_skw1(&s, &IterationPlan::explicit(3), &opts).is_err());
    }

    #[test]
    fn oskw_rejects_odd_only_states() {
        let s = NodeState::<f64>::basis(4, 0b0001).unwrap();
        assert_eq!(
            run_oskw1(&s, &IterationPlan::oskw_optimal(16), &RunOptions::default()).unwrap_err(),
            Error::ZeroEvenProjection
        );
        let s = NodeState::<f64>::basis(4, 0b0011).unwrap();
        let r = run_oskw1(&s, &IterationPlan::oskw_optimal(16), &RunOptions::default()).unwrap();
        assert!((r.p_pred - 1.0 / 8.0).abs() < 1e-15);
        assert_eq!(r.per_target.len(), 8);
        assert_eq!(r.leaked_weight, Some(0.0));
    }

    #[test]
    fn oskw_normalization_flag_halves_average() {
        let s = NodeState::<f64>::even_uniform(4).unwrap();
        let plan = IterationPlan::oskw_optimal(16);
        let even = run_oskw1(&s, &plan, &RunOptions::default()).unwrap();
        let opts = RunOptions { oskw_normalization: OskwNormalization::AllVertices, ..RunOptions::default() };
        let all = run_oskw1(&s, &plan, &opts).unwrap();
        assert!((all.p_avg * 2.0 - even.p_avg).abs() < 1e-14);
        all.check_invariants(OskwNormalization::AllVertices).unwrap();
    }
}
