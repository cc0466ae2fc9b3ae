//! Node-register states, mixed ensembles and full coin ⊗ node walker states.
//!
//! Bit convention: vertex `x` is an `n`-bit integer, qubit `j` is bit `j`
//! (bit 0 least significant) and walk direction `d` flips bit `d`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::resources::LocalLayer;
use crate::scalar::{czero, creal, Real};
use crate::settings::Tolerances;

/// Pure state of the `n`-qubit node register, `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState<T> {
    qubits: usize,
    amps: Vec<Complex<T>>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    Ok(n)
}

fn check_qubits(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    if n >= usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument(format!("{n} qubits cannot be addressed")));
    }
    Ok(())
}

pub(crate) fn norm_sqr<T: Real>(amps: &[Complex<T>]) -> T {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl<T: Real> NodeState<T> {
    /// Wraps an already-normalized amplitude vector.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        Self::from_amplitudes_with(amps, &Tolerances::default())
    }

    pub fn from_amplitudes_with(amps: Vec<Complex<T>>, tol: &Tolerances) -> Result<Self> {
        let qubits = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps).as_f64();
        if !norm.is_finite() || (norm - 1.0).abs() > T::admissible(tol.norm) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { qubits, amps })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amps: Vec<Complex<T>>) -> Result<Self> {
        let qubits = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let scale = norm.sqrt().recip();
        for a in amps.iter_mut() {
            *a = *a * scale;
        }
        Ok(Self { qubits, amps })
    }

    /// Real amplitudes convenience constructor; normalizes.
    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::normalized(values.iter().map(|&v| creal(v)).collect())
    }

    /// The maximally coherent state η: every amplitude `1/sqrt(2^n)`.
    pub fn uniform(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let len = 1usize << n;
        let a = creal(T::lit(len as f64).sqrt().recip());
        Ok(Self { qubits: n, amps: vec![a; len] })
    }

    /// Computational basis state `|i⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let len = 1usize << n;
        if index >= len {
            return Err(Error::IndexOutOfRange { index, count: len });
        }
        let mut amps = vec![czero(); len];
        amps[index] = creal(T::one());
        Ok(Self { qubits: n, amps })
    }

    /// Haar-random pure state: `2^n` i.i.d. standard complex Gaussians,
    /// normalized. A pure function of `(n, seed)`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_qubits(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex::new(T::lit(re), T::lit(im))
            })
            .collect();
        Self::normalized(amps)
    }

    /// GHZ state `(|0…0⟩ + |1…1⟩)/sqrt(2)`.
    pub fn ghz(n: usize) -> Result<Self> {
        Self::ghz_angle(n, T::FRAC_PI_4())
    }

    /// `cos α |0…0⟩ + sin α |1…1⟩`.
    pub fn ghz_angle(n: usize, alpha: T) -> Result<Self> {
        check_qubits(n)?;
        let len = 1usize << n;
        let mut amps = vec![czero(); len];
        amps[0] = creal(alpha.cos());
        amps[len - 1] += creal(alpha.sin());
        Self::normalized(amps)
    }

    /// W state: equal superposition of all weight-one vertices.
    pub fn w(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let mut amps = vec![czero(); 1usize << n];
        for j in 0..n {
            amps[1 << j] = creal(T::one());
        }
        Self::normalized(amps)
    }

    /// Uniform superposition over even-Hamming-weight vertices (η^e).
    pub fn even_uniform(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let amps = (0..1usize << n)
            .map(|x| if x.count_ones() % 2 == 0 { creal(T::one()) } else { czero() })
            .collect();
        Self::normalized(amps)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Number of vertices, `2^n`.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amps)
    }

    pub fn probabilities(&self) -> impl Iterator<Item = T> + '_ {
        self.amps.iter().map(|a| a.norm_sqr())
    }

    /// `⟨self|other⟩ = Σ_x conj(a_x) b_x`.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// The state relabelled by vertex translation: amplitude at `x` becomes
    /// the old amplitude at `x ⊕ shift`.
    pub fn translated(&self, shift: usize) -> Result<Self> {
        if shift >= self.len() {
            return Err(Error::IndexOutOfRange { index: shift, count: self.len() });
        }
        let amps = (0..self.len()).map(|x| self.amps[x ^ shift]).collect();
        Ok(Self { qubits: self.qubits, amps })
    }

    /// `(U_0 ⊗ … ⊗ U_{n-1}) |ψ⟩`, factor `j` acting on qubit (bit) `j`.
    pub fn apply_local_layer(&self, layer: &LocalLayer<T>) -> Result<Self> {
        if layer.arity() != self.qubits {
            return Err(Error::DimensionMismatch { expected: self.qubits, found: layer.arity() });
        }
        let mut amps = self.amps.clone();
        for (j, u) in layer.factors().iter().enumerate() {
            let bit = 1usize << j;
            for x in (0..amps.len()).filter(|x| x & bit == 0) {
                let (a0, a1) = (amps[x], amps[x | bit]);
                amps[x] = u[0] * a0 + u[1] * a1;
                amps[x | bit] = u[2] * a0 + u[3] * a1;
            }
        }
        Ok(Self { qubits: self.qubits, amps })
    }

    /// Zeroes odd-parity amplitudes. Returns the renormalized even part and
    /// the probability weight that was discarded.
    pub fn project_even_parity(&self) -> Result<(Self, T)> {
        let amps: Vec<_> = self
            .amps
            .iter()
            .enumerate()
            .map(|(x, &a)| if x.count_ones() % 2 == 0 { a } else { czero() })
            .collect();
        let kept = norm_sqr(&amps);
        if !(kept > T::zero()) {
            return Err(Error::ZeroEvenProjection);
        }
        let leaked = (T::one() - kept / self.norm_sqr()).max(T::zero());
        Ok((Self::normalized(amps)?, leaked))
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Real>(&self) -> NodeState<U> {
        NodeState {
            qubits: self.qubits,
            amps: self.amps.iter().map(|a| Complex::new(U::lit(a.re.as_f64()), U::lit(a.im.as_f64()))).collect(),
        }
    }
}

/// Convex mixture `ρ = Σ_μ p_μ |ψ_μ⟩⟨ψ_μ|` of node states of equal size.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedEnsemble<T> {
    members: Vec<(T, NodeState<T>)>,
}

impl<T: Real> MixedEnsemble<T> {
    pub fn new(members: Vec<(T, NodeState<T>)>) -> Result<Self> {
        Self::with_tolerances(members, &Tolerances::default())
    }

    pub fn with_tolerances(members: Vec<(T, NodeState<T>)>, tol: &Tolerances) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::InvalidEnsemble("no members".into()));
        };
        let len = first.len();
        if let Some((_, s)) = members.iter().find(|(_, s)| s.len() != len) {
            return Err(Error::DimensionMismatch { expected: len, found: s.len() });
        }
        if members.iter().any(|(p, _)| !(*p >= T::zero())) {
            return Err(Error::InvalidEnsemble("negative weight".into()));
        }
        let total: T = members.iter().map(|(p, _)| *p).sum();
        if (total.as_f64() - 1.0).abs() > T::admissible(tol.ensemble_weights) {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(T, NodeState<T>)] {
        &self.members
    }

    pub fn qubits(&self) -> usize {
        self.members[0].1.qubits()
    }

    pub fn len(&self) -> usize {
        self.members[0].1.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Either kind of node-register input accepted by runners and measures.
#[derive(Debug, Clone, Copy)]
pub enum StateInput<'a, T> {
    Pure(&'a NodeState<T>),
    Mixed(&'a MixedEnsemble<T>),
}

impl<'a, T: Real> StateInput<'a, T> {
    pub fn qubits(&self) -> usize {
        match self {
            StateInput::Pure(s) => s.qubits(),
            StateInput::Mixed(m) => m.qubits(),
        }
    }

    /// Weighted pure members; a pure state is a single member of weight one.
    pub fn weighted(&self) -> Vec<(T, &'a NodeState<T>)> {
        match *self {
            StateInput::Pure(s) => vec![(T::one(), s)],
            StateInput::Mixed(m) => m.members().iter().map(|(p, s)| (*p, s)).collect(),
        }
    }
}

impl<'a, T> From<&'a NodeState<T>> for StateInput<'a, T> {
    fn from(s: &'a NodeState<T>) -> Self {
        StateInput::Pure(s)
    }
}

impl<'a, T> From<&'a MixedEnsemble<T>> for StateInput<'a, T> {
    fn from(m: &'a MixedEnsemble<T>) -> Self {
        StateInput::Mixed(m)
    }
}

/// Full walker state on coin ⊗ node space. Amplitude of `(d, x)` is stored
/// at flat index `d * node_count + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState<T> {
    directions: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> WalkerState<T> {
    /// `|S^c⟩ ⊗ |ψ⟩` with the uniform coin over `directions` directions.
    pub fn compose(directions: usize, node: &NodeState<T>) -> Result<Self> {
        if directions != node.qubits() {
            return Err(Error::DimensionMismatch { expected: node.qubits(), found: directions });
        }
        let c = T::lit(directions as f64).sqrt().recip();
        let mut amps = Vec::with_capacity(directions * node.len());
        for _ in 0..directions {
            amps.extend(node.amplitudes().iter().map(|a| *a * c));
        }
        Ok(Self { directions, amps })
    }

    /// Wraps a raw amplitude vector in `d * node_count + x` layout.
    pub fn from_amplitudes(directions: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        check_qubits(directions)?;
        let expected = directions << directions;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: amps.len() });
        }
        Ok(Self { directions, amps })
    }

    /// Walker localized at a single `(d, x)` basis element.
    pub fn basis(directions: usize, d: usize, x: usize) -> Result<Self> {
        check_qubits(directions)?;
        let nodes = 1usize << directions;
        if d >= directions {
            return Err(Error::IndexOutOfRange { index: d, count: directions });
        }
        if x >= nodes {
            return Err(Error::IndexOutOfRange { index: x, count: nodes });
        }
        let mut amps = vec![czero(); directions * nodes];
        amps[d * nodes + x] = creal(T::one());
        Ok(Self { directions, amps })
    }

    pub fn directions(&self) -> usize {
        self.directions
    }

    pub fn node_count(&self) -> usize {
        1 << self.directions
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn amplitude(&self, d: usize, x: usize) -> Complex<T> {
        self.amps[d * self.node_count() + x]
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amps)
    }

    fn check_target(&self, target: usize) -> Result<()> {
        if target >= self.node_count() {
            return Err(Error::IndexOutOfRange { index: target, count: self.node_count() });
        }
        Ok(())
    }

    /// Probability of reading `target` from the node register:
    /// `Σ_d |amp(d, target)|²`.
    pub fn success_probability(&self, target: usize) -> Result<T> {
        self.check_target(target)?;
        let nodes = self.node_count();
        Ok((0..self.directions).map(|d| self.amps[d * nodes + target].norm_sqr()).sum())
    }

    /// `|⟨S^c ⊗ target|walker⟩|²`, the projection used in the analytic
    /// arguments. Never exceeds [`Self::success_probability`].
    pub fn gamma_probability(&self, target: usize) -> Result<T> {
        self.check_target(target)?;
        let nodes = self.node_count();
        let sum: Complex<T> = (0..self.directions).map(|d| self.amps[d * nodes + target]).sum();
        Ok(sum.norm_sqr() / T::lit(self.directions as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::{LocalLayer, Pauli};

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn uniform_amplitudes() {
        let s = NodeState::<f64>::uniform(2).unwrap();
        assert!(s.amplitudes().iter().all(|a| *a == c(0.5)));
        let s = NodeState::<f64>::uniform(3).unwrap();
        let v = 1.0 / 8f64.sqrt();
        assert!(s.amplitudes().iter().all(|a| (a.re - v).abs() < 1e-16 && a.im == 0.0));
        assert_eq!(NodeState::<f64>::uniform(1), Err(Error::TooFewQubits(1)));
    }

    #[test]
    fn basis_states() {
        let s = NodeState::<f64>::basis(2, 3).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(0.0), c(0.0), c(1.0)]);
        let s = NodeState::<f64>::basis(3, 0).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.amplitudes()[0], c(1.0));
        assert!(matches!(NodeState::<f64>::basis(2, 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn random_state_is_deterministic_and_normalized() {
        let a = NodeState::<f64>::random(3, 7).unwrap();
        let b = NodeState::<f64>::random(3, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert_ne!(a, NodeState::<f64>::random(3, 8).unwrap());
    }

    #[test]
    fn haar_marginal_mean() {
        // E|a_0|² = 1/N for a Haar state.
        let mean: f64 =
            (0..1000).map(|s| NodeState::<f64>::random(2, s).unwrap().amplitudes()[0].norm_sqr()).sum::<f64>() / 1000.0;
        assert!((mean - 0.25).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn compose_walker() {
        let w = WalkerState::compose(2, &NodeState::<f64>::uniform(2).unwrap()).unwrap();
        let v = 1.0 / (2.0 * 2f64.sqrt());
        assert!(w.amplitudes().iter().all(|a| (a.re - v).abs() < 1e-15));
        assert_eq!(w.amplitudes().len(), 8);

        let w = WalkerState::compose(2, &NodeState::<f64>::basis(2, 0).unwrap()).unwrap();
        let h = 1.0 / 2f64.sqrt();
        for d in 0..2 {
            for x in 0..4 {
                let want = if x == 0 { h } else { 0.0 };
                assert!((w.amplitude(d, x).re - want).abs() < 1e-15);
            }
        }
        assert!(WalkerState::compose(3, &NodeState::<f64>::uniform(2).unwrap()).is_err());
    }

    #[test]
    fn overlaps() {
        let eta = NodeState::<f64>::uniform(3).unwrap();
        let e0 = NodeState::<f64>::basis(3, 0).unwrap();
        let e1 = NodeState::<f64>::basis(3, 1).unwrap();
        assert!((eta.overlap(&eta).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((eta.overlap(&e0).unwrap() - c(1.0 / 8f64.sqrt())).norm() < 1e-15);
        assert_eq!(e0.overlap(&e1).unwrap(), c(0.0));
        assert!(eta.overlap(&NodeState::uniform(2).unwrap()).is_err());
    }

    #[test]
    fn local_layers() {
        let s = NodeState::<f64>::random(3, 1).unwrap();
        assert_eq!(s.apply_local_layer(&LocalLayer::identity(3)).unwrap(), s);

        let zero = NodeState::<f64>::basis(4, 0).unwrap();
        let h = zero.apply_local_layer(&LocalLayer::hadamard(4)).unwrap();
        let eta = NodeState::<f64>::uniform(4).unwrap();
        assert!(h.amplitudes().iter().zip(eta.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));

        let x0 = LocalLayer::pauli(&[Pauli::X, Pauli::Z]);
        let out = NodeState::<f64>::basis(2, 0).unwrap().apply_local_layer(&x0).unwrap();
        assert_eq!(out, NodeState::basis(2, 1).unwrap());

        assert!(s.apply_local_layer(&LocalLayer::identity(2)).is_err());
    }

    #[test]
    fn even_parity_projection() {
        let (p, leaked) = NodeState::<f64>::uniform(4).unwrap().project_even_parity().unwrap();
        assert!((leaked - 0.5).abs() < 1e-15);
        assert_eq!(p, NodeState::even_uniform(4).unwrap());

        let (p, leaked) = NodeState::<f64>::basis(3, 0).unwrap().project_even_parity().unwrap();
        assert_eq!(leaked, 0.0);
        assert_eq!(p, NodeState::basis(3, 0).unwrap());

        // 0b011 has even weight; 0b001 has odd weight.
        assert!(NodeState::<f64>::basis(3, 0b011).unwrap().project_even_parity().is_ok());
        assert_eq!(
            NodeState::<f64>::basis(3, 0b001).unwrap().project_even_parity(),
            Err(Error::ZeroEvenProjection)
        );
    }

    #[test]
    fn ensembles_validate_weights() {
        let a = NodeState::<f64>::uniform(2).unwrap();
        let b = NodeState::<f64>::basis(2, 0).unwrap();
        assert!(MixedEnsemble::new(vec![(0.5, a.clone()), (0.5, b.clone())]).is_ok());
        assert!(MixedEnsemble::new(vec![(0.6, a.clone()), (0.5, b.clone())]).is_err());
        assert!(MixedEnsemble::new(vec![(1.5, a.clone()), (-0.5, b)]).is_err());
        assert!(MixedEnsemble::new(vec![(0.5, a), (0.5, NodeState::uniform(3).unwrap())]).is_err());
        assert!(MixedEnsemble::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn success_metrics() {
        let node = NodeState::<f64>::basis(3, 5).unwrap();
        let w = WalkerState::compose(3, &node).unwrap();
        assert!((w.success_probability(5).unwrap() - 1.0).abs() < 1e-15);
        assert!((w.gamma_probability(5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(w.success_probability(4).unwrap(), 0.0);
        assert!(w.success_probability(8).is_err());
    }

    #[test]
    fn single_precision_states() {
        let s = NodeState::<f32>::random(6, 3).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-5);
        let back = s.cast::<f64>().cast::<f32>();
        assert_eq!(back, s);
    }
}
