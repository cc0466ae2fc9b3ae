use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{czero, creal, Real};
use crate::settings::Tolerances;
use crate::walk::unitary_deviation;

/// Row-major 2×2 complex matrix `[u00, u01, u10, u11]`.
pub type Qubit2x2<T> = [Complex<T>; 4];

/// Single-qubit Pauli gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix<T: Real>(self) -> Qubit2x2<T> {
        let (o, l) = (czero(), creal(T::one()));
        let i = Complex::new(T::zero(), T::one());
        match self {
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        }
    }

    /// Whether the gate flips the computational basis bit.
    pub fn flips(self) -> bool {
        !matches!(self, Pauli::Z)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product `U_0 ⊗ … ⊗ U_{n-1}` of single-qubit unitaries, factor `j`
/// acting on qubit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalLayer<T> {
    factors: Vec<Qubit2x2<T>>,
}

impl<T: Real> LocalLayer<T> {
    pub fn new(factors: Vec<Qubit2x2<T>>) -> Result<Self> {
        Self::with_tolerances(factors, &Tolerances::default())
    }

    pub fn with_tolerances(factors: Vec<Qubit2x2<T>>, tol: &Tolerances) -> Result<Self> {
        for f in &factors {
            let dev = unitary_deviation(2, f);
            if dev > T::admissible(tol.unitary) {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(Self { factors })
    }

    pub fn identity(n: usize) -> Self {
        let (o, l) = (czero(), creal(T::one()));
        Self { factors: vec![[l, o, o, l]; n] }
    }

    pub fn hadamard(n: usize) -> Self {
        let h = creal(T::FRAC_1_SQRT_2());
        Self { factors: vec![[h, h, h, -h]; n] }
    }

    pub fn pauli(gates: &[Pauli]) -> Self {
        Self { factors: gates.iter().map(|g| g.matrix()).collect() }
    }

    /// Unitary sending `|u⟩` to `|+⟩` and its orthogonal complement to `|−⟩`.
    /// `u` must be normalized.
    pub fn rotation_to_plus(u: [Complex<T>; 2]) -> Qubit2x2<T> {
        let h = T::FRAC_1_SQRT_2();
        let (a, b) = (u[0], u[1]);
        // |+⟩⟨u| + |−⟩⟨u⊥| with u⊥ = (−b*, a*).
        [(a.conj() - b) * h, (b.conj() + a) * h, (a.conj() + b) * h, (b.conj() - a) * h]
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Qubit2x2<T>] {
        &self.factors
    }

    /// The layer equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.arity() != next.arity() {
            return Err(Error::DimensionMismatch { expected: self.arity(), found: next.arity() });
        }
        let factors = self
            .factors
            .iter()
            .zip(&next.factors)
            .map(|(a, b)| {
                [
                    b[0] * a[0] + b[1] * a[2],
                    b[0] * a[1] + b[1] * a[3],
                    b[2] * a[0] + b[3] * a[2],
                    b[2] * a[1] + b[3] * a[3],
                ]
            })
            .collect();
        Ok(Self { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_and_hadamard_are_unitary() {
        for p in Pauli::ALL {
            assert!(unitary_deviation(2, &p.matrix::<f64>()) < 1e-15);
        }
        assert!(LocalLayer::new(LocalLayer::<f64>::hadamard(3).factors().to_vec()).is_ok());
    }

    #[test]
    fn rejects_non_unitary_factor() {
        let l = creal(1.0f64);
        assert!(matches!(LocalLayer::new(vec![[l, l, czero(), l]]), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn rotation_to_plus_maps_u() {
        let u = [Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        let r = LocalLayer::<f64>::rotation_to_plus(u);
        assert!(unitary_deviation(2, &r) < 1e-15);
        let out = [r[0] * u[0] + r[1] * u[1], r[2] * u[0] + r[3] * u[1]];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out[0] - creal(h)).norm() < 1e-15);
        assert!((out[1] - creal(h)).norm() < 1e-15);
    }
}
