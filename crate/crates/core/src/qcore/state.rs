use nalgebra::DMatrix;

use super::{Kronecker, UnitaryOperator, C64};
use crate::error::{Error, Result};

/// Normalization slack accepted by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-10;

/// A normalized pure state on `H_X ⊗ H_R`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    dim_x: usize,
    dim_r: usize,
}

impl StateVector {
    /// Builds a state, rejecting wrong lengths and norms off by more than 1e-10.
    pub fn new(amplitudes: Vec<C64>, dim_x: usize, dim_r: usize) -> Result<Self> {
        let state = Self::from_parts(amplitudes, dim_x, dim_r)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Builds a state from an arbitrary nonzero vector by rescaling it.
    pub fn normalized(amplitudes: Vec<C64>, dim_x: usize, dim_r: usize) -> Result<Self> {
        let mut state = Self::from_parts(amplitudes, dim_x, dim_r)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        state.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    /// Computational basis state `|index⟩` of the full register.
    pub fn basis(index: usize, dim_x: usize, dim_r: usize) -> Result<Self> {
        let dim = dim_x * dim_r;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                context: "basis index out of range",
                expected: dim,
                actual: index,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self::from_parts(amplitudes, dim_x, dim_r)
    }

    /// Product state `|x⟩_X |r⟩_R`.
    pub fn product_basis(x: usize, r: usize, dim_x: usize, dim_r: usize) -> Result<Self> {
        if x >= dim_x || r >= dim_r {
            return Err(Error::DimensionMismatch {
                context: "product basis index out of range",
                expected: dim_x * dim_r,
                actual: x * dim_r + r,
            });
        }
        Self::basis(x * dim_r + r, dim_x, dim_r)
    }

    pub(crate) fn from_parts(amplitudes: Vec<C64>, dim_x: usize, dim_r: usize) -> Result<Self> {
        if dim_x == 0 || dim_r == 0 {
            return Err(Error::DimensionMismatch {
                context: "subsystem dimensions must be positive",
                expected: 1,
                actual: 0,
            });
        }
        if amplitudes.len() != dim_x * dim_r {
            return Err(Error::DimensionMismatch {
                context: "amplitude count must equal dim_x * dim_r",
                expected: dim_x * dim_r,
                actual: amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes,
            dim_x,
            dim_r,
        })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    /// Total dimension `dim_x * dim_r`.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn amplitude(&self, x: usize, r: usize) -> C64 {
        self.amplitudes[x * self.dim_r + r]
    }

    /// Re-interprets the same amplitudes under a different subsystem split.
    pub fn with_split(self, dim_x: usize, dim_r: usize) -> Result<Self> {
        Self::from_parts(self.amplitudes, dim_x, dim_r)
    }

    /// The `dim_x × dim_r` coefficient matrix `Ψ[x, r]`.
    pub fn coefficient_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim_x, self.dim_r, &self.amplitudes)
    }
}

impl Kronecker for StateVector {
    /// The result treats `self` as the X register and `other` as the R register.
    fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Self {
            amplitudes,
            dim_x: self.dim(),
            dim_r: other.dim(),
        }
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "inner product operands",
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `(V ⊗ I_R) |ψ⟩`, computed blockwise without forming the full operator.
pub fn apply_on_x(v: &UnitaryOperator, psi: &StateVector) -> Result<StateVector> {
    let d = v.dim();
    if d != psi.dim_x {
        return Err(Error::DimensionMismatch {
            context: "operator dimension vs. X register",
            expected: psi.dim_x,
            actual: d,
        });
    }
    let dr = psi.dim_r;
    let m = v.matrix();
    let mut out = vec![C64::new(0.0, 0.0); psi.dim()];
    for x in 0..d {
        let row = &mut out[x * dr..(x + 1) * dr];
        for xp in 0..d {
            let coef = m[(x, xp)];
            if coef == C64::new(0.0, 0.0) {
                continue;
            }
            let src = &psi.amplitudes[xp * dr..(xp + 1) * dr];
            for (o, s) in row.iter_mut().zip(src) {
                *o += coef * s;
            }
        }
    }
    StateVector::from_parts(out, d, dr)
}

/// `Tr_R |ket⟩⟨bra|` as a `dim_x × dim_x` matrix, i.e. `Ψ_ket Ψ_bra^†`.
///
/// With `ket = bra` this is the reduced density matrix of the X register. For
/// any operator `M` on X, `⟨bra|(M ⊗ I)|ket⟩ = Tr[M · partial_trace_outer(ket, bra)]`.
pub fn partial_trace_outer(ket: &StateVector, bra: &StateVector) -> Result<DMatrix<C64>> {
    if ket.dim_x != bra.dim_x || ket.dim_r != bra.dim_r {
        return Err(Error::DimensionMismatch {
            context: "partial trace operands must share the subsystem split",
            expected: ket.dim(),
            actual: bra.dim(),
        });
    }
    Ok(ket.coefficient_matrix() * bra.coefficient_matrix().adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::tensor;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = StateVector::basis(0, 2, 1).unwrap();
        let one = StateVector::basis(1, 2, 1).unwrap();
        let s = tensor(&zero, &one);
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitudes()[1], c(1.0));
        assert_eq!((s.dim_x(), s.dim_r()), (2, 2));
    }

    #[test]
    fn hadamard_on_x_of_product_state() {
        let s = StateVector::product_basis(0, 0, 2, 2).unwrap();
        let h = UnitaryOperator::hadamard();
        let out = apply_on_x(&h.tensor(&UnitaryOperator::identity(1)), &s).unwrap();
        let a = out.amplitudes();
        assert!((a[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((a[2] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(a[1].norm() < 1e-15 && a[3].norm() < 1e-15);
    }

    #[test]
    fn inner_of_orthogonal_and_self() {
        let a = StateVector::product_basis(0, 0, 2, 2).unwrap();
        let b = StateVector::product_basis(1, 1, 2, 2).unwrap();
        assert_eq!(inner(&a, &b).unwrap(), c(0.0));
        assert!((inner(&a, &a).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = StateVector::normalized(vec![C64::new(0.0, 1.0), c(1.0)], 2, 1).unwrap();
        let b = StateVector::basis(0, 2, 1).unwrap();
        let ab = inner(&a, &b).unwrap();
        assert!((ab - C64::new(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            StateVector::new(vec![c(1.0), c(1.0)], 2, 1),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::new(vec![c(1.0)], 2, 1),
            Err(Error::DimensionMismatch { .. })
        ));
        let a = StateVector::basis(0, 2, 1).unwrap();
        let b = StateVector::basis(0, 4, 1).unwrap();
        assert!(inner(&a, &b).is_err());
        assert!(apply_on_x(&UnitaryOperator::identity(4), &a).is_err());
        assert!(StateVector::normalized(vec![c(0.0); 2], 2, 1).is_err());
    }

    #[test]
    fn partial_trace_outer_reproduces_local_expectations() {
        let psi = StateVector::normalized(
            vec![c(1.0), C64::new(0.0, 2.0), c(-0.5), C64::new(0.3, 0.1)],
            2,
            2,
        )
        .unwrap();
        let phi = StateVector::normalized(vec![c(0.2), c(1.0), C64::new(0.0, -1.0), c(0.4)], 2, 2)
            .unwrap();
        let h = UnitaryOperator::hadamard();
        let direct = inner(&phi, &apply_on_x(&h, &psi).unwrap()).unwrap();
        let via_trace = (h.matrix() * partial_trace_outer(&psi, &phi).unwrap()).trace();
        assert!((direct - via_trace).norm() < 1e-14);
    }
}
