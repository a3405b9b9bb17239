//! Two small hand-built sets whose post-training ambiguity can be worked out
//! by hand: orthogonal inputs for the Hadamard gate, and inputs that are
//! linearly dependent on the X register for `Z ⊗ Z`.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{Structure, TrainingSet};
use crate::qcore::{Kronecker, StateVector, UnitaryOperator, C64};

/// Target `H` with inputs `|0⟩_X|0⟩_R` and `|1⟩_X|1⟩_R`.
pub fn hadamard_orthogonal() -> TrainingSet {
    let inputs = vec![
        StateVector::product_basis(0, 0, 2, 2).unwrap(),
        StateVector::product_basis(1, 1, 2, 2).unwrap(),
    ];
    TrainingSet::from_inputs(UnitaryOperator::hadamard(), inputs, Structure::Custom)
        .expect("fixture is consistent")
}

/// A hypothesis that reproduces [`hadamard_orthogonal`] up to per-sample phases
/// (0 and π) but has `Tr[H† V] = 0`.
pub fn hadamard_alternative() -> UnitaryOperator {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    UnitaryOperator::new(nalgebra::DMatrix::from_row_slice(2, 2, &[h, -h, h, h])).unwrap()
}

/// Target `Z ⊗ Z` with
/// `ψ₁ = (|00⟩|0⟩ + |01⟩|1⟩)/√2` and `ψ₂ = (|Φ⁺⟩|0⟩ + |Φ⁻⟩|1⟩)/√2`.
pub fn zz_lindep() -> TrainingSet {
    let s = FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let c = |v: f64| C64::new(v, 0.0);
    // index = x * 2 + r, x ∈ {00, 01, 10, 11}
    let psi1 = vec![c(s), z, z, c(s), z, z, z, z];
    let psi2 = vec![c(0.5), c(0.5), z, z, z, z, c(0.5), c(-0.5)];
    let inputs = vec![
        StateVector::new(psi1, 4, 2).unwrap(),
        StateVector::new(psi2, 4, 2).unwrap(),
    ];
    let zz = UnitaryOperator::pauli_z().tensor(&UnitaryOperator::pauli_z());
    TrainingSet::from_inputs(zz, inputs, Structure::Custom).expect("fixture is consistent")
}

/// `|00⟩⟨00| − |01⟩⟨01| + e^{iφ}|10⟩⟨10| + |11⟩⟨11|`: reproduces every pair of
/// [`zz_lindep`] exactly for any `φ`, and equals `Z ⊗ Z` only at `φ = π`.
pub fn zz_alternative(phi: f64) -> UnitaryOperator {
    let one = C64::new(1.0, 0.0);
    UnitaryOperator::diagonal(&[one, -one, C64::from_polar(1.0, phi), one])
}
