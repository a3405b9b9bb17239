use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use super::{Kronecker, StateVector, C64};
use crate::error::{Error, Result};

/// Per-dimension Frobenius slack for `U†U = I`.
pub const UNITARY_TOL: f64 = 1e-9;

/// Tolerance for matrices assembled column by column from a circuit.
pub const EXTRACT_TOL: f64 = 1e-8;

/// A dense `d × d` unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator {
    matrix: DMatrix<C64>,
}

impl UnitaryOperator {
    /// Wraps `matrix`, checking `‖U†U − I‖_F ≤ 1e-9 · d`.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let d = matrix.nrows();
        Self::with_tolerance(matrix, UNITARY_TOL * d as f64)
    }

    /// Wraps `matrix`, checking `‖U†U − I‖_F ≤ tolerance`.
    pub fn with_tolerance(matrix: DMatrix<C64>, tolerance: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                context: "unitary must be a non-empty square matrix",
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= tolerance) {
            return Err(Error::NotUnitary {
                deviation,
                tolerance,
            });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<C64>) -> Self {
        Self { matrix }
    }

    /// Builds a `d × d` unitary from row-major entries.
    pub fn from_row_major(d: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch {
                context: "row-major entry count must be d*d",
                expected: d * d,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(d, d, entries))
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            out.extend((0..d).map(|j| self.matrix[(i, j)]));
        }
        out
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
        }
    }

    pub fn pauli_x() -> Self {
        let (o, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[o, i, i, o]),
        }
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)])
    }

    /// Diagonal unitary; every entry must have unit modulus.
    pub fn diagonal(entries: &[C64]) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator product",
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Multiplies by the global phase `e^{iα}`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        Self {
            matrix: &self.matrix * C64::from_polar(1.0, alpha),
        }
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }

    /// The column `U|j⟩` as a state of the X register alone.
    pub fn column_state(&self, j: usize) -> StateVector {
        let col = self.matrix.column(j).iter().cloned().collect();
        StateVector::from_parts(col, self.dim(), 1).expect("column length matches dimension")
    }
}

impl Kronecker for UnitaryOperator {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }
}

fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let gram = m.adjoint() * m;
    (gram - DMatrix::<C64>::identity(d, d)).norm()
}

/// Assembles the matrix of a circuit on a `d`-dimensional register by feeding it
/// every basis state: column `j` is `apply(|j⟩)`.
pub fn extract_unitary<F>(mut apply: F, d: usize) -> Result<UnitaryOperator>
where
    F: FnMut(&StateVector) -> Result<StateVector>,
{
    let mut matrix = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        let out = apply(&StateVector::basis(j, d, 1)?)?;
        if out.dim() != d {
            return Err(Error::DimensionMismatch {
                context: "circuit output dimension",
                expected: d,
                actual: out.dim(),
            });
        }
        for (i, a) in out.amplitudes().iter().enumerate() {
            matrix[(i, j)] = *a;
        }
    }
    UnitaryOperator::with_tolerance(matrix, EXTRACT_TOL)
}
