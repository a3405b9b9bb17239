//! Dense complex linear algebra on a bipartite register `H_X ⊗ H_R`.
//!
//! Amplitudes are laid out with the input register as the high-order factor:
//! the amplitude of `|x⟩_X |r⟩_R` lives at index `x * dim_r + r`. Reshaping a
//! state into a `dim_x × dim_r` coefficient matrix is therefore a row-major
//! view of the amplitude vector.

mod schmidt;
mod state;
mod unitary;

pub use schmidt::{schmidt, SchmidtDecomposition, DEFAULT_RANK_TOL};
pub use state::{apply_on_x, inner, partial_trace_outer, StateVector};
pub use unitary::{extract_unitary, UnitaryOperator};

pub use num_complex::Complex64 as C64;

/// Kronecker product, with `self` as the high-order factor.
pub trait Kronecker: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

/// Free-function form of [`Kronecker::tensor`].
pub fn tensor<T: Kronecker>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Numerical rank of the matrix whose columns are `vectors`, counting singular
/// values above `rel_tol` times the largest one.
pub fn numerical_rank(vectors: &[Vec<C64>], rel_tol: f64) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let rows = first.len();
    let m = nalgebra::DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * largest).count()
}
