//! Haar-random unitaries, random states and Schmidt coefficients.

mod rng;

pub use rng::{derive_seed, SeededRng};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::qcore::{StateVector, UnitaryOperator, C64};

/// Normalized coefficients below this value trigger a redraw.
pub const MIN_SCHMIDT_WEIGHT: f64 = 1e-6;

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `d × d` unitary.
///
/// Draws a complex Ginibre matrix, QR-factorizes it and rescales the columns of
/// `Q` by the phases of `diag(R)`, which removes the QR sign ambiguity.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryOperator {
    assert!(d >= 1, "unitary dimension must be positive");
    let ginibre = DMatrix::<C64>::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        col *= phase;
    }
    UnitaryOperator::from_matrix_unchecked(q)
}

/// Uniformly random pure state on `dim_x · dim_r` amplitudes.
pub fn random_state<R: Rng + ?Sized>(
    dim_x: usize,
    dim_r: usize,
    rng: &mut R,
) -> Result<StateVector> {
    let amps = (0..dim_x * dim_r).map(|_| complex_normal(rng)).collect();
    StateVector::normalized(amps, dim_x, dim_r)
}

/// `r` Schmidt coefficients `√c_k`, descending, with `Σ c_k = 1`.
///
/// Each weight `c_k` is drawn uniformly from `(0, 1]` and the vector is
/// renormalized; draws with any normalized weight below [`MIN_SCHMIDT_WEIGHT`]
/// are rejected so that the rank stays numerically unambiguous.
pub fn random_schmidt_coeffs<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Vec<f64> {
    assert!(r >= 1, "Schmidt rank must be positive");
    loop {
        let raw: Vec<f64> = (0..r).map(|_| 1.0 - rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        if raw.iter().any(|c| c / total < MIN_SCHMIDT_WEIGHT) {
            continue;
        }
        let mut out: Vec<f64> = raw.iter().map(|c| (c / total).sqrt()).collect();
        out.sort_by(|a, b| b.total_cmp(a));
        return out;
    }
}

/// Random unit vector in `C^n`, handy for spot checks.
pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| complex_normal(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_one_is_a_phase() {
        let mut rng = SeededRng::new(1);
        for _ in 0..20 {
            let u = haar_unitary(1, &mut rng);
            assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn samples_are_unitary() {
        let mut rng = SeededRng::new(2);
        for d in [2, 3, 8, 16] {
            let u = haar_unitary(d, &mut rng);
            assert!(u.unitarity_deviation() < 1e-9 * d as f64);
        }
    }

    #[test]
    fn same_seed_gives_bit_identical_unitaries() {
        let a = haar_unitary(8, &mut SeededRng::new(99));
        let b = haar_unitary(8, &mut SeededRng::new(99));
        assert_eq!(a.to_row_major(), b.to_row_major());
    }

    #[test]
    fn single_coefficient_is_one() {
        assert_eq!(random_schmidt_coeffs(1, &mut SeededRng::new(3)), vec![1.0]);
    }

    #[test]
    fn coefficients_are_normalized_positive_and_descending() {
        let mut rng = SeededRng::new(4);
        for r in [2, 5, 64] {
            let c = random_schmidt_coeffs(r, &mut rng);
            assert_eq!(c.len(), r);
            let total: f64 = c.iter().map(|s| s * s).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(c.windows(2).all(|w| w[0] >= w[1]));
            assert!(c.iter().all(|&s| s > 0.0));
        }
    }

    #[test]
    fn min_weight_positive_over_many_draws() {
        let mut rng = SeededRng::new(5);
        for _ in 0..10_000 {
            let c = random_schmidt_coeffs(64, &mut rng);
            let min = c.last().unwrap();
            assert!(min * min >= MIN_SCHMIDT_WEIGHT);
        }
    }
}
