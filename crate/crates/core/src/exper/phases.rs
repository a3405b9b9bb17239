use std::f64::consts::PI;

use crate::bounds::{eigenphase, Eigenphase};
use crate::error::Result;
use crate::qcore::{StateVector, UnitaryOperator};

/// Eigenphase of `U†V` seen by each input.
pub fn phase_report(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
    inputs: &[StateVector],
) -> Result<Vec<Eigenphase>> {
    inputs.iter().map(|psi| eigenphase(u, v, psi)).collect()
}

/// Length of the shortest arc of the unit circle containing every angle.
pub fn circular_spread(thetas: &[f64]) -> f64 {
    if thetas.len() < 2 {
        return 0.0;
    }
    let mut a: Vec<f64> = thetas.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
    a.sort_by(f64::total_cmp);
    let wrap_gap = a[0] + 2.0 * PI - a[a.len() - 1];
    let largest_gap = a.windows(2).map(|w| w[1] - w[0]).fold(wrap_gap, f64::max);
    2.0 * PI - largest_gap
}

/// `sqrt(−2 ln R̄)` with `R̄` the mean resultant length.
pub fn circular_std(thetas: &[f64]) -> f64 {
    if thetas.is_empty() {
        return 0.0;
    }
    let n = thetas.len() as f64;
    let (s, c) = thetas
        .iter()
        .fold((0.0, 0.0), |(s, c), t| (s + t.sin(), c + t.cos()));
    let r = ((s / n).powi(2) + (c / n).powi(2)).sqrt().min(1.0);
    if r <= 0.0 {
        f64::INFINITY
    } else {
        (-2.0 * r.ln()).sqrt()
    }
}
