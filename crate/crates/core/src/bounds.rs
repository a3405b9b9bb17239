//! Exact post-training risk and the analytic lower bounds on its expectation.
//!
//! Every bound has the shape `1 − (K + d + 1) / (d(d+1))` where `K` bounds the
//! expected squared trace of `U†V` on the subspace fixed by the training data.
//! Bounds are clamped to `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{apply_on_x, inner, StateVector, UnitaryOperator};

/// Risk of a hypothesis together with the trace it was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub risk: f64,
    /// `|Tr[U†V]|`
    pub abs_trace: f64,
    pub d: usize,
}

/// `1 − (d + |Tr[U†V]|²) / (d(d+1))`: one minus the average gate fidelity.
pub fn risk(u: &UnitaryOperator, v: &UnitaryOperator) -> Result<RiskReport> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            context: "risk operands",
            expected: u.dim(),
            actual: v.dim(),
        });
    }
    let d = u.dim();
    // Tr[U†V] = Σ_ij conj(U_ij) V_ij
    let tr: num_complex::Complex64 = u
        .matrix()
        .iter()
        .zip(v.matrix().iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let abs_trace = tr.norm().min(d as f64);
    let df = d as f64;
    let risk = 1.0 - (df + abs_trace * abs_trace) / (df * (df + 1.0));
    Ok(RiskReport {
        risk: risk.clamp(0.0, 1.0),
        abs_trace,
        d,
    })
}

fn clamped_bound(known_trace_sq: f64, d: usize) -> f64 {
    let d = d as f64;
    (1.0 - (known_trace_sq + d + 1.0) / (d * (d + 1.0))).clamp(0.0, 1.0)
}

/// Bound for `t` samples of a common Schmidt rank `r`.
pub fn bound_fixed(d: usize, r: usize, t: usize) -> f64 {
    let rt = (r * t) as f64;
    clamped_bound(rt * rt, d)
}

/// Bound for samples whose Schmidt ranks average to `r_bar`.
pub fn bound_average(d: usize, r_bar: f64, t: usize) -> f64 {
    let rt = r_bar * t as f64;
    clamped_bound(rt * rt, d)
}

/// Bound for pairwise orthogonal samples with the given Schmidt ranks.
pub fn bound_orthogonal(d: usize, ranks: &[usize]) -> f64 {
    let sum_sq: u64 = ranks.iter().map(|&r| (r as u64) * (r as u64)).sum();
    clamped_bound(sum_sq as f64, d)
}

/// Bound for samples whose Schmidt X-vectors all lie in the span of the
/// highest-rank sample; independent of the number of samples.
pub fn bound_lindep(d: usize, r_max: usize) -> f64 {
    let r = r_max as f64;
    clamped_bound(r * r, d)
}

/// Phase and magnitude of `⟨ψ|(U†V ⊗ I)|ψ⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenphase {
    /// Argument in `(−π, π]`.
    pub theta: f64,
    pub magnitude: f64,
}

/// Overlaps smaller than this carry no usable phase.
pub const MIN_OVERLAP: f64 = 1e-12;

/// Phase of `⟨ψ|(U†V ⊗ I)|ψ⟩ = ⟨(U⊗I)ψ|(V⊗I)ψ⟩`.
pub fn eigenphase(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
    psi: &StateVector,
) -> Result<Eigenphase> {
    let expected = apply_on_x(u, psi)?;
    let actual = apply_on_x(v, psi)?;
    let overlap = inner(&expected, &actual)?;
    let magnitude = overlap.norm();
    if magnitude < MIN_OVERLAP {
        return Err(Error::ZeroOverlap { magnitude });
    }
    Ok(Eigenphase {
        theta: wrap_phase(overlap.arg()),
        magnitude,
    })
}

/// Maps an angle into `(−π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI {
        t += 2.0 * PI;
    }
    t
}
