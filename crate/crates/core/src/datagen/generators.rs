use nalgebra::DMatrix;
use rand::Rng;

use super::structure::{check_li_hx, Tolerances};
use super::{Structure, TrainingSet};
use crate::error::{Error, Result};
use crate::haar::{haar_unitary, random_schmidt_coeffs};
use crate::qcore::{StateVector, C64};

/// Regeneration budget when a linearly dependent set comes out partitionable.
pub const DEFAULT_MAX_RETRIES: usize = 100;

/// `Σ_k s_k |x_k⟩ ⊗ |y_k⟩` where `x_k` / `y_k` are the columns of the given matrices.
fn schmidt_state(
    coeffs: &[f64],
    x_vecs: &DMatrix<C64>,
    y_vecs: &DMatrix<C64>,
) -> Result<StateVector> {
    let (dx, dr) = (x_vecs.nrows(), y_vecs.nrows());
    let mut amps = vec![C64::new(0.0, 0.0); dx * dr];
    for (k, &s) in coeffs.iter().enumerate() {
        for x in 0..dx {
            let a = x_vecs[(x, k)] * s;
            for r in 0..dr {
                amps[x * dr + r] += a * y_vecs[(r, k)];
            }
        }
    }
    StateVector::normalized(amps, dx, dr)
}

/// Inputs with Schmidt ranks paired as `(r̄ + o_j, r̄ − o_j)` so the mean rank is
/// exactly `r_bar`. Each `o_j` is uniform on `{0, …, min(r̄−1, d−r̄)}`; an odd
/// trailing sample gets rank `r_bar`. Every state uses its own Haar `P_j`, `Q_j`.
pub fn varying_rank_inputs<R: Rng + ?Sized>(
    d: usize,
    d_r: usize,
    t: usize,
    r_bar: usize,
    rng: &mut R,
) -> Result<Vec<StateVector>> {
    if r_bar < 1 || r_bar > d || t < 1 {
        return Err(Error::InfeasibleRank(format!(
            "need 1 <= r_bar <= d and t >= 1 (r_bar = {r_bar}, d = {d}, t = {t})"
        )));
    }
    let offset = (r_bar - 1).min(d - r_bar);
    if d_r < r_bar + offset {
        return Err(Error::InfeasibleRank(format!(
            "reference dimension {d_r} cannot hold rank {}",
            r_bar + offset
        )));
    }

    let mut ranks = Vec::with_capacity(t);
    for _ in 0..t / 2 {
        let o = rng.random_range(0..=offset);
        ranks.push(r_bar + o);
        ranks.push(r_bar - o);
    }
    if t % 2 == 1 {
        ranks.push(r_bar);
    }

    ranks
        .into_iter()
        .map(|r| {
            let coeffs = random_schmidt_coeffs(r, rng);
            let p = haar_unitary(d, rng);
            let q = haar_unitary(d_r, rng);
            schmidt_state(&coeffs, p.matrix(), q.matrix())
        })
        .collect()
}

/// Samples a Haar target on `d` dimensions, then [`varying_rank_inputs`].
pub fn gen_varying_rank<R: Rng + ?Sized>(
    d: usize,
    d_r: usize,
    t: usize,
    r_bar: usize,
    rng: &mut R,
) -> Result<TrainingSet> {
    let target = haar_unitary(d, rng);
    let inputs = varying_rank_inputs(d, d_r, t, r_bar, rng)?;
    TrainingSet::from_inputs(target, inputs, Structure::VaryingRank)
}

/// Smallest power of two holding `r` orthonormal reference states.
pub(crate) fn orthogonal_reference_dim(r: usize) -> usize {
    r.next_power_of_two()
}

/// Pairwise orthogonal rank-`r` inputs built from disjoint blocks of the
/// computational basis, `|γ_j⟩ = Σ_k s_{j,k} |r·j + k⟩_X |k⟩_R`, rotated by one
/// shared Haar `P ⊗ Q`. The reference register has `2^⌈log₂ r⌉` dimensions.
pub fn orthogonal_inputs<R: Rng + ?Sized>(
    d: usize,
    t: usize,
    r: usize,
    rng: &mut R,
) -> Result<Vec<StateVector>> {
    if r < 1 || t < 1 || r * t > d {
        return Err(Error::InfeasibleRank(format!(
            "orthogonal samples need r >= 1, t >= 1 and r*t <= d (r = {r}, t = {t}, d = {d})"
        )));
    }
    let d_r = orthogonal_reference_dim(r);
    let p = haar_unitary(d, rng);
    let q = haar_unitary(d_r, rng);
    (0..t)
        .map(|j| {
            let coeffs = random_schmidt_coeffs(r, rng);
            let x_vecs = p.matrix().columns(r * j, r).into_owned();
            let y_vecs = q.matrix().columns(0, r).into_owned();
            schmidt_state(&coeffs, &x_vecs, &y_vecs)
        })
        .collect()
}

/// Samples a Haar target on `d` dimensions, then [`orthogonal_inputs`].
pub fn gen_orthogonal<R: Rng + ?Sized>(
    d: usize,
    t: usize,
    r: usize,
    rng: &mut R,
) -> Result<TrainingSet> {
    let target = haar_unitary(d, rng);
    let inputs = orthogonal_inputs(d, t, r, rng)?;
    TrainingSet::from_inputs(target, inputs, Structure::Orthogonal)
}

fn lindep_attempt<R: Rng + ?Sized>(
    d: usize,
    t: usize,
    r: usize,
    rng: &mut R,
) -> Result<Vec<StateVector>> {
    let p = haar_unitary(d, rng);
    let base = p.matrix().columns(0, r).into_owned();
    (0..t)
        .map(|j| {
            let mut basis = base.clone();
            if j > 0 {
                // Mix consecutive pairs (b_{2i}, b_{2i+1}) by a fresh U(2) element;
                // an odd trailing vector stays as it is.
                for i in 0..r / 2 {
                    let mix = haar_unitary(2, rng);
                    let m = mix.matrix();
                    let (b0, b1) = (base.column(2 * i), base.column(2 * i + 1));
                    let new0 = b0 * m[(0, 0)] + b1 * m[(1, 0)];
                    let new1 = b0 * m[(0, 1)] + b1 * m[(1, 1)];
                    basis.set_column(2 * i, &new0);
                    basis.set_column(2 * i + 1, &new1);
                }
            }
            let coeffs = random_schmidt_coeffs(r, rng);
            let q = haar_unitary(d, rng);
            schmidt_state(&coeffs, &basis, &q.matrix().columns(0, r).into_owned())
        })
        .collect()
}

/// Rank-`r` inputs whose Schmidt X-vectors all lie in one `r`-dimensional
/// subspace (the first `r` columns of a Haar `P`), with a `d`-dimensional
/// reference register. Sets that are not orthogonal-partitioning resistant or
/// whose X-span is not exactly `r` are regenerated, up to `max_retries` times.
pub fn lindep_inputs<R: Rng + ?Sized>(
    d: usize,
    t: usize,
    r: usize,
    rng: &mut R,
    max_retries: usize,
) -> Result<Vec<StateVector>> {
    if r < 1 || r > d || t < 1 {
        return Err(Error::InfeasibleRank(format!(
            "linearly dependent samples need 1 <= r <= d and t >= 1 (r = {r}, d = {d}, t = {t})"
        )));
    }
    let tol = Tolerances::default();
    let mut last_reason = String::new();
    for _ in 0..=max_retries {
        let inputs = lindep_attempt(d, t, r, rng)?;
        let report = check_li_hx(&inputs, &tol)?;
        if report.is_opr && report.d_sx == r {
            return Ok(inputs);
        }
        last_reason = format!("opr = {}, d_sx = {} (want {r})", report.is_opr, report.d_sx);
    }
    Err(Error::RetriesExhausted {
        retries: max_retries,
        reason: last_reason,
    })
}

/// Samples a Haar target on `d` dimensions, then [`lindep_inputs`].
pub fn gen_lindep<R: Rng + ?Sized>(
    d: usize,
    t: usize,
    r: usize,
    rng: &mut R,
    max_retries: usize,
) -> Result<TrainingSet> {
    let target = haar_unitary(d, rng);
    let inputs = lindep_inputs(d, t, r, rng, max_retries)?;
    TrainingSet::from_inputs(target, inputs, Structure::LinDep)
}
