use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcore::{inner, numerical_rank, schmidt, StateVector, DEFAULT_RANK_TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative singular-value cutoff for Schmidt ranks.
    pub schmidt_rank: f64,
    /// `|⟨ψ_i|ψ_j⟩|` at or below this counts as orthogonal.
    pub overlap: f64,
    /// Relative singular-value cutoff for the span of pooled X-vectors.
    pub span_rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            schmidt_rank: DEFAULT_RANK_TOL,
            overlap: 1e-8,
            span_rank: 1e-8,
        }
    }
}

/// Linear structure of a set of training inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub ranks: Vec<usize>,
    pub mean_rank: f64,
    pub is_opr: bool,
    pub is_li_hx: bool,
    /// Dimension of the span of all Schmidt X-vectors.
    pub d_sx: usize,
    /// Number of pooled Schmidt X-vectors, `Σ_j r_j`.
    pub card_sx: usize,
    /// Every pair of distinct inputs is orthogonal.
    pub pairwise_orthogonal: bool,
}

fn overlap_matrix(inputs: &[StateVector]) -> Result<Vec<Vec<f64>>> {
    let n = inputs.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let o = inner(&inputs[i], &inputs[j])?.norm();
            m[i][j] = o;
            m[j][i] = o;
        }
    }
    Ok(m)
}

fn connected(adjacent: &[Vec<f64>], tol: f64) -> bool {
    let n = adjacent.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && adjacent[i][j] > tol {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Orthogonal partitioning resistance: no split of the inputs into two groups
/// with every cross overlap vanishing. Equivalent to connectivity of the graph
/// joining inputs whose overlap magnitude exceeds `tol`.
pub fn check_opr(inputs: &[StateVector], tol: f64) -> Result<bool> {
    Ok(connected(&overlap_matrix(inputs)?, tol))
}

/// Schmidt-decomposes every input, pools the X-vectors and measures their span.
pub fn check_li_hx(inputs: &[StateVector], tol: &Tolerances) -> Result<StructureReport> {
    let mut ranks = Vec::with_capacity(inputs.len());
    let mut pooled = Vec::new();
    for psi in inputs {
        let dec = schmidt(psi, tol.schmidt_rank);
        ranks.push(dec.rank());
        pooled.extend(dec.x_basis);
    }
    let card_sx = pooled.len();
    let d_sx = numerical_rank(&pooled, tol.span_rank);
    let overlaps = overlap_matrix(inputs)?;
    let pairwise_orthogonal = overlaps.iter().flatten().all(|&o| o <= tol.overlap);
    let mean_rank = if ranks.is_empty() {
        0.0
    } else {
        ranks.iter().sum::<usize>() as f64 / ranks.len() as f64
    };
    Ok(StructureReport {
        ranks,
        mean_rank,
        is_opr: connected(&overlaps, tol.overlap),
        is_li_hx: d_sx == card_sx,
        d_sx,
        card_sx,
        pairwise_orthogonal,
    })
}
