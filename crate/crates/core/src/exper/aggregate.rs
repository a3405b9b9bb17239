use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Experiment, ExperimentRecord};

/// Statistics for one `(experiment, d, t, rank_spec)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub experiment: Experiment,
    pub d: usize,
    pub t: usize,
    pub rank_spec: usize,
    pub n: usize,
    pub n_converged: usize,
    pub mean_risk: f64,
    /// Sample standard deviation; 0 for a single row.
    pub std_risk: f64,
    pub mean_loss: f64,
    /// Shared by every row of the cell.
    pub bound: f64,
}

impl CellSummary {
    pub fn all_converged(&self) -> bool {
        self.n > 0 && self.n_converged == self.n
    }

    /// Standard error of the mean risk.
    pub fn std_error(&self) -> f64 {
        self.std_risk / (self.n as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub cells: Vec<CellSummary>,
    /// Rows dropped because their training set failed the structure check.
    pub excluded: usize,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Groups records by cell (sorted by experiment, d, t, rank_spec) and skips
/// rows with `structure_ok = false`.
pub fn aggregate(records: &[ExperimentRecord]) -> Aggregate {
    let mut groups: BTreeMap<(Experiment, usize, usize, usize), Vec<&ExperimentRecord>> =
        BTreeMap::new();
    let mut excluded = 0;
    for rec in records {
        if !rec.structure_ok {
            excluded += 1;
            continue;
        }
        groups
            .entry((rec.experiment, rec.d, rec.t, rec.rank_spec))
            .or_default()
            .push(rec);
    }
    let cells = groups
        .into_iter()
        .map(|((experiment, d, t, rank_spec), rows)| {
            let risks: Vec<f64> = rows.iter().map(|r| r.risk).collect();
            let losses: Vec<f64> = rows.iter().map(|r| r.final_loss).collect();
            let n = rows.len();
            let mean_risk = mean(&risks);
            let std_risk = if n > 1 {
                (risks.iter().map(|r| (r - mean_risk).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            CellSummary {
                experiment,
                d,
                t,
                rank_spec,
                n,
                n_converged: rows.iter().filter(|r| r.converged).count(),
                mean_risk,
                std_risk,
                mean_loss: mean(&losses),
                bound: rows[0].bound,
            }
        })
        .collect();
    Aggregate { cells, excluded }
}
