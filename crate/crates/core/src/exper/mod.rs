//! Seeded sweeps over (rank, t) grids: generate, verify, train, score.

mod aggregate;
mod output;
mod phases;

pub use aggregate::{aggregate, Aggregate, CellSummary};
pub use output::{emit_csv, emit_plot, parse_csv, read_csv, render_svg, write_csv, CSV_HEADER};
pub use phases::{circular_spread, circular_std, phase_report};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_average, bound_lindep, bound_orthogonal, risk};
use crate::datagen::{
    check_li_hx, gen_lindep, gen_orthogonal, gen_varying_rank, StructureReport, Tolerances,
    TrainingSet, DEFAULT_MAX_RETRIES,
};
use crate::error::{Error, Result};
use crate::haar::{derive_seed, SeededRng};
use crate::qnn::{train, Ansatz, TrainConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    VaryingRank,
    Orthogonal,
    LinDep,
}

impl Experiment {
    pub fn tag(self) -> u64 {
        match self {
            Experiment::VaryingRank => 1,
            Experiment::Orthogonal => 2,
            Experiment::LinDep => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::VaryingRank => "varying_rank",
            Experiment::Orthogonal => "orthogonal",
            Experiment::LinDep => "lin_dep",
        }
    }

    /// Analytic lower bound for a cell.
    pub fn bound(self, d: usize, t: usize, rank_spec: usize) -> f64 {
        match self {
            Experiment::VaryingRank => bound_average(d, rank_spec as f64, t),
            Experiment::Orthogonal => bound_orthogonal(d, &vec![rank_spec; t]),
            Experiment::LinDep => bound_lindep(d, rank_spec),
        }
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "varying_rank" | "exp1" => Ok(Experiment::VaryingRank),
            "orthogonal" | "exp2" => Ok(Experiment::Orthogonal),
            "lin_dep" | "exp3" => Ok(Experiment::LinDep),
            other => Err(Error::Malformed(format!("unknown experiment {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_qubits: usize,
    pub t_values: Vec<usize>,
    /// Average Schmidt ranks swept by the varying-rank experiment.
    #[serde(default)]
    pub r_bar_values: Vec<usize>,
    /// Orthogonal / lin-dep rank. `None` uses `r = d / t` per cell.
    #[serde(default)]
    pub fixed_rank: Option<usize>,
    pub repetitions: usize,
    pub layers: usize,
    #[serde(default)]
    pub trainer: TrainConfig,
    pub master_seed: u64,
    #[serde(default = "default_retries")]
    pub max_retries: usize,
}

fn default_retries() -> usize {
    DEFAULT_MAX_RETRIES
}

impl ExperimentConfig {
    /// Desk-scale defaults: 3 qubits, 20 repetitions, 60 layers.
    pub fn desk(experiment: Experiment) -> Self {
        Self::desk_for(experiment, 3)
    }

    /// Defaults scaled to `n_qubits`: `t` over the powers of two up to `d`
    /// (up to `d/2` for lin-dep, keeping `r = d/t` even), `r̄ ∈ {1, 2, d}` and
    /// `20 · n` layers.
    pub fn desk_for(experiment: Experiment, n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        let t_max = match experiment {
            Experiment::LinDep => (d / 2).max(1),
            _ => d,
        };
        let t_values = (0..=n_qubits)
            .map(|k| 1 << k)
            .filter(|&t| t <= t_max)
            .collect();
        let r_bar_values = match experiment {
            Experiment::VaryingRank => {
                let mut v = vec![1, 2, d];
                v.retain(|&r| r <= d);
                v.dedup();
                v
            }
            _ => Vec::new(),
        };
        Self {
            experiment,
            n_qubits,
            t_values,
            r_bar_values,
            fixed_rank: None,
            repetitions: 20,
            layers: 20 * n_qubits,
            trainer: TrainConfig::default(),
            master_seed: 42,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }

    pub fn d(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(1..=8).contains(&self.n_qubits) {
            return bad(format!("n_qubits must be in 1..=8, got {}", self.n_qubits));
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if self.layers == 0 {
            return bad("layers must be at least 1".into());
        }
        if self.t_values.is_empty() || self.t_values.contains(&0) {
            return bad("t_values must be a non-empty list of positive integers".into());
        }
        if !(self.trainer.target_loss > 0.0) {
            return bad("trainer.target_loss must be positive".into());
        }
        let d = self.d();
        match self.experiment {
            Experiment::VaryingRank => {
                if self.r_bar_values.is_empty() {
                    return bad("r_bar_values must not be empty".into());
                }
                if let Some(&r) = self.r_bar_values.iter().find(|&&r| r == 0 || r > d) {
                    return bad(format!("r_bar {r} outside 1..={d}"));
                }
            }
            Experiment::Orthogonal | Experiment::LinDep => {
                if let Some(&t) = self.t_values.iter().find(|&&t| !d.is_multiple_of(t)) {
                    return bad(format!("t = {t} does not divide d = {d}"));
                }
                if let Some(r) = self.fixed_rank {
                    if r == 0 || r > d {
                        return bad(format!("fixed_rank {r} outside 1..={d}"));
                    }
                    if self.experiment == Experiment::Orthogonal {
                        if let Some(&t) = self.t_values.iter().find(|&&t| r * t > d) {
                            return bad(format!(
                                "orthogonal rank {r} with t = {t} exceeds d = {d}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(t, rank_spec)` for every cell, in cell-index order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let d = self.d();
        match self.experiment {
            Experiment::VaryingRank => self
                .r_bar_values
                .iter()
                .flat_map(|&r| self.t_values.iter().map(move |&t| (t, r)))
                .collect(),
            _ => self
                .t_values
                .iter()
                .map(|&t| (t, self.fixed_rank.unwrap_or(d / t)))
                .collect(),
        }
    }

    pub fn trial_seed(&self, cell: usize, rep: usize) -> u64 {
        derive_seed(
            self.master_seed,
            &[self.experiment.tag(), cell as u64, rep as u64],
        )
    }
}

/// One trial. Serialized field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: Experiment,
    pub seed: u64,
    pub d: usize,
    pub t: usize,
    pub rank_spec: usize,
    pub mean_rank: f64,
    pub final_loss: f64,
    pub converged: bool,
    pub risk: f64,
    pub bound: f64,
    pub structure_ok: bool,
}

impl ExperimentRecord {
    /// The bound recomputed from the record's own `(d, t, rank_spec)`.
    pub fn expected_bound(&self) -> f64 {
        self.experiment.bound(self.d, self.t, self.rank_spec)
    }
}

fn structure_ok(exp: Experiment, rank_spec: usize, report: &StructureReport) -> bool {
    match exp {
        Experiment::VaryingRank => (report.mean_rank - rank_spec as f64).abs() < 1e-9,
        Experiment::Orthogonal => {
            report.pairwise_orthogonal && report.ranks.iter().all(|&r| r == rank_spec)
        }
        Experiment::LinDep => {
            report.is_opr
                && report.d_sx == rank_spec
                && report.ranks.iter().all(|&r| r == rank_spec)
        }
    }
}

fn generate(
    cfg: &ExperimentConfig,
    t: usize,
    rank_spec: usize,
    rng: &mut SeededRng,
) -> Result<TrainingSet> {
    let d = cfg.d();
    match cfg.experiment {
        Experiment::VaryingRank => gen_varying_rank(d, d, t, rank_spec, rng),
        Experiment::Orthogonal => gen_orthogonal(d, t, rank_spec, rng),
        Experiment::LinDep => gen_lindep(d, t, rank_spec, rng, cfg.max_retries),
    }
}

/// Runs a single `(cell, rep)` trial from its derived seed.
pub fn run_trial(cfg: &ExperimentConfig, cell: usize, rep: usize) -> Result<ExperimentRecord> {
    let (t, rank_spec) = cfg.cells()[cell];
    let d = cfg.d();
    let seed = cfg.trial_seed(cell, rep);
    let mut record = ExperimentRecord {
        experiment: cfg.experiment,
        seed,
        d,
        t,
        rank_spec,
        mean_rank: f64::NAN,
        final_loss: f64::NAN,
        converged: false,
        risk: f64::NAN,
        bound: cfg.experiment.bound(d, t, rank_spec),
        structure_ok: false,
    };

    let mut rng = SeededRng::new(seed);
    let set = match generate(cfg, t, rank_spec, &mut rng) {
        Ok(set) => set,
        Err(Error::RetriesExhausted { .. }) => return Ok(record),
        Err(e) => return Err(e),
    };
    let report = check_li_hx(&set.inputs(), &Tolerances::default())?;
    record.mean_rank = report.mean_rank;
    record.structure_ok = structure_ok(cfg.experiment, rank_spec, &report);

    let init = Ansatz::random_init(cfg.n_qubits, cfg.layers, &mut rng)?;
    let result = train(&init, &set, &cfg.trainer)?;
    let v = result.ansatz(&init)?.unitary()?;
    record.final_loss = result.final_loss;
    record.converged = result.converged;
    record.risk = risk(set.target(), &v)?.risk;
    Ok(record)
}

/// Every cell × repetition, in `(cell, rep)` order regardless of scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.cells().len())
        .flat_map(|c| (0..cfg.repetitions).map(move |r| (c, r)))
        .collect();
    jobs.into_par_iter()
        .map(|(c, r)| run_trial(cfg, c, r))
        .collect()
}
