use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use qnfl_core::bounds::{
    bound_average, bound_fixed, bound_lindep, bound_orthogonal, risk, Eigenphase,
};
use qnfl_core::datagen::io::{read_training_set, write_training_set, Amplitude};
use qnfl_core::datagen::{
    check_li_hx, gen_lindep, gen_orthogonal, gen_varying_rank, hadamard_orthogonal, zz_lindep,
    Tolerances, TrainingSet, DEFAULT_MAX_RETRIES,
};
use qnfl_core::exper::{circular_spread, circular_std, phase_report};
use qnfl_core::haar::SeededRng;
use qnfl_core::qcore::UnitaryOperator;
use qnfl_core::qnn::{default_layers, train as train_ansatz, Ansatz, TrainConfig};

use crate::{Format, DEFAULT_SEED};

/// Bad flag values or combinations; exits with status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_set(path: &Path) -> Result<TrainingSet> {
    let (set, _) =
        read_training_set(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(set)
}

fn qubits_for(d: usize) -> Result<usize> {
    if !d.is_power_of_two() || d < 2 {
        return Err(usage(format!(
            "X dimension {d} is not a power of two >= 2; the ansatz acts on qubits"
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenStructure {
    VaryingRank,
    Orthogonal,
    Lindep,
    /// Two orthogonal product inputs of the Hadamard gate (d = 2).
    Hadamard,
    /// Two linearly dependent entangled inputs of Z ⊗ Z (d = 4).
    Zz,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub structure: GenStructure,
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    /// Reference dimension for varying-rank sets (default: d).
    #[arg(long)]
    pub d_r: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Schmidt rank (average rank for varying-rank sets).
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_RETRIES)]
    pub max_retries: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn gen(a: GenArgs) -> Result<()> {
    let mut rng = SeededRng::new(a.seed);
    let set = match a.structure {
        GenStructure::VaryingRank => {
            gen_varying_rank(a.d, a.d_r.unwrap_or(a.d), a.t, a.r, &mut rng)
                .map_err(|e| usage(e.to_string()))?
        }
        GenStructure::Orthogonal => {
            gen_orthogonal(a.d, a.t, a.r, &mut rng).map_err(|e| usage(e.to_string()))?
        }
        GenStructure::Lindep => gen_lindep(a.d, a.t, a.r, &mut rng, a.max_retries)?,
        GenStructure::Hadamard => hadamard_orthogonal(),
        GenStructure::Zz => zz_lindep(),
    };
    let config = json!({
        "structure": a.structure,
        "d": set.dim_x(),
        "d_r": set.dim_r(),
        "t": set.len(),
        "r": a.r,
        "max_retries": a.max_retries,
    });
    match &a.out {
        Some(path) => write_training_set(path, &set, Some(a.seed), Some(config))?,
        None => {
            let file =
                qnfl_core::datagen::io::TrainingSetFile::from_set(&set, Some(a.seed), Some(config));
            write_output(None, &(file.to_json()? + "\n"))?;
        }
    }
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct TrainerFlags {
    /// Ansatz depth (default: 20 per qubit).
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub target_loss: Option<f64>,
    #[arg(long)]
    pub fixed_iterations: bool,
}

impl TrainerFlags {
    fn config(&self) -> Result<TrainConfig> {
        let mut cfg = TrainConfig::default();
        if let Some(v) = self.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = self.lr {
            if !(v > 0.0) {
                return Err(usage(format!("--lr must be positive, got {v}")));
            }
            cfg.lr = v;
        }
        if let Some(v) = self.target_loss {
            if !(v > 0.0) {
                return Err(usage(format!("--target-loss must be positive, got {v}")));
            }
            cfg.target_loss = v;
        }
        cfg.fixed_iterations = self.fixed_iterations;
        Ok(cfg)
    }
}

/// JSON written by `train` and accepted by `phases --from`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TrainOutput {
    pub final_loss: f64,
    pub iterations_used: usize,
    pub converged: bool,
    pub risk: f64,
    pub theta: Vec<f64>,
    pub n_qubits: usize,
    pub layers: usize,
    pub seed: u64,
    pub training_set: PathBuf,
    pub config: TrainConfig,
    pub loss_trace: Vec<f64>,
    #[serde(default)]
    pub eigenphases: Vec<Option<Eigenphase>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<Vec<Amplitude>>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Training-set JSON written by `gen`.
    pub file: PathBuf,
    #[command(flatten)]
    pub trainer: TrainerFlags,
    /// Include the learned unitary (row-major) in the output.
    #[arg(long)]
    pub unitary: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Trained {
    ansatz: Ansatz,
    v: UnitaryOperator,
    output: TrainOutput,
}

fn train_on(set: &TrainingSet, file: &Path, flags: &TrainerFlags) -> Result<Trained> {
    let n = qubits_for(set.dim_x())?;
    let layers = flags.layers.unwrap_or_else(|| default_layers(n));
    if layers == 0 {
        return Err(usage("--layers must be at least 1"));
    }
    let cfg = flags.config()?;
    let mut rng = SeededRng::new(flags.seed);
    let init = Ansatz::random_init(n, layers, &mut rng)?;
    let result = train_ansatz(&init, set, &cfg)?;
    let ansatz = result.ansatz(&init)?;
    let v = ansatz.unitary()?;
    let eigenphases = phase_list(set.target(), &v, set);
    let output = TrainOutput {
        final_loss: result.final_loss,
        iterations_used: result.iterations_used,
        converged: result.converged,
        risk: risk(set.target(), &v)?.risk,
        theta: result.final_params,
        n_qubits: n,
        layers,
        seed: flags.seed,
        training_set: file.to_path_buf(),
        config: cfg,
        loss_trace: result.loss_trace,
        eigenphases,
        unitary: None,
    };
    Ok(Trained { ansatz, v, output })
}

fn phase_list(
    u: &UnitaryOperator,
    v: &UnitaryOperator,
    set: &TrainingSet,
) -> Vec<Option<Eigenphase>> {
    set.inputs()
        .iter()
        .map(|psi| qnfl_core::bounds::eigenphase(u, v, psi).ok())
        .collect()
}

pub fn train(a: TrainArgs) -> Result<()> {
    let set = load_set(&a.file)?;
    let mut trained = train_on(&set, &a.file, &a.trainer)?;
    if a.unitary {
        trained.output.unitary = Some(
            trained
                .v
                .to_row_major()
                .into_iter()
                .map(Amplitude)
                .collect(),
        );
    }
    let o = &trained.output;
    eprintln!(
        "loss {:.3e} after {} iterations (converged: {}), risk {:.6}, {} layers",
        o.final_loss,
        o.iterations_used,
        o.converged,
        o.risk,
        trained.ansatz.n_layers()
    );
    write_output(a.out.as_deref(), &(serde_json::to_string_pretty(o)? + "\n"))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    #[default]
    Average,
    Fixed,
    Orthogonal,
    Lindep,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    /// Schmidt rank(s); fractional values allowed for the average bound.
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub kind: BoundKind,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn eval_bound(kind: BoundKind, d: usize, r: f64, t: usize) -> Result<f64> {
    if d == 0 || t == 0 || !(r > 0.0) {
        return Err(usage(format!(
            "need d >= 1, t >= 1 and r > 0 (d = {d}, r = {r}, t = {t})"
        )));
    }
    if kind != BoundKind::Average && r.fract() != 0.0 {
        let name = format!("{kind:?}").to_lowercase();
        return Err(usage(format!(
            "--r must be an integer for the {name} bound, got {r}"
        )));
    }
    let ri = r as usize;
    Ok(match kind {
        BoundKind::Average => bound_average(d, r, t),
        BoundKind::Fixed => bound_fixed(d, ri, t),
        BoundKind::Orthogonal => bound_orthogonal(d, &vec![ri; t]),
        BoundKind::Lindep => bound_lindep(d, ri),
    })
}

#[derive(Serialize)]
struct BoundRow {
    d: usize,
    r: f64,
    t: usize,
    kind: BoundKind,
    bound: f64,
}

pub fn bounds(a: BoundsArgs) -> Result<()> {
    let mut rows = Vec::new();
    for &d in &a.d {
        for &r in &a.r {
            for &t in &a.t {
                rows.push(BoundRow {
                    d,
                    r,
                    t,
                    kind: a.kind,
                    bound: eval_bound(a.kind, d, r, t)?,
                });
            }
        }
    }
    if rows.len() == 1 && a.format == Format::Csv {
        println!("{}", rows[0].bound);
        return Ok(());
    }
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

pub fn check(a: CheckArgs) -> Result<()> {
    let set = load_set(&a.file)?;
    let rep = check_li_hx(&set.inputs(), &Tolerances::default())?;
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep)?),
        Format::Csv => {
            println!(
                "opr={} li_hx={} d_sx={} card_sx={}",
                rep.is_opr, rep.is_li_hx, rep.d_sx, rep.card_sx
            );
            let ranks: Vec<String> = rep.ranks.iter().map(|r| r.to_string()).collect();
            println!(
                "ranks={} mean_rank={} pairwise_orthogonal={}",
                ranks.join(","),
                rep.mean_rank,
                rep.pairwise_orthogonal
            );
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PhasesArgs {
    pub file: PathBuf,
    /// Use the circuit stored in a `train` output instead of training here.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[command(flatten)]
    pub trainer: TrainerFlags,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

pub fn phases(a: PhasesArgs) -> Result<()> {
    let set = load_set(&a.file)?;
    let v = match &a.from {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let stored: TrainOutput = serde_json::from_str(&text)?;
            let ansatz = Ansatz::new(stored.n_qubits, stored.layers, stored.theta)?;
            if ansatz.dim() != set.dim_x() {
                bail!(
                    "stored circuit acts on {} dimensions, set on {}",
                    ansatz.dim(),
                    set.dim_x()
                );
            }
            ansatz.unitary()?
        }
        None => train_on(&set, &a.file, &a.trainer)?.v,
    };
    let report = phase_report(set.target(), &v, &set.inputs())?;
    let thetas: Vec<f64> = report.iter().map(|p| p.theta).collect();
    let spread = circular_spread(&thetas);
    let cstd = circular_std(&thetas);
    let risk = risk(set.target(), &v)?.risk;
    match a.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "phases": report,
                "spread": spread,
                "circular_std": cstd,
                "risk": risk,
            }))?
        ),
        Format::Csv => {
            println!("j,theta,magnitude");
            for (j, p) in report.iter().enumerate() {
                println!("{j},{:.12},{:.12}", p.theta, p.magnitude);
            }
            eprintln!("spread={spread:.6} circular_std={cstd:.6} risk={risk:.6}");
        }
    }
    Ok(())
}
