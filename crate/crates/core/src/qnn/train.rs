use serde::{Deserialize, Serialize};

use super::adam::{Adam, AdamConfig};
use super::ansatz::Ansatz;
use super::gradient::Objective;
use crate::datagen::TrainingSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub max_iters: usize,
    pub lr: f64,
    pub target_loss: f64,
    /// Record the loss every this many iterations (0 disables the trace).
    pub log_every: usize,
    /// Run all `max_iters` steps even after reaching `target_loss`.
    pub fixed_iterations: bool,
    /// Multiply the step size by `lr_decay` after this many iterations without
    /// a new best loss (0 keeps the step size fixed).
    pub plateau_patience: usize,
    pub lr_decay: f64,
    pub min_lr: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            lr: 0.01,
            target_loss: 1e-6,
            log_every: 100,
            fixed_iterations: false,
            plateau_patience: 200,
            lr_decay: 0.5,
            min_lr: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub final_params: Vec<f64>,
    pub final_loss: f64,
    pub loss_trace: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
}

impl TrainResult {
    /// The trained circuit, with `template`'s shape.
    pub fn ansatz(&self, template: &Ansatz) -> Result<Ansatz> {
        Ansatz::new(
            template.n_qubits(),
            template.n_layers(),
            self.final_params.clone(),
        )
    }
}

/// Adam descent on the loss starting from `a`'s current parameters, with the
/// step size cut on plateaus.
///
/// Returns the best parameters seen, so `final_loss` never exceeds the loss of
/// the starting point.
pub fn train(a: &Ansatz, s: &TrainingSet, cfg: &TrainConfig) -> Result<TrainResult> {
    if !(cfg.target_loss > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "target_loss must be positive, got {}",
            cfg.target_loss
        )));
    }
    if !(cfg.lr > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "lr must be positive, got {}",
            cfg.lr
        )));
    }
    if !(cfg.lr_decay > 0.0 && cfg.lr_decay <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "lr_decay must be in (0, 1], got {}",
            cfg.lr_decay
        )));
    }
    let obj = Objective::new(a, s)?;
    let mut params = a.params().to_vec();
    let mut opt = Adam::new(
        params.len(),
        AdamConfig {
            lr: cfg.lr,
            ..Default::default()
        },
    );
    let mut trace = Vec::new();
    let mut best = (f64::INFINITY, params.clone());
    let mut iterations = 0;
    let mut lr = cfg.lr;
    let mut since_best = 0;

    loop {
        let (loss, grad) = obj.evaluate(&params);
        if cfg.log_every > 0 && iterations % cfg.log_every == 0 {
            trace.push(loss);
        }
        if loss < best.0 {
            best = (loss, params.clone());
            since_best = 0;
        } else {
            since_best += 1;
            if cfg.plateau_patience > 0 && since_best >= cfg.plateau_patience {
                lr = (lr * cfg.lr_decay).max(cfg.min_lr);
                since_best = 0;
            }
        }
        let done = if cfg.fixed_iterations {
            iterations >= cfg.max_iters
        } else {
            loss <= cfg.target_loss || iterations >= cfg.max_iters
        };
        if done {
            break;
        }
        opt.step_with_lr(&mut params, &grad, lr);
        iterations += 1;
    }

    let (final_loss, final_params) = best;
    Ok(TrainResult {
        final_params,
        final_loss,
        loss_trace: trace,
        iterations_used: iterations,
        converged: final_loss <= cfg.target_loss,
    })
}
