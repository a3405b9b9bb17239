//! Structured entangled training sets and checkers for their linear structure.

mod fixtures;
mod generators;
pub mod io;
mod structure;

pub use fixtures::{hadamard_alternative, hadamard_orthogonal, zz_alternative, zz_lindep};
pub use generators::{
    gen_lindep, gen_orthogonal, gen_varying_rank, lindep_inputs, orthogonal_inputs,
    varying_rank_inputs, DEFAULT_MAX_RETRIES,
};
pub use structure::{check_li_hx, check_opr, StructureReport, Tolerances};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{apply_on_x, StateVector, UnitaryOperator};

/// Outputs must match `(U ⊗ I)|ψ⟩` to this accuracy.
pub const OUTPUT_TOL: f64 = 1e-9;

/// Which generator produced a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    VaryingRank,
    Orthogonal,
    LinDep,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingPair {
    pub input: StateVector,
    pub output: StateVector,
}

/// Input/output pairs of a target unitary acting on the X register.
#[derive(Clone, Debug)]
pub struct TrainingSet {
    pairs: Vec<TrainingPair>,
    dim_x: usize,
    dim_r: usize,
    target: UnitaryOperator,
    structure: Structure,
}

impl TrainingSet {
    /// Computes every output as `(target ⊗ I)|input⟩`.
    pub fn from_inputs(
        target: UnitaryOperator,
        inputs: Vec<StateVector>,
        structure: Structure,
    ) -> Result<Self> {
        let pairs = inputs
            .into_iter()
            .map(|input| {
                let output = apply_on_x(&target, &input)?;
                Ok(TrainingPair { input, output })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, pairs, structure)
    }

    /// Validates shared dimensions and that every output is the target's image.
    pub fn new(
        target: UnitaryOperator,
        pairs: Vec<TrainingPair>,
        structure: Structure,
    ) -> Result<Self> {
        let first = pairs
            .first()
            .ok_or_else(|| Error::InvalidConfig("a training set needs at least one pair".into()))?;
        let (dim_x, dim_r) = (first.input.dim_x(), first.input.dim_r());
        if target.dim() != dim_x {
            return Err(Error::DimensionMismatch {
                context: "target dimension vs. X register",
                expected: dim_x,
                actual: target.dim(),
            });
        }
        for pair in &pairs {
            for s in [&pair.input, &pair.output] {
                if s.dim_x() != dim_x || s.dim_r() != dim_r {
                    return Err(Error::DimensionMismatch {
                        context: "all states must share (dim_x, dim_r)",
                        expected: dim_x * dim_r,
                        actual: s.dim(),
                    });
                }
            }
            let expected = apply_on_x(&target, &pair.input)?;
            let err = expected
                .amplitudes()
                .iter()
                .zip(pair.output.amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if err > OUTPUT_TOL {
                return Err(Error::Malformed(format!(
                    "output differs from (U ⊗ I)|input⟩ by {err:.3e}"
                )));
            }
        }
        Ok(Self {
            pairs,
            dim_x,
            dim_r,
            target,
            structure,
        })
    }

    pub fn pairs(&self) -> &[TrainingPair] {
        &self.pairs
    }

    pub fn inputs(&self) -> Vec<StateVector> {
        self.pairs.iter().map(|p| p.input.clone()).collect()
    }

    pub fn outputs(&self) -> Vec<StateVector> {
        self.pairs.iter().map(|p| p.output.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    pub fn target(&self) -> &UnitaryOperator {
        &self.target
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }
}
