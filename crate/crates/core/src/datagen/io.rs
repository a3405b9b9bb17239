//! JSON exchange format for training sets.
//!
//! ```text
//! { "d": 4, "d_r": 2, "t": 2, "structure": "lin_dep", "seed": 42,
//!   "config": {...}, "target": [[re, im], ...],            // row-major
//!   "pairs": [ { "input": [[re, im], ...], "output": [...] } ] }
//! ```
//!
//! Every real number is written in scientific notation with 17 significant
//! digits, which round-trips any `f64` exactly.

use std::path::Path;

use serde::de::Deserializer;
use serde::ser::{Error as _, SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{Structure, TrainingPair, TrainingSet};
use crate::error::{Error, Result};
use crate::qcore::{StateVector, UnitaryOperator, C64};

/// Formats `x` with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

struct Real17(f64);

impl Serialize for Real17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite amplitude"));
        }
        RawValue::from_string(format_real(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

/// One complex amplitude, serialized as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude(pub C64);

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut tup = s.serialize_tuple(2)?;
        tup.serialize_element(&Real17(self.0.re))?;
        tup.serialize_element(&Real17(self.0.im))?;
        tup.end()
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Amplitude(C64::new(re, im)))
    }
}

fn to_amps(v: &[C64]) -> Vec<Amplitude> {
    v.iter().copied().map(Amplitude).collect()
}

fn from_amps(v: &[Amplitude]) -> Vec<C64> {
    v.iter().map(|a| a.0).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairRecord {
    pub input: Vec<Amplitude>,
    pub output: Vec<Amplitude>,
}

/// On-disk form of a [`TrainingSet`] plus provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainingSetFile {
    pub d: usize,
    pub d_r: usize,
    pub t: usize,
    pub structure: Structure,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Resolved generator settings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    pub target: Vec<Amplitude>,
    pub pairs: Vec<PairRecord>,
}

impl TrainingSetFile {
    pub fn from_set(
        set: &TrainingSet,
        seed: Option<u64>,
        config: Option<serde_json::Value>,
    ) -> Self {
        Self {
            d: set.dim_x(),
            d_r: set.dim_r(),
            t: set.len(),
            structure: set.structure(),
            seed,
            config,
            target: to_amps(&set.target().to_row_major()),
            pairs: set
                .pairs()
                .iter()
                .map(|p| PairRecord {
                    input: to_amps(p.input.amplitudes()),
                    output: to_amps(p.output.amplitudes()),
                })
                .collect(),
        }
    }

    /// Rebuilds and re-validates the set.
    pub fn to_set(&self) -> Result<TrainingSet> {
        if self.pairs.len() != self.t {
            return Err(Error::Malformed(format!(
                "t = {} but {} pairs present",
                self.t,
                self.pairs.len()
            )));
        }
        let target = UnitaryOperator::from_row_major(self.d, &from_amps(&self.target))?;
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                Ok(TrainingPair {
                    input: StateVector::new(from_amps(&p.input), self.d, self.d_r)?,
                    output: StateVector::new(from_amps(&p.output), self.d, self.d_r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TrainingSet::new(target, pairs, self.structure)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn write_training_set(
    path: &Path,
    set: &TrainingSet,
    seed: Option<u64>,
    config: Option<serde_json::Value>,
) -> Result<()> {
    let file = TrainingSetFile::from_set(set, seed, config);
    std::fs::write(path, file.to_json()?)?;
    Ok(())
}

pub fn read_training_set(path: &Path) -> Result<(TrainingSet, TrainingSetFile)> {
    let file = TrainingSetFile::from_json(&std::fs::read_to_string(path)?)?;
    Ok((file.to_set()?, file))
}
