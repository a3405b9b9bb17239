//! Statevector laboratory for training parameterized circuits on entangled
//! data and comparing the resulting risk against no-free-lunch lower bounds.

pub mod bounds;
pub mod datagen;
mod error;
pub mod exper;
pub mod haar;
pub mod qcore;
pub mod qnn;

pub use error::{Error, Result};
