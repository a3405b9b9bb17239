//! Layered U3 + CNOT-ring circuits on the X register and their training.

mod adam;
mod ansatz;
pub mod gates;
mod gradient;
mod train;

pub use adam::{Adam, AdamConfig};
pub use ansatz::{ansatz_apply, Ansatz, INIT_SCALE};
pub use gradient::{loss, loss_gradient, Objective};
pub use train::{train, TrainConfig, TrainResult};

/// Desk-scale default depth, `20 · n_qubits` layers.
pub fn default_layers(n_qubits: usize) -> usize {
    20 * n_qubits
}
