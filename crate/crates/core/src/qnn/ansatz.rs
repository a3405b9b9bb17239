use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gates::{self, Mat2};
use crate::error::{Error, Result};
use crate::qcore::{extract_unitary, StateVector, UnitaryOperator, C64};

/// Half-width of the uniform parameter initialization.
pub const INIT_SCALE: f64 = 0.1;

/// Layered circuit on the X register: each layer applies `U3(θ, φ, λ)` to every
/// qubit, then the CNOT ring `q0→q1, q1→q2, …, q_{n−1}→q0` (skipped for one qubit).
///
/// Parameters are stored layer-major: `params[(layer * n + qubit) * 3 + k]`
/// with `k = 0, 1, 2` for `θ, φ, λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ansatz {
    n_qubits: usize,
    n_layers: usize,
    params: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Gate {
    U3 { qubit: usize, offset: usize },
    Cnot { control: usize, target: usize },
}

impl Ansatz {
    pub fn new(n_qubits: usize, n_layers: usize, params: Vec<f64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 16 {
            return Err(Error::InvalidConfig(format!(
                "n_qubits must be in 1..=16, got {n_qubits}"
            )));
        }
        let expected = Self::param_count(n_qubits, n_layers);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "parameter count must be 3 * n_qubits * n_layers",
                expected,
                actual: params.len(),
            });
        }
        Ok(Self {
            n_qubits,
            n_layers,
            params,
        })
    }

    pub fn zeros(n_qubits: usize, n_layers: usize) -> Result<Self> {
        Self::new(
            n_qubits,
            n_layers,
            vec![0.0; Self::param_count(n_qubits, n_layers)],
        )
    }

    /// Parameters uniform on `(−INIT_SCALE, INIT_SCALE)`.
    pub fn random_init<R: Rng + ?Sized>(
        n_qubits: usize,
        n_layers: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let params = (0..Self::param_count(n_qubits, n_layers))
            .map(|_| rng.random_range(-INIT_SCALE..INIT_SCALE))
            .collect();
        Self::new(n_qubits, n_layers, params)
    }

    pub fn param_count(n_qubits: usize, n_layers: usize) -> usize {
        3 * n_qubits * n_layers
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    /// Register dimension `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.params.len(), "parameter count is fixed");
        self.params.copy_from_slice(params);
    }

    pub(crate) fn gates(&self) -> Vec<Gate> {
        let n = self.n_qubits;
        let mut out = Vec::with_capacity(self.n_layers * 2 * n);
        for layer in 0..self.n_layers {
            for qubit in 0..n {
                out.push(Gate::U3 {
                    qubit,
                    offset: (layer * n + qubit) * 3,
                });
            }
            if n > 1 {
                for control in 0..n {
                    out.push(Gate::Cnot {
                        control,
                        target: (control + 1) % n,
                    });
                }
            }
        }
        out
    }

    pub(crate) fn u3_at(params: &[f64], offset: usize) -> Mat2 {
        gates::u3(params[offset], params[offset + 1], params[offset + 2])
    }

    /// Runs the circuit in place on `2^n` rows of `block` amplitudes each.
    pub(crate) fn apply_to_buffer(&self, buf: &mut [C64], block: usize) {
        let n = self.n_qubits;
        for gate in self.gates() {
            match gate {
                Gate::U3 { qubit, offset } => {
                    let g = Self::u3_at(&self.params, offset);
                    gates::apply_1q(buf, n, qubit, block, &g);
                }
                Gate::Cnot { control, target } => gates::apply_cnot(buf, n, control, target, block),
            }
        }
    }

    /// The circuit's matrix, assembled column by column.
    pub fn unitary(&self) -> Result<UnitaryOperator> {
        extract_unitary(|s| ansatz_apply(self, s), self.dim())
    }
}

/// `(V(params) ⊗ I)|ψ⟩`, updating the statevector gate by gate.
pub fn ansatz_apply(a: &Ansatz, psi: &StateVector) -> Result<StateVector> {
    if psi.dim_x() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "ansatz register vs. X dimension",
            expected: a.dim(),
            actual: psi.dim_x(),
        });
    }
    let mut buf = psi.amplitudes().to_vec();
    a.apply_to_buffer(&mut buf, psi.dim_r());
    StateVector::from_parts(buf, psi.dim_x(), psi.dim_r())
}
