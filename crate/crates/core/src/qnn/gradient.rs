use super::ansatz::{ansatz_apply, Ansatz, Gate};
use super::gates;
use crate::datagen::TrainingSet;
use crate::error::{Error, Result};
use crate::qcore::{inner, partial_trace_outer, C64};

fn check_dims(a: &Ansatz, s: &TrainingSet) -> Result<()> {
    if a.dim() != s.dim_x() {
        return Err(Error::DimensionMismatch {
            context: "ansatz register vs. training set X dimension",
            expected: s.dim_x(),
            actual: a.dim(),
        });
    }
    Ok(())
}

/// `1 − (1/t) Σ_j |⟨φ_j|(V ⊗ I)|ψ_j⟩|²`, evaluated by running every input
/// through the circuit.
pub fn loss(a: &Ansatz, s: &TrainingSet) -> Result<f64> {
    check_dims(a, s)?;
    let mut fid = 0.0;
    for pair in s.pairs() {
        let out = ansatz_apply(a, &pair.input)?;
        fid += inner(&pair.output, &out)?.norm_sqr();
    }
    Ok(1.0 - fid / s.len() as f64)
}

/// Analytic gradient of [`loss`] with respect to the ansatz parameters.
pub fn loss_gradient(a: &Ansatz, s: &TrainingSet) -> Result<Vec<f64>> {
    let obj = Objective::new(a, s)?;
    Ok(obj.evaluate(a.params()).1)
}

/// Loss and gradient for a fixed circuit shape and training set.
///
/// Each sample enters only through the `d × d` operator `A_j = Ψ_j Φ_j†`, so the
/// overlap is `f_j = Tr[V A_j]` and the whole evaluation works on `d × d`
/// buffers regardless of `d_R` or `t`. The gradient is reverse mode: one forward
/// pass builds `V`, one backward pass peels gates off `V` while pushing the
/// cotangent `Σ_j conj(f_j) A_j` through them.
#[derive(Clone, Debug)]
pub struct Objective {
    template: Ansatz,
    gates: Vec<Gate>,
    /// Row-major `A_jᵀ`, so that `f_j = Σ_i V[i] · a_t[j][i]`.
    a_t: Vec<Vec<C64>>,
}

impl Objective {
    pub fn new(a: &Ansatz, s: &TrainingSet) -> Result<Self> {
        check_dims(a, s)?;
        let d = a.dim();
        let mut a_t = Vec::with_capacity(s.len());
        for pair in s.pairs() {
            let m = partial_trace_outer(&pair.input, &pair.output)?;
            // nalgebra stores column-major, which is the row-major transpose.
            debug_assert_eq!(m.nrows(), d);
            a_t.push(m.as_slice().to_vec());
        }
        Ok(Self {
            template: a.clone(),
            gates: a.gates(),
            a_t,
        })
    }

    pub fn n_params(&self) -> usize {
        self.template.params().len()
    }

    fn forward(&self, params: &[f64]) -> Vec<C64> {
        let d = self.template.dim();
        let mut v = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            v[i * d + i] = C64::new(1.0, 0.0);
        }
        let n = self.template.n_qubits();
        for gate in &self.gates {
            match *gate {
                Gate::U3 { qubit, offset } => {
                    gates::apply_1q(&mut v, n, qubit, d, &Ansatz::u3_at(params, offset))
                }
                Gate::Cnot { control, target } => gates::apply_cnot(&mut v, n, control, target, d),
            }
        }
        v
    }

    fn overlaps(&self, v: &[C64]) -> Vec<C64> {
        self.a_t
            .iter()
            .map(|at| v.iter().zip(at).map(|(x, y)| x * y).sum())
            .collect()
    }

    pub fn loss(&self, params: &[f64]) -> f64 {
        let v = self.forward(params);
        let f = self.overlaps(&v);
        1.0 - f.iter().map(|z| z.norm_sqr()).sum::<f64>() / f.len() as f64
    }

    /// Returns `(loss, gradient)` at `params`.
    pub fn evaluate(&self, params: &[f64]) -> (f64, Vec<f64>) {
        assert_eq!(params.len(), self.n_params());
        let d = self.template.dim();
        let n = self.template.n_qubits();
        let t = self.a_t.len() as f64;

        let mut right = self.forward(params);
        let f = self.overlaps(&right);
        let loss = 1.0 - f.iter().map(|z| z.norm_sqr()).sum::<f64>() / t;

        let mut left = vec![C64::new(0.0, 0.0); d * d];
        for (fj, at) in f.iter().zip(&self.a_t) {
            let w = fj.conj();
            for (l, x) in left.iter_mut().zip(at) {
                *l += w * x;
            }
        }

        let mut grad = vec![0.0; params.len()];
        let scale = -2.0 / t;
        for gate in self.gates.iter().rev() {
            match *gate {
                Gate::U3 { qubit, offset } => {
                    let g = Ansatz::u3_at(params, offset);
                    gates::apply_1q(&mut right, n, qubit, d, &gates::adjoint(&g));
                    let env = gates::environment(&left, &right, n, qubit, d);
                    let partials =
                        gates::u3_partials(params[offset], params[offset + 1], params[offset + 2]);
                    for (k, dg) in partials.iter().enumerate() {
                        grad[offset + k] = scale * gates::contract(dg, &env).re;
                    }
                    gates::apply_1q(&mut left, n, qubit, d, &gates::transpose(&g));
                }
                Gate::Cnot { control, target } => {
                    gates::apply_cnot(&mut right, n, control, target, d);
                    gates::apply_cnot(&mut left, n, control, target, d);
                }
            }
        }
        (loss, grad)
    }
}
