//! Gate matrices and in-place kernels on an `n`-qubit register.
//!
//! Buffers hold `2^n` rows of `block` contiguous amplitudes (`index = x * block + c`).
//! Qubit `q` is bit `n − 1 − q` of `x`, so qubit 0 is the most significant.

use crate::qcore::C64;

/// Row-major 2×2 matrix `[m00, m01, m10, m11]`.
pub type Mat2 = [C64; 4];

/// `U3(θ, φ, λ) = [[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        C64::new(c, 0.0),
        -C64::from_polar(s, lambda),
        C64::from_polar(s, phi),
        C64::from_polar(c, phi + lambda),
    ]
}

/// Partial derivatives of [`u3`] with respect to `θ`, `φ` and `λ`.
pub fn u3_partials(theta: f64, phi: f64, lambda: f64) -> [Mat2; 3] {
    let (s, c) = (theta / 2.0).sin_cos();
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    let d_theta = [
        C64::new(-0.5 * s, 0.0),
        -C64::from_polar(0.5 * c, lambda),
        C64::from_polar(0.5 * c, phi),
        -C64::from_polar(0.5 * s, phi + lambda),
    ];
    let d_phi = [
        z,
        z,
        i * C64::from_polar(s, phi),
        i * C64::from_polar(c, phi + lambda),
    ];
    let d_lambda = [
        z,
        -i * C64::from_polar(s, lambda),
        z,
        i * C64::from_polar(c, phi + lambda),
    ];
    [d_theta, d_phi, d_lambda]
}

pub fn adjoint(m: &Mat2) -> Mat2 {
    [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()]
}

pub fn transpose(m: &Mat2) -> Mat2 {
    [m[0], m[2], m[1], m[3]]
}

#[inline]
fn stride(n_qubits: usize, qubit: usize, block: usize) -> usize {
    (1usize << (n_qubits - 1 - qubit)) * block
}

/// Applies `g` to `qubit`.
pub fn apply_1q(buf: &mut [C64], n_qubits: usize, qubit: usize, block: usize, g: &Mat2) {
    let s = stride(n_qubits, qubit, block);
    for chunk in buf.chunks_exact_mut(2 * s) {
        let (lo, hi) = chunk.split_at_mut(s);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a, *b);
            *a = g[0] * x0 + g[1] * x1;
            *b = g[2] * x0 + g[3] * x1;
        }
    }
}

/// `E[a][b] = Σ_{rest, c} left[(a, rest), c] · right[(b, rest), c]`, the
/// contraction that turns `Tr[W (D ⊗ I) F]` into `Σ_ab D[a][b] E[a][b]` when
/// `left = Wᵀ` and `right = F`.
pub fn environment(
    left: &[C64],
    right: &[C64],
    n_qubits: usize,
    qubit: usize,
    block: usize,
) -> Mat2 {
    let s = stride(n_qubits, qubit, block);
    let mut e = [C64::new(0.0, 0.0); 4];
    for (lc, rc) in left.chunks_exact(2 * s).zip(right.chunks_exact(2 * s)) {
        let (l0, l1) = lc.split_at(s);
        let (r0, r1) = rc.split_at(s);
        for k in 0..s {
            e[0] += l0[k] * r0[k];
            e[1] += l0[k] * r1[k];
            e[2] += l1[k] * r0[k];
            e[3] += l1[k] * r1[k];
        }
    }
    e
}

/// `Σ_ab m[a][b] · e[a][b]`.
#[inline]
pub fn contract(m: &Mat2, e: &Mat2) -> C64 {
    m[0] * e[0] + m[1] * e[1] + m[2] * e[2] + m[3] * e[3]
}

/// CNOT with the given control and target qubits. Self-inverse and real
/// symmetric, so it also serves as its own adjoint and transpose.
pub fn apply_cnot(buf: &mut [C64], n_qubits: usize, control: usize, target: usize, block: usize) {
    let cmask = 1usize << (n_qubits - 1 - control);
    let tmask = 1usize << (n_qubits - 1 - target);
    for x in 0..(1usize << n_qubits) {
        if x & cmask != 0 && x & tmask == 0 {
            let y = x | tmask;
            for c in 0..block {
                buf.swap(x * block + c, y * block + c);
            }
        }
    }
}
