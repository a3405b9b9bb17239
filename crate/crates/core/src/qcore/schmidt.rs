use super::{StateVector, C64};

/// Singular values below this fraction of the largest one are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `|ψ⟩ = Σ_k s_k |ξ_k⟩_X ⊗ |ζ_k⟩_R` with `s_k > 0` descending.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub x_basis: Vec<Vec<C64>>,
    pub r_basis: Vec<Vec<C64>>,
    dim_x: usize,
    dim_r: usize,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ_k s_k ξ_k ⊗ ζ_k`, unnormalized.
    pub fn reconstruct(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim_x * self.dim_r];
        for ((s, xi), zeta) in self
            .coefficients
            .iter()
            .zip(&self.x_basis)
            .zip(&self.r_basis)
        {
            for (x, a) in xi.iter().enumerate() {
                let scaled = a * s;
                for (r, b) in zeta.iter().enumerate() {
                    out[x * self.dim_r + r] += scaled * b;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition via the SVD of the `dim_x × dim_r` coefficient matrix.
///
/// Keeps singular values strictly greater than `tol` times the largest one.
pub fn schmidt(psi: &StateVector, tol: f64) -> SchmidtDecomposition {
    let svd = psi.coefficient_matrix().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let largest = sv[order[0]];

    let mut out = SchmidtDecomposition {
        coefficients: Vec::new(),
        x_basis: Vec::new(),
        r_basis: Vec::new(),
        dim_x: psi.dim_x(),
        dim_r: psi.dim_r(),
    };
    for k in order.into_iter().take_while(|&k| sv[k] > tol * largest) {
        out.coefficients.push(sv[k]);
        out.x_basis.push(u.column(k).iter().cloned().collect());
        out.r_basis.push(v_t.row(k).iter().cloned().collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_state_has_rank_two() {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        let bell = StateVector::new(vec![h, z, z, h], 2, 2).unwrap();
        let dec = schmidt(&bell, DEFAULT_RANK_TOL);
        assert_eq!(dec.rank(), 2);
        for s in &dec.coefficients {
            assert!((s - FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_has_rank_one() {
        let s = StateVector::product_basis(0, 0, 2, 2).unwrap();
        let dec = schmidt(&s, DEFAULT_RANK_TOL);
        assert_eq!(dec.rank(), 1);
        assert!((dec.coefficients[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_of_rectangular_split() {
        let amps: Vec<C64> = (0..6)
            .map(|k| C64::new(k as f64 - 2.0, 0.5 * k as f64))
            .collect();
        let psi = StateVector::normalized(amps, 3, 2).unwrap();
        let dec = schmidt(&psi, DEFAULT_RANK_TOL);
        assert!(dec.rank() <= 2);
        let rec = dec.reconstruct();
        let err: f64 = rec
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-12);
    }
}
