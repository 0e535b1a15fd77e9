use crate::linalg::{dominant_eigpair, DenseMatrix};

use super::SpectralProblem;

/// Homogeneity matrix `A = diag(p' - 1)(1νᵀ - I)` of `F^{(σ,p)}` with its
/// left Perron vector `b` (`Aᵀb = ρ(A) b`, `Σ b_i = 1`) and the exponent
/// `γ = Σ b_i p'_i / (Σ b_i p'_i - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityData {
    pub a: DenseMatrix,
    pub rho: f64,
    pub b: Vec<f64>,
    pub gamma: f64,
}

impl SpectralProblem {
    pub fn homogeneity(&self) -> HomogeneityData {
        let d = self.num_blocks();
        let nu = self.partition().nu();
        let mut a = DenseMatrix::zeros(d, d);
        for i in 0..d {
            let scale = self.p_conj()[i] - 1.0;
            for j in 0..d {
                let delta = if i == j { 1.0 } else { 0.0 };
                a[(i, j)] = scale * (nu[j] as f64 - delta);
            }
        }
        // A has positive off-diagonal entries, so the shifted power iteration converges
        let perron = dominant_eigpair(&a.transpose()).expect("homogeneity matrix is nonnegative and irreducible");
        let weighted: f64 = perron.vector.iter().zip(self.p_conj()).map(|(b, pc)| b * pc).sum();
        HomogeneityData { a, rho: perron.rho, b: perron.vector, gamma: weighted / (weighted - 1.0) }
    }
}
