use serde::Serialize;

use crate::tensor::BlockVector;

use super::{max_of, min_of, MapError, SpectralProblem};

const POSITIVITY_FLOOR: f64 = 1e-300;

/// Collatz–Wielandt bracket at the blockwise-normalized point `x̄`.
///
/// `lower = ψ(x̄)` and `upper = φ(x̄)`. The weighted bounds are the
/// `(γ-1)b_i`-weighted products of the blockwise extreme ratios
/// `F^{(σ,p)}_{i,j}(x̄) / x̄_{i,j}`; their exponents sum to one against
/// `p'_i - 1`, so they always fall inside `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CwReport {
    pub lower: f64,
    pub upper: f64,
    pub weighted_lower: f64,
    pub weighted_upper: f64,
}

impl SpectralProblem {
    pub fn cw_bounds(&self, x: &BlockVector) -> Result<CwReport, MapError> {
        self.check_positive(x)?;
        let xbar = self.normalize_blocks(x)?;
        let phi = self.phi(&xbar)?;
        let f = self.map_f_sp(&xbar)?;
        let h = self.homogeneity();

        let mut log_lower = 0.0;
        let mut log_upper = 0.0;
        for i in 0..self.num_blocks() {
            let weight = (h.gamma - 1.0) * h.b[i];
            let (fi, xi) = (f.block(i), xbar.block(i));
            let ratios: Vec<f64> = fi.iter().zip(xi).map(|(fv, xv)| fv.ln() - xv.ln()).collect();
            let lo = ratios
                .iter()
                .zip(xi)
                .filter(|(_, xv)| **xv > POSITIVITY_FLOOR)
                .map(|(r, _)| *r)
                .fold(f64::INFINITY, f64::min);
            log_lower += weight * lo;
            log_upper += weight * max_of(&ratios);
        }
        Ok(CwReport {
            lower: min_of(phi.as_slice()),
            upper: max_of(phi.as_slice()),
            weighted_lower: log_lower.exp(),
            weighted_upper: log_upper.exp(),
        })
    }
}
