//! Analytic maps of the (σ,p)-eigenvalue problem.
//!
//! For a positive block vector `x`:
//!
//! * `Φ_i(x) = G_i(x) / x_i^{p_i-1}` with `G_i(x) = 𝒜_{s_i}(x^[σ])`,
//! * `c(x) = ‖x_1‖_{p_1} ⋯ ‖x_d‖_{p_d}`,
//! * `r(x, λ) = -Φ(x)∘x + λx` and `H(x, λ) = (r(x, λ); c(x) - 1)`,
//! * `R(x) = x / c(x)^{1/d}` retracts onto `c = 1`.
//!
//! A positive pair `(λ, x)` is the Perron eigenpair exactly when `H(x, λ) = 0`.
//! Jacobians are dense and laid out in the flat block order of [`BlockVector`].

mod cw;
mod homogeneity;
mod log_domain;

pub use cw::CwReport;
pub use homogeneity::HomogeneityData;
pub use log_domain::{LogDomain, DEFAULT_EXP_LIMIT};

use num_rational::Ratio;
use thiserror::Error;

use crate::linalg::DenseMatrix;
use crate::tensor::{self, BlockVector, CooTensor, PartitionError, ShapePartition, TensorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("input must be strictly positive (component {index} is {value})")]
    NonPositiveInput { index: usize, value: f64 },
    #[error("block {block} has zero norm")]
    ZeroNormBlock { block: usize },
    #[error("exponent {value} exceeds the guard magnitude {limit}")]
    OverflowGuard { value: f64, limit: f64 },
    #[error(transparent)]
    Shape(#[from] TensorError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("expected {expected} exponents (one per block), got {got}")]
    ExponentCount { expected: usize, got: usize },
    #[error("exponent p_{block} = {value} must lie in (1, ∞)")]
    ExponentOutOfRange { block: usize, value: f64 },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A nonnegative tensor with a shape partition and exponents `p ∈ (1,∞)^d`.
#[derive(Debug, Clone)]
pub struct SpectralProblem {
    tensor: CooTensor,
    partition: ShapePartition,
    p: Vec<f64>,
    p_conj: Vec<f64>,
    p_exact: Option<Vec<Ratio<i64>>>,
    /// `p` of the owning block, per flat component
    p_flat: Vec<f64>,
}

impl SpectralProblem {
    pub fn new(tensor: CooTensor, partition: ShapePartition, p: Vec<f64>) -> Result<Self, ProblemError> {
        tensor::check_partition(&tensor, &partition)?;
        let d = partition.num_blocks();
        if p.len() != d {
            return Err(ProblemError::ExponentCount { expected: d, got: p.len() });
        }
        for (i, &pi) in p.iter().enumerate() {
            if !(pi.is_finite() && pi > 1.0) {
                return Err(ProblemError::ExponentOutOfRange { block: i + 1, value: pi });
            }
        }
        let p_conj = p.iter().map(|&pi| pi / (pi - 1.0)).collect();
        let mut p_flat = Vec::with_capacity(partition.total_len());
        for (&pi, &n) in p.iter().zip(partition.block_dims()) {
            p_flat.extend(std::iter::repeat_n(pi, n));
        }
        Ok(Self { tensor, partition, p, p_conj, p_exact: None, p_flat })
    }

    /// Like [`SpectralProblem::new`] but keeps the exponents as exact rationals,
    /// so the critical case `Σ ν_i/p_i = 1` is decided without rounding.
    pub fn with_exact_p(
        tensor: CooTensor,
        partition: ShapePartition,
        p: Vec<Ratio<i64>>,
    ) -> Result<Self, ProblemError> {
        let approx = p.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        let mut prob = Self::new(tensor, partition, approx)?;
        prob.p_exact = Some(p);
        Ok(prob)
    }

    pub fn tensor(&self) -> &CooTensor {
        &self.tensor
    }

    pub fn partition(&self) -> &ShapePartition {
        &self.partition
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Conjugate exponents `p'_i = p_i / (p_i - 1)`.
    pub fn p_conj(&self) -> &[f64] {
        &self.p_conj
    }

    pub fn p_exact(&self) -> Option<&[Ratio<i64>]> {
        self.p_exact.as_deref()
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.num_blocks()
    }

    /// `n = Σ n_i`.
    pub fn dim(&self) -> usize {
        self.partition.total_len()
    }

    /// `Σ |σ_i| / p_i`.
    pub fn nu_over_p(&self) -> f64 {
        self.partition.nu().iter().zip(&self.p).map(|(&nu, &p)| nu as f64 / p).sum()
    }

    /// Exact `Σ |σ_i| / p_i` when the exponents were given as rationals.
    pub fn nu_over_p_exact(&self) -> Option<Ratio<i64>> {
        self.p_exact.as_ref().map(|p| {
            self.partition
                .nu()
                .iter()
                .zip(p)
                .fold(Ratio::from_integer(0), |acc, (&nu, &pi)| acc + Ratio::from_integer(nu as i64) / pi)
        })
    }

    /// The vector `p^{[-1]} ⊗ x`.
    pub fn p_inv_times(&self, x: &BlockVector) -> BlockVector {
        x.with_data(x.as_slice().iter().zip(&self.p_flat).map(|(v, p)| v / p).collect())
    }

    fn check_positive(&self, x: &BlockVector) -> Result<(), MapError> {
        x.check_conforms(&self.partition)?;
        match x.as_slice().iter().position(|&v| !(v > 0.0)) {
            Some(index) => Err(MapError::NonPositiveInput { index, value: x.as_slice()[index] }),
            None => Ok(()),
        }
    }

    /// `G(x)`; defined for every conforming `x`.
    pub fn map_g(&self, x: &BlockVector) -> Result<BlockVector, MapError> {
        Ok(tensor::map_g(&self.tensor, &self.partition, x)?)
    }

    /// `DG(x)`, n×n.
    pub fn jacobian_g(&self, x: &BlockVector) -> Result<DenseMatrix, MapError> {
        let n = self.dim();
        let data = tensor::jacobian_g(&self.tensor, &self.partition, x)?;
        Ok(DenseMatrix::from_row_major(n, n, data).expect("jacobian_g returns n*n values"))
    }

    /// `Φ(x)`.
    pub fn phi(&self, x: &BlockVector) -> Result<BlockVector, MapError> {
        self.check_positive(x)?;
        let g = self.map_g(x)?;
        Ok(self.phi_from_g(x, &g))
    }

    fn phi_from_g(&self, x: &BlockVector, g: &BlockVector) -> BlockVector {
        let data = g
            .as_slice()
            .iter()
            .zip(x.as_slice())
            .zip(&self.p_flat)
            .map(|((gv, xv), p)| gv / xv.powf(p - 1.0))
            .collect();
        x.with_data(data)
    }

    /// `φ(x) = max Φ(x)`.
    pub fn phi_max(&self, x: &BlockVector) -> Result<f64, MapError> {
        Ok(max_of(self.phi(x)?.as_slice()))
    }

    /// `ψ(x) = min Φ(x)`.
    pub fn psi_min(&self, x: &BlockVector) -> Result<f64, MapError> {
        Ok(min_of(self.phi(x)?.as_slice()))
    }

    /// Blockwise `p_i`-norms.
    pub fn block_norms(&self, x: &BlockVector) -> Result<Vec<f64>, MapError> {
        x.check_conforms(&self.partition)?;
        Ok(x.blocks().zip(&self.p).map(|(b, &p)| p_norm(b, p)).collect())
    }

    /// `c(x) = ∏ ‖x_i‖_{p_i}`.
    pub fn constraint_c(&self, x: &BlockVector) -> Result<f64, MapError> {
        Ok(self.block_norms(x)?.iter().product())
    }

    /// `∇c(x)`, block `i` equal to `c(x) ‖x_i‖^{-p_i} x_i^{p_i-1}`.
    pub fn grad_c(&self, x: &BlockVector) -> Result<BlockVector, MapError> {
        self.check_positive(x)?;
        let norms = self.block_norms(x)?;
        let c: f64 = norms.iter().product();
        let mut out = x.clone();
        for (i, (&norm, &p)) in norms.iter().zip(&self.p).enumerate() {
            let scale = c * norm.powf(-p);
            out.block_mut(i).iter_mut().for_each(|v| *v = scale * v.powf(p - 1.0));
        }
        Ok(out)
    }

    /// `x̄` with every block scaled to unit `p_i`-norm.
    pub fn normalize_blocks(&self, x: &BlockVector) -> Result<BlockVector, MapError> {
        let norms = self.block_norms(x)?;
        if let Some(block) = norms.iter().position(|&n| !(n > 0.0)) {
            return Err(MapError::ZeroNormBlock { block });
        }
        let inv: Vec<f64> = norms.iter().map(|n| 1.0 / n).collect();
        Ok(x.scale_blocks(&inv))
    }

    /// `DΦ(x) = diag(x^{1-p}) DG(x) - diag((p-1) G(x) x^{-p})`.
    pub fn jacobian_phi(&self, x: &BlockVector) -> Result<DenseMatrix, MapError> {
        self.check_positive(x)?;
        let g = self.map_g(x)?;
        let mut jac = self.jacobian_g(x)?;
        self.dphi_in_place(x, &g, &mut jac);
        Ok(jac)
    }

    fn dphi_in_place(&self, x: &BlockVector, g: &BlockVector, dg: &mut DenseMatrix) {
        let n = self.dim();
        let xs = x.as_slice();
        for r in 0..n {
            let p = self.p_flat[r];
            let scale = xs[r].powf(1.0 - p);
            for c in 0..n {
                dg[(r, c)] *= scale;
            }
            dg[(r, r)] -= (p - 1.0) * g.as_slice()[r] * xs[r].powf(-p);
        }
    }

    /// `r(x, λ) = -Φ(x)∘x + λx`.
    pub fn residual_r(&self, x: &BlockVector, lambda: f64) -> Result<BlockVector, MapError> {
        let phi = self.phi(x)?;
        Ok(residual_from_phi(x, &phi, lambda))
    }

    /// `H(x, λ)`, length `n + 1`.
    pub fn system_h(&self, x: &BlockVector, lambda: f64) -> Result<Vec<f64>, MapError> {
        let mut h = self.residual_r(x, lambda)?.into_vec();
        h.push(self.constraint_c(x)? - 1.0);
        Ok(h)
    }

    /// `J(x, λ) = -diag(x) DΦ(x) - diag(Φ(x)) + λI`.
    pub fn jacobian_j(&self, x: &BlockVector, lambda: f64) -> Result<DenseMatrix, MapError> {
        self.check_positive(x)?;
        let g = self.map_g(x)?;
        let phi = self.phi_from_g(x, &g);
        let mut jac = self.jacobian_g(x)?;
        self.dphi_in_place(x, &g, &mut jac);
        let n = self.dim();
        let xs = x.as_slice();
        for r in 0..n {
            for c in 0..n {
                jac[(r, c)] *= -xs[r];
            }
            jac[(r, r)] += lambda - phi.as_slice()[r];
        }
        Ok(jac)
    }

    /// `DH(x, λ) = [[J, x], [∇cᵀ, 0]]`, (n+1)×(n+1).
    pub fn newton_matrix(&self, x: &BlockVector, lambda: f64) -> Result<DenseMatrix, MapError> {
        let jac = self.jacobian_j(x, lambda)?;
        let gc = self.grad_c(x)?;
        let n = self.dim();
        let mut dh = DenseMatrix::zeros(n + 1, n + 1);
        for r in 0..n {
            for c in 0..n {
                dh[(r, c)] = jac[(r, c)];
            }
            dh[(r, n)] = x.as_slice()[r];
            dh[(n, r)] = gc.as_slice()[r];
        }
        Ok(dh)
    }

    /// `R(x) = x / c(x)^{1/d}`.
    pub fn retract(&self, x: &BlockVector) -> Result<BlockVector, MapError> {
        let norms = self.block_norms(x)?;
        if let Some(block) = norms.iter().position(|&n| !(n > 0.0)) {
            return Err(MapError::ZeroNormBlock { block });
        }
        let d = self.num_blocks() as f64;
        // product of d-th roots, so c(R(x)) = 1 without forming c first
        let divisor: f64 = norms.iter().map(|n| n.powf(1.0 / d)).product();
        Ok(x.map(|v| v / divisor))
    }

    /// `F^{(σ,p)}_i(x) = G_i(x)^{[p'_i - 1]}` for `x ≥ 0`.
    pub fn map_f_sp(&self, x: &BlockVector) -> Result<BlockVector, MapError> {
        let mut g = self.map_g(x)?;
        for (i, &pc) in self.p_conj.iter().enumerate() {
            g.block_mut(i).iter_mut().for_each(|v| *v = v.powf(pc - 1.0));
        }
        Ok(g)
    }
}

pub(crate) fn residual_from_phi(x: &BlockVector, phi: &BlockVector, lambda: f64) -> BlockVector {
    x.with_data(x.as_slice().iter().zip(phi.as_slice()).map(|(xv, fv)| -fv * xv + lambda * xv).collect())
}

pub(crate) fn p_norm(v: &[f64], p: f64) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * v.iter().map(|x| (x.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

pub(crate) fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn example_tensor() -> CooTensor {
        CooTensor::from_one_based(
            vec![3, 3, 3],
            vec![
                (vec![1, 1, 3], 1.0),
                (vec![1, 3, 1], 1.0),
                (vec![2, 2, 1], 1.0),
                (vec![2, 2, 2], 1.0),
                (vec![3, 2, 1], 1.0),
            ],
        )
        .unwrap()
    }

    pub fn problem(tensor: CooTensor, blocks: Vec<Vec<usize>>, p: Vec<f64>) -> SpectralProblem {
        let part = ShapePartition::from_one_based(tensor.dims(), blocks).unwrap();
        SpectralProblem::new(tensor, part, p).unwrap()
    }
}
