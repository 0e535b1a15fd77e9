//! Eigenpair solvers: the line-search Newton–Noda iteration and a normalized
//! fixed-point (power) baseline. Both stop on the certified residual
//! `Res = (φ(x̄) - ψ(x̄)) / max{1, ψ(x̄)}`.

mod lsnnm;
mod power;

pub use lsnnm::{line_search, ls_nnm, newton_step, LineSearchStep, NewtonStep};
pub use power::power_method;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{MapError, SpectralProblem};
use crate::structure::{classify_regime, AssumptionReport};
use crate::tensor::BlockVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    LsNnm,
    Power,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::LsNnm => "lsnnm",
            Method::Power => "power",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lsnnm" | "ls-nnm" | "newton" => Ok(Method::LsNnm),
            "power" | "pm" => Ok(Method::Power),
            other => Err(format!("unknown method {other:?} (expected lsnnm or power)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// stop once `Res <= tol`
    pub tol: f64,
    pub max_iter: usize,
    /// sufficient-decrease coefficient of the line search, in (0,1)
    pub armijo_c: f64,
    /// backtracking factor, in (0,1)
    pub backtrack_rho: f64,
    pub max_backtracks: usize,
    pub method: Method,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 500,
            armijo_c: 1e-2,
            backtrack_rho: 0.5,
            max_backtracks: 60,
            method: Method::LsNnm,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |what: &str| Err(SolveError::InvalidOptions(what.to_string()));
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0,1)");
        }
        if !(self.backtrack_rho > 0.0 && self.backtrack_rho < 1.0) {
            return bad("backtrack_rho must lie in (0,1)");
        }
        Ok(())
    }
}

/// One iteration of a solver, recorded before the step is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterRecord {
    pub k: usize,
    /// `φ(x^k)`
    pub lambda_k: f64,
    /// eigenvalue increment of the Newton system (zero for the power method)
    pub delta_k: f64,
    pub alpha_k: f64,
    pub backtracks: usize,
    /// `Res` at `x^k`
    pub res: f64,
    /// `ψ(x̄^k)`
    pub cw_lower: f64,
    /// `‖H(x^k, λ_k)‖∞`
    pub h_norm: f64,
    /// `∇c(x^k)ᵀ d^k`
    pub tangency: f64,
    /// `‖d^k‖∞`
    pub step_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterExceeded,
    SingularNewtonSystem,
    LineSearchFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub method: Method,
    /// `(φ(x̄) + ψ(x̄)) / 2` at the final iterate
    pub lambda_star: f64,
    /// `φ(x^K)` at the final iterate
    pub lambda_final: f64,
    /// blockwise `p_i`-normalized final iterate
    #[serde(serialize_with = "serialize_blocks")]
    pub x: BlockVector,
    pub res: f64,
    pub iterations: usize,
    pub total_backtracks: usize,
    pub trace: Vec<IterRecord>,
    pub regime: AssumptionReport,
    pub converged: bool,
    pub status: SolveStatus,
    /// component-floor diagnostics raised during the run
    pub warnings: Vec<String>,
}

fn serialize_blocks<S: serde::Serializer>(x: &BlockVector, s: S) -> Result<S::Ok, S::Error> {
    x.to_blocks().serialize(s)
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no convergence after {} iterations (Res = {:e})", .0.iterations, .0.res)]
    MaxIterExceeded(Box<SolveResult>),
    #[error("Newton system singular at iteration {}: {detail}", partial.iterations)]
    SingularNewtonSystem { detail: String, partial: Box<SolveResult> },
    #[error("line search failed at iteration {} after {backtracks} backtracks", partial.iterations)]
    LineSearchFailed { backtracks: usize, partial: Box<SolveResult> },
    #[error("invalid starting point: {0}")]
    InvalidStart(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

impl SolveError {
    /// The partial result carried by iteration failures.
    pub fn partial(&self) -> Option<&SolveResult> {
        match self {
            SolveError::MaxIterExceeded(r) => Some(r),
            SolveError::SingularNewtonSystem { partial, .. } | SolveError::LineSearchFailed { partial, .. } => {
                Some(partial)
            }
            _ => None,
        }
    }
}

/// `Res` at the blockwise-normalized `x̄`.
pub fn residual_res(prob: &SpectralProblem, x: &BlockVector) -> Result<f64, MapError> {
    Ok(Certificate::at(prob, x)?.res)
}

/// φ, ψ and Res at the normalized point.
#[derive(Debug, Clone)]
pub(crate) struct Certificate {
    pub xbar: BlockVector,
    pub phi: f64,
    pub psi: f64,
    pub res: f64,
}

impl Certificate {
    pub fn at(prob: &SpectralProblem, x: &BlockVector) -> Result<Self, MapError> {
        let xbar = prob.normalize_blocks(x)?;
        let values = prob.phi(&xbar)?;
        let phi = crate::maps::max_of(values.as_slice());
        let psi = crate::maps::min_of(values.as_slice());
        let res = (phi - psi) / psi.max(1.0);
        Ok(Self { xbar, phi, psi, res })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.phi + self.psi)
    }
}

/// Checks a user starting point and returns it retracted onto `c = 1`.
pub(crate) fn prepare_start(prob: &SpectralProblem, x0: Option<&BlockVector>) -> Result<BlockVector, SolveError> {
    let u0 = match x0 {
        Some(x) => {
            x.check_conforms(prob.partition()).map_err(|e| SolveError::InvalidStart(e.to_string()))?;
            if let Some(i) = x.as_slice().iter().position(|&v| !(v > 0.0)) {
                return Err(SolveError::InvalidStart(format!("component {i} is not strictly positive")));
            }
            x.clone()
        }
        None => BlockVector::ones(prob.partition()),
    };
    Ok(prob.retract(&u0)?)
}

/// Runs the method selected in `opts`.
pub fn solve(
    prob: &SpectralProblem,
    x0: Option<&BlockVector>,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    match opts.method {
        Method::LsNnm => ls_nnm(prob, x0, opts),
        Method::Power => power_method(prob, x0, opts),
    }
}

pub(crate) fn regime_of(prob: &SpectralProblem) -> AssumptionReport {
    classify_regime(prob)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::test_support::*;

    #[test]
    fn res_examples() {
        let prob = problem(example_tensor(), vec![vec![1, 2, 3]], vec![3.0]);
        let ones = BlockVector::ones(prob.partition());
        assert!((residual_res(&prob, &ones).unwrap() - 1.0).abs() < 1e-14);
        let bad = BlockVector::from_blocks(vec![vec![1.0, -1.0, 1.0]]);
        assert!(residual_res(&prob, &bad).is_err());
        let x = BlockVector::from_blocks(vec![vec![0.3, 2.0, 0.01]]);
        assert!(residual_res(&prob, &x).unwrap() >= 0.0);
    }

    #[test]
    fn options_validation() {
        assert!(SolverOptions::default().validate().is_ok());
        let o = SolverOptions { armijo_c: 1.0, ..Default::default() };
        assert!(o.validate().is_err());
        let o = SolverOptions { backtrack_rho: 0.0, ..Default::default() };
        assert!(o.validate().is_err());
        let o = SolverOptions { tol: 0.0, ..Default::default() };
        assert!(o.validate().is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("lsnnm".parse::<Method>().unwrap(), Method::LsNnm);
        assert_eq!("power".parse::<Method>().unwrap(), Method::Power);
        assert!("bfgs".parse::<Method>().is_err());
    }
}
