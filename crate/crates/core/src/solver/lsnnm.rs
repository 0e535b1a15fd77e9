use thiserror::Error;

use crate::linalg::{lu_solve, LinalgError};
use crate::maps::{max_of, MapError, SpectralProblem};
use crate::tensor::BlockVector;

use super::{
    prepare_start, regime_of, Certificate, IterRecord, Method, SolveError, SolveResult, SolveStatus, SolverOptions,
};

/// Components below this fraction of `‖x‖∞` trigger a diagnostic.
const COMPONENT_FLOOR: f64 = 1e-12;

/// Rounding allowance in the sufficient-decrease test, in units of `ε|λ|`.
/// Without it a run that has reached machine precision cannot take a step.
const ARMIJO_ROUNDING: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonStep {
    pub d: BlockVector,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchStep {
    pub alpha: f64,
    pub x_next: BlockVector,
    /// `φ(x_next)`
    pub phi_next: f64,
    pub backtracks: usize,
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("singular Newton system: {0}")]
    Singular(#[from] LinalgError),
    #[error("no acceptable step after {0} backtracks")]
    LineSearchFailed(usize),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Solves `DH(x, λ) (d; δ) = -H(x, λ)`.
pub fn newton_step(prob: &SpectralProblem, x: &BlockVector, lambda: f64) -> Result<NewtonStep, StepError> {
    let dh = prob.newton_matrix(x, lambda)?;
    let rhs: Vec<f64> = prob.system_h(x, lambda)?.iter().map(|v| -v).collect();
    let mut sol = lu_solve(&dh, &rhs)?;
    let delta = sol.pop().expect("system has n + 1 unknowns");
    Ok(NewtonStep { d: x.with_data(sol), delta })
}

/// Backtracks `α = ρ^j` until `x + αd > 0` and
/// `φ(R(x + αd)) ≤ λ + armijo_c·α·δ`, up to a few ulps of `λ`.
pub fn line_search(
    prob: &SpectralProblem,
    x: &BlockVector,
    lambda: f64,
    step: &NewtonStep,
    opts: &SolverOptions,
) -> Result<LineSearchStep, StepError> {
    let slack = ARMIJO_ROUNDING * f64::EPSILON * lambda.abs();
    let mut alpha = 1.0;
    for backtracks in 0..=opts.max_backtracks {
        let trial: Vec<f64> = x.as_slice().iter().zip(step.d.as_slice()).map(|(xv, dv)| xv + alpha * dv).collect();
        if trial.iter().all(|&v| v > 0.0) {
            let x_next = prob.retract(&x.with_data(trial))?;
            let phi_next = prob.phi_max(&x_next)?;
            if phi_next <= lambda + opts.armijo_c * alpha * step.delta + slack {
                return Ok(LineSearchStep { alpha, x_next, phi_next, backtracks });
            }
        }
        alpha *= opts.backtrack_rho;
    }
    Err(StepError::LineSearchFailed(opts.max_backtracks))
}

pub(crate) struct RunState {
    pub method: Method,
    pub trace: Vec<IterRecord>,
    pub warnings: Vec<String>,
}

impl RunState {
    pub fn new(method: Method) -> Self {
        Self { method, trace: Vec::new(), warnings: Vec::new() }
    }

    pub fn check_floor(&mut self, k: usize, x: &BlockVector) {
        let top = max_of(x.as_slice());
        if let Some(i) = x.as_slice().iter().position(|&v| v < COMPONENT_FLOOR * top) {
            self.warnings.push(format!("iteration {k}: component {i} fell below {COMPONENT_FLOOR:e}·‖x‖∞"));
        }
    }

    pub fn finish(self, prob: &SpectralProblem, x: &BlockVector, status: SolveStatus) -> Result<SolveResult, MapError> {
        let cert = Certificate::at(prob, x)?;
        let total_backtracks = self.trace.iter().map(|r| r.backtracks).sum();
        Ok(SolveResult {
            method: self.method,
            lambda_star: cert.midpoint(),
            lambda_final: prob.phi_max(x)?,
            res: cert.res,
            x: cert.xbar,
            iterations: self.trace.len(),
            total_backtracks,
            trace: self.trace,
            regime: regime_of(prob),
            converged: status == SolveStatus::Converged,
            status,
            warnings: self.warnings,
        })
    }
}

/// Line-search Newton–Noda iteration with the Noda update `λ_k = φ(x^k)`.
pub fn ls_nnm(
    prob: &SpectralProblem,
    x0: Option<&BlockVector>,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    opts.validate()?;
    let mut x = prepare_start(prob, x0)?;
    let mut state = RunState::new(Method::LsNnm);

    for k in 0..=opts.max_iter {
        let cert = Certificate::at(prob, &x)?;
        if cert.res <= opts.tol {
            return Ok(state.finish(prob, &x, SolveStatus::Converged)?);
        }
        if k == opts.max_iter {
            break;
        }
        let lambda = prob.phi_max(&x)?;
        let h_norm = prob.system_h(&x, lambda)?.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

        let step = match newton_step(prob, &x, lambda) {
            Ok(s) => s,
            Err(StepError::Singular(e)) => {
                let partial = Box::new(state.finish(prob, &x, SolveStatus::SingularNewtonSystem)?);
                return Err(SolveError::SingularNewtonSystem { detail: e.to_string(), partial });
            }
            Err(StepError::Map(e)) => return Err(e.into()),
            Err(StepError::LineSearchFailed(_)) => unreachable!("newton_step does not search"),
        };
        let grad_c = prob.grad_c(&x)?;
        let tangency: f64 = grad_c.as_slice().iter().zip(step.d.as_slice()).map(|(g, d)| g * d).sum();
        let step_norm = step.d.as_slice().iter().fold(0.0_f64, |m, v| m.max(v.abs()));

        let accepted = match line_search(prob, &x, lambda, &step, opts) {
            Ok(a) => a,
            Err(StepError::LineSearchFailed(backtracks)) => {
                let partial = Box::new(state.finish(prob, &x, SolveStatus::LineSearchFailed)?);
                return Err(SolveError::LineSearchFailed { backtracks, partial });
            }
            Err(StepError::Map(e)) => return Err(e.into()),
            Err(StepError::Singular(_)) => unreachable!("line search does not factor"),
        };

        state.trace.push(IterRecord {
            k,
            lambda_k: lambda,
            delta_k: step.delta,
            alpha_k: accepted.alpha,
            backtracks: accepted.backtracks,
            res: cert.res,
            cw_lower: cert.psi,
            h_norm,
            tangency,
            step_norm,
        });
        x = accepted.x_next;
        state.check_floor(k + 1, &x);
    }

    Err(SolveError::MaxIterExceeded(Box::new(state.finish(prob, &x, SolveStatus::MaxIterExceeded)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::test_support::*;
    use crate::tensor::CooTensor;

    fn sym_matrix() -> SpectralProblem {
        let t = CooTensor::new(
            vec![2, 2],
            vec![(vec![0, 0], 2.0), (vec![0, 1], 1.0), (vec![1, 0], 1.0), (vec![1, 1], 2.0)],
        )
        .unwrap();
        problem(t, vec![vec![1], vec![2]], vec![2.0, 2.0])
    }

    #[test]
    fn newton_step_vanishes_at_eigenpair() {
        let prob = sym_matrix();
        let s = 1.0 / 2f64.sqrt();
        let x = BlockVector::from_blocks(vec![vec![s, s], vec![s, s]]);
        let lambda = prob.phi_max(&x).unwrap();
        assert!((lambda - 3.0).abs() < 1e-14);
        let step = newton_step(&prob, &x, lambda).unwrap();
        assert!(step.delta.abs() < 1e-14);
        assert!(step.d.as_slice().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn newton_step_descends_from_start() {
        let prob = problem(example_tensor(), vec![vec![1, 2, 3]], vec![3.0]);
        let x = prob.retract(&BlockVector::ones(prob.partition())).unwrap();
        let lambda = prob.phi_max(&x).unwrap();
        let step = newton_step(&prob, &x, lambda).unwrap();
        assert!(step.delta < 0.0);
        let gc = prob.grad_c(&x).unwrap();
        let t: f64 = gc.as_slice().iter().zip(step.d.as_slice()).map(|(g, d)| g * d).sum();
        let dn = step.d.as_slice().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(t.abs() <= 1e-10 * (1.0 + dn));
    }

    #[test]
    fn scaling_direction_is_not_accepted_by_positivity_alone() {
        // Φ is degree-0 homogeneous here, so φ(R(x/2)) = φ(x) and Armijo rejects α = 1
        let prob = problem(example_tensor(), vec![vec![1, 2, 3]], vec![3.0]);
        let x = prob.retract(&BlockVector::ones(prob.partition())).unwrap();
        let lambda = prob.phi_max(&x).unwrap();
        let step = NewtonStep { d: x.map(|v| -v / 2.0), delta: -lambda / 2.0 };
        let opts = SolverOptions { max_backtracks: 8, ..Default::default() };
        match line_search(&prob, &x, lambda, &step, &opts) {
            Err(StepError::LineSearchFailed(8)) => {}
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn positivity_forces_backtracking() {
        let prob = sym_matrix();
        let x = prob.retract(&BlockVector::from_blocks(vec![vec![1.0, 0.5], vec![0.5, 1.0]])).unwrap();
        let lambda = prob.phi_max(&x).unwrap();
        let mut step = newton_step(&prob, &x, lambda).unwrap();
        // stretch the step so that α = 1 leaves the positive orthant
        let scale = 4.0 / step.d.as_slice().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        step.d = step.d.map(|v| v * scale);
        step.delta *= scale;
        assert!(x.as_slice().iter().zip(step.d.as_slice()).any(|(a, b)| a + b <= 0.0));
        let acc = line_search(&prob, &x, lambda, &step, &SolverOptions::default()).unwrap();
        assert!(acc.backtracks >= 1);
        assert_eq!(acc.alpha, 0.5f64.powi(acc.backtracks as i32));
    }

    #[test]
    fn solves_example_sigma1() {
        let prob = problem(example_tensor(), vec![vec![1, 2, 3]], vec![3.0]);
        let r = ls_nnm(&prob, None, &SolverOptions::default()).unwrap();
        assert!(r.converged);
        assert!((r.lambda_star - 1.748).abs() < 5e-3, "{}", r.lambda_star);
        assert!(r.iterations <= 15);
        assert_eq!(r.total_backtracks, 0);
    }

    #[test]
    fn all_ones_closed_form() {
        let prob = problem(CooTensor::ones(vec![2, 2, 2]).unwrap(), vec![vec![1, 2, 3]], vec![3.0]);
        let r = ls_nnm(&prob, None, &SolverOptions::default()).unwrap();
        assert!((r.lambda_star - 4.0).abs() < 1e-10);
        for &v in r.x.as_slice() {
            assert!((v - 2f64.powf(-1.0 / 3.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_start() {
        let prob = sym_matrix();
        let x0 = BlockVector::from_blocks(vec![vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert!(matches!(ls_nnm(&prob, Some(&x0), &SolverOptions::default()), Err(SolveError::InvalidStart(_))));
        let x0 = BlockVector::from_blocks(vec![vec![1.0, 1.0, 1.0]]);
        assert!(matches!(ls_nnm(&prob, Some(&x0), &SolverOptions::default()), Err(SolveError::InvalidStart(_))));
    }

    #[test]
    fn unattainable_tolerance_returns_partial_trace() {
        let prob = problem(example_tensor(), vec![vec![1, 2, 3]], vec![3.0]);
        let opts = SolverOptions { tol: 1e-30, max_iter: 20, ..Default::default() };
        match ls_nnm(&prob, None, &opts) {
            Err(SolveError::MaxIterExceeded(r)) => {
                assert!(!r.converged);
                assert_eq!(r.iterations, 20);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
