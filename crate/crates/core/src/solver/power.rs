use crate::maps::{p_norm, SpectralProblem};
use crate::tensor::BlockVector;

use super::lsnnm::RunState;
use super::{prepare_start, Certificate, IterRecord, Method, SolveError, SolveResult, SolveStatus, SolverOptions};

/// Normalized fixed-point iteration `x_i ← F_i(x) / ‖F_i(x)‖_{p_i}`.
pub fn power_method(
    prob: &SpectralProblem,
    x0: Option<&BlockVector>,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    opts.validate()?;
    let mut x = prob.normalize_blocks(&prepare_start(prob, x0)?)?;
    let mut state = RunState::new(Method::Power);

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

        let mut next = prob.map_f_sp(&x)?;
        for (i, &p) in prob.p().iter().enumerate() {
            let norm = p_norm(next.block(i), p);
            next.block_mut(i).iter_mut().for_each(|v| *v /= norm);
        }
        let step_norm = next.as_slice().iter().zip(x.as_slice()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        state.trace.push(IterRecord {
            k,
            lambda_k: lambda,
            delta_k: 0.0,
            alpha_k: 1.0,
            backtracks: 0,
            res: cert.res,
            cw_lower: cert.psi,
            h_norm,
            tangency: 0.0,
            step_norm,
        });
        // a vanished block means Φ is zero somewhere; report it as an error
        prob.phi(&next)?;
        x = next;
        state.check_floor(k + 1, &x);
    }

    Err(SolveError::MaxIterExceeded(Box::new(state.finish(prob, &x, SolveStatus::MaxIterExceeded)?)))
}
