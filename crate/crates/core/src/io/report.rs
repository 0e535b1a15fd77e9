//! Result JSON and trace CSV.

use std::io::Write;

use serde_json::{json, Value};

use crate::maps::SpectralProblem;
use crate::solver::{IterRecord, SolveResult};
use crate::structure::AssumptionReport;

pub const SCHEMA_VERSION: u32 = 1;

pub const TRACE_HEADER: &str = "k,lambda,delta,alpha,backtracks,res,cw_lower";

pub fn result_json(prob: &SpectralProblem, result: &SolveResult) -> Value {
    let cw = prob.cw_bounds(&result.x).ok();
    json!({
        "schema_version": SCHEMA_VERSION,
        "partition": prob.partition().to_one_based_string(),
        "p": prob.p(),
        "method": result.method,
        "status": result.status,
        "converged": result.converged,
        "lambda_star": result.lambda_star,
        "lambda_final": result.lambda_final,
        "res": result.res,
        "iterations": result.iterations,
        "total_backtracks": result.total_backtracks,
        "x": result.x.to_blocks(),
        "cw_bounds": cw,
        "regime": result.regime,
        "trace": result.trace,
        "warnings": result.warnings,
    })
}

pub fn check_json(prob: &SpectralProblem, report: &AssumptionReport) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "partition": prob.partition().to_one_based_string(),
        "p": prob.p(),
        "report": report,
    })
}

pub fn write_trace_csv<W: Write>(mut w: W, trace: &[IterRecord]) -> std::io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in trace {
        writeln!(
            w,
            "{},{:?},{:?},{:?},{},{:?},{:?}",
            r.k, r.lambda_k, r.delta_k, r.alpha_k, r.backtracks, r.res, r.cw_lower
        )?;
    }
    Ok(())
}
