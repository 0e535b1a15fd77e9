//! Positive (σ,p)-eigenpairs of nonnegative tensors.
//!
//! The main entry point is [`solver::ls_nnm`], a line-search Newton–Noda
//! iteration on the normalized system `Φ(x)∘x = λx`, `∏‖x_i‖_{p_i} = 1`.
//! [`structure::classify_regime`] reports whether a unique positive
//! eigenpair is guaranteed before a solve is attempted.

// negated comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod io;
pub mod linalg;
pub mod maps;
pub mod solver;
pub mod structure;
pub mod tensor;

pub use maps::{CwReport, HomogeneityData, LogDomain, MapError, ProblemError, SpectralProblem};
pub use solver::{
    ls_nnm, power_method, residual_res, solve, IterRecord, Method, SolveError, SolveResult, SolveStatus, SolverOptions,
};
pub use structure::{classify_regime, AssumptionReport, Criticality, Regime};
pub use tensor::{BlockVector, CooTensor, PartitionError, ShapePartition, TensorError};
