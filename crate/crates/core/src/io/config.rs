//! Command-line encodings of partitions and exponents, and the problem
//! configuration assembled from them.

use std::path::PathBuf;

use num_rational::Ratio;
use thiserror::Error;

use crate::maps::{ProblemError, SpectralProblem};
use crate::solver::{Method, SolverOptions};
use crate::tensor::{CooTensor, ShapePartition};

use super::format::{read_tensor_file, FormatError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("bad partition {text:?}: {msg}")]
    BadPartition { text: String, msg: String },
    #[error("bad exponent {text:?}: {msg}")]
    BadExponent { text: String, msg: String },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Parses `"1;2,3"` into one-based blocks `[[1], [2, 3]]`.
pub fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>, ConfigError> {
    let bad = |msg: &str| ConfigError::BadPartition { text: text.to_string(), msg: msg.to_string() };
    let mut blocks = Vec::new();
    for block in text.split(';') {
        let block = block.trim();
        if block.is_empty() {
            return Err(bad("empty block"));
        }
        let modes = block
            .split(',')
            .map(|m| m.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad("modes must be positive integers"))?;
        if modes.contains(&0) {
            return Err(bad("modes are one-based"));
        }
        blocks.push(modes);
    }
    Ok(blocks)
}

/// One exponent as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    pub value: f64,
    /// present for integers, `a/b` and plain decimals that fit in `i64`
    pub exact: Option<Ratio<i64>>,
}

impl Exponent {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let t = text.trim();
        let bad = |msg: &str| ConfigError::BadExponent { text: t.to_string(), msg: msg.to_string() };
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
            let d: i64 = d.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
            if d == 0 {
                return Err(bad("zero denominator"));
            }
            let r = Ratio::new(n, d);
            return Ok(Self { value: n as f64 / d as f64, exact: Some(r) });
        }
        let value: f64 = t.parse().map_err(|_| bad("not a number"))?;
        if !value.is_finite() {
            return Err(bad("not finite"));
        }
        Ok(Self { value, exact: decimal_ratio(t) })
    }
}

/// Exact value of a plain decimal such as `"2"`, `"-0.25"` or `"4.5"`.
fn decimal_ratio(t: &str) -> Option<Ratio<i64>> {
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut numer: i64 = 0;
    let mut denom: i64 = 1;
    for c in int.chars() {
        numer = numer.checked_mul(10)?.checked_add(c.to_digit(10)? as i64)?;
    }
    for c in frac.chars() {
        numer = numer.checked_mul(10)?.checked_add(c.to_digit(10)? as i64)?;
        denom = denom.checked_mul(10)?;
    }
    Some(Ratio::new(if neg { -numer } else { numer }, denom))
}

/// Parses a comma list such as `"2,4"` or `"3/2,5"`.
pub fn parse_exponents(text: &str) -> Result<Vec<Exponent>, ConfigError> {
    if text.trim().is_empty() {
        return Err(ConfigError::BadExponent { text: text.to_string(), msg: "empty list".into() });
    }
    text.split(',').map(Exponent::parse).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub tensor_path: PathBuf,
    /// one-based blocks; `None` means a single block holding every mode
    pub partition: Option<Vec<Vec<usize>>>,
    /// one exponent per block, or a single exponent shared by all blocks
    pub p: Vec<Exponent>,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    pub armijo_c: f64,
    pub backtrack_rho: f64,
    pub seed: Option<u64>,
}

impl ProblemConfig {
    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            armijo_c: self.armijo_c,
            backtrack_rho: self.backtrack_rho,
            method: self.method,
            ..SolverOptions::default()
        }
    }

    pub fn load(&self) -> Result<SpectralProblem, ConfigError> {
        let tensor = read_tensor_file(&self.tensor_path)?;
        build_problem(tensor, self.partition.clone(), &self.p)
    }
}

/// Assembles a problem, keeping exact exponents whenever all of them are exact.
pub fn build_problem(
    tensor: CooTensor,
    partition: Option<Vec<Vec<usize>>>,
    p: &[Exponent],
) -> Result<SpectralProblem, ConfigError> {
    let blocks = partition.unwrap_or_else(|| vec![(1..=tensor.order()).collect()]);
    let part = ShapePartition::from_one_based(tensor.dims(), blocks).map_err(ProblemError::from)?;
    let d = part.num_blocks();
    let p: Vec<Exponent> = if p.len() == 1 && d > 1 { vec![p[0]; d] } else { p.to_vec() };
    let prob = match p.iter().map(|e| e.exact).collect::<Option<Vec<_>>>() {
        Some(exact) => SpectralProblem::with_exact_p(tensor, part, exact)?,
        None => SpectralProblem::new(tensor, part, p.iter().map(|e| e.value).collect())?,
    };
    Ok(prob)
}
