//! Structural preconditions: σ-strict nonnegativity, σ-weak irreducibility and
//! the Perron–Frobenius regime selected by `Σ |σ_i| / p_i`.

use num_rational::Ratio;
use serde::Serialize;

use crate::linalg::{strong_components, DenseMatrix};
use crate::maps::SpectralProblem;
use crate::tensor::BlockVector;

/// Absolute tolerance for `Σ ν_i/p_i = 1` when exponents are floating point.
pub const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// strictly nonnegative, `Σ ν_i/p_i < 1`, not weakly irreducible
    StrictSubcritical,
    /// weakly irreducible, `Σ ν_i/p_i = 1`
    WeaklyIrrCritical,
    /// weakly irreducible, `Σ ν_i/p_i < 1`
    BothValid,
    Unsupported,
}

impl Regime {
    /// True when a unique positive eigenpair is guaranteed.
    pub fn is_supported(self) -> bool {
        self != Regime::Unsupported
    }
}

/// How `Σ ν_i/p_i` compares with one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criticality {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = ">")]
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub strict_nonneg: bool,
    pub weakly_irreducible: bool,
    pub nu_over_p: f64,
    /// exact value as `a/b` when the exponents were rationals
    pub nu_over_p_exact: Option<String>,
    pub criticality: Criticality,
    /// spectral radius of the homogeneity matrix
    pub rho_a: f64,
    /// whether `ρ(A) - 1` and `Σ ν_i/p_i - 1` agree in sign (within 1e-9)
    pub rho_consistent: bool,
    pub regime: Regime,
    pub m_nnz: usize,
    pub warnings: Vec<String>,
}

/// `M = DG(1)`, the structure matrix.
pub fn build_m(prob: &SpectralProblem) -> DenseMatrix {
    prob.jacobian_g(&BlockVector::ones(prob.partition())).expect("all-ones vector conforms to the partition")
}

fn strict_nonneg_of(m: &DenseMatrix) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().any(|&v| v != 0.0))
}

/// A 1×1 zero matrix counts as reducible, so weak irreducibility always
/// implies strict nonnegativity.
fn weak_irreducible_of(m: &DenseMatrix) -> bool {
    if m.rows() == 1 {
        return m.row(0)[0] > 0.0;
    }
    strong_components(&m.positive_pattern()).is_strongly_connected()
}

pub fn check_strict_nonneg(prob: &SpectralProblem) -> bool {
    strict_nonneg_of(&build_m(prob))
}

pub fn check_weak_irreducible(prob: &SpectralProblem) -> bool {
    weak_irreducible_of(&build_m(prob))
}

fn criticality(prob: &SpectralProblem) -> Criticality {
    if let Some(exact) = prob.nu_over_p_exact() {
        let one = Ratio::from_integer(1);
        return match exact.cmp(&one) {
            std::cmp::Ordering::Less => Criticality::Below,
            std::cmp::Ordering::Equal => Criticality::Equal,
            std::cmp::Ordering::Greater => Criticality::Above,
        };
    }
    let s = prob.nu_over_p();
    if (s - 1.0).abs() <= CRITICAL_TOL {
        Criticality::Equal
    } else if s < 1.0 {
        Criticality::Below
    } else {
        Criticality::Above
    }
}

pub fn classify_regime(prob: &SpectralProblem) -> AssumptionReport {
    let m = build_m(prob);
    let strict_nonneg = strict_nonneg_of(&m);
    let weakly_irreducible = weak_irreducible_of(&m);
    let nu_over_p = prob.nu_over_p();
    let crit = criticality(prob);
    let rho_a = prob.homogeneity().rho;

    let rho_side = if (rho_a - 1.0).abs() <= 1e-9 {
        Criticality::Equal
    } else if rho_a < 1.0 {
        Criticality::Below
    } else {
        Criticality::Above
    };
    let rho_consistent = rho_side == crit;

    let regime = match (strict_nonneg, weakly_irreducible, crit) {
        (_, true, Criticality::Equal) => Regime::WeaklyIrrCritical,
        (_, true, Criticality::Below) => Regime::BothValid,
        (true, false, Criticality::Below) => Regime::StrictSubcritical,
        _ => Regime::Unsupported,
    };

    let mut warnings = Vec::new();
    if !strict_nonneg {
        warnings
            .push("tensor is not σ-strictly nonnegative: Φ vanishes somewhere and no positive eigenpair exists".into());
    } else if regime == Regime::Unsupported {
        let why = match (weakly_irreducible, crit) {
            (false, Criticality::Equal) => "Σν/p = 1 but the tensor is not σ-weakly irreducible",
            _ => "Σν/p > 1",
        };
        warnings.push(format!(
            "{why}: uniqueness of the positive eigenpair and nonsingular Newton systems are not guaranteed; the solver may still be attempted"
        ));
    }
    if !rho_consistent {
        warnings.push(format!("ρ(A) = {rho_a} disagrees with Σν/p = {nu_over_p} beyond 1e-9"));
    }

    AssumptionReport {
        strict_nonneg,
        weakly_irreducible,
        nu_over_p,
        nu_over_p_exact: prob.nu_over_p_exact().map(|r| format!("{}/{}", r.numer(), r.denom())),
        criticality: crit,
        rho_a,
        rho_consistent,
        regime,
        m_nnz: m.as_slice().iter().filter(|&&v| v != 0.0).count(),
        warnings,
    }
}
