mod common;

use common::*;

use spectral_core::linalg::{DenseMatrix, LuFactors};
use spectral_core::{ls_nnm, SolverOptions};

/// `‖A‖₁ ‖A⁻¹‖₁`, with the inverse assembled column by column.
fn cond_1(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let lu = LuFactors::factor(a).expect("nonsingular");
    let col_sum = |cols: &[Vec<f64>]| cols.iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let a_cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| a.row(i)[j]).collect()).collect();
    let inv_cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lu.solve(&e)
        })
        .collect();
    col_sum(&a_cols) * col_sum(&inv_cols)
}

#[test]
fn bordered_system_is_well_conditioned_at_solutions() {
    for case in cases() {
        let prob = case.problem();
        let sol = ls_nnm(&prob, None, &SolverOptions::default()).unwrap();
        let x = prob.retract(&sol.x).unwrap();
        let lambda = prob.phi_max(&x).unwrap();
        let dh = prob.newton_matrix(&x, lambda).unwrap();
        let k = cond_1(&dh);
        assert!(k < 1e8, "{}: cond(DH) = {k:e}", case.label());
    }
}

#[test]
fn jacobian_is_m_matrix_at_solutions() {
    for case in cases() {
        let prob = case.problem();
        let sol = ls_nnm(&prob, None, &SolverOptions::default()).unwrap();
        let x = prob.retract(&sol.x).unwrap();
        let lambda = prob.phi_max(&x).unwrap();
        let j = prob.jacobian_j(&x, lambda).unwrap();
        assert!(j.is_z_matrix(), "{}", case.label());

        let v = prob.p_inv_times(&x);
        let jv = j.mul_vec(v.as_slice());
        let s = prob.nu_over_p();
        if (s - 1.0).abs() < 1e-12 {
            // J has the positive null vector p^{[-1]}⊗x at a critical eigenpair
            assert!(inf_norm(&jv) <= 1e-10 * lambda, "{}: ‖Jv‖ = {:e}", case.label(), inf_norm(&jv));
        } else {
            // a Z-matrix mapping a positive vector to a positive one is a nonsingular M-matrix
            assert!(jv.iter().all(|&w| w > 0.0), "{}", case.label());
            assert!(LuFactors::factor(&j).is_ok(), "{}", case.label());
        }
    }
}

#[test]
fn gradient_jacobian_matches_dense_oracle() {
    let mut r = rng(17);
    for _ in 0..40 {
        let prob = random_problem(&mut r, 0.6, 1.5);
        let x = random_positive(prob.partition(), &mut r);
        let analytic = prob.jacobian_g(&x).unwrap();
        let fd = fd_jacobian(|z| dense_g(prob.tensor(), prob.partition(), &x.with_data(z.to_vec())), x.as_slice());
        assert!(rel_err(analytic.as_slice(), &flatten(&fd)) <= 1e-8);
    }
}
