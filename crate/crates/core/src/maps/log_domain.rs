use crate::tensor::BlockVector;

use super::{MapError, SpectralProblem};

/// Largest `|y|` accepted before `e^y` is considered an overflow risk.
pub const DEFAULT_EXP_LIMIT: f64 = 300.0;

/// The log-exp substitutes `F(y) = log Φ(e^y)` and `g(y) = log c(e^y)`.
///
/// Both are convex; they are evaluated here only to check that property and
/// the identities tied to it.
#[derive(Debug, Clone, Copy)]
pub struct LogDomain<'a> {
    prob: &'a SpectralProblem,
    limit: f64,
}

impl<'a> LogDomain<'a> {
    pub fn new(prob: &'a SpectralProblem) -> Self {
        Self { prob, limit: DEFAULT_EXP_LIMIT }
    }

    pub fn with_limit(mut self, limit: f64) -> Self {
        self.limit = limit;
        self
    }

    fn guard(&self, y: &BlockVector) -> Result<(), MapError> {
        y.check_conforms(self.prob.partition())?;
        match y.as_slice().iter().find(|v| !(v.abs() <= self.limit)) {
            Some(&value) => Err(MapError::OverflowGuard { value, limit: self.limit }),
            None => Ok(()),
        }
    }

    pub fn log_f(&self, y: &BlockVector) -> Result<BlockVector, MapError> {
        self.guard(y)?;
        Ok(self.prob.phi(&y.map(f64::exp))?.map(f64::ln))
    }

    /// `g(y) = Σ p_i^{-1} log Σ_j e^{p_i y_{i,j}}`.
    pub fn log_g(&self, y: &BlockVector) -> Result<f64, MapError> {
        self.guard(y)?;
        Ok(y.blocks().zip(self.prob.p()).map(|(b, &p)| log_sum_exp(b, p) / p).sum())
    }

    /// Block `i` of `∇g(y)` is the softmax of `p_i y_i`.
    pub fn grad_log_g(&self, y: &BlockVector) -> Result<BlockVector, MapError> {
        self.guard(y)?;
        let mut out = y.clone();
        for (i, &p) in self.prob.p().iter().enumerate() {
            let lse = log_sum_exp(y.block(i), p);
            out.block_mut(i).iter_mut().for_each(|v| *v = (p * *v - lse).exp());
        }
        Ok(out)
    }
}

fn log_sum_exp(v: &[f64], scale: f64) -> f64 {
    let m = v.iter().map(|x| scale * x).fold(f64::NEG_INFINITY, f64::max);
    m + v.iter().map(|x| (scale * x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    #[test]
    fn log_f_at_zero_is_log_phi_at_ones() {
        let prob = problem(example_tensor(), vec![vec![1], vec![2, 3]], vec![2.0, 4.0]);
        let ld = LogDomain::new(&prob);
        let zero = BlockVector::filled(prob.partition(), 0.0);
        let f = ld.log_f(&zero).unwrap();
        let phi = prob.phi(&BlockVector::ones(prob.partition())).unwrap();
        for (a, b) in f.as_slice().iter().zip(phi.as_slice()) {
            assert!((a - b.ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn log_g_matches_definition() {
        let prob = problem(example_tensor(), vec![vec![1], vec![2, 3]], vec![2.0, 4.0]);
        let ld = LogDomain::new(&prob);
        let y = BlockVector::from_blocks(vec![vec![0.1, -0.3, 0.7], vec![1.2, 0.0, -2.0]]);
        let direct = prob.constraint_c(&y.map(f64::exp)).unwrap().ln();
        assert!((ld.log_g(&y).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn overflow_guard() {
        let prob = problem(example_tensor(), vec![vec![1, 2, 3]], vec![3.0]);
        let y = BlockVector::from_blocks(vec![vec![0.0, 301.0, 0.0]]);
        assert!(matches!(LogDomain::new(&prob).log_g(&y), Err(MapError::OverflowGuard { .. })));
        assert!(LogDomain::new(&prob).with_limit(400.0).log_g(&y).is_ok());
    }
}
