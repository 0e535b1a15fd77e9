//! Seeded random sparse tensors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tensor::{CooTensor, TensorError};

#[derive(Debug, Error)]
pub enum RandomError {
    #[error("density {0} must lie in (0, 1]")]
    BadDensity(f64),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Each coordinate is kept with probability `density` and gets a value in
/// `(0, 1]`. Every mode-1 slice receives at least one entry.
pub fn random_tensor(dims: &[usize], density: f64, seed: u64) -> Result<CooTensor, RandomError> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(RandomError::BadDensity(density));
    }
    if dims.is_empty() {
        return Err(TensorError::ZeroOrder.into());
    }
    if let Some(mode) = dims.iter().position(|&n| n == 0) {
        return Err(TensorError::ZeroDimension { mode }.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slice: usize = dims[1..].iter().product();
    let mut entries = Vec::new();
    for first in 0..dims[0] {
        let mut hit = false;
        for rest in 0..slice {
            if rng.gen_bool(density) {
                entries.push((index_of(first, rest, dims), 1.0 - rng.gen::<f64>()));
                hit = true;
            }
        }
        if !hit {
            let rest = rng.gen_range(0..slice);
            entries.push((index_of(first, rest, dims), 1.0 - rng.gen::<f64>()));
        }
    }
    Ok(CooTensor::new(dims.to_vec(), entries)?)
}

fn index_of(first: usize, mut rest: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    idx[0] = first;
    for k in (1..dims.len()).rev() {
        idx[k] = rest % dims[k];
        rest /= dims[k];
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_density() {
        let t = random_tensor(&[3, 3, 3], 1.0, 7).unwrap();
        assert_eq!(t.nnz(), 27);
        assert!(t.entries().all(|(_, v)| v > 0.0 && v <= 1.0));
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_tensor(&[4, 3, 3], 0.3, 11).unwrap(), random_tensor(&[4, 3, 3], 0.3, 11).unwrap());
        assert_ne!(random_tensor(&[4, 3, 3], 0.3, 11).unwrap(), random_tensor(&[4, 3, 3], 0.3, 12).unwrap());
    }

    #[test]
    fn every_slice_is_hit() {
        let t = random_tensor(&[6, 5, 5], 0.001, 3).unwrap();
        let mut seen = [false; 6];
        for (idx, _) in t.entries() {
            seen[idx[0]] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn bad_density() {
        assert!(matches!(random_tensor(&[2, 2], 0.0, 1), Err(RandomError::BadDensity(_))));
        assert!(matches!(random_tensor(&[2, 2], 1.5, 1), Err(RandomError::BadDensity(_))));
        assert!(matches!(random_tensor(&[2, 2], f64::NAN, 1), Err(RandomError::BadDensity(_))));
    }
}
