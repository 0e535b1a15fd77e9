//! Test-side oracles, written independently of the library's contractions.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_core::{BlockVector, CooTensor, ShapePartition, SpectralProblem};

/// One benchmark configuration: one-based blocks, exponents and the
/// reference eigenvalue to three decimals.
pub struct Case {
    pub blocks: Vec<Vec<usize>>,
    pub p: Vec<f64>,
    pub expected: f64,
}

pub fn example_tensor() -> CooTensor {
    let e = |i: usize, j: usize, k: usize| (vec![i - 1, j - 1, k - 1], 1.0);
    CooTensor::new(vec![3, 3, 3], vec![e(1, 1, 3), e(1, 3, 1), e(2, 2, 1), e(2, 2, 2), e(3, 2, 1)]).unwrap()
}

pub fn cases() -> Vec<Case> {
    let s1 = || vec![vec![1, 2, 3]];
    let s2 = || vec![vec![1], vec![2, 3]];
    let s3 = || vec![vec![1], vec![2], vec![3]];
    vec![
        Case { blocks: s1(), p: vec![3.0], expected: 1.748 },
        Case { blocks: s1(), p: vec![4.0], expected: 2.277 },
        Case { blocks: s1(), p: vec![5.0], expected: 2.663 },
        Case { blocks: s2(), p: vec![2.0, 4.0], expected: 1.414 },
        Case { blocks: s2(), p: vec![3.0, 5.0], expected: 2.167 },
        Case { blocks: s2(), p: vec![4.0, 6.0], expected: 2.581 },
        Case { blocks: s3(), p: vec![3.0; 3], expected: 2.045 },
        Case { blocks: s3(), p: vec![4.0; 3], expected: 2.469 },
        Case { blocks: s3(), p: vec![5.0; 3], expected: 2.817 },
    ]
}

impl Case {
    pub fn problem(&self) -> SpectralProblem {
        problem(example_tensor(), self.blocks.clone(), self.p.clone())
    }

    pub fn label(&self) -> String {
        let blocks: Vec<String> =
            self.blocks.iter().map(|b| b.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")).collect();
        let p: Vec<String> = self.p.iter().map(|v| v.to_string()).collect();
        format!("σ={{{}}} p=({})", blocks.join(";"), p.join(","))
    }
}

pub fn problem(t: CooTensor, blocks: Vec<Vec<usize>>, p: Vec<f64>) -> SpectralProblem {
    let part = ShapePartition::from_one_based(t.dims(), blocks).unwrap();
    SpectralProblem::new(t, part, p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_positive(part: &ShapePartition, rng: &mut impl Rng) -> BlockVector {
    let data = (0..part.total_len()).map(|_| rng.gen_range(0.2..2.0)).collect();
    BlockVector::from_flat(part, data).unwrap()
}

pub fn random_real(part: &ShapePartition, rng: &mut impl Rng, scale: f64) -> BlockVector {
    let data = (0..part.total_len()).map(|_| rng.gen_range(-scale..scale)).collect();
    BlockVector::from_flat(part, data).unwrap()
}

/// Brute-force `G`: loops over the full index space of a dense copy.
pub fn dense_g(t: &CooTensor, part: &ShapePartition, x: &BlockVector) -> Vec<f64> {
    let lookup: HashMap<Vec<usize>, f64> = t.entries().map(|(i, v)| (i.to_vec(), v)).collect();
    let dims = t.dims();
    let m = dims.len();
    let total: usize = dims.iter().product();
    let owner: Vec<usize> = (0..m).map(|mode| part.blocks().iter().position(|b| b.contains(&mode)).unwrap()).collect();
    let mut out = vec![0.0; part.total_len()];
    for (i, block) in part.blocks().iter().enumerate() {
        let s = block[0];
        let offset = part.offsets()[i];
        for linear in 0..total {
            let mut idx = vec![0; m];
            let mut rest = linear;
            for k in (0..m).rev() {
                idx[k] = rest % dims[k];
                rest /= dims[k];
            }
            let Some(a) = lookup.get(&idx) else { continue };
            let mut prod = *a;
            for k in 0..m {
                if k != s {
                    prod *= x.block(owner[k])[idx[k]];
                }
            }
            out[offset + idx[s]] += prod;
        }
    }
    out
}

/// Central-difference Jacobian of `f` at `x`, as rows.
pub fn fd_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let rows = f(x).len();
    let mut jac = vec![vec![0.0; n]; rows];
    for c in 0..n {
        let h = 1e-6 * x[c].abs().max(1.0);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[c] += h;
        xm[c] -= h;
        let (fp, fm) = (f(&xp), f(&xm));
        for r in 0..rows {
            jac[r][c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    jac
}

/// `max |a - b| / max |b|` over all entries.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff = a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = b.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn flatten(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter().flatten().copied().collect()
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Largest real root of the characteristic polynomial of a 2×2 or 3×3
/// matrix, by sign-change scan and bisection.
pub fn char_poly_largest_root(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let coeffs: Vec<f64> = match n {
        2 => {
            let tr = a[0][0] + a[1][1];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            vec![1.0, -tr, det]
        }
        3 => {
            let tr = a[0][0] + a[1][1] + a[2][2];
            let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0]
                + a[1][1] * a[2][2]
                - a[1][2] * a[2][1];
            let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
            vec![1.0, -tr, minors, -det]
        }
        _ => panic!("only 2×2 and 3×3"),
    };
    let eval = |t: f64| coeffs.iter().fold(0.0, |acc, c| acc * t + c);
    let bound = 1.0 + a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let steps = 200_000;
    let mut hi = bound;
    for s in 1..=steps {
        let lo = bound - 2.0 * bound * s as f64 / steps as f64;
        if eval(lo) == 0.0 {
            return lo;
        }
        if eval(lo).signum() != eval(hi).signum() {
            let (mut l, mut h) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (l + h);
                if eval(mid).signum() == eval(h).signum() {
                    h = mid;
                } else {
                    l = mid;
                }
            }
            return 0.5 * (l + h);
        }
        hi = lo;
    }
    panic!("no real root found")
}

/// Tensor, partition and exponents drawn from `rng`: one to three blocks,
/// total order two to four, block dimensions one to three.
///
/// With `density = 1` every entry is positive. Exponents are drawn from
/// `[p_lo, p_lo + 3)`.
pub fn random_problem(rng: &mut impl Rng, density: f64, p_lo: f64) -> SpectralProblem {
    let order = rng.gen_range(2..=4usize);
    let d = rng.gen_range(1..=order.min(3));
    // nondecreasing block sizes summing to `order`
    let mut nu = vec![1usize; d];
    for _ in d..order {
        let i = rng.gen_range(0..d);
        nu[i] += 1;
    }
    nu.sort_unstable();
    let block_dims: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=3)).collect();
    let mut dims = Vec::new();
    let mut blocks = Vec::new();
    for (i, &size) in nu.iter().enumerate() {
        blocks.push((dims.len()..dims.len() + size).collect::<Vec<_>>());
        dims.extend(std::iter::repeat_n(block_dims[i], size));
    }
    let total: usize = dims.iter().product();
    let mut entries = Vec::new();
    for linear in 0..total {
        if density < 1.0 && !rng.gen_bool(density) {
            continue;
        }
        entries.push((unravel(linear, &dims), rng.gen_range(0.1..1.0)));
    }
    let t = CooTensor::new(dims.clone(), entries).unwrap();
    let part = ShapePartition::new(&dims, blocks).unwrap();
    let p = (0..d).map(|_| rng.gen_range(p_lo..p_lo + 3.0)).collect();
    SpectralProblem::new(t, part, p).unwrap()
}

/// Row-major multi-index of `linear`.
pub fn unravel(mut linear: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = linear % dims[k];
        linear /= dims[k];
    }
    idx
}

/// Per-mode factor slices of `x^{[σ]}`.
pub fn mode_factors<'a>(part: &ShapePartition, x: &'a BlockVector) -> Vec<&'a [f64]> {
    (0..part.order()).map(|mode| x.block(part.block_of_mode(mode))).collect()
}
