//! Small dense kernels: LU with partial pivoting, the dominant eigenpair of a
//! nonnegative matrix, and strongly connected components of a digraph.

use std::ops::{Index, IndexMut};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column}, threshold {threshold:e})")]
    SingularMatrix { column: usize, pivot: f64, threshold: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} values for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True when every off-diagonal entry is `<= 0`.
    pub fn is_z_matrix(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] <= 0.0))
    }

    /// Square-matrix sparsity pattern as adjacency lists (`i -> j` iff `a_ij > 0`).
    pub fn positive_pattern(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|i| (0..self.cols).filter(|&j| self[(i, j)] > 0.0).collect()).collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Relative pivot floor below which a matrix is declared singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// In-place LU factorization `PA = LU`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::DimensionMismatch(format!("{}x{} matrix is not square", a.rows, a.cols)));
        }
        let n = a.rows;
        let threshold = PIVOT_TOLERANCE * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= threshold || pivot == 0.0 {
                return Err(LinalgError::SingularMatrix { column: k, pivot, threshold });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let diag = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / diag;
                lu[(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= l * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.lu.rows;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }
}

/// Solves `A x = rhs` with partial pivoting and one step of iterative refinement.
pub fn lu_solve(a: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if rhs.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            rhs.len(),
            a.rows
        )));
    }
    let lu = LuFactors::factor(a)?;
    let mut x = lu.solve(rhs);
    let ax = a.mul_vec(&x);
    let resid: Vec<f64> = rhs.iter().zip(&ax).map(|(b, v)| b - v).collect();
    let corr = lu.solve(&resid);
    x.iter_mut().zip(&corr).for_each(|(xi, ci)| *xi += ci);
    Ok(x)
}

/// Perron root and normalized Perron vector of a nonnegative square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigpair {
    pub rho: f64,
    /// positive, sums to one
    pub vector: Vec<f64>,
}

const EIG_TOL: f64 = 1e-14;
const EIG_MAX_ITER: usize = 10_000;

/// Power iteration on `A + I` from the uniform vector.
///
/// The unit shift makes irreducible nonnegative matrices primitive, so the
/// iteration cannot oscillate between cyclic classes.
pub fn dominant_eigpair(a: &DenseMatrix) -> Result<Eigpair, LinalgError> {
    if !a.is_square() || a.rows == 0 {
        return Err(LinalgError::DimensionMismatch("dominant_eigpair needs a nonempty square matrix".into()));
    }
    let n = a.rows;
    let mut v = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..EIG_MAX_ITER {
        let av = a.mul_vec(&v);
        let mut w: Vec<f64> = av.iter().zip(&v).map(|(x, y)| x + y).collect();
        let s: f64 = w.iter().sum();
        if s <= 0.0 {
            return Err(LinalgError::NoConvergence { iterations: 0, residual: f64::NAN });
        }
        w.iter_mut().for_each(|x| *x /= s);
        // Rayleigh-type estimate from the sum normalization: 1ᵀ(A+I)v / 1ᵀv with 1ᵀv = 1
        let rho = s - 1.0;
        v = w;
        let av = a.mul_vec(&v);
        residual = av.iter().zip(&v).map(|(x, y)| (x - rho * y).abs()).fold(0.0, f64::max);
        if residual <= EIG_TOL * rho.max(1.0) {
            let rho = av.iter().sum::<f64>();
            return Ok(Eigpair { rho, vector: v });
        }
    }
    Err(LinalgError::NoConvergence { iterations: EIG_MAX_ITER, residual })
}

/// Strongly connected components of a digraph given as adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// component label of each vertex
    pub labels: Vec<usize>,
}

impl Components {
    pub fn is_strongly_connected(&self) -> bool {
        self.count == 1 && !self.labels.is_empty()
    }
}

/// Iterative Tarjan SCC.
pub fn strong_components(adj: &[Vec<usize>]) -> Components {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut labels = vec![UNVISITED; n];
    let mut next_index = 0;
    let mut count = 0;
    // (vertex, next neighbor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = call.last() {
            if let Some(&w) = adj[v].get(pos) {
                call.last_mut().expect("frame exists").1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    labels[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    Components { count, labels }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_examples() {
        let x = lu_solve(&DenseMatrix::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let x = lu_solve(&a, &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        let s = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(lu_solve(&s, &[1.0, 2.0]), Err(LinalgError::SingularMatrix { .. })));
    }

    #[test]
    fn lu_needs_pivoting() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(lu_solve(&a, &[2.0, 5.0]).unwrap(), vec![5.0, 2.0]);
    }

    #[test]
    fn eigpair_examples() {
        let swap = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = dominant_eigpair(&swap).unwrap();
        assert!((e.rho - 1.0).abs() < 1e-12);
        assert!(e.vector.iter().all(|v| (v - 0.5).abs() < 1e-12));

        let at = DenseMatrix::from_rows(&[vec![0.0, 1.0 / 3.0], vec![2.0, 1.0 / 3.0]]).unwrap();
        let e = dominant_eigpair(&at).unwrap();
        assert!((e.rho - 1.0).abs() < 1e-12);
        assert!((e.vector[0] - 0.25).abs() < 1e-12 && (e.vector[1] - 0.75).abs() < 1e-12);

        let k3 = DenseMatrix::from_rows(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let e = dominant_eigpair(&k3).unwrap();
        assert!((e.rho - 2.0).abs() < 1e-12);
        assert!(e.vector.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn scc_examples() {
        let two_cycle = vec![vec![1], vec![0]];
        assert_eq!(strong_components(&two_cycle).count, 1);
        let empty = vec![vec![], vec![], vec![]];
        assert_eq!(strong_components(&empty).count, 3);
        let chain = vec![vec![1], vec![2], vec![]];
        let c = strong_components(&chain);
        assert_eq!(c.count, 3);
        assert!(!c.is_strongly_connected());
        let mixed = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let c = strong_components(&mixed);
        assert_eq!(c.count, 2);
        assert_eq!(c.labels[0], c.labels[1]);
        assert_eq!(c.labels[2], c.labels[3]);
        assert!(!strong_components(&[]).is_strongly_connected());
    }
}
