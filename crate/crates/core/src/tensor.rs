//! Sparse coordinate tensors, shape partitions and block vectors, plus the
//! multilinear contractions built on top of them.
//!
//! All indices are zero-based here; the text format and the CLI convert from
//! one-based indices at the boundary.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("tensor order must be positive")]
    ZeroOrder,
    #[error("dimension of mode {mode} must be positive")]
    ZeroDimension { mode: usize },
    #[error("entry {entry}: expected {expected} indices, got {got}")]
    IndexArity { entry: usize, expected: usize, got: usize },
    #[error("entry {entry}: index {index} out of range for mode {mode} (dimension {dim})")]
    IndexOutOfRange { entry: usize, mode: usize, index: usize, dim: usize },
    #[error("entry {entry}: value {value} is negative")]
    NegativeValue { entry: usize, value: f64 },
    #[error("entry {entry}: value is not finite")]
    NonFiniteValue { entry: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mode index {mode} out of range for a tensor of order {order}")]
    BadModeIndex { mode: usize, order: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("not a partition of the modes: {0}")]
    NotAPartition(String),
    #[error("block {block} mixes dimensions {first} and {other} (all modes of a block must share one dimension)")]
    UnequalDimsInBlock { block: usize, first: usize, other: usize },
    #[error("block sizes must be nondecreasing: block {block} has {size} modes, block {next} has {next_size}")]
    NonMonotoneBlockSizes { block: usize, size: usize, next: usize, next_size: usize },
    #[error("blocks must be contiguous and ordered: block {block} has a mode after a mode of block {next}")]
    NonContiguousBlocks { block: usize, next: usize },
}

/// Nonnegative tensor in coordinate format.
///
/// Entries are sorted lexicographically by multi-index and duplicates are
/// merged by summation. Indices are stored flat, `order` per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CooTensor {
    dims: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CooTensor {
    /// Builds a tensor from zero-based entries.
    pub fn new(dims: Vec<usize>, entries: Vec<(Vec<usize>, f64)>) -> Result<Self, TensorError> {
        if dims.is_empty() {
            return Err(TensorError::ZeroOrder);
        }
        if let Some(mode) = dims.iter().position(|&n| n == 0) {
            return Err(TensorError::ZeroDimension { mode });
        }
        let order = dims.len();
        for (e, (idx, value)) in entries.iter().enumerate() {
            if idx.len() != order {
                return Err(TensorError::IndexArity { entry: e, expected: order, got: idx.len() });
            }
            for (mode, (&i, &n)) in idx.iter().zip(&dims).enumerate() {
                if i >= n {
                    return Err(TensorError::IndexOutOfRange { entry: e, mode, index: i, dim: n });
                }
            }
            if !value.is_finite() {
                return Err(TensorError::NonFiniteValue { entry: e });
            }
            if *value < 0.0 {
                return Err(TensorError::NegativeValue { entry: e, value: *value });
            }
        }

        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut indices = Vec::with_capacity(entries.len() * order);
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<Vec<usize>> = None;
        for (idx, value) in entries {
            if last.as_ref() == Some(&idx) {
                *values.last_mut().expect("merged entry has a predecessor") += value;
            } else {
                indices.extend_from_slice(&idx);
                values.push(value);
                last = Some(idx);
            }
        }
        Ok(Self { dims, indices, values })
    }

    /// Builds a tensor from one-based entries, as written in files.
    pub fn from_one_based(dims: Vec<usize>, entries: Vec<(Vec<usize>, f64)>) -> Result<Self, TensorError> {
        let order = dims.len();
        let mut shifted = Vec::with_capacity(entries.len());
        for (e, (idx, v)) in entries.into_iter().enumerate() {
            let mut zero_based = Vec::with_capacity(idx.len());
            for (mode, &i) in idx.iter().enumerate() {
                if i == 0 {
                    let dim = dims.get(mode).copied().unwrap_or(0);
                    return Err(TensorError::IndexOutOfRange { entry: e, mode, index: 0, dim });
                }
                zero_based.push(i - 1);
            }
            if zero_based.len() != order {
                return Err(TensorError::IndexArity { entry: e, expected: order, got: zero_based.len() });
            }
            shifted.push((zero_based, v));
        }
        Self::new(dims, shifted)
    }

    /// Dense all-ones tensor of the given shape.
    pub fn ones(dims: Vec<usize>) -> Result<Self, TensorError> {
        let total: usize = dims.iter().product();
        let mut entries = Vec::with_capacity(total);
        for linear in 0..total {
            entries.push((unravel(linear, &dims), 1.0));
        }
        Self::new(dims, entries)
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(multi_index, value)` in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.indices.chunks_exact(self.order()).zip(self.values.iter().copied())
    }

    fn check_slots(&self, z: &[&[f64]]) -> Result<(), TensorError> {
        if z.len() != self.order() {
            return Err(TensorError::DimensionMismatch(format!("expected {} vectors, got {}", self.order(), z.len())));
        }
        for (k, (v, &n)) in z.iter().zip(&self.dims).enumerate() {
            if v.len() != n {
                return Err(TensorError::DimensionMismatch(format!(
                    "vector {} has length {}, mode dimension is {}",
                    k,
                    v.len(),
                    n
                )));
            }
        }
        Ok(())
    }

    /// `f_A(z_1, ..., z_m)`, summed over stored entries.
    pub fn multilinear_form(&self, z: &[&[f64]]) -> Result<f64, TensorError> {
        self.check_slots(z)?;
        Ok(self.entries().map(|(idx, a)| a * idx.iter().zip(z).map(|(&j, v)| v[j]).product::<f64>()).sum())
    }

    /// Gradient of the multilinear form with respect to slot `mode`.
    ///
    /// The vector passed in slot `mode` is ignored but must have the right length.
    pub fn grad_component(&self, mode: usize, z: &[&[f64]]) -> Result<Vec<f64>, TensorError> {
        if mode >= self.order() {
            return Err(TensorError::BadModeIndex { mode, order: self.order() });
        }
        self.check_slots(z)?;
        let mut out = vec![0.0; self.dims[mode]];
        for (idx, a) in self.entries() {
            let mut prod = a;
            for (t, (&j, v)) in idx.iter().zip(z).enumerate() {
                if t != mode {
                    prod *= v[j];
                }
            }
            out[idx[mode]] += prod;
        }
        Ok(out)
    }
}

pub(crate) fn unravel(mut linear: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = linear % dims[k];
        linear /= dims[k];
    }
    idx
}

/// Ordered grouping of tensor modes into blocks of equal dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapePartition {
    blocks: Vec<Vec<usize>>,
    nu: Vec<usize>,
    starts: Vec<usize>,
    block_dims: Vec<usize>,
    /// block index owning each mode
    mode_block: Vec<usize>,
    offsets: Vec<usize>,
}

impl ShapePartition {
    /// Validates zero-based blocks against tensor dimensions.
    pub fn new(dims: &[usize], blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let order = dims.len();
        if order == 0 {
            return Err(PartitionError::NotAPartition("tensor has no modes".into()));
        }
        if blocks.is_empty() {
            return Err(PartitionError::NotAPartition("no blocks given".into()));
        }
        let mut owner = vec![usize::MAX; order];
        let mut blocks = blocks;
        for (b, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::NotAPartition(format!("block {} is empty", b + 1)));
            }
            block.sort_unstable();
            for &mode in block.iter() {
                if mode >= order {
                    return Err(PartitionError::NotAPartition(format!(
                        "mode {} does not exist in a tensor of order {}",
                        mode + 1,
                        order
                    )));
                }
                if owner[mode] != usize::MAX {
                    return Err(PartitionError::NotAPartition(format!("mode {} appears more than once", mode + 1)));
                }
                owner[mode] = b;
            }
        }
        if let Some(missing) = owner.iter().position(|&b| b == usize::MAX) {
            return Err(PartitionError::NotAPartition(format!("mode {} is not covered", missing + 1)));
        }
        for (b, block) in blocks.iter().enumerate() {
            let first = dims[block[0]];
            if let Some(&other) = block.iter().map(|&m| &dims[m]).find(|&&n| n != first) {
                return Err(PartitionError::UnequalDimsInBlock { block: b + 1, first, other });
            }
        }
        for (b, pair) in blocks.windows(2).enumerate() {
            if pair[0].len() > pair[1].len() {
                return Err(PartitionError::NonMonotoneBlockSizes {
                    block: b + 1,
                    size: pair[0].len(),
                    next: b + 2,
                    next_size: pair[1].len(),
                });
            }
        }
        for (b, pair) in blocks.windows(2).enumerate() {
            if pair[0].last() > pair[1].first() {
                return Err(PartitionError::NonContiguousBlocks { block: b + 1, next: b + 2 });
            }
        }

        let nu: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let starts: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
        let block_dims: Vec<usize> = starts.iter().map(|&s| dims[s]).collect();
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        offsets.push(0);
        for &n in &block_dims {
            offsets.push(offsets.last().unwrap() + n);
        }
        Ok(Self { blocks, nu, starts, block_dims, mode_block: owner, offsets })
    }

    /// Validates one-based blocks, as given on the command line.
    pub fn from_one_based(dims: &[usize], blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut zero = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut b = Vec::with_capacity(block.len());
            for mode in block {
                if mode == 0 {
                    return Err(PartitionError::NotAPartition("mode indices are one-based".into()));
                }
                b.push(mode - 1);
            }
            zero.push(b);
        }
        Self::new(dims, zero)
    }

    /// The partition with a single block holding every mode.
    pub fn single(dims: &[usize]) -> Result<Self, PartitionError> {
        Self::new(dims, vec![(0..dims.len()).collect()])
    }

    /// The partition with one block per mode.
    pub fn finest(dims: &[usize]) -> Result<Self, PartitionError> {
        Self::new(dims, (0..dims.len()).map(|m| vec![m]).collect())
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block sizes `|σ_i|`.
    pub fn nu(&self) -> &[usize] {
        &self.nu
    }

    /// First mode of each block (zero-based).
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Common dimension of the modes of each block.
    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_of_mode(&self, mode: usize) -> usize {
        self.mode_block[mode]
    }

    pub fn order(&self) -> usize {
        self.mode_block.len()
    }

    /// Total length `n = Σ n_i` of a block vector.
    pub fn total_len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Start offsets of each block in the flat layout, with a trailing total.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// One-based rendering such as `1;2,3`.
    pub fn to_one_based_string(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|m| (m + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for ShapePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            let modes: Vec<String> = block.iter().map(|m| (m + 1).to_string()).collect();
            write!(f, "{{{}}}", modes.join(","))?;
        }
        write!(f, "}}")
    }
}

/// Element of `ℝ^{n_1} × ⋯ × ℝ^{n_d}`, stored flat with block offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    data: Vec<f64>,
    offsets: Vec<usize>,
}

impl BlockVector {
    pub fn from_blocks(blocks: Vec<Vec<f64>>) -> Self {
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        offsets.push(0);
        let mut data = Vec::new();
        for b in blocks {
            data.extend(b);
            offsets.push(data.len());
        }
        Self { data, offsets }
    }

    pub fn from_flat(part: &ShapePartition, data: Vec<f64>) -> Result<Self, TensorError> {
        if data.len() != part.total_len() {
            return Err(TensorError::ShapeMismatch(format!(
                "flat vector has length {}, partition needs {}",
                data.len(),
                part.total_len()
            )));
        }
        Ok(Self { data, offsets: part.offsets().to_vec() })
    }

    pub fn filled(part: &ShapePartition, value: f64) -> Self {
        Self { data: vec![value; part.total_len()], offsets: part.offsets().to_vec() }
    }

    pub fn ones(part: &ShapePartition) -> Self {
        Self::filled(part, 1.0)
    }

    pub fn num_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn block(&self, i: usize) -> &[f64] {
        &self.data[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut [f64] {
        let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
        &mut self.data[lo..hi]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.offsets.windows(2).map(move |w| &self.data[w[0]..w[1]])
    }

    pub fn to_blocks(&self) -> Vec<Vec<f64>> {
        self.blocks().map(<[f64]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn conforms_to(&self, part: &ShapePartition) -> bool {
        self.offsets == part.offsets()
    }

    pub fn check_conforms(&self, part: &ShapePartition) -> Result<(), TensorError> {
        if self.conforms_to(part) {
            Ok(())
        } else {
            let lens: Vec<usize> = self.offsets.windows(2).map(|w| w[1] - w[0]).collect();
            Err(TensorError::ShapeMismatch(format!(
                "block lengths {:?} do not match partition block dimensions {:?}",
                lens,
                part.block_dims()
            )))
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.data.iter().all(|&v| v > 0.0)
    }

    /// Same layout, new flat values.
    pub fn with_data(&self, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), self.data.len());
        Self { data, offsets: self.offsets.clone() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_data(self.data.iter().map(|&v| f(v)).collect())
    }

    /// Scales block `i` by `theta[i]`.
    pub fn scale_blocks(&self, theta: &[f64]) -> Self {
        let mut out = self.clone();
        for (i, &t) in theta.iter().enumerate() {
            out.block_mut(i).iter_mut().for_each(|v| *v *= t);
        }
        out
    }
}

/// Repeats block `i` `ν_i` times: the m-tuple `x^[σ]`.
pub fn lift<'a>(x: &'a BlockVector, part: &ShapePartition) -> Result<Vec<&'a [f64]>, TensorError> {
    x.check_conforms(part)?;
    Ok((0..part.order()).map(|mode| x.block(part.block_of_mode(mode))).collect())
}

/// `G_i(x) = 𝒜_{s_i}(x^[σ])` for every block.
pub fn map_g(tensor: &CooTensor, part: &ShapePartition, x: &BlockVector) -> Result<BlockVector, TensorError> {
    check_partition(tensor, part)?;
    x.check_conforms(part)?;
    let order = tensor.order();
    let mut out = BlockVector::filled(part, 0.0);
    let offsets = part.offsets();
    let mut factors = vec![0.0; order];
    for (idx, a) in tensor.entries() {
        for (t, &j) in idx.iter().enumerate() {
            factors[t] = x.block(part.block_of_mode(t))[j];
        }
        for (i, &s) in part.starts().iter().enumerate() {
            let mut prod = a;
            for (t, &f) in factors.iter().enumerate() {
                if t != s {
                    prod *= f;
                }
            }
            out.as_mut_slice()[offsets[i] + idx[s]] += prod;
        }
    }
    Ok(out)
}

/// Dense Jacobian `DG(x)` in the flat block layout (row-major, n×n).
pub fn jacobian_g(tensor: &CooTensor, part: &ShapePartition, x: &BlockVector) -> Result<Vec<f64>, TensorError> {
    check_partition(tensor, part)?;
    x.check_conforms(part)?;
    let order = tensor.order();
    let n = part.total_len();
    let offsets = part.offsets();
    let mut jac = vec![0.0; n * n];
    let mut factors = vec![0.0; order];
    for (idx, a) in tensor.entries() {
        for (t, &j) in idx.iter().enumerate() {
            factors[t] = x.block(part.block_of_mode(t))[j];
        }
        for (i, &s) in part.starts().iter().enumerate() {
            let row = offsets[i] + idx[s];
            for t in (0..order).filter(|&t| t != s) {
                let mut prod = a;
                for (u, &f) in factors.iter().enumerate() {
                    if u != s && u != t {
                        prod *= f;
                    }
                }
                let col = offsets[part.block_of_mode(t)] + idx[t];
                jac[row * n + col] += prod;
            }
        }
    }
    Ok(jac)
}

pub(crate) fn check_partition(tensor: &CooTensor, part: &ShapePartition) -> Result<(), TensorError> {
    if part.order() != tensor.order() {
        return Err(TensorError::ShapeMismatch(format!(
            "partition covers {} modes, tensor has order {}",
            part.order(),
            tensor.order()
        )));
    }
    for (block, &n) in part.blocks().iter().zip(part.block_dims()) {
        if block.iter().any(|&m| tensor.dims()[m] != n) {
            return Err(TensorError::ShapeMismatch("partition block dimensions disagree with tensor".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example_tensor() -> CooTensor {
        CooTensor::from_one_based(
            vec![3, 3, 3],
            vec![
                (vec![1, 1, 3], 1.0),
                (vec![1, 3, 1], 1.0),
                (vec![2, 2, 1], 1.0),
                (vec![2, 2, 2], 1.0),
                (vec![3, 2, 1], 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn duplicates_are_summed_and_sorted() {
        let t = CooTensor::new(vec![2, 2], vec![(vec![1, 0], 1.0), (vec![0, 1], 0.5), (vec![0, 1], 0.5)]).unwrap();
        let e: Vec<_> = t.entries().map(|(i, v)| (i.to_vec(), v)).collect();
        assert_eq!(e, vec![(vec![0, 1], 1.0), (vec![1, 0], 1.0)]);
    }

    #[test]
    fn rejects_negative_and_out_of_range() {
        assert!(matches!(CooTensor::new(vec![2], vec![(vec![0], -1.0)]), Err(TensorError::NegativeValue { .. })));
        assert!(matches!(CooTensor::new(vec![2], vec![(vec![2], 1.0)]), Err(TensorError::IndexOutOfRange { .. })));
        assert!(matches!(
            CooTensor::from_one_based(vec![2], vec![(vec![0], 1.0)]),
            Err(TensorError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_tensor_is_accepted() {
        let t = CooTensor::new(vec![2, 2, 2], vec![]).unwrap();
        assert_eq!(t.nnz(), 0);
    }

    #[test]
    fn partition_derived_vectors() {
        let p = ShapePartition::from_one_based(&[3, 3, 3], vec![vec![1, 2, 3]]).unwrap();
        assert_eq!((p.nu(), p.starts(), p.block_dims()), (&[3][..], &[0][..], &[3][..]));
        let p = ShapePartition::from_one_based(&[3, 3, 3], vec![vec![1], vec![2, 3]]).unwrap();
        assert_eq!(p.nu(), &[1, 2]);
        assert_eq!(p.starts(), &[0, 1]);
        assert_eq!(p.block_dims(), &[3, 3]);
        assert_eq!(p.to_one_based_string(), "1;2,3");
    }

    #[test]
    fn partition_errors_name_the_clause() {
        let dims = [3, 3, 3];
        assert!(matches!(
            ShapePartition::from_one_based(&dims, vec![vec![2, 3], vec![1]]),
            Err(PartitionError::NonMonotoneBlockSizes { .. })
        ));
        assert!(matches!(
            ShapePartition::from_one_based(&dims, vec![vec![2], vec![1, 3]]),
            Err(PartitionError::NonContiguousBlocks { .. })
        ));
        assert!(matches!(
            ShapePartition::from_one_based(&[2, 3], vec![vec![1, 2]]),
            Err(PartitionError::UnequalDimsInBlock { .. })
        ));
        assert!(matches!(
            ShapePartition::from_one_based(&dims, vec![vec![1], vec![2]]),
            Err(PartitionError::NotAPartition(_))
        ));
        assert!(matches!(
            ShapePartition::from_one_based(&dims, vec![vec![1, 2], vec![2, 3]]),
            Err(PartitionError::NotAPartition(_))
        ));
        assert!(matches!(ShapePartition::from_one_based(&dims, vec![]), Err(PartitionError::NotAPartition(_))));
    }

    #[test]
    fn multilinear_form_examples() {
        let t = example_tensor();
        let one = [1.0; 3];
        assert_eq!(t.multilinear_form(&[&one, &one, &one]).unwrap(), 5.0);
        let zero = [0.0; 3];
        assert_eq!(t.multilinear_form(&[&one, &zero, &one]).unwrap(), 0.0);
        let eye = CooTensor::new(vec![2, 2], vec![(vec![0, 0], 1.0), (vec![1, 1], 1.0)]).unwrap();
        assert_eq!(eye.multilinear_form(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap(), 11.0);
        assert!(matches!(eye.multilinear_form(&[&[1.0], &[3.0, 4.0]]), Err(TensorError::DimensionMismatch(_))));
    }

    #[test]
    fn grad_component_examples() {
        let t = example_tensor();
        let one = [1.0; 3];
        assert_eq!(t.grad_component(0, &[&one, &one, &one]).unwrap(), vec![2.0, 2.0, 1.0]);
        assert_eq!(t.grad_component(1, &[&one, &one, &one]).unwrap(), vec![1.0, 3.0, 1.0]);
        let zero = [0.0; 3];
        assert_eq!(t.grad_component(0, &[&one, &zero, &one]).unwrap(), vec![0.0; 3]);
        assert!(matches!(t.grad_component(3, &[&one, &one, &one]), Err(TensorError::BadModeIndex { .. })));
    }

    #[test]
    fn lift_repeats_blocks() {
        let dims = [3, 3, 3];
        let x = BlockVector::from_blocks(vec![vec![1.0, 2.0, 3.0]]);
        let p = ShapePartition::single(&dims).unwrap();
        assert_eq!(lift(&x, &p).unwrap(), vec![&[1.0, 2.0, 3.0][..]; 3]);

        let p = ShapePartition::from_one_based(&dims, vec![vec![1], vec![2, 3]]).unwrap();
        let u = vec![1.0, 2.0, 3.0];
        let v = vec![4.0, 5.0, 6.0];
        let x = BlockVector::from_blocks(vec![u.clone(), v.clone()]);
        assert_eq!(lift(&x, &p).unwrap(), vec![&u[..], &v[..], &v[..]]);

        let p = ShapePartition::finest(&dims).unwrap();
        let w = vec![7.0, 8.0, 9.0];
        let x = BlockVector::from_blocks(vec![u.clone(), v.clone(), w.clone()]);
        assert_eq!(lift(&x, &p).unwrap(), vec![&u[..], &v[..], &w[..]]);

        let bad = BlockVector::from_blocks(vec![u]);
        assert!(matches!(lift(&bad, &p), Err(TensorError::ShapeMismatch(_))));
    }

    #[test]
    fn map_g_examples() {
        let t = example_tensor();
        let dims = [3, 3, 3];
        let p1 = ShapePartition::single(&dims).unwrap();
        let g = map_g(&t, &p1, &BlockVector::ones(&p1)).unwrap();
        assert_eq!(g.as_slice(), &[2.0, 2.0, 1.0]);

        let p2 = ShapePartition::from_one_based(&dims, vec![vec![1], vec![2, 3]]).unwrap();
        let g = map_g(&t, &p2, &BlockVector::ones(&p2)).unwrap();
        assert_eq!(g.to_blocks(), vec![vec![2.0, 2.0, 1.0], vec![1.0, 3.0, 1.0]]);

        let ones = CooTensor::ones(vec![2, 2, 2]).unwrap();
        let p = ShapePartition::single(&[2, 2, 2]).unwrap();
        assert_eq!(map_g(&ones, &p, &BlockVector::ones(&p)).unwrap().as_slice(), &[4.0, 4.0]);
    }

    #[test]
    fn jacobian_g_examples() {
        let ones = CooTensor::ones(vec![2, 2, 2]).unwrap();
        let p = ShapePartition::single(&[2, 2, 2]).unwrap();
        assert_eq!(jacobian_g(&ones, &p, &BlockVector::ones(&p)).unwrap(), vec![4.0; 4]);

        let eye = CooTensor::new(vec![2, 2], vec![(vec![0, 0], 1.0), (vec![1, 1], 1.0)]).unwrap();
        let p = ShapePartition::finest(&[2, 2]).unwrap();
        let x = BlockVector::from_blocks(vec![vec![0.3, 1.7], vec![2.5, 0.1]]);
        #[rustfmt::skip]
        let expected = vec![
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        ];
        assert_eq!(jacobian_g(&eye, &p, &x).unwrap(), expected);
    }
}
