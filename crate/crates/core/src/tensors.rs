//! Dense and sparse matrix containers with exact element counts and
//! byte-size accounting.
//!
//! Values are held as `f64` in memory regardless of the `datasize`
//! used for accounting: the 4-byte default models the on-wire
//! convention for serialized parameters, while reconstruction
//! arithmetic stays in full precision. `MB` throughout this crate
//! means MiB (2^20 bytes).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("value at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("expected {expected} values for a {rows}x{cols} matrix, got {got}")]
    LengthMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
}

/// Row-major dense matrix of finite `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, TensorError> {
        if values.len() != rows * cols {
            return Err(TensorError::LengthMismatch {
                rows,
                cols,
                expected: rows * cols,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(TensorError::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.values[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.values[row * self.cols + col] = value;
    }

    /// Borrow one row as a contiguous slice.
    pub fn row(&self, row: usize) -> &[f64] {
        let start = row * self.cols;
        &self.values[start..start + self.cols]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        let start = row * self.cols;
        &mut self.values[start..start + self.cols]
    }

    /// `y = A x` with `x.len() == cols`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| dot(self.row(r), x))
            .collect()
    }

    /// `y = A^T x` with `x.len() == rows`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o += xr * a;
            }
        }
        out
    }

    /// Number of entries with nonzero value.
    pub fn count_nonzero(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coordinate-format sparse matrix.
///
/// Entries are strictly lexicographically sorted by (row, col), contain
/// no duplicates and no explicit zeros; constructors deduplicate by
/// summation and drop exact zeros so `nnz` is well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCoo {
    rows: usize,
    cols: usize,
    row_idx: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrixCoo {
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Result<Self, TensorError> {
        for &(r, c, v) in &triplets {
            if r >= rows || c >= cols {
                return Err(TensorError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if !v.is_finite() {
                return Err(TensorError::NonFinite { row: r, col: c });
            }
        }
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_idx = Vec::with_capacity(triplets.len());
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut it = triplets.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(nr, nc, nv)) = it.peek() {
                if nr == r && nc == c {
                    v += nv;
                    it.next();
                } else {
                    break;
                }
            }
            if v != 0.0 {
                row_idx.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let m = Self {
            rows,
            cols,
            row_idx,
            col_idx,
            values,
        };
        debug_assert!(m.check_sorted());
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.row_idx
            .iter()
            .zip(&self.col_idx)
            .zip(&self.values)
            .map(|((&r, &c), &v)| (r, c, v))
    }

    /// Strict lexicographic order over (row, col); implies no duplicates.
    pub fn check_sorted(&self) -> bool {
        self.row_idx
            .iter()
            .zip(&self.col_idx)
            .zip(self.row_idx.iter().zip(&self.col_idx).skip(1))
            .all(|((r0, c0), (r1, c1))| (r0, c0) < (r1, c1))
    }

    /// Serialized size under the coordinate-format convention:
    /// `(dim * 8 + datasize) * nnz` bytes.
    pub fn byte_size(&self, dim: u64, datasize: u64) -> u64 {
        coo_byte_size(self.nnz() as u64, dim, datasize)
    }

    /// `y = A x` accumulating over stored entries only.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for ((&r, &c), &v) in self.row_idx.iter().zip(&self.col_idx).zip(&self.values) {
            out[r] += v * x[c];
        }
        out
    }
}

/// Compressed-sparse-row matrix, convertible from COO.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCsr {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrixCsr {
    pub fn from_coo(m: &SparseMatrixCoo) -> Self {
        let mut row_ptr = vec![0usize; m.rows + 1];
        for (r, _, _) in m.iter() {
            row_ptr[r + 1] += 1;
        }
        for i in 0..m.rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            rows: m.rows,
            cols: m.cols,
            row_ptr,
            col_idx: m.col_idx.clone(),
            values: m.values.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    /// `(rows + 1) * idxsize + nnz * idxsize + nnz * datasize` bytes.
    pub fn byte_size(&self, idxsize: u64, datasize: u64) -> u64 {
        csr_byte_size(self.rows as u64, self.nnz() as u64, idxsize, datasize)
    }
}

/// Coordinate-format serialized size in bytes: `(dim * 8 + datasize) * nnz`.
///
/// `dim` is the tensor dimensionality (2 for matrices), indices cost 8
/// bytes each, `datasize` is 4 or 8 bytes per stored value.
pub fn coo_byte_size(nnz: u64, dim: u64, datasize: u64) -> u64 {
    (dim * 8 + datasize) * nnz
}

/// CSR serialized size in bytes:
/// `(rows + 1) * idxsize + nnz * (idxsize + datasize)`.
pub fn csr_byte_size(rows: u64, nnz: u64, idxsize: u64, datasize: u64) -> u64 {
    (rows + 1) * idxsize + nnz * (idxsize + datasize)
}

/// Expand a COO matrix to dense form.
pub fn densify(m: &SparseMatrixCoo) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(m.rows, m.cols);
    for (r, c, v) in m.iter() {
        out.set(r, c, v);
    }
    out
}

/// Keep entries with `|v| > threshold`; `threshold = 0.0` drops exact
/// zeros only, so `densify(sparsify(d, 0.0)) == d`.
pub fn sparsify(m: &DenseMatrix, threshold: f64) -> SparseMatrixCoo {
    debug_assert!(threshold >= 0.0);
    let triplets: Vec<(usize, usize, f64)> = (0..m.rows())
        .flat_map(|r| {
            m.row(r)
                .iter()
                .enumerate()
                .filter(move |(_, v)| v.abs() > threshold)
                .map(move |(c, &v)| (r, c, v))
        })
        .collect();
    SparseMatrixCoo::from_triplets(m.rows(), m.cols(), triplets)
        .expect("entries drawn from a valid dense matrix")
}
