use nalgebra::DMatrix;

use super::matrix::{assemble_products, hstack4, Parallelism, QMatrix};
use super::quaternion::Quaternion;
use crate::error::{Error, Result};

/// Real sparse matrix in compressed-row form.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from 0-based `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i}, {j}) outside a {nrows}x{ncols} matrix"
                )));
            }
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            col_idx.push(j);
            values.push(v);
            row_ptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let mut triplets = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    triplets.push((i, j, m[(i, j)]));
                }
            }
        }
        CsrMatrix::from_triplets(m.nrows(), m.ncols(), &triplets)
            .expect("indices come from the dense shape")
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    /// Number of stored entries (explicit zeros included).
    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| (i, self.col_idx[p], self.values[p]))
        })
    }

    pub fn scale(&self, s: f64) -> CsrMatrix {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            d[(i, j)] += v;
        }
        d
    }

    /// `self · x` for a dense right-hand side.
    pub fn mul_dense(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.nrows() != self.ncols {
            return Err(Error::mismatch(
                "CsrMatrix::mul_dense",
                (self.ncols, x.ncols()),
                x.shape(),
            ));
        }
        let k = x.ncols();
        let mut out = DMatrix::zeros(self.nrows, k);
        for c in 0..k {
            let xc = x.column(c);
            let mut oc = out.column_mut(c);
            for i in 0..self.nrows {
                let mut acc = 0.0;
                for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                    acc += self.values[p] * xc[self.col_idx[p]];
                }
                oc[i] = acc;
            }
        }
        Ok(out)
    }
}

/// Quaternion matrix held as four sparse real components.
#[derive(Clone, Debug, PartialEq)]
pub struct QSparse {
    parts: [CsrMatrix; 4],
}

impl QSparse {
    pub fn from_parts(parts: [CsrMatrix; 4]) -> Result<Self> {
        let shape = parts[0].shape();
        for p in &parts[1..] {
            if p.shape() != shape {
                return Err(Error::mismatch("QSparse::from_parts", shape, p.shape()));
            }
        }
        Ok(QSparse { parts })
    }

    /// `a0 · q`, entrywise, dropping components whose coefficient is zero.
    pub fn real_times_scalar(a0: &CsrMatrix, q: Quaternion) -> Self {
        let parts = std::array::from_fn(|s| {
            let c = q.to_array()[s];
            if c == 0.0 {
                CsrMatrix::zeros(a0.nrows(), a0.ncols())
            } else {
                a0.scale(c)
            }
        });
        QSparse { parts }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.parts[0].shape()
    }

    pub fn part(&self, s: usize) -> &CsrMatrix {
        &self.parts[s]
    }

    pub fn nnz(&self) -> usize {
        self.parts.iter().map(CsrMatrix::nnz).sum()
    }

    pub fn to_dense(&self) -> QMatrix {
        QMatrix::from_parts(std::array::from_fn(|s| self.parts[s].to_dense()))
            .expect("components share a shape")
    }

    pub fn mul_with(&self, v: &QMatrix, par: Parallelism) -> Result<QMatrix> {
        if self.shape().1 != v.nrows() {
            return Err(Error::mismatch(
                "qmat_mul",
                (self.shape().1, v.ncols()),
                v.shape(),
            ));
        }
        let stacked = hstack4(v.parts());
        let mul = |s: usize| self.parts[s].mul_dense(&stacked).expect("shape checked");
        let products: [DMatrix<f64>; 4] = match par {
            Parallelism::Sequential => std::array::from_fn(mul),
            Parallelism::Rayon => {
                let ((p0, p1), (p2, p3)) = rayon::join(
                    || rayon::join(|| mul(0), || mul(1)),
                    || rayon::join(|| mul(2), || mul(3)),
                );
                [p0, p1, p2, p3]
            }
        };
        Ok(assemble_products(&products, v.ncols()))
    }
}

/// A coefficient matrix in either storage kind.
#[derive(Clone, Debug, PartialEq)]
pub enum QCoeff {
    Dense(QMatrix),
    Sparse(QSparse),
}

impl QCoeff {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            QCoeff::Dense(a) => a.shape(),
            QCoeff::Sparse(a) => a.shape(),
        }
    }

    pub fn mul(&self, v: &QMatrix) -> Result<QMatrix> {
        self.mul_with(v, Parallelism::Sequential)
    }

    pub fn mul_with(&self, v: &QMatrix, par: Parallelism) -> Result<QMatrix> {
        match self {
            QCoeff::Dense(a) => a.mul_with(v, par),
            QCoeff::Sparse(a) => a.mul_with(v, par),
        }
    }

    pub fn to_dense(&self) -> QMatrix {
        match self {
            QCoeff::Dense(a) => a.clone(),
            QCoeff::Sparse(a) => a.to_dense(),
        }
    }

    /// Real floating-point operations for one product with an `n × m` block.
    pub fn mul_flops(&self, m: usize) -> u64 {
        let (rows, cols) = self.shape();
        let (n, k, m) = (rows as u64, cols as u64, m as u64);
        match self {
            // R(A) R(V)_c: a 4n × 4k by 4k × m product
            QCoeff::Dense(_) => 4 * n * m * (8 * k - 1),
            // four sparse products with a k × 4m block plus the 12nm-add assembly
            QCoeff::Sparse(a) => 2 * a.nnz() as u64 * 4 * m + 12 * n * m,
        }
    }
}

impl From<QMatrix> for QCoeff {
    fn from(a: QMatrix) -> Self {
        QCoeff::Dense(a)
    }
}

impl From<QSparse> for QCoeff {
    fn from(a: QSparse) -> Self {
        QCoeff::Sparse(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0), (0, 0, 0.5)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.to_dense(), DMatrix::from_row_slice(2, 2, &[1.5, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn out_of_range_triplet_is_rejected() {
        assert!(CsrMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn sparse_product_matches_dense() {
        let d = DMatrix::from_fn(5, 5, |i, j| if (i + 2 * j) % 3 == 0 { (i + j) as f64 - 2.0 } else { 0.0 });
        let a = QSparse::real_times_scalar(&CsrMatrix::from_dense(&d), Quaternion::new(1.0, -1.0, 2.0, 1.5));
        let v = QMatrix::from_fn(5, 2, |i, j| Quaternion::new(i as f64, 1.0, -(j as f64), 0.5));
        let sparse = QCoeff::Sparse(a.clone()).mul(&v).unwrap();
        let dense = a.to_dense().mul(&v).unwrap();
        assert!(sparse.sub(&dense).unwrap().fro_norm() < 1e-12);
        let par = QCoeff::Sparse(a).mul_with(&v, Parallelism::Rayon).unwrap();
        assert_eq!(par, sparse);
    }
}
