//! Dense row-major matrices and the two small factorizations the rest of
//! the crate needs: LU with partial pivoting for solves/inverses and
//! one-sided Jacobi for singular values.
//!
//! Everything here is written for matrices of desk scale (n <= 64); there is
//! no blocking, no sparsity, and no attempt at peak flops.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{check_finite_slice, Error, Result};

/// Dense real matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Mat> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty {
                context: "Mat::new",
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "Mat::new",
                expected: rows * cols,
                got: data.len(),
            });
        }
        check_finite_slice("Mat::new", &data)?;
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Build from a list of rows, rejecting ragged input with the offending
    /// row index.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Mat> {
        if rows.is_empty() {
            return Err(Error::Empty {
                context: "Mat::from_rows",
            });
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::Empty {
                context: "Mat::from_rows",
            });
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Mat::new(rows.len(), cols, data)
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    fn zip_with(&self, other: &Mat, f: impl Fn(f64, f64) -> f64) -> Mat {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Induced sup-norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Smallest entry (used for entrywise nonnegativity margins).
    pub fn min_entry(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Copy with column `j` removed. Returns `None` when the matrix has a
    /// single column.
    pub fn without_col(&self, j: usize) -> Option<Mat> {
        assert!(j < self.cols);
        if self.cols == 1 {
            return None;
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols - 1));
        for i in 0..self.rows {
            for jj in 0..self.cols {
                if jj != j {
                    data.push(self[(i, jj)]);
                }
            }
        }
        Some(Mat {
            rows: self.rows,
            cols: self.cols - 1,
            data,
        })
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let scale = self.max_abs();
        if scale == 0.0 {
            return Err(Error::Singular);
        }
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= 1e-13 * scale {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let m = lu[i * n + k] / pivot;
                lu[i * n + k] = m;
                for j in k + 1..n {
                    lu[i * n + j] -= m * lu[k * n + j];
                }
            }
        }
        Ok(Lu { n, lu, perm, sign })
    }

    /// Singular values in descending order, via one-sided Jacobi.
    ///
    /// Accurate to ~1e-14 relative for the sizes used here; callers only need
    /// sigma_min / sigma_max ratios at far coarser thresholds.
    pub fn singular_values(&self) -> Vec<f64> {
        let work = if self.rows >= self.cols {
            self.clone()
        } else {
            self.transpose()
        };
        let (m, n) = (work.rows, work.cols);
        let mut cols: Vec<Vec<f64>> = (0..n).map(|j| work.col(j)).collect();
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = dot(&cols[p], &cols[p]);
                    let beta = dot(&cols[q], &cols[q]);
                    let gamma = dot(&cols[p], &cols[q]);
                    if alpha == 0.0 || beta == 0.0 {
                        continue;
                    }
                    if gamma.abs() <= 1e-14 * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..m {
                        let xp = cols[p][i];
                        let xq = cols[q][i];
                        cols[p][i] = c * xp - s * xq;
                        cols[q][i] = s * xp + c * xq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Mat, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Mat::from_rows(&rows).map_err(de::Error::custom)
    }
}

/// LU factorization with partial pivoting (PA = LU, unit lower triangle).
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "Lu::solve dimension mismatch");
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Solve AX = B column by column.
    pub fn solve_mat(&self, b: &Mat) -> Mat {
        assert_eq!(b.rows(), self.n, "Lu::solve_mat dimension mismatch");
        let mut out = Mat::zeros(self.n, b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.col(j));
            for i in 0..self.n {
                out[(i, j)] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> Mat {
        self.solve_mat(&Mat::identity(self.n))
    }

    pub fn det(&self) -> f64 {
        let mut d = self.sign;
        for i in 0..self.n {
            d *= self.lu[i * self.n + i];
        }
        d
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn vec_add_scaled(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let err = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        match err {
            Error::RaggedRow { row, expected, got } => {
                assert_eq!((row, expected, got), (1, 2, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn lu_solves_and_inverts() {
        let a = Mat::from_rows(&[vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        let lu = a.lu().unwrap();
        let x = lu.solve(&[-1.0, -1.0]);
        assert!(close(x[0], 1.0, 1e-12) && close(x[1], 1.0, 1e-12));
        let inv = lu.inverse();
        // A^{-1} = -1/3 [[1,2],[2,1]]
        assert!(close(inv[(0, 0)], -1.0 / 3.0, 1e-12));
        assert!(close(inv[(0, 1)], -2.0 / 3.0, 1e-12));
        assert!(close(lu.det(), -3.0, 1e-12));
    }

    #[test]
    fn lu_detects_singular() {
        let a = Mat::from_rows(&[vec![-1.0, -1.0], vec![-1.0, -1.0]]).unwrap();
        assert!(matches!(a.lu(), Err(Error::Singular)));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = Mat::from_rows(&[vec![3.0, 0.0], vec![0.0, -0.5]]).unwrap();
        let sv = a.singular_values();
        assert!(close(sv[0], 3.0, 1e-12));
        assert!(close(sv[1], 0.5, 1e-12));
    }

    #[test]
    fn singular_values_rank_deficient() {
        let a = Mat::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let sv = a.singular_values();
        assert!(sv[1].abs() <= 1e-12 * sv[0]);
    }

    #[test]
    fn without_col_drops_column() {
        let a = Mat::from_rows(&[vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        let b = a.without_col(0).unwrap();
        assert_eq!(b.to_rows(), vec![vec![-2.0], vec![1.0]]);
        let single = Mat::from_rows(&[vec![-1.0], vec![-1.0]]).unwrap();
        assert!(single.without_col(0).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let a = Mat::from_rows(&[vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[1.0,-2.0],[-2.0,1.0]]");
        let back: Mat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
