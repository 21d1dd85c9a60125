//! Small exact rational matrices for normal-form frames and symplectic
//! checks.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::RatPoly;
use crate::scalar::rat;

/// A dense matrix over the exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pivot) = pivot else {
                return BigRational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    m.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = m[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                let factor = &m[(r, col)] / &p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = &factor * &m[(col, j)];
                    m[(r, j)] -= sub;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan; panics when singular.
    pub fn inverse(&self) -> Self {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[(r, col)].is_zero())
                .expect("singular matrix");
            if pivot != col {
                for j in 0..n {
                    m.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = m[(col, col)].clone();
            for j in 0..n {
                m[(col, j)] /= p.clone();
                inv[(col, j)] /= p.clone();
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in 0..n {
                    let a = &factor * &m[(col, j)];
                    m[(r, j)] -= a;
                    let b = &factor * &inv[(col, j)];
                    inv[(r, j)] -= b;
                }
            }
        }
        inv
    }

    /// Characteristic polynomial `det(tI - M)` by the Faddeev-LeVerrier
    /// recursion, exact over the rationals.
    pub fn charpoly(&self) -> RatPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut mk = self.clone();
        for k in 1..=n {
            let trace: BigRational = (0..n).map(|i| mk[(i, i)].clone()).sum();
            c[n - k] = -trace / rat(k as i64);
            if k < n {
                let mut shifted = mk.clone();
                for i in 0..n {
                    shifted[(i, i)] += c[n - k].clone();
                }
                mk = self.mul(&shifted);
            }
        }
        RatPoly::new(c)
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), rat(-2));
        let inv = m.inverse();
        assert_eq!(m.mul(&inv), RationalMatrix::identity(2));
    }

    #[test]
    fn charpoly_matches_known_factorizations() {
        // companion of t^2 - 3t + 2
        let m = RationalMatrix::from_i64(&[&[0, -2], &[1, 3]]);
        assert_eq!(m.charpoly(), RatPoly::from_i64(&[2, -3, 1]));
        // block rotation: (t^2 + 1)^2
        let m4 = RationalMatrix::from_i64(&[
            &[0, -1, 0, 0],
            &[1, 0, 0, 0],
            &[0, 0, 0, -1],
            &[0, 0, 1, 0],
        ]);
        assert_eq!(m4.charpoly(), RatPoly::from_i64(&[1, 0, 2, 0, 1]));
    }
}
