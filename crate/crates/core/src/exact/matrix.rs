//! Dense exact matrices and rational Gaussian elimination.

use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{height, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Rational,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Largest absolute value among the entries (zero for an empty matrix).
    pub fn max_abs_entry(&self) -> Rational {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Matrix product; zero entries of `self` are skipped, which matters for
    /// the sparse tensor-space matrices built elsewhere in the crate.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    /// Kronecker product `self ⊗ other`: entry `((i1,i2),(j1,j2))` sits at
    /// row `i1 * other.rows + i2`, column `j1 * other.cols + j2`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = &self[(i1, j1)];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = &other[(i2, j2)];
                        if !b.is_zero() {
                            out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = pivot_row(&a, col).ok_or(Error::Singular)?;
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            let piv = a[(col, col)].recip();
            for j in 0..n {
                a[(col, j)] *= &piv;
                inv[(col, j)] *= &piv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        let t = &factor * &a[(col, j)];
                        a[(r, j)] -= t;
                    }
                    if !inv[(col, j)].is_zero() {
                        let t = &factor * &inv[(col, j)];
                        inv[(r, j)] -= t;
                    }
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Among rows `col..`, the nonzero entry in `col` with the smallest bit height.
fn pivot_row(a: &ExactMatrix, col: usize) -> Option<usize> {
    (col..a.rows)
        .filter(|&r| !a[(r, col)].is_zero())
        .min_by_key(|&r| height(&a[(r, col)]))
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b` exactly by Gaussian elimination with height-minimizing
/// partial pivoting followed by back substitution.
pub fn solve_exact(a: &ExactMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: a.rows,
            found: a.cols,
        });
    }
    let n = a.rows;
    if b.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: b.len(),
        });
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let p = pivot_row(&m, col).ok_or(Error::Singular)?;
        m.swap_rows(col, p);
        rhs.swap(col, p);
        let piv = m[(col, col)].clone();
        for r in col + 1..n {
            if m[(r, col)].is_zero() {
                continue;
            }
            let factor = &m[(r, col)] / &piv;
            m[(r, col)] = Rational::zero();
            for j in col + 1..n {
                if !m[(col, j)].is_zero() {
                    let t = &factor * &m[(col, j)];
                    m[(r, j)] -= t;
                }
            }
            let t = &factor * &rhs[col];
            rhs[r] -= t;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            if !m[(i, j)].is_zero() {
                acc -= &m[(i, j)] * &x[j];
            }
        }
        x[i] = acc / &m[(i, i)];
    }
    Ok(x)
}

/// Wire form: rows of canonical rational strings.
#[derive(Serialize, Deserialize)]
struct MatrixWire(Vec<Vec<String>>);

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(super::rational::format_rational)
                    .collect()
            })
            .collect();
        MatrixWire(rows).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let MatrixWire(rows) = MatrixWire::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| super::rational::parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ExactMatrix::from_rows(parsed).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn identity_solve_returns_rhs() {
        let b = vec![rat(1, 3), int(-2), rat(7, 5)];
        assert_eq!(solve_exact(&ExactMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn diagonal_solve() {
        let a = ExactMatrix::from_rows(vec![vec![int(2), int(0)], vec![int(0), int(4)]]).unwrap();
        assert_eq!(
            solve_exact(&a, &[int(1), int(1)]).unwrap(),
            vec![rat(1, 2), rat(1, 4)]
        );
    }

    #[test]
    fn singular_is_reported() {
        let a = ExactMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert_eq!(solve_exact(&a, &[int(1), int(1)]), Err(Error::Singular));
        assert_eq!(a.inverse(), Err(Error::Singular));
    }

    #[test]
    fn pivoting_handles_leading_zero() {
        let a = ExactMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(
            solve_exact(&a, &[int(3), int(5)]).unwrap(),
            vec![int(5), int(3)]
        );
    }

    #[test]
    fn kron_layout() {
        let a = ExactMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]).unwrap();
        let i = ExactMatrix::identity(2);
        let k = a.kron(&i);
        assert_eq!(k[(0, 2)], int(2));
        assert_eq!(k[(3, 1)], int(3));
        assert_eq!(k[(1, 0)], int(0));
    }

    #[test]
    fn inverse_round_trip() {
        let a = ExactMatrix::from_rows(vec![
            vec![int(2), rat(1, 3), int(0)],
            vec![int(-1), int(0), int(5)],
            vec![rat(1, 2), int(1), int(1)],
        ])
        .unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), ExactMatrix::identity(3));
    }
}
