//! The standard `GL_n` R-matrix and constant solutions of the reflection equation.
//!
//! Tensor convention: the basis vector `e_i ⊗ e_j` (labels `1..=n`) sits at
//! flat index `(i-1)·n + (j-1)`. Every Kronecker product below uses it.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Rational};

/// `R = Σ q^{δ_ij} e_ii⊗e_jj + (q - q^{-1}) Σ_{i>j} e_ij⊗e_ji`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMatrix {
    pub n: usize,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub q: Rational,
    pub entries: ExactMatrix,
}

fn pair(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + (j - 1)
}

pub fn build_r(n: usize, q: &Rational) -> Result<RMatrix> {
    if n < 2 {
        return Err(Error::Range(format!("R-matrix needs n >= 2, got {n}")));
    }
    if q.is_zero() {
        return Err(Error::InvalidParams("q must be nonzero".into()));
    }
    let mut m = ExactMatrix::zeros(n * n, n * n);
    let gap = q - q.recip();
    for i in 1..=n {
        for j in 1..=n {
            let k = pair(n, i, j);
            m[(k, k)] = if i == j { q.clone() } else { Rational::one() };
            if i > j {
                // e_ij ⊗ e_ji sends e_j ⊗ e_i to e_i ⊗ e_j
                m[(k, pair(n, j, i))] = gap.clone();
            }
        }
    }
    Ok(RMatrix {
        n,
        q: q.clone(),
        entries: m,
    })
}

/// The flip `e_i ⊗ e_j ↦ e_j ⊗ e_i` on `V ⊗ V`.
pub fn flip(n: usize) -> ExactMatrix {
    let mut p = ExactMatrix::zeros(n * n, n * n);
    for i in 1..=n {
        for j in 1..=n {
            p[(pair(n, j, i), pair(n, i, j))] = Rational::one();
        }
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RVariants {
    pub plus: ExactMatrix,
    pub minus: ExactMatrix,
    pub flip: ExactMatrix,
}

/// `R^+ = P R P`, `R^- = R^{-1}` and `P`.
pub fn build_variants(r: &RMatrix) -> Result<RVariants> {
    let p = flip(r.n);
    let plus = p.mul(&r.entries)?.mul(&p)?;
    let minus = r.entries.inverse()?;
    Ok(RVariants {
        plus,
        minus,
        flip: p,
    })
}

/// The diagonal-plus-antidiagonal solution `J^σ`, with `s` standing for `q^σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionPoint {
    pub n: usize,
    pub l: usize,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub s: Rational,
    pub entries: ExactMatrix,
}

pub fn build_j(n: usize, l: usize, s: &Rational) -> Result<ReflectionPoint> {
    if l < 1 || l > n / 2 {
        return Err(Error::Range(format!(
            "need 1 <= l <= {}, got l = {l}",
            n / 2
        )));
    }
    if !s.is_positive() {
        return Err(Error::InvalidParams("s must be positive".into()));
    }
    let mut j = ExactMatrix::zeros(n, n);
    let one = Rational::one();
    for k in 1..=n {
        let k_dual = n + 1 - k;
        if k <= l {
            j[(k - 1, k - 1)] = &one - s * s;
            j[(k - 1, k_dual - 1)] = -s.clone();
            j[(k_dual - 1, k - 1)] = -s.clone();
        } else if k < n + 1 - l {
            j[(k - 1, k - 1)] = one.clone();
        }
    }
    Ok(ReflectionPoint {
        n,
        l,
        s: s.clone(),
        entries: j,
    })
}

/// Precomputed pieces shared by many residual evaluations at fixed `R`.
#[derive(Clone, Debug)]
pub struct ReflectionContext {
    n: usize,
    r12: ExactMatrix,
    r12_inv: ExactMatrix,
    r21: ExactMatrix,
    r21_inv: ExactMatrix,
}

impl ReflectionContext {
    pub fn new(r: &RMatrix) -> Result<Self> {
        let v = build_variants(r)?;
        let r21_inv = v.flip.mul(&v.minus)?.mul(&v.flip)?;
        Ok(ReflectionContext {
            n: r.n,
            r12: r.entries.clone(),
            r12_inv: v.minus,
            r21: v.plus,
            r21_inv,
        })
    }

    /// `R12 X1 R12^{-1} X2 - X2 R21^{-1} X1 R21`.
    pub fn residual(&self, x: &ExactMatrix) -> Result<ExactMatrix> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: if x.rows() != self.n {
                    x.rows()
                } else {
                    x.cols()
                },
            });
        }
        let id = ExactMatrix::identity(self.n);
        let x1 = x.kron(&id);
        let x2 = id.kron(x);
        let lhs = self.r12.mul(&x1)?.mul(&self.r12_inv)?.mul(&x2)?;
        let rhs = x2.mul(&self.r21_inv)?.mul(&x1)?.mul(&self.r21)?;
        lhs.sub(&rhs)
    }
}

pub fn reflection_residual(x: &ExactMatrix, r: &RMatrix) -> Result<ExactMatrix> {
    ReflectionContext::new(r)?.residual(x)
}

/// `R12 R13 R23 - R23 R13 R12` on `V ⊗ V ⊗ V`, for any `n²×n²` matrix.
pub fn yang_baxter_residual_of(r: &ExactMatrix, n: usize) -> Result<ExactMatrix> {
    if r.rows() != n * n || r.cols() != n * n {
        return Err(Error::Dimension {
            expected: n * n,
            found: r.rows(),
        });
    }
    let id = ExactMatrix::identity(n);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let p23 = id.kron(&flip(n));
    let r13 = p23.mul(&r12)?.mul(&p23)?;
    let lhs = r12.mul(&r13)?.mul(&r23)?;
    let rhs = r23.mul(&r13)?.mul(&r12)?;
    lhs.sub(&rhs)
}

pub fn yang_baxter_residual(r: &RMatrix) -> Result<ExactMatrix> {
    yang_baxter_residual_of(&r.entries, r.n)
}

/// `(R̂ - q)(R̂ + q^{-1})` with `R̂ = P R`.
pub fn hecke_residual(r: &RMatrix) -> Result<ExactMatrix> {
    let id = ExactMatrix::identity(r.n * r.n);
    let rhat = flip(r.n).mul(&r.entries)?;
    let left = rhat.sub(&id.scale(&r.q))?;
    let right = rhat.add(&id.scale(&r.q.recip()))?;
    left.mul(&right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn two_dimensional_r_matrix() {
        let q = rat(1, 2);
        let r = build_r(2, &q).unwrap();
        let gap = rat(-3, 2);
        let expected = ExactMatrix::from_rows(vec![
            vec![q.clone(), int(0), int(0), int(0)],
            vec![int(0), int(1), int(0), int(0)],
            vec![int(0), gap, int(1), int(0)],
            vec![int(0), int(0), int(0), q.clone()],
        ])
        .unwrap();
        assert_eq!(r.entries, expected);
    }

    #[test]
    fn classical_limit_is_identity() {
        assert_eq!(
            build_r(3, &int(1)).unwrap().entries,
            ExactMatrix::identity(9)
        );
    }

    #[test]
    fn three_off_diagonal_entries_for_n3() {
        let r = build_r(3, &rat(2, 3)).unwrap();
        let mut offdiag = Vec::new();
        for i in 0..9 {
            for j in 0..9 {
                if i != j && !r.entries[(i, j)].is_zero() {
                    offdiag.push((i, j));
                }
            }
        }
        // rows (2,1), (3,1), (3,2); columns (1,2), (1,3), (2,3)
        assert_eq!(offdiag, vec![(3, 1), (6, 2), (7, 5)]);
    }

    #[test]
    fn variants() {
        let r = build_r(2, &rat(1, 2)).unwrap();
        let v = build_variants(&r).unwrap();
        assert_eq!(v.flip.mul(&v.flip).unwrap(), ExactMatrix::identity(4));
        assert_eq!(r.entries.mul(&v.minus).unwrap(), ExactMatrix::identity(4));
        // for n = 2 the flip-conjugate of R is its transpose
        assert_eq!(v.plus, r.entries.transpose());
    }

    #[test]
    fn j_examples() {
        let s = rat(1, 2);
        let j = build_j(2, 1, &s).unwrap().entries;
        assert_eq!(
            j,
            ExactMatrix::from_rows(vec![vec![rat(3, 4), rat(-1, 2)], vec![rat(-1, 2), int(0)]])
                .unwrap()
        );
        let j = build_j(4, 1, &s).unwrap().entries;
        assert_eq!(j[(1, 1)], int(1));
        assert_eq!(j[(2, 2)], int(1));
        assert_eq!(j[(3, 3)], int(0));
        assert_eq!(j[(0, 3)], rat(-1, 2));
        assert!(j.is_symmetric());
        assert!(build_j(5, 2, &int(1)).unwrap().entries[(1, 1)].is_zero());
        assert!(build_j(4, 3, &s).is_err());
        assert!(build_j(4, 0, &s).is_err());
    }

    #[test]
    fn identity_and_j_solve_the_equation() {
        let r = build_r(3, &rat(1, 3)).unwrap();
        assert!(reflection_residual(&ExactMatrix::identity(3), &r)
            .unwrap()
            .is_zero());
        let j = build_j(3, 1, &rat(3, 2)).unwrap();
        assert!(reflection_residual(&j.entries, &r).unwrap().is_zero());
    }

    #[test]
    fn symmetric_witness_fails() {
        let r = build_r(2, &rat(1, 2)).unwrap();
        let x = ExactMatrix::from_rows(vec![vec![int(2), rat(1, 3)], vec![rat(1, 3), int(-1)]])
            .unwrap();
        assert!(!reflection_residual(&x, &r).unwrap().is_zero());
    }

    #[test]
    fn braid_and_hecke() {
        for (n, q) in [(2, rat(1, 2)), (3, rat(2, 3))] {
            let r = build_r(n, &q).unwrap();
            assert!(yang_baxter_residual(&r).unwrap().is_zero());
            assert!(hecke_residual(&r).unwrap().is_zero());
        }
    }

    #[test]
    fn dimension_mismatch() {
        let r = build_r(2, &rat(1, 2)).unwrap();
        assert!(reflection_residual(&ExactMatrix::identity(3), &r).is_err());
    }
}
