//! Multivariate Laurent polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{powi, Rational};
use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial. Entries may be negative.
///
/// Ordered graded-lexicographically: first by `sum |e_i|`, then
/// lexicographically on the entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn unit(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn grade(&self) -> i64 {
        self.0.iter().map(|e| e.abs()).sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Exponent {
    type Output = Exponent;

    fn add(self, rhs: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// An element of `Q[x_1^{±1}, ..., x_n^{±1}]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = LaurentPoly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The variable `x_{k+1}` (zero-based `k`).
    pub fn var(nvars: usize, k: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, k), Rational::one())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(Exponent(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * x^exp` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Applies `f` to every exponent vector, summing coefficients that collide.
    pub fn map_exponents<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&[i64]) -> Vec<i64>,
    {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(Exponent(f(&e.0)), c.clone());
        }
        out
    }

    /// Evaluates at a point with nonzero rational coordinates.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: point.len(),
            });
        }
        if let Some(k) = point.iter().position(Zero::is_zero) {
            return Err(Error::ZeroCoordinate(k));
        }
        let mut powers = PowerCache::new(point);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, &ek) in e.0.iter().enumerate() {
                if ek != 0 {
                    term *= powers.get(k, ek);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Largest absolute exponent appearing in any coordinate.
    pub fn max_abs_exponent(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|e| e.0.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }
}

/// Memoizes `x_k^e` during a single evaluation.
struct PowerCache<'a> {
    point: &'a [Rational],
    cache: Vec<BTreeMap<i64, Rational>>,
}

impl<'a> PowerCache<'a> {
    fn new(point: &'a [Rational]) -> Self {
        PowerCache {
            point,
            cache: vec![BTreeMap::new(); point.len()],
        }
    }

    fn get(&mut self, k: usize, e: i64) -> &Rational {
        let x = &self.point[k];
        self.cache[k].entry(e).or_insert_with(|| powi(x, e))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    /// Panics on mismatched variable counts; see [`LaurentPoly::checked_add`].
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("mismatched variable counts")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("mismatched variable counts")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("mismatched variable counts")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending graded-lex order, e.g. `x1^2 - 3/2*x1^-1*x2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (k, &ek) in e.0.iter().enumerate() {
                match ek {
                    0 => {}
                    1 => factors.push(format!("x{}", k + 1)),
                    _ => factors.push(format!("x{}^{}", k + 1, ek)),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn x(n: usize, k: usize) -> LaurentPoly {
        LaurentPoly::var(n, k)
    }

    fn xinv(n: usize, k: usize) -> LaurentPoly {
        let mut e = vec![0; n];
        e[k] = -1;
        LaurentPoly::monomial(Exponent(e), int(1))
    }

    #[test]
    fn difference_of_squares() {
        let one = LaurentPoly::one(1);
        let p = &(&x(1, 0) + &one) * &(&x(1, 0) - &one);
        let expected = LaurentPoly::from_terms(1, [(vec![2], int(1)), (vec![0], int(-1))]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn additive_identity_and_inverse_monomials() {
        let f = &x(2, 0) + &xinv(2, 1);
        assert_eq!(&f + &LaurentPoly::zero(2), f);
        let a = &x(2, 0) * &xinv(2, 1);
        let b = &xinv(2, 0) * &x(2, 1);
        assert_eq!(&a * &b, LaurentPoly::one(2));
    }

    #[test]
    fn mismatched_nvars_is_an_error() {
        assert!(matches!(
            x(1, 0).checked_add(&x(2, 0)),
            Err(Error::Dimension { .. })
        ));
        assert!(x(1, 0).checked_mul(&x(2, 1)).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f = &x(1, 0) + &xinv(1, 0);
        assert_eq!(f.eval(&[int(2)]).unwrap(), rat(5, 2));
        assert_eq!(
            LaurentPoly::one(3)
                .eval(&[int(7), rat(1, 3), int(-2)])
                .unwrap(),
            int(1)
        );
        let g = &(&x(2, 0) * &x(2, 1)) - &x(2, 1);
        assert_eq!(g.eval(&[int(3), rat(1, 3)]).unwrap(), rat(2, 3));
    }

    #[test]
    fn zero_coordinate_rejected() {
        let f = &x(2, 0) + &xinv(2, 1);
        assert_eq!(f.eval(&[int(1), int(0)]), Err(Error::ZeroCoordinate(1)));
    }

    #[test]
    fn no_zero_coefficients_survive() {
        let f = &x(2, 0) - &x(2, 0);
        assert!(f.is_zero());
        assert_eq!(f.to_string(), "0");
    }

    #[test]
    fn display_is_graded_lex_descending() {
        let f = LaurentPoly::from_terms(
            2,
            [
                (vec![0, 0], int(1)),
                (vec![-1, 1], rat(-3, 2)),
                (vec![2, 0], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(f.to_string(), "x1^2 - 3/2*x1^-1*x2 + 1");
    }
}
