//! Dense univariate polynomials and reduced rational functions over Q.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::rational::powi;
use crate::exact::Rational;

/// `Σ coeffs[i] x^i`, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn x_pow(k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        UniPoly(v)
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        UniPoly::new(vec![c0, c1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UniPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// `p(c x)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, x)| x * powi(c, i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.0.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        UniPoly(self.0.iter().map(|x| -x).collect())
    }
}

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: UniPoly,
    den: UniPoly,
}

impl RatFn {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFn {
                num,
                den: UniPoly::constant(Rational::one()),
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lead = d.leading().unwrap().recip();
        RatFn {
            num: n.scale(&lead),
            den: d.scale(&lead),
        }
    }

    pub fn poly(p: UniPoly) -> Self {
        RatFn::new(p, UniPoly::constant(Rational::one()))
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    /// `r(c x)`.
    pub fn dilate(&self, c: &Rational) -> Self {
        RatFn::new(self.num.dilate(c), self.den.dilate(c))
    }
}

impl Add for &RatFn {
    type Output = RatFn;

    fn add(self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFn {
    type Output = RatFn;

    fn sub(self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFn {
    type Output = RatFn;

    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_with_remainder() {
        // x^3 - 1 = (x - 1)(x^2 + x + 1)
        let (q, r) = p(&[-1, 0, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
        let (_, r) = p(&[1, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(r, p(&[2]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = &p(&[-1, 1]) * &p(&[2, 3]);
        let b = &p(&[-1, 1]) * &p(&[5, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[4]).gcd(&p(&[0, 6])), p(&[1]));
    }

    #[test]
    fn rational_functions_cancel() {
        let r = RatFn::new(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 1]).scale(&int(2)));
        assert_eq!(r.num(), &p(&[1, 1]).scale(&rat(1, 2)));
        assert_eq!(r.den(), &p(&[1]));
        let sum = &RatFn::new(p(&[1]), p(&[-1, 1])) - &RatFn::new(p(&[1]), p(&[-1, 1]));
        assert!(sum.num().is_zero());
    }

    #[test]
    fn dilation() {
        assert_eq!(p(&[1, 1, 1]).dilate(&int(2)), p(&[1, 2, 4]));
    }
}
