//! Independent one-variable construction.
//!
//! Works symbolically with univariate rational functions, cancelling common
//! factors by polynomial GCD, so no sample points, interpolation, or closed-form
//! eigenvalue are involved. Used only to cross-check the multivariate path.

use num_traits::{One, Zero};

use super::KoornwinderPoly;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::operator::ParamSet;
use crate::univariate::{RatFn, UniPoly};
use crate::weights::{DominantWeight, SymmetricPoly};

/// `m_j = x^j + x^{-j}` (and `m_0 = 1`) as `x^j m_j / x^j`.
fn orbit_sum_fn(j: usize) -> RatFn {
    if j == 0 {
        return RatFn::poly(UniPoly::constant(Rational::one()));
    }
    let num = &UniPoly::x_pow(2 * j) + &UniPoly::constant(Rational::one());
    RatFn::new(num, UniPoly::x_pow(j))
}

fn coefficient_functions(p: &ParamSet) -> (RatFn, RatFn) {
    let one = Rational::one();
    let zero = Rational::zero();
    let mut plus_num = UniPoly::constant(one.clone());
    let mut minus_num = UniPoly::constant(one.clone());
    for s in [p.a(), p.b(), p.c(), p.d()] {
        plus_num = &plus_num * &UniPoly::linear(one.clone(), -s.clone());
        minus_num = &minus_num * &UniPoly::linear(-s.clone(), one.clone());
    }
    // (1 - x^2)(1 - q x^2) and (x^2 - 1)(x^2 - q)
    let plus_den = &UniPoly::new(vec![one.clone(), zero.clone(), -one.clone()])
        * &UniPoly::new(vec![one.clone(), zero.clone(), -p.q().clone()]);
    let minus_den = &UniPoly::new(vec![-one.clone(), zero.clone(), one.clone()])
        * &UniPoly::new(vec![-p.q().clone(), zero, one]);
    (
        RatFn::new(plus_num, plus_den),
        RatFn::new(minus_num, minus_den),
    )
}

/// Coefficients of `D m_j` in the basis `m_0, m_1, …`.
fn image_of_orbit_sum(j: usize, p: &ParamSet) -> Result<Vec<Rational>> {
    let (phi_plus, phi_minus) = coefficient_functions(p);
    let f = orbit_sum_fn(j);
    let up = &f.dilate(p.q()) - &f;
    let down = &f.dilate(&p.q().recip()) - &f;
    let image = &(&phi_plus * &up) + &(&phi_minus * &down);

    // the image must be a Laurent polynomial: denominator a pure power of x
    let den = image.den();
    let shift = den.degree().unwrap_or(0);
    if den != &UniPoly::x_pow(shift) {
        return Err(Error::Consistency);
    }
    let num = image.num();
    let top = num.degree().map_or(0, |d| d.saturating_sub(shift));
    let coeffs: Vec<Rational> = (0..=top).map(|i| num.coeff(shift + i)).collect();
    if (1..=shift).any(|i| num.coeff(shift - i) != num.coeff(shift + i)) {
        return Err(Error::NotInvariant);
    }
    Ok(coeffs)
}

/// The one-variable eigenfunction for `lam = (n)`.
pub fn one_var_oracle(lam: &DominantWeight, p: &ParamSet) -> Result<KoornwinderPoly> {
    if lam.len() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: lam.len(),
        });
    }
    let n = lam.parts()[0] as usize;
    // columns[j][i] = coefficient of m_i in D m_j
    let columns: Vec<Vec<Rational>> = (0..=n)
        .map(|j| image_of_orbit_sum(j, p))
        .collect::<Result<_>>()?;
    let entry = |i: usize, j: usize| columns[j].get(i).cloned().unwrap_or_else(Rational::zero);
    let eig = entry(n, n);
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    for i in (0..n).rev() {
        let gap = &eig - entry(i, i);
        if gap.is_zero() {
            return Err(Error::Degenerate {
                lam: vec![n as i64],
                mu: vec![i as i64],
            });
        }
        let mut acc = Rational::zero();
        for (j, cj) in c.iter().enumerate().skip(i + 1) {
            acc += cj * entry(i, j);
        }
        c[i] = acc / gap;
    }
    let coeffs = SymmetricPoly::from_coeffs(
        1,
        c.into_iter()
            .enumerate()
            .map(|(i, ci)| (DominantWeight::new(vec![i as i64]).unwrap(), ci)),
    )?;
    Ok(KoornwinderPoly {
        lam: lam.clone(),
        params: p.clone(),
        coeffs,
    })
}
