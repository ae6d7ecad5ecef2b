//! Spherical weights of the quantum Grassmannian `U(n)/U(l)×U(n-l)` and their
//! link to the eigenvalue problem in `l` variables.
//!
//! The real exponents `σ, τ` only enter through `s = q^σ` and `u = q^τ`, so
//! every quantity here stays rational.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::powi;
use crate::exact::Rational;
use crate::operator::{eigenvalue_c, ParamSet};
use crate::solver::{koornwinder, KoornwinderPoly};
use crate::weights::DominantWeight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannSetup {
    n: usize,
    l: usize,
    #[serde(with = "crate::exact::rational::serde_str")]
    q: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    s: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    u: Rational,
}

impl GrassmannSetup {
    pub fn new(n: usize, l: usize, q: Rational, s: Rational, u: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::Range(format!("need n >= 2, got {n}")));
        }
        if l < 1 || l > n / 2 {
            return Err(Error::Range(format!(
                "need 1 <= l <= {}, got l = {l}",
                n / 2
            )));
        }
        if !(q.is_positive() && q < Rational::one()) {
            return Err(Error::InvalidParams("0 < q < 1 violated".into()));
        }
        if !s.is_positive() || !u.is_positive() {
            return Err(Error::InvalidParams("s and u must be positive".into()));
        }
        Ok(GrassmannSetup { n, l, q, s, u })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    /// The same setup with `s` and `u` exchanged.
    pub fn swapped(&self) -> Self {
        GrassmannSetup {
            s: self.u.clone(),
            u: self.s.clone(),
            ..self.clone()
        }
    }
}

/// A weakly decreasing integer vector of length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SignedWeight(Vec<i64>);

impl SignedWeight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(parts));
        }
        Ok(SignedWeight(parts))
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<i64>> for SignedWeight {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        SignedWeight::new(v)
    }
}

impl From<SignedWeight> for Vec<i64> {
    fn from(w: SignedWeight) -> Self {
        w.0
    }
}

/// `(μ_1, …, μ_l, 0, …, 0, -μ_l, …, -μ_1)` of length `n`.
pub fn spherical_embed(mu: &DominantWeight, setup: &GrassmannSetup) -> Result<SignedWeight> {
    if mu.len() != setup.l {
        return Err(Error::Dimension {
            expected: setup.l,
            found: mu.len(),
        });
    }
    let mut parts = mu.parts().to_vec();
    parts.resize(setup.n - setup.l, 0);
    parts.extend(mu.parts().iter().rev().map(|x| -x));
    SignedWeight::new(parts)
}

/// `Σ_k q^{2(λ_k + n - k)}` with `n = lam.len()`.
pub fn casimir_eigenvalue(lam: &SignedWeight, q: &Rational) -> Rational {
    let n = lam.len() as i64;
    let q2 = q * q;
    lam.parts()
        .iter()
        .zip(1..)
        .map(|(&lk, k)| powi(&q2, lk + n - k))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Base `q²` and `a = -qsu`, `b = -q/(su)`, `c = qs/u`, `d = q^{2(n-2l)+1} u/s`, `t = q²`.
pub fn param_map(setup: &GrassmannSetup) -> Result<ParamSet> {
    let GrassmannSetup { n, l, q, s, u } = setup;
    let q2 = q * q;
    let su = s * u;
    let a = -(q * &su);
    let b = -(q / &su);
    let c = q * s / u;
    let d = powi(q, 2 * (*n as i64 - 2 * *l as i64) + 1) * u / s;
    ParamSet::new(q2.clone(), q2, a, b, c, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub mu: DominantWeight,
    /// `χ(μ) - χ(0)`.
    #[serde(with = "crate::exact::rational::serde_str")]
    pub casimir_shift: Rational,
    /// The eigenvalue of the operator at the mapped parameters.
    #[serde(with = "crate::exact::rational::serde_str")]
    pub eigenvalue: Rational,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    #[serde(with = "crate::exact::rational::serde_str")]
    pub kappa: Rational,
    pub rows: Vec<ConsistencyRow>,
    pub pass: bool,
}

/// Fits `χ(μ) - χ(0) = κ·e(μ)` on the first weight with `e(μ) ≠ 0` and checks
/// the remaining weights against the same `κ`.
pub fn radial_consistency(
    mus: &[DominantWeight],
    setup: &GrassmannSetup,
) -> Result<ConsistencyReport> {
    let params = param_map(setup)?;
    let base = casimir_eigenvalue(
        &spherical_embed(&DominantWeight::zero(setup.l), setup)?,
        &setup.q,
    );
    let pairs: Vec<(DominantWeight, Rational, Rational)> = mus
        .par_iter()
        .map(|mu| {
            let chi = casimir_eigenvalue(&spherical_embed(mu, setup)?, &setup.q);
            Ok((mu.clone(), chi - &base, eigenvalue_c(mu, &params)))
        })
        .collect::<Result<_>>()?;
    let kappa = pairs
        .iter()
        .find(|(_, _, e)| !e.is_zero())
        .map(|(_, shift, e)| shift / e)
        .ok_or_else(|| {
            Error::InsufficientData(
                "no weight with a nonzero eigenvalue to fit the constant".into(),
            )
        })?;
    let rows: Vec<ConsistencyRow> = pairs
        .into_iter()
        .map(|(mu, shift, e)| ConsistencyRow {
            consistent: shift == &kappa * &e,
            mu,
            casimir_shift: shift,
            eigenvalue: e,
        })
        .collect();
    let pass = rows.iter().all(|r| r.consistent);
    Ok(ConsistencyReport { kappa, rows, pass })
}

/// The monic eigenfunction at the mapped parameters.
pub fn spherical_restriction(
    mu: &DominantWeight,
    setup: &GrassmannSetup,
) -> Result<KoornwinderPoly> {
    if mu.len() != setup.l {
        return Err(Error::Dimension {
            expected: setup.l,
            found: mu.len(),
        });
    }
    koornwinder(mu, &param_map(setup)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::weights::SymmetricPoly;

    fn w(v: &[i64]) -> DominantWeight {
        DominantWeight::new(v.to_vec()).unwrap()
    }

    fn setup(n: usize, l: usize) -> GrassmannSetup {
        GrassmannSetup::new(n, l, rat(1, 2), int(1), int(1)).unwrap()
    }

    #[test]
    fn embedding() {
        assert_eq!(
            spherical_embed(&w(&[1]), &setup(2, 1)).unwrap().parts(),
            &[1, -1]
        );
        assert_eq!(
            spherical_embed(&w(&[2, 1]), &setup(5, 2)).unwrap().parts(),
            &[2, 1, 0, -1, -2]
        );
        assert!(spherical_embed(&w(&[0, 0]), &setup(4, 2))
            .unwrap()
            .parts()
            .iter()
            .all(|&x| x == 0));
        assert!(spherical_embed(&w(&[1]), &setup(4, 2)).is_err());
    }

    #[test]
    fn casimir_values() {
        let q = rat(1, 3);
        let q2 = &q * &q;
        let zero = SignedWeight::new(vec![0, 0]).unwrap();
        assert_eq!(casimir_eigenvalue(&zero, &q), &q2 + int(1));
        let lam = SignedWeight::new(vec![1, -1]).unwrap();
        assert_eq!(casimir_eigenvalue(&lam, &q), powi(&q, 4) + powi(&q, -2));
        assert!(SignedWeight::new(vec![0, 1]).is_err());
    }

    #[test]
    fn mapped_parameters() {
        let q = rat(1, 2);
        let p = param_map(&setup(4, 1)).unwrap();
        assert_eq!(p.q(), &(&q * &q));
        assert_eq!(p.t(), &(&q * &q));
        assert_eq!(
            (p.a(), p.b(), p.c(), p.d()),
            (&-q.clone(), &-q.clone(), &q, &powi(&q, 5))
        );
        let p = param_map(&GrassmannSetup::new(6, 3, q.clone(), rat(2, 3), rat(5, 4)).unwrap())
            .unwrap();
        assert_eq!(p.d(), &(&q * rat(5, 4) / rat(2, 3)));
        assert_eq!(p.abcd(), powi(&q, 4));
    }

    #[test]
    fn two_by_one_consistency() {
        let st = setup(2, 1);
        let q = st.q().clone();
        let report = radial_consistency(&[w(&[0]), w(&[1])], &st).unwrap();
        assert!(report.pass);
        assert_eq!(
            report.rows[1].casimir_shift,
            powi(&q, 4) + powi(&q, -2) - &q * &q - int(1)
        );
        assert_eq!(report.kappa, int(1));
    }

    #[test]
    fn zero_weight_alone_is_insufficient() {
        assert!(matches!(
            radial_consistency(&[w(&[0, 0])], &setup(5, 2)),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn restriction_support() {
        let st = setup(4, 2);
        assert_eq!(
            spherical_restriction(&w(&[0, 0]), &st).unwrap().coeffs,
            SymmetricPoly::one(2)
        );
        // with u = 1 the set {a, b, c, d} is closed under negation, so P_(1,0) is odd
        let p = spherical_restriction(&w(&[1, 0]), &st).unwrap();
        assert_eq!(p.coeffs, SymmetricPoly::basis(w(&[1, 0])));
        let st = GrassmannSetup::new(4, 2, rat(1, 2), int(2), int(3)).unwrap();
        let p = spherical_restriction(&w(&[1, 0]), &st).unwrap();
        let support: Vec<_> = p.coeffs.support().cloned().collect();
        assert_eq!(support, vec![w(&[0, 0]), w(&[1, 0])]);
    }

    #[test]
    fn setup_validation() {
        assert!(GrassmannSetup::new(4, 3, rat(1, 2), int(1), int(1)).is_err());
        assert!(GrassmannSetup::new(4, 1, int(1), int(1), int(1)).is_err());
        assert!(GrassmannSetup::new(4, 1, rat(1, 2), int(0), int(1)).is_err());
    }
}
