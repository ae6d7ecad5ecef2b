//! Monic eigenfunctions of the q-difference operator by back-substitution.

mod oracle;

pub use oracle::one_var_oracle;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::operator::{
    apply_d_with, eigenvalue_c, eigenvalue_collision, operator_matrix_with, ParamSet, Sampler,
};
use crate::weights::{DominantWeight, SymmetricPoly};

/// Seed used when re-verifying, so checks never reuse the construction points.
const VERIFY_SEED: u64 = 0x7665_7269_6679;

/// `P_λ = m_λ + Σ_{μ<λ} c_{λμ} m_μ` together with the data that defines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoornwinderPoly {
    pub lam: DominantWeight,
    pub params: ParamSet,
    pub coeffs: SymmetricPoly,
}

impl KoornwinderPoly {
    pub fn nvars(&self) -> usize {
        self.lam.len()
    }

    pub fn eigenvalue(&self) -> Rational {
        eigenvalue_c(&self.lam, &self.params)
    }
}

/// Builds `P_λ` from the operator matrix on `span{m_μ : μ ≤ λ}`.
///
/// With `d_{νμ}` the coefficient of `m_μ` in `D m_ν`, the coefficients satisfy
/// `c_{λμ} (e_λ - e_μ) = Σ_{μ<ν≤λ} c_{λν} d_{νμ}`, which is solved top-down.
pub fn koornwinder(lam: &DominantWeight, p: &ParamSet) -> Result<KoornwinderPoly> {
    koornwinder_with(lam, p, &Sampler::default())
}

pub fn koornwinder_with(
    lam: &DominantWeight,
    p: &ParamSet,
    sampler: &Sampler,
) -> Result<KoornwinderPoly> {
    if let Some(mu) = eigenvalue_collision(lam, p) {
        return Err(Error::Degenerate {
            lam: lam.parts().to_vec(),
            mu: mu.parts().to_vec(),
        });
    }
    let op = operator_matrix_with(lam, p, sampler)?;
    let n = op.basis.len();
    let eig: Vec<Rational> = op.basis.iter().map(|mu| eigenvalue_c(mu, p)).collect();
    let top = n - 1;
    let mut c = vec![Rational::zero(); n];
    c[top] = Rational::one();
    for i in (0..top).rev() {
        let mut acc = Rational::zero();
        for (j, cj) in c.iter().enumerate().skip(i + 1) {
            let d = &op.entries[(i, j)];
            if !cj.is_zero() && !d.is_zero() {
                acc += cj * d;
            }
        }
        c[i] = acc / (&eig[top] - &eig[i]);
    }
    Ok(KoornwinderPoly {
        lam: lam.clone(),
        params: p.clone(),
        coeffs: SymmetricPoly::from_coeffs(lam.len(), op.basis.into_iter().zip(c))?,
    })
}

/// `D P - e_λ P`; identically zero for a correct eigenfunction.
pub fn verify_eigen(poly: &KoornwinderPoly) -> Result<SymmetricPoly> {
    let image = apply_d_with(&poly.coeffs, &poly.params, &Sampler::with_seed(VERIFY_SEED))?;
    image.checked_sub(&poly.coeffs.scale(&poly.eigenvalue()))
}

/// True when `P` is monic in `m_λ` and supported on weights dominated by `λ`.
pub fn is_monic_triangular(poly: &KoornwinderPoly) -> bool {
    poly.coeffs.coeff(&poly.lam).is_one()
        && poly
            .coeffs
            .support()
            .all(|mu| crate::weights::dominance_leq(mu, &poly.lam).unwrap_or(false))
}

#[derive(Serialize, Deserialize)]
struct CoeffWire {
    mu: DominantWeight,
    #[serde(with = "crate::exact::rational::serde_str")]
    c: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    lambda: DominantWeight,
    params: ParamSet,
    coeffs: Vec<CoeffWire>,
}

impl Serialize for KoornwinderPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyWire {
            lambda: self.lam.clone(),
            params: self.params.clone(),
            coeffs: self
                .coeffs
                .terms()
                .map(|(mu, c)| CoeffWire {
                    mu: mu.clone(),
                    c: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KoornwinderPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = PolyWire::deserialize(d)?;
        let l = w.lambda.len();
        let coeffs = SymmetricPoly::from_coeffs(l, w.coeffs.into_iter().map(|t| (t.mu, t.c)))
            .map_err(D::Error::custom)?;
        Ok(KoornwinderPoly {
            lam: w.lambda,
            params: w.params,
            coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn w(p: &[i64]) -> DominantWeight {
        DominantWeight::new(p.to_vec()).unwrap()
    }

    fn generic() -> ParamSet {
        ParamSet::new(
            rat(1, 2),
            rat(1, 3),
            rat(1, 5),
            rat(-1, 7),
            rat(2, 9),
            rat(1, 11),
        )
        .unwrap()
    }

    #[test]
    fn trivial_weight_gives_one() {
        let p = koornwinder(&w(&[0, 0]), &generic()).unwrap();
        assert_eq!(p.coeffs, SymmetricPoly::one(2));
        assert!(verify_eigen(&p).unwrap().is_zero());
    }

    #[test]
    fn vanishing_abcd_first_degree_is_bare_orbit_sum() {
        let p = ParamSet::new(rat(1, 2), rat(1, 3), int(0), int(0), int(0), int(0)).unwrap();
        let poly = koornwinder(&w(&[1]), &p).unwrap();
        assert_eq!(poly.coeffs, SymmetricPoly::basis(w(&[1])));
    }

    #[test]
    fn two_variable_eigen_residual_vanishes() {
        let poly = koornwinder(&w(&[1, 0]), &generic()).unwrap();
        assert!(is_monic_triangular(&poly));
        assert!(verify_eigen(&poly).unwrap().is_zero());
    }

    #[test]
    fn perturbed_coefficient_breaks_eigen_equation() {
        let mut poly = koornwinder(&w(&[2, 0]), &generic()).unwrap();
        poly.coeffs.add_term(w(&[1, 0]), rat(1, 1000));
        assert!(!verify_eigen(&poly).unwrap().is_zero());
    }

    #[test]
    fn collision_is_reported() {
        // abcd = 1 lies outside the admissible region and makes e_(1) = e_(0) = 0
        let p = ParamSet::new_unchecked(rat(1, 2), rat(1, 3), int(1), int(1), int(1), int(1));
        assert_eq!(
            koornwinder(&w(&[1]), &p),
            Err(Error::Degenerate {
                lam: vec![1],
                mu: vec![0]
            })
        );
    }

    #[test]
    fn json_shape() {
        let poly = koornwinder(&w(&[1, 0]), &generic()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&poly).unwrap();
        assert_eq!(v["lambda"], serde_json::json!([1, 0]));
        assert_eq!(v["coeffs"][0]["mu"], serde_json::json!([0, 0]));
        assert_eq!(v["coeffs"][1]["c"], serde_json::json!("1"));
        let back: KoornwinderPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, poly);
    }
}
