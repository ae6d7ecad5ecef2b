//! Koornwinder's first-order q-difference operator on W-invariant Laurent
//! polynomials, realized exactly by evaluation and interpolation.
//!
//! For `f` in the span of orbit sums the operator acts as
//!
//! ```text
//! (D f)(x) = Σ_k Φ_k^+(x) (f(.., q x_k, ..) - f(x)) + Φ_k^-(x) (f(.., x_k / q, ..) - f(x))
//! ```
//!
//! with
//!
//! ```text
//! Φ_k^+(x) = (1-a x_k)(1-b x_k)(1-c x_k)(1-d x_k) / ((1-x_k^2)(1-q x_k^2))
//!            · Π_{i≠k} (t x_k - x_i)(t x_k x_i - 1) / ((x_k - x_i)(x_k x_i - 1))
//! Φ_k^-(x) = (x_k-a)(x_k-b)(x_k-c)(x_k-d) / ((x_k^2-1)(x_k^2-q))
//!            · Π_{i≠k} (x_k - t x_i)(x_k x_i - t) / ((x_k - x_i)(x_k x_i - 1))
//! ```
//!
//! The image of an invariant polynomial is again an invariant polynomial
//! supported on weights dominated by the input support, so it is recovered
//! exactly by sampling the expression above at enough points and solving for
//! the orbit-sum coefficients. Two extra held-out points check every result.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, powi};
use crate::exact::{rat, solve_exact, ExactMatrix, LaurentPoly, Rational};
use crate::weights::{dominance_leq, orbit_sum, weights_below, DominantWeight, SymmetricPoly};

/// The parameters `(q, t, a, b, c, d)` of the operator.
///
/// Construction enforces `0 < q < 1`, `0 < t < 1` and `-q ≤ abcd < 1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ParamWire", into = "ParamWire")]
pub struct ParamSet {
    q: Rational,
    t: Rational,
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl ParamSet {
    pub fn new(
        q: Rational,
        t: Rational,
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
    ) -> Result<Self> {
        let p = ParamSet { q, t, a, b, c, d };
        p.validate()?;
        Ok(p)
    }

    /// Skips the admissibility checks. Only useful for probing degenerate cases.
    pub fn new_unchecked(
        q: Rational,
        t: Rational,
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
    ) -> Self {
        ParamSet { q, t, a, b, c, d }
    }

    fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        if !(self.q > zero && self.q < one) {
            return Err(Error::InvalidParams(format!(
                "0 < q < 1 violated (q = {})",
                self.q
            )));
        }
        if !(self.t > zero && self.t < one) {
            return Err(Error::InvalidParams(format!(
                "0 < t < 1 violated (t = {})",
                self.t
            )));
        }
        let abcd = self.abcd();
        if abcd < -self.q.clone() || abcd >= one {
            return Err(Error::InvalidParams(format!(
                "-q <= abcd < 1 violated (abcd = {abcd}, q = {})",
                self.q
            )));
        }
        Ok(())
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn abcd(&self) -> Rational {
        &self.a * &self.b * &self.c * &self.d
    }

    /// `abcd = -q`, the closed edge of the admissible region.
    pub fn is_boundary(&self) -> bool {
        self.abcd() == -self.q.clone()
    }

    /// The stricter hypotheses under which the torus weight is defined:
    /// real `a, b, c, d` of absolute value below one.
    pub fn is_orthogonality_grade(&self) -> bool {
        let one = Rational::one();
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|x| x.abs() < one)
    }

    /// The same operator with `(a, b, c, d)` reordered by `perm`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let abcd = [&self.a, &self.b, &self.c, &self.d];
        ParamSet {
            q: self.q.clone(),
            t: self.t.clone(),
            a: abcd[perm[0]].clone(),
            b: abcd[perm[1]].clone(),
            c: abcd[perm[2]].clone(),
            d: abcd[perm[3]].clone(),
        }
    }

    /// Stable textual key, e.g. `q=1/2;t=1/3;a=...`.
    pub fn canonical_key(&self) -> String {
        format!(
            "q={};t={};a={};b={};c={};d={}",
            format_rational(&self.q),
            format_rational(&self.t),
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c),
            format_rational(&self.d)
        )
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a,b,c,d) = ({}, {}, {}, {}), q = {}, t = {}",
            self.a, self.b, self.c, self.d, self.q, self.t
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ParamWire {
    #[serde(with = "crate::exact::rational::serde_str")]
    q: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    t: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    a: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    b: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    c: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    d: Rational,
}

impl TryFrom<ParamWire> for ParamSet {
    type Error = Error;

    fn try_from(w: ParamWire) -> Result<Self> {
        ParamSet::new(w.q, w.t, w.a, w.b, w.c, w.d)
    }
}

impl From<ParamSet> for ParamWire {
    fn from(p: ParamSet) -> Self {
        ParamWire {
            q: p.q,
            t: p.t,
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
        }
    }
}

fn check_point(k: usize, x: &[Rational]) -> Result<()> {
    if k >= x.len() {
        return Err(Error::Range(format!(
            "coordinate {k} of a {}-point",
            x.len()
        )));
    }
    if let Some(i) = x.iter().position(Zero::is_zero) {
        return Err(Error::ZeroCoordinate(i));
    }
    Ok(())
}

fn nonzero(v: Rational, what: &str, k: usize) -> Result<Rational> {
    if v.is_zero() {
        Err(Error::Pole(format!(
            "{what} vanishes for coordinate {}",
            k + 1
        )))
    } else {
        Ok(v)
    }
}

/// `Φ_k^+(x)` for zero-based coordinate `k`.
pub fn phi_plus_at(k: usize, x: &[Rational], p: &ParamSet) -> Result<Rational> {
    check_point(k, x)?;
    let one = Rational::one();
    let xk = &x[k];
    let x2 = xk * xk;
    let mut num = [&p.a, &p.b, &p.c, &p.d]
        .iter()
        .fold(one.clone(), |acc, &s| acc * (&one - s * xk));
    let mut den = nonzero(
        (&one - &x2) * (&one - &p.q * &x2),
        "(1 - x^2)(1 - q x^2)",
        k,
    )?;
    for (i, xi) in x.iter().enumerate() {
        if i == k {
            continue;
        }
        num *= (&p.t * xk - xi) * (&p.t * xk * xi - &one);
        den *= nonzero((xk - xi) * (xk * xi - &one), "(x_k - x_i)(x_k x_i - 1)", k)?;
    }
    Ok(num / den)
}

/// `Φ_k^-(x)` for zero-based coordinate `k`.
pub fn phi_minus_at(k: usize, x: &[Rational], p: &ParamSet) -> Result<Rational> {
    check_point(k, x)?;
    let one = Rational::one();
    let xk = &x[k];
    let x2 = xk * xk;
    let mut num = [&p.a, &p.b, &p.c, &p.d]
        .iter()
        .fold(one.clone(), |acc, &s| acc * (xk - s));
    let mut den = nonzero((&x2 - &one) * (&x2 - &p.q), "(x^2 - 1)(x^2 - q)", k)?;
    for (i, xi) in x.iter().enumerate() {
        if i == k {
            continue;
        }
        num *= (xk - &p.t * xi) * (xk * xi - &p.t);
        den *= nonzero((xk - xi) * (xk * xi - &one), "(x_k - x_i)(x_k x_i - 1)", k)?;
    }
    Ok(num / den)
}

/// Value of `(D f)(x)` from the regrouped shift-difference form.
pub fn image_at(f: &LaurentPoly, x: &[Rational], p: &ParamSet) -> Result<Rational> {
    let base = f.eval(x)?;
    let mut acc = Rational::zero();
    let mut shifted = x.to_vec();
    for k in 0..x.len() {
        let plus = phi_plus_at(k, x, p)?;
        let minus = phi_minus_at(k, x, p)?;
        shifted[k] = &x[k] * &p.q;
        let up = f.eval(&shifted)?;
        shifted[k] = &x[k] / &p.q;
        let down = f.eval(&shifted)?;
        shifted[k] = x[k].clone();
        acc += plus * (up - &base) + minus * (down - &base);
    }
    Ok(acc)
}

/// Value of `(D f)(x)` from the literal form `Σ Φ^+ T + Φ^- T^{-1} - Φ^0`.
pub fn image_at_literal(f: &LaurentPoly, x: &[Rational], p: &ParamSet) -> Result<Rational> {
    let base = f.eval(x)?;
    let mut shifts = Rational::zero();
    let mut phi0 = Rational::zero();
    let mut shifted = x.to_vec();
    for k in 0..x.len() {
        let plus = phi_plus_at(k, x, p)?;
        let minus = phi_minus_at(k, x, p)?;
        shifted[k] = &x[k] * &p.q;
        shifts += &plus * f.eval(&shifted)?;
        shifted[k] = &x[k] / &p.q;
        shifts += &minus * f.eval(&shifted)?;
        shifted[k] = x[k].clone();
        phi0 += plus + minus;
    }
    Ok(shifts - phi0 * base)
}

/// Controls the sample points used to interpolate the operator image.
#[derive(Clone, Debug)]
pub struct Sampler {
    /// Geometric ratio `g`; coordinates are `g^j` times a small perturbation.
    pub ratio: Rational,
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            ratio: rat(3, 2),
            seed: 0x6b6f_6f72_6e77,
            max_attempts: 20,
        }
    }
}

impl Sampler {
    pub fn with_seed(seed: u64) -> Self {
        Sampler {
            seed,
            ..Sampler::default()
        }
    }

    fn points(&self, attempt: usize, count: usize, l: usize) -> Vec<Vec<Rational>> {
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(attempt as u64 * 0x9e37_79b9));
        (0..count)
            .map(|i| {
                (0..l)
                    .map(|k| {
                        let j = (i * l + k + 1) as i64;
                        let wiggle = rat(97 + rng.gen_range(1..=48), 97);
                        powi(&self.ratio, j) * wiggle
                    })
                    .collect()
            })
            .collect()
    }
}

/// Applies the operator to an invariant polynomial using the default sampler.
pub fn apply_d(f: &SymmetricPoly, p: &ParamSet) -> Result<SymmetricPoly> {
    apply_d_with(f, p, &Sampler::default())
}

/// Weights that can occur in the image of `f`: everything dominated by its support.
pub fn image_basis(f: &SymmetricPoly) -> Vec<DominantWeight> {
    let mut basis: Vec<DominantWeight> = f.support().flat_map(weights_below).collect();
    basis.sort();
    basis.dedup();
    basis
}

pub fn apply_d_with(f: &SymmetricPoly, p: &ParamSet, sampler: &Sampler) -> Result<SymmetricPoly> {
    let l = f.nvars();
    if f.is_zero() {
        return Ok(SymmetricPoly::zero(l));
    }
    let basis = image_basis(f);
    let m: Vec<LaurentPoly> = basis.iter().map(orbit_sum).collect();
    let expanded = f.to_laurent();
    let n = basis.len();

    'attempt: for attempt in 0..sampler.max_attempts {
        let pts = sampler.points(attempt, n + 2, l);
        let mut rhs = Vec::with_capacity(n + 2);
        for x in &pts {
            match image_at(&expanded, x, p) {
                Ok(v) => rhs.push(v),
                Err(Error::Pole(_)) => continue 'attempt,
                Err(e) => return Err(e),
            }
        }
        let mut a = ExactMatrix::zeros(n, n);
        for (i, x) in pts[..n].iter().enumerate() {
            for (j, mj) in m.iter().enumerate() {
                a[(i, j)] = mj.eval(x)?;
            }
        }
        let coeffs = match solve_exact(&a, &rhs[..n]) {
            Ok(c) => c,
            Err(Error::Singular) => continue,
            Err(e) => return Err(e),
        };
        for (x, expected) in pts[n..].iter().zip(&rhs[n..]) {
            let mut got = Rational::zero();
            for (c, mj) in coeffs.iter().zip(&m) {
                if !c.is_zero() {
                    got += c * mj.eval(x)?;
                }
            }
            if &got != expected {
                return Err(Error::Consistency);
            }
        }
        return SymmetricPoly::from_coeffs(l, basis.into_iter().zip(coeffs));
    }
    Err(Error::Interpolation {
        attempts: sampler.max_attempts,
    })
}

/// Closed-form eigenvalue
/// `Σ_k ( q^{-1} abcd t^{2l-k-1} (q^{λ_k} - 1) + t^{k-1} (q^{-λ_k} - 1) )`.
pub fn eigenvalue_c(lam: &DominantWeight, p: &ParamSet) -> Rational {
    let l = lam.len() as i64;
    let one = Rational::one();
    let lead = p.abcd() / &p.q;
    lam.parts()
        .iter()
        .enumerate()
        .map(|(i, &part)| {
            let k = i as i64 + 1;
            &lead * powi(&p.t, 2 * l - k - 1) * (powi(&p.q, part) - &one)
                + powi(&p.t, k - 1) * (powi(&p.q, -part) - &one)
        })
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Matrix of the operator on `span{m_ν : ν ≤ λ}`.
///
/// `entries[(i, j)]` is the coefficient of `m_{basis[i]}` in `D m_{basis[j]}`:
/// column `j` is the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub basis: Vec<DominantWeight>,
    pub entries: ExactMatrix,
}

impl OperatorMatrix {
    pub fn index_of(&self, mu: &DominantWeight) -> Option<usize> {
        self.basis.binary_search(mu).ok()
    }

    /// Coefficient of `m_target` in `D m_source`.
    pub fn coupling(&self, source: &DominantWeight, target: &DominantWeight) -> Rational {
        match (self.index_of(source), self.index_of(target)) {
            (Some(s), Some(t)) => self.entries[(t, s)].clone(),
            _ => Rational::zero(),
        }
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.basis.len())
            .map(|i| self.entries[(i, i)].clone())
            .collect()
    }

    /// True when every nonzero entry maps a weight to one it dominates.
    pub fn is_dominance_triangular(&self) -> bool {
        let n = self.basis.len();
        (0..n).all(|t| {
            (0..n).all(|s| {
                self.entries[(t, s)].is_zero()
                    || dominance_leq(&self.basis[t], &self.basis[s]).unwrap_or(false)
            })
        })
    }
}

pub fn operator_matrix(lam: &DominantWeight, p: &ParamSet) -> Result<OperatorMatrix> {
    operator_matrix_with(lam, p, &Sampler::default())
}

pub fn operator_matrix_with(
    lam: &DominantWeight,
    p: &ParamSet,
    sampler: &Sampler,
) -> Result<OperatorMatrix> {
    let basis = weights_below(lam);
    let columns: Vec<SymmetricPoly> = basis
        .par_iter()
        .map(|nu| apply_d_with(&SymmetricPoly::basis(nu.clone()), p, sampler))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let mut entries = ExactMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        for (mu, c) in col.terms() {
            let i = basis.binary_search(mu).map_err(|_| Error::Consistency)?;
            entries[(i, j)] = c.clone();
        }
    }
    Ok(OperatorMatrix { basis, entries })
}

/// First pair `(λ, μ)` with `μ < λ` in `weights_below(λ)` and equal eigenvalues.
pub fn eigenvalue_collision(lam: &DominantWeight, p: &ParamSet) -> Option<DominantWeight> {
    let top = eigenvalue_c(lam, p);
    weights_below(lam)
        .into_iter()
        .filter(|mu| mu != lam)
        .find(|mu| eigenvalue_c(mu, p) == top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn w(p: &[i64]) -> DominantWeight {
        DominantWeight::new(p.to_vec()).unwrap()
    }

    fn zero_abcd(q: Rational) -> ParamSet {
        ParamSet::new(q, rat(1, 3), int(0), int(0), int(0), int(0)).unwrap()
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
    fn phi_one_variable_values() {
        let p = zero_abcd(rat(1, 2));
        assert_eq!(phi_plus_at(0, &[int(2)], &p).unwrap(), rat(1, 3));
        assert_eq!(phi_minus_at(0, &[int(2)], &p).unwrap(), rat(32, 21));
        assert!(matches!(phi_plus_at(0, &[int(1)], &p), Err(Error::Pole(_))));
        assert!(matches!(
            phi_minus_at(0, &[int(1)], &p),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn phi_pole_on_coincident_coordinates() {
        let p = generic();
        assert!(matches!(
            phi_plus_at(0, &[int(3), int(3)], &p),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            phi_minus_at(1, &[int(3), rat(1, 3)], &p),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn parameter_validation() {
        assert!(ParamSet::new(int(1), rat(1, 2), int(0), int(0), int(0), int(0)).is_err());
        assert!(ParamSet::new(rat(1, 2), int(0), int(0), int(0), int(0), int(0)).is_err());
        // abcd = 1 is excluded, abcd = -q is admitted
        assert!(ParamSet::new(rat(1, 2), rat(1, 2), int(1), int(1), int(1), int(1)).is_err());
        let edge = ParamSet::new(rat(1, 2), rat(1, 2), rat(-1, 2), int(1), int(1), int(1)).unwrap();
        assert!(edge.is_boundary());
        assert!(ParamSet::new(rat(1, 2), rat(1, 2), rat(-3, 4), int(1), int(1), int(1)).is_err());
        assert!(!generic().is_boundary());
        assert!(generic().is_orthogonality_grade());
    }

    #[test]
    fn annihilates_constants() {
        for l in 1..=3 {
            assert!(apply_d(&SymmetricPoly::one(l), &generic())
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn one_variable_first_orbit_sum_is_eigenvector() {
        let p = zero_abcd(rat(1, 2));
        let img = apply_d(&SymmetricPoly::basis(w(&[1])), &p).unwrap();
        // (1 - q) / q = 1 at q = 1/2
        assert_eq!(img, SymmetricPoly::basis(w(&[1])));
        assert_eq!(eigenvalue_c(&w(&[1]), &p), int(1));
    }

    #[test]
    fn eigenvalue_examples() {
        let p = generic();
        assert!(eigenvalue_c(&w(&[0, 0, 0]), &p).is_zero());
        assert_ne!(eigenvalue_c(&w(&[1, 0]), &p), eigenvalue_c(&w(&[0, 0]), &p));
    }

    #[test]
    fn regrouped_and_literal_forms_agree() {
        let p = generic();
        let f = SymmetricPoly::from_coeffs(2, [(w(&[2, 1]), int(1)), (w(&[1, 0]), rat(-3, 4))])
            .unwrap()
            .to_laurent();
        let x = [rat(5, 3), rat(-7, 2)];
        assert_eq!(
            image_at(&f, &x, &p).unwrap(),
            image_at_literal(&f, &x, &p).unwrap()
        );
    }

    #[test]
    fn first_orbit_sum_two_variables_is_triangular() {
        let p = generic();
        let img = apply_d(&SymmetricPoly::basis(w(&[1, 0])), &p).unwrap();
        assert!(img
            .support()
            .all(|mu| mu == &w(&[1, 0]) || mu == &w(&[0, 0])));
        // coefficient of m_(1,0) is 31187/31185 and of m_(0,0) is -5168/10395
        // (independent symbolic computation with rational-function cancellation)
        assert_eq!(img.coeff(&w(&[1, 0])), rat(31187, 31185));
        assert_eq!(img.coeff(&w(&[0, 0])), rat(-5168, 10395));
    }

    #[test]
    fn operator_matrix_small_cases() {
        let p = generic();
        let m0 = operator_matrix(&w(&[0, 0]), &p).unwrap();
        assert_eq!(m0.entries, ExactMatrix::zeros(1, 1));

        let q = zero_abcd(rat(1, 2));
        let m1 = operator_matrix(&w(&[1]), &q).unwrap();
        assert_eq!(m1.diagonal(), vec![int(0), int(1)]);
        assert!(m1.coupling(&w(&[1]), &w(&[0])).is_zero());

        let m = operator_matrix(&w(&[2, 1]), &p).unwrap();
        assert!(m.is_dominance_triangular());
        for (mu, d) in m.basis.iter().zip(m.diagonal()) {
            assert_eq!(d, eigenvalue_c(mu, &p));
        }
    }

    #[test]
    fn params_serialize_as_strings() {
        let p = generic();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"a\":\"1/5\""));
        let back: ParamSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = s.replace("\"q\":\"1/2\"", "\"q\":\"2\"");
        assert!(serde_json::from_str::<ParamSet>(&bad).is_err());
    }
}
