//! Numeric orthogonality checks on the compact torus.
//!
//! The weight is `Δ(x) = Δ^+(x) Δ^+(x^{-1})` with
//!
//! ```text
//! Δ^+(x) = Π_i (x_i^2; q)_∞ / (a x_i, b x_i, c x_i, d x_i; q)_∞
//!        · Π_{i<j} (x_i/x_j; q)_∞ (x_i x_j; q)_∞ / ((t x_i/x_j; q)_∞ (t x_i x_j; q)_∞)
//! ```
//!
//! every infinite product truncated to `N` factors. Integrals use the
//! normalized Haar measure, approximated by the mean over the product grid of
//! `M`-th roots of unity, which is exact for Laurent monomials whose
//! exponents are all smaller than `M` in absolute value.

use num_complex::Complex64;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::to_f64;
use crate::operator::ParamSet;
use crate::weights::SymmetricPoly;

/// Below this modulus a truncated denominator counts as vanishing.
pub const DEGENERATE_EPS: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericParams {
    pub q: f64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl NumericParams {
    pub fn new(q: f64, t: f64, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let p = NumericParams { q, t, a, b, c, d };
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParams(format!(
                "0 < q < 1 violated (q = {q})"
            )));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParams(format!(
                "0 < t < 1 violated (t = {t})"
            )));
        }
        if [a, b, c, d]
            .iter()
            .any(|x| !x.is_finite() || x.abs() >= 1.0)
        {
            return Err(Error::InvalidParams(
                "|a|, |b|, |c|, |d| < 1 required for the torus weight".into(),
            ));
        }
        Ok(p)
    }

    pub fn from_exact(p: &ParamSet) -> Result<Self> {
        if !p.is_orthogonality_grade() {
            return Err(Error::InvalidParams(
                "|a|, |b|, |c|, |d| < 1 required for the torus weight".into(),
            ));
        }
        NumericParams::new(
            to_f64(p.q()),
            to_f64(p.t()),
            to_f64(p.a()),
            to_f64(p.b()),
            to_f64(p.c()),
            to_f64(p.d()),
        )
    }
}

/// How grid sums are accumulated. Both are deterministic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Pairwise (tree) summation in double precision.
    #[default]
    Double,
    /// Neumaier-compensated summation in double precision.
    Compensated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Factors kept in every `(·; q)_∞`; zero means the weight is replaced by one.
    pub truncation: usize,
    /// Equispaced angles per torus dimension.
    pub grid: usize,
    pub precision: Precision,
}

impl QuadratureConfig {
    pub fn new(truncation: usize, grid: usize) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::Quadrature("truncation must be at least 1".into()));
        }
        if grid < 4 {
            return Err(Error::Quadrature("grid must have at least 4 points".into()));
        }
        Ok(QuadratureConfig {
            truncation,
            grid,
            precision: Precision::Double,
        })
    }

    /// Unit weight: integrates against plain Haar measure.
    pub fn unit_weight(grid: usize) -> Result<Self> {
        let mut cfg = QuadratureConfig::new(1, grid)?;
        cfg.truncation = 0;
        Ok(cfg)
    }

    /// `N = 40`, with `M = 64` up to two variables and `M = 32` beyond.
    pub fn default_for(l: usize) -> Self {
        QuadratureConfig {
            truncation: 40,
            grid: if l <= 2 { 64 } else { 32 },
            precision: Precision::Double,
        }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn doubled(&self) -> Self {
        QuadratureConfig {
            truncation: self.truncation * 2,
            grid: self.grid * 2,
            precision: self.precision,
        }
    }
}

/// Truncated `(z; q)_n` for complex `z`.
pub fn qpoch_complex(z: Complex64, q: f64, n: usize) -> Complex64 {
    let mut acc = Complex64::one();
    let mut zq = z;
    for _ in 0..n {
        acc *= Complex64::one() - zq;
        zq *= q;
    }
    acc
}

fn ratio(num: Complex64, den: Complex64) -> Result<Complex64> {
    if den.norm() < DEGENERATE_EPS {
        return Err(Error::DegeneratePoint);
    }
    Ok(num / den)
}

/// Truncated `Δ^+(x)`.
pub fn weight_plus(x: &[Complex64], p: &NumericParams, n: usize) -> Result<Complex64> {
    let mut acc = Complex64::one();
    for &xi in x {
        let num = qpoch_complex(xi * xi, p.q, n);
        let den = [p.a, p.b, p.c, p.d]
            .iter()
            .fold(Complex64::one(), |d, &s| d * qpoch_complex(xi * s, p.q, n));
        acc *= ratio(num, den)?;
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let quot = x[i] / x[j];
            let prod = x[i] * x[j];
            let num = qpoch_complex(quot, p.q, n) * qpoch_complex(prod, p.q, n);
            let den = qpoch_complex(quot * p.t, p.q, n) * qpoch_complex(prod * p.t, p.q, n);
            acc *= ratio(num, den)?;
        }
    }
    Ok(acc)
}

/// Truncated `Δ(x) = Δ^+(x) Δ^+(x^{-1})` at a torus point, i.e. `|Δ^+(x)|^2`.
pub fn weight(x: &[Complex64], p: &NumericParams, n: usize) -> Result<f64> {
    Ok(weight_plus(x, p, n)?.norm_sqr())
}

/// A symmetric polynomial flattened to `(exponent, coefficient)` pairs.
#[derive(Clone, Debug)]
pub struct FloatLaurent {
    terms: Vec<(Vec<i64>, f64)>,
}

impl FloatLaurent {
    pub fn from_symmetric(f: &SymmetricPoly) -> Self {
        FloatLaurent {
            terms: f
                .to_laurent()
                .terms()
                .map(|(e, c)| (e.0.clone(), to_f64(c)))
                .collect(),
        }
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.terms
            .iter()
            .flat_map(|(e, _)| e.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Value at the grid point `ω^{idx}`; `sign = -1` evaluates at the inverse.
    fn eval_grid(&self, roots: &[Complex64], idx: &[usize], sign: i64) -> Complex64 {
        let m = roots.len() as i64;
        self.terms
            .iter()
            .map(|(e, c)| {
                let phase: i64 = e.iter().zip(idx).map(|(a, &j)| a * j as i64).sum();
                roots[(sign * phase).rem_euclid(m) as usize] * *c
            })
            .sum()
    }
}

fn roots_of_unity(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64))
        .collect()
}

fn decode(mut flat: usize, l: usize, m: usize) -> Vec<usize> {
    let mut idx = vec![0; l];
    for slot in idx.iter_mut().rev() {
        *slot = flat % m;
        flat /= m;
    }
    idx
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Neumaier-compensated summation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn reduce(xs: &[f64], precision: Precision) -> f64 {
    match precision {
        Precision::Double => pairwise_sum(xs),
        Precision::Compensated => compensated_sum(xs),
    }
}

/// Polynomial values and weight at every grid point.
struct GridSamples {
    /// `None` marks an excluded degenerate point.
    points: Vec<Option<PointSample>>,
}

struct PointSample {
    weight: f64,
    fwd: Vec<Complex64>,
    inv: Vec<Complex64>,
}

fn sample_grid(
    l: usize,
    polys: &[FloatLaurent],
    p: &NumericParams,
    cfg: &QuadratureConfig,
) -> Result<GridSamples> {
    if cfg.grid < 4 {
        return Err(Error::Quadrature("grid must have at least 4 points".into()));
    }
    let m = cfg.grid;
    let total = m
        .checked_pow(l as u32)
        .ok_or_else(|| Error::Quadrature("grid too large".into()))?;
    let roots = roots_of_unity(m);
    let points = (0..total)
        .into_par_iter()
        .map(|flat| {
            let idx = decode(flat, l, m);
            let weight = if cfg.truncation == 0 {
                1.0
            } else {
                let x: Vec<Complex64> = idx.iter().map(|&j| roots[j]).collect();
                match weight(&x, p, cfg.truncation) {
                    Ok(w) => w,
                    Err(Error::DegeneratePoint) => return None,
                    Err(_) => unreachable!("weight only fails on degenerate points"),
                }
            };
            Some(PointSample {
                weight,
                fwd: polys.iter().map(|f| f.eval_grid(&roots, &idx, 1)).collect(),
                inv: polys
                    .iter()
                    .map(|f| f.eval_grid(&roots, &idx, -1))
                    .collect(),
            })
        })
        .collect();
    Ok(GridSamples { points })
}

impl GridSamples {
    fn skipped(&self) -> usize {
        self.points.iter().filter(|p| p.is_none()).count()
    }

    /// Mean of `f_i(x) f_j(x^{-1}) Δ(x)` over the retained points (real part).
    fn average(&self, i: usize, j: usize, precision: Precision) -> f64 {
        let vals: Vec<f64> = self
            .points
            .iter()
            .flatten()
            .map(|s| (s.fwd[i] * s.inv[j]).re * s.weight)
            .collect();
        if vals.is_empty() {
            return f64::NAN;
        }
        reduce(&vals, precision) / vals.len() as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusIntegral {
    pub value: f64,
    pub skipped_points: usize,
}

/// `∫ f(x) g(x^{-1}) Δ(x) dx` against normalized Haar measure.
pub fn torus_inner(
    f: &SymmetricPoly,
    g: &SymmetricPoly,
    p: &NumericParams,
    cfg: &QuadratureConfig,
) -> Result<TorusIntegral> {
    if f.nvars() != g.nvars() {
        return Err(Error::Dimension {
            expected: f.nvars(),
            found: g.nvars(),
        });
    }
    let polys = [
        FloatLaurent::from_symmetric(f),
        FloatLaurent::from_symmetric(g),
    ];
    let samples = sample_grid(f.nvars(), &polys, p, cfg)?;
    if samples.skipped() > 0 {
        log::warn!("{} degenerate grid points excluded", samples.skipped());
    }
    Ok(TorusIntegral {
        value: samples.average(0, 1, cfg.precision),
        skipped_points: samples.skipped(),
    })
}

/// Matrix of pairwise torus inner products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub entries: Vec<Vec<f64>>,
    pub skipped_points: usize,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `max_{i≠j} |G_ij| / sqrt(G_ii G_jj)`; zero for a 1×1 matrix.
    pub fn max_relative_offdiag(&self) -> f64 {
        let n = self.entries.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let scale = (self.entries[i][i] * self.entries[j][j]).sqrt();
                    worst = worst.max(self.entries[i][j].abs() / scale);
                }
            }
        }
        worst
    }

    pub fn max_abs_offdiag(&self) -> f64 {
        let n = self.entries.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.entries[i][j].abs())
            .fold(0.0, f64::max)
    }

    pub fn diagonal_positive(&self) -> bool {
        (0..self.entries.len()).all(|i| self.entries[i][i] > 0.0)
    }

    /// Largest entrywise change against another Gram matrix of the same shape.
    pub fn max_abs_delta(&self, other: &GramMatrix) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Gram matrix of arbitrary symmetric polynomials in the same variables.
pub fn gram_of(
    polys: &[SymmetricPoly],
    p: &NumericParams,
    cfg: &QuadratureConfig,
) -> Result<GramMatrix> {
    let Some(first) = polys.first() else {
        return Ok(GramMatrix {
            entries: Vec::new(),
            skipped_points: 0,
        });
    };
    let l = first.nvars();
    if let Some(bad) = polys.iter().find(|f| f.nvars() != l) {
        return Err(Error::Dimension {
            expected: l,
            found: bad.nvars(),
        });
    }
    let flat: Vec<FloatLaurent> = polys.iter().map(FloatLaurent::from_symmetric).collect();
    let samples = sample_grid(l, &flat, p, cfg)?;
    let n = polys.len();
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| samples.average(i, j, cfg.precision))
                .collect()
        })
        .collect();
    if samples.skipped() > 0 {
        log::warn!("{} degenerate grid points excluded", samples.skipped());
    }
    Ok(GramMatrix {
        entries,
        skipped_points: samples.skipped(),
    })
}

/// Gram matrix of the eigenfunctions `P_λ` for the given weights.
pub fn gram(
    lams: &[crate::weights::DominantWeight],
    p: &ParamSet,
    cfg: &QuadratureConfig,
) -> Result<GramMatrix> {
    let numeric = NumericParams::from_exact(p)?;
    let polys: Vec<SymmetricPoly> = lams
        .par_iter()
        .map(|lam| crate::solver::koornwinder(lam, p).map(|k| k.coeffs))
        .collect::<Result<_>>()?;
    gram_of(&polys, &numeric, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub truncation: usize,
    #[serde(rename = "M")]
    pub grid: usize,
    pub max_offdiag: f64,
    pub skipped_points: usize,
}

/// Gram matrices at `cfg` and `doublings` successive doublings of `N` and `M`.
pub fn convergence_study(
    polys: &[SymmetricPoly],
    p: &NumericParams,
    cfg: &QuadratureConfig,
    doublings: usize,
) -> Result<Vec<(ConvergenceRow, GramMatrix)>> {
    let mut out = Vec::with_capacity(doublings + 1);
    let mut c = *cfg;
    for _ in 0..=doublings {
        let g = gram_of(polys, p, &c)?;
        out.push((
            ConvergenceRow {
                truncation: c.truncation,
                grid: c.grid,
                max_offdiag: g.max_abs_offdiag(),
                skipped_points: g.skipped_points,
            },
            g,
        ));
        c = c.doubled();
    }
    Ok(out)
}

/// Largest modulus among the grid values of `f`, handy for scaling tolerances.
pub fn sup_norm_on_grid(f: &SymmetricPoly, grid: usize) -> f64 {
    let flat = FloatLaurent::from_symmetric(f);
    let l = f.nvars();
    let roots = roots_of_unity(grid);
    (0..grid.pow(l as u32))
        .map(|k| flat.eval_grid(&roots, &decode(k, l, grid), 1).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::DominantWeight;
    use num_traits::Zero;

    fn zero_params(q: f64) -> NumericParams {
        NumericParams::new(q, 0.5, 0.0, 0.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn one_variable_truncated_weight() {
        let p = zero_params(0.3);
        let x = Complex64::from_polar(1.0, 0.7);
        let expected = (Complex64::one() - x * x) * (Complex64::one() - x * x * 0.3);
        assert!((weight_plus(&[x], &p, 2).unwrap() - expected).norm() < 1e-15);
        // (0; q)_n = 1
        assert_eq!(qpoch_complex(Complex64::zero(), 0.3, 17), Complex64::one());
    }

    #[test]
    fn weight_at_i_single_factor() {
        let p = zero_params(0.4);
        let w = weight(&[Complex64::i()], &p, 1).unwrap();
        assert!((w - 4.0).abs() < 1e-14);
    }

    #[test]
    fn unit_weight_normalization_and_exactness() {
        let p = zero_params(0.5);
        let cfg = QuadratureConfig::unit_weight(16).unwrap();
        let one = SymmetricPoly::one(1);
        let m1 = SymmetricPoly::basis(DominantWeight::new(vec![1]).unwrap());
        assert!((torus_inner(&one, &one, &p, &cfg).unwrap().value - 1.0).abs() < 1e-15);
        assert!(torus_inner(&m1, &one, &p, &cfg).unwrap().value.abs() < 1e-15);
        // ∫ m_1(x) m_1(x^{-1}) dx = 2
        assert!((torus_inner(&m1, &m1, &p, &cfg).unwrap().value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0, 64).is_err());
        assert!(QuadratureConfig::new(10, 3).is_err());
        assert_eq!(QuadratureConfig::default_for(3).grid, 32);
        assert_eq!(QuadratureConfig::default_for(2).doubled().truncation, 80);
    }

    #[test]
    fn numeric_params_require_unit_disk() {
        assert!(NumericParams::new(0.5, 0.5, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(NumericParams::new(1.5, 0.5, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn summation_modes_agree() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        assert!((pairwise_sum(&xs) - compensated_sum(&xs)).abs() < 1e-12);
    }

    #[test]
    fn single_weight_gram() {
        let p = zero_params(0.5);
        let g = gram_of(
            &[SymmetricPoly::one(2)],
            &p,
            &QuadratureConfig::new(10, 16).unwrap(),
        )
        .unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.diagonal_positive());
        assert_eq!(g.max_relative_offdiag(), 0.0);
    }
}
