//! Combinatorics of the BC weight lattice: dominant weights, the dominance
//! order, hyperoctahedral orbits, and the orbit-sum basis of invariants.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Exponent, LaurentPoly, Rational};

/// A weakly decreasing vector of nonnegative integers `λ_1 ≥ … ≥ λ_l ≥ 0`.
///
/// Ordered graded-lexicographically (size first, then lexicographic), which is
/// a linear extension of the dominance order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DominantWeight(Vec<i64>);

impl DominantWeight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p < 0) || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::NotDominant(parts));
        }
        Ok(DominantWeight(parts))
    }

    pub fn zero(l: usize) -> Self {
        DominantWeight(vec![0; l])
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

    /// `|λ| = λ_1 + … + λ_l`.
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }

    pub fn to_exponent(&self) -> Exponent {
        Exponent(self.0.clone())
    }
}

impl TryFrom<Vec<i64>> for DominantWeight {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        DominantWeight::new(v)
    }
}

impl From<DominantWeight> for Vec<i64> {
    fn from(w: DominantWeight) -> Self {
        w.0
    }
}

impl Ord for DominantWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DominantWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `mu ≤ lam` in dominance order: every partial sum of `mu` is at most the
/// corresponding partial sum of `lam`.
pub fn dominance_leq(mu: &DominantWeight, lam: &DominantWeight) -> Result<bool> {
    if mu.len() != lam.len() {
        return Err(Error::Dimension {
            expected: lam.len(),
            found: mu.len(),
        });
    }
    let mut sm = 0;
    let mut sl = 0;
    for (a, b) in mu.0.iter().zip(&lam.0) {
        sm += a;
        sl += b;
        if sm > sl {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All dominant `μ ≤ λ`, ascending in graded-lex order; `λ` itself is last.
pub fn weights_below(lam: &DominantWeight) -> Vec<DominantWeight> {
    let l = lam.len();
    let bounds: Vec<i64> = lam
        .0
        .iter()
        .scan(0, |s, &p| {
            *s += p;
            Some(*s)
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    below_dfs(&bounds, lam.0[0], 0, &mut cur, &mut out);
    out.sort();
    out
}

fn below_dfs(
    bounds: &[i64],
    cap: i64,
    partial: i64,
    cur: &mut Vec<i64>,
    out: &mut Vec<DominantWeight>,
) {
    let k = cur.len();
    if k == bounds.len() {
        out.push(DominantWeight(cur.clone()));
        return;
    }
    let hi = cap.min(bounds[k] - partial);
    for v in 0..=hi {
        cur.push(v);
        below_dfs(bounds, v, partial + v, cur, out);
        cur.pop();
    }
}

/// Every dominant weight of length `l` with `|μ| ≤ max_size`, in graded-lex order.
pub fn dominant_weights_up_to(l: usize, max_size: i64) -> Vec<DominantWeight> {
    fn rec(l: usize, cap: i64, left: i64, cur: &mut Vec<i64>, out: &mut Vec<DominantWeight>) {
        if cur.len() == l {
            out.push(DominantWeight(cur.clone()));
            return;
        }
        for v in 0..=cap.min(left) {
            cur.push(v);
            rec(l, v, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, max_size, max_size, &mut Vec::with_capacity(l), &mut out);
    out.sort();
    out
}

/// Distinct images of `lam` under signed permutations.
pub fn orbit(lam: &DominantWeight) -> BTreeSet<Exponent> {
    let mut perms = BTreeSet::new();
    let mut parts = lam.0.clone();
    parts.sort_unstable();
    // lexicographic next-permutation over a sorted multiset visits each arrangement once
    loop {
        perms.insert(parts.clone());
        if !next_permutation(&mut parts) {
            break;
        }
    }
    let mut out = BTreeSet::new();
    for p in perms {
        let nonzero: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
        for mask in 0u64..(1u64 << nonzero.len()) {
            let mut e = p.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    e[i] = -e[i];
                }
            }
            out.insert(Exponent(e));
        }
    }
    out
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The orbit sum `m_λ`: each distinct monomial of the orbit with coefficient one.
pub fn orbit_sum(lam: &DominantWeight) -> LaurentPoly {
    let mut p = LaurentPoly::zero(lam.len());
    for e in orbit(lam) {
        p.add_term(e, Rational::one());
    }
    p
}

/// Checks invariance under the generators of the hyperoctahedral group:
/// adjacent transpositions and inversion of the first variable.
pub fn is_w_invariant(f: &LaurentPoly) -> bool {
    let l = f.nvars();
    let flip = f.map_exponents(|e| {
        let mut v = e.to_vec();
        v[0] = -v[0];
        v
    });
    if &flip != f {
        return false;
    }
    (0..l.saturating_sub(1)).all(|i| {
        let swapped = f.map_exponents(|e| {
            let mut v = e.to_vec();
            v.swap(i, i + 1);
            v
        });
        &swapped == f
    })
}

/// A W-invariant Laurent polynomial written as `Σ c_μ m_μ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetricPoly {
    nvars: usize,
    coeffs: BTreeMap<DominantWeight, Rational>,
}

impl SymmetricPoly {
    pub fn zero(nvars: usize) -> Self {
        SymmetricPoly {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::basis(DominantWeight::zero(nvars))
    }

    /// The orbit sum `m_μ` as a one-term symmetric polynomial.
    pub fn basis(mu: DominantWeight) -> Self {
        let mut p = SymmetricPoly::zero(mu.len());
        p.add_term(mu, Rational::one());
        p
    }

    pub fn from_coeffs<I>(nvars: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DominantWeight, Rational)>,
    {
        let mut p = SymmetricPoly::zero(nvars);
        for (mu, c) in coeffs {
            if mu.len() != nvars {
                return Err(Error::Dimension {
                    expected: nvars,
                    found: mu.len(),
                });
            }
            p.add_term(mu, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DominantWeight, &Rational)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &DominantWeight> {
        self.coeffs.keys()
    }

    pub fn coeff(&self, mu: &DominantWeight) -> Rational {
        self.coeffs.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, mu: DominantWeight, c: Rational) {
        debug_assert_eq!(mu.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(mu.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&mu);
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
        for (mu, c) in &other.coeffs {
            out.add_term(mu.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (mu, c) in &other.coeffs {
            out.add_term(mu.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SymmetricPoly::zero(self.nvars);
        }
        SymmetricPoly {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Expands `Σ c_μ m_μ` into monomials.
    pub fn to_laurent(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (mu, c) in &self.coeffs {
            for e in orbit(mu) {
                out.add_term(e, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for SymmetricPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (mu, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "m{mu}")?;
            } else {
                write!(f, "{mag}*m{mu}")?;
            }
        }
        Ok(())
    }
}

/// Rewrites an invariant Laurent polynomial in the orbit-sum basis by
/// repeatedly peeling off the top dominant exponent.
pub fn to_orbit_basis(f: &LaurentPoly) -> Result<SymmetricPoly> {
    if !is_w_invariant(f) {
        return Err(Error::NotInvariant);
    }
    let l = f.nvars();
    let mut rest = f.clone();
    let mut out = SymmetricPoly::zero(l);
    while !rest.is_zero() {
        let top = rest
            .terms()
            .filter_map(|(e, _)| DominantWeight::new(e.0.clone()).ok())
            .max()
            .ok_or(Error::NotInvariant)?;
        let c = rest.coeff(&top.to_exponent());
        rest = rest.checked_sub(&orbit_sum(&top).scale(&c))?;
        out.add_term(top, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn w(p: &[i64]) -> DominantWeight {
        DominantWeight::new(p.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_dominant() {
        assert!(DominantWeight::new(vec![1, 2]).is_err());
        assert!(DominantWeight::new(vec![1, -1]).is_err());
        assert!(DominantWeight::new(vec![]).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&w(&[1, 1]), &w(&[2, 0])).unwrap());
        assert!(dominance_leq(&w(&[2, 1]), &w(&[2, 1])).unwrap());
        assert!(!dominance_leq(&w(&[2, 2]), &w(&[3, 0])).unwrap());
        assert!(dominance_leq(&w(&[1]), &w(&[1, 0])).is_err());
    }

    #[test]
    fn weights_below_examples() {
        assert_eq!(weights_below(&w(&[0, 0, 0])), vec![w(&[0, 0, 0])]);
        assert_eq!(weights_below(&w(&[2])), vec![w(&[0]), w(&[1]), w(&[2])]);
        assert_eq!(
            weights_below(&w(&[1, 1])),
            vec![w(&[0, 0]), w(&[1, 0]), w(&[1, 1])]
        );
    }

    #[test]
    fn orbit_sum_examples() {
        assert_eq!(orbit_sum(&w(&[0, 0])), LaurentPoly::one(2));
        let m10 = LaurentPoly::from_terms(
            2,
            [
                (vec![1, 0], int(1)),
                (vec![-1, 0], int(1)),
                (vec![0, 1], int(1)),
                (vec![0, -1], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(orbit_sum(&w(&[1, 0])), m10);
        assert_eq!(orbit_sum(&w(&[1, 1])).len(), 4);
        assert_eq!(orbit(&w(&[2, 1, 0])).len(), 24);
        assert_eq!(orbit(&w(&[1, 1, 1])).len(), 8);
    }

    #[test]
    fn invariance_examples() {
        assert!(is_w_invariant(&orbit_sum(&w(&[1, 0]))));
        assert!(!is_w_invariant(&LaurentPoly::var(1, 0)));
        let partial =
            LaurentPoly::from_terms(2, [(vec![1, 1], int(1)), (vec![-1, -1], int(1))]).unwrap();
        assert!(!is_w_invariant(&partial));
    }

    #[test]
    fn orbit_basis_examples() {
        let one = to_orbit_basis(&LaurentPoly::one(2)).unwrap();
        assert_eq!(one, SymmetricPoly::one(2));

        let f = &orbit_sum(&w(&[1, 0])) + &orbit_sum(&w(&[0, 0])).scale(&int(3));
        let c = to_orbit_basis(&f).unwrap();
        assert_eq!(c.coeff(&w(&[1, 0])), int(1));
        assert_eq!(c.coeff(&w(&[0, 0])), int(3));
        assert_eq!(c.len(), 2);

        let x1 =
            &LaurentPoly::var(2, 0) + &LaurentPoly::from_terms(2, [(vec![-1, 0], int(1))]).unwrap();
        let x2 =
            &LaurentPoly::var(2, 1) + &LaurentPoly::from_terms(2, [(vec![0, -1], int(1))]).unwrap();
        let prod = to_orbit_basis(&(&x1 * &x2)).unwrap();
        assert_eq!(prod, SymmetricPoly::basis(w(&[1, 1])));

        assert_eq!(
            to_orbit_basis(&LaurentPoly::var(2, 0)),
            Err(Error::NotInvariant)
        );
    }

    #[test]
    fn serde_validates_dominance() {
        let ok: DominantWeight = serde_json::from_str("[2,1,0]").unwrap();
        assert_eq!(ok, w(&[2, 1, 0]));
        assert!(serde_json::from_str::<DominantWeight>("[0,1]").is_err());
        assert_eq!(serde_json::to_string(&ok).unwrap(), "[2,1,0]");
    }
}
