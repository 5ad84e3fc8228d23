//! Sparse multivariate polynomials over the input variables `x_1..x_p`.
//!
//! Monomials are keyed by [`ExponentVector`] (the multiplicity of each
//! variable). Keys are totally ordered in graded lexicographic order: first by
//! total degree, then lexicographically on the exponents. The position of a
//! monomial in that order is its index `k`, see [`monomial_index`] and
//! [`monomial_at`]. Because the order is graded, truncating a polynomial to a
//! lower order keeps a prefix of its terms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::Multiset;

/// Multiplicities `(t_1, ..., t_p)` of a monomial `x_1^t_1 ... x_p^t_p`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    /// The all-zeros vector of length `p`, i.e. the intercept.
    pub fn zeros(p: usize) -> Self {
        ExponentVector(vec![0; p])
    }

    /// The degree-one monomial `x_var` (0-based `var`).
    pub fn unit(p: usize, var: usize) -> Self {
        let mut e = vec![0; p];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `T = sum t_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_intercept(&self) -> bool {
        self.0.iter().all(|&t| t == 0)
    }

    /// Multiset of 1-based variable indices, index `i` repeated `t_i` times.
    pub fn to_multiset(&self) -> Multiset {
        monomial_to_multiset(self)
    }

    /// `x_1^t_1 * ... * x_p^t_p`, with `0^0 = 1`.
    pub fn monomial_value(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&t, _)| t > 0)
            .map(|(&t, &xi)| xi.powi(t as i32))
            .product()
    }

    /// Human-readable monomial such as `x1^2*x3`; `1` for the intercept.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &t)| t > 0)
            .map(|(i, &t)| {
                if t == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, t)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl<const N: usize> From<[u32; N]> for ExponentVector {
    fn from(v: [u32; N]) -> Self {
        ExponentVector(v.to_vec())
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) / i stays integral at every step.
        acc = acc
            .checked_mul(n as u128 - k as u128 + i)
            .ok_or_else(|| Error::Overflow(format!("C({n}, {k})")))?
            / i;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow(format!("C({n}, {k})")))
}

/// Number of ways to write `sum` as an ordered sum of `parts` non-negative integers.
fn compositions(sum: u64, parts: u64) -> Result<u64> {
    if parts == 0 {
        return Ok(u64::from(sum == 0));
    }
    binomial(sum + parts - 1, parts - 1)
}

/// `N_{p,Q}`: number of monomials of total degree at most `q` in `p` variables.
pub fn count_terms(p: usize, q: u32) -> Result<u64> {
    if p == 0 {
        return Err(Error::invalid("variable count p must be at least 1"));
    }
    let mut total: u64 = 0;
    for t in 0..=q as u64 {
        let n = binomial(p as u64 + t - 1, t)?;
        total = total
            .checked_add(n)
            .ok_or_else(|| Error::Overflow(format!("N_{{p={p},Q={q}}}")))?;
    }
    Ok(total)
}

/// All exponent vectors of length `p` and degree `<= q`, in graded lexicographic order.
pub fn enumerate_monomials(p: usize, q: u32) -> Result<Vec<ExponentVector>> {
    let n = count_terms(p, q)?;
    let n = usize::try_from(n).map_err(|_| Error::Overflow(format!("{n} monomials")))?;
    let mut out = Vec::with_capacity(n);
    let mut buf = vec![0u32; p];
    for degree in 0..=q {
        push_compositions(&mut buf, 0, degree, &mut out);
    }
    debug_assert_eq!(out.len(), n);
    Ok(out)
}

/// Monomials of exactly `degree`, ascending lexicographic.
pub fn monomials_of_degree(p: usize, degree: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut buf = vec![0u32; p];
    push_compositions(&mut buf, 0, degree, &mut out);
    out
}

fn push_compositions(buf: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<ExponentVector>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(ExponentVector(buf.to_vec()));
        return;
    }
    for v in 0..=remaining {
        buf[pos] = v;
        push_compositions(buf, pos + 1, remaining - v, out);
    }
    buf[pos] = 0;
}

/// Index `k` of `t` in the graded lexicographic enumeration.
///
/// The index does not depend on the polynomial order, only on `p`.
pub fn monomial_index(t: &ExponentVector) -> Result<u64> {
    let p = t.len();
    let degree = t.degree();
    let mut k = if degree == 0 {
        0
    } else {
        count_terms(p, degree - 1)?
    };
    let mut remaining = degree as u64;
    for (i, &ti) in t.as_slice().iter().enumerate() {
        let rest = (p - i - 1) as u64;
        for v in 0..ti as u64 {
            k += compositions(remaining - v, rest)?;
        }
        remaining -= ti as u64;
    }
    Ok(k)
}

/// Inverse of [`monomial_index`].
pub fn monomial_at(p: usize, k: u64) -> Result<ExponentVector> {
    if p == 0 {
        return Err(Error::invalid("variable count p must be at least 1"));
    }
    let mut degree = 0u32;
    let mut below = 0u64;
    loop {
        let here = binomial(p as u64 + degree as u64 - 1, degree as u64)?;
        if k < below + here {
            break;
        }
        below += here;
        degree += 1;
    }
    let mut rank = k - below;
    let mut remaining = degree as u64;
    let mut e = vec![0u32; p];
    for (i, slot) in e.iter_mut().enumerate().take(p - 1) {
        let rest = (p - i - 1) as u64;
        let mut v = 0u64;
        loop {
            let c = compositions(remaining - v, rest)?;
            if rank < c {
                break;
            }
            rank -= c;
            v += 1;
        }
        *slot = v as u32;
        remaining -= v;
    }
    e[p - 1] = remaining as u32;
    Ok(ExponentVector(e))
}

/// Multiset with variable `i` (1-based) repeated `t_i` times.
pub fn monomial_to_multiset(t: &ExponentVector) -> Multiset {
    Multiset::from_exponents(t.as_slice())
}

/// Sparse polynomial: absent keys have coefficient exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    p: usize,
    order: u32,
    terms: BTreeMap<ExponentVector, f64>,
}

impl Polynomial {
    /// The zero polynomial in `p` variables with nominal order `order`.
    pub fn zero(p: usize, order: u32) -> Self {
        Polynomial {
            p,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(p: usize, order: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, f64)>,
    {
        if p == 0 {
            return Err(Error::invalid("variable count p must be at least 1"));
        }
        let mut poly = Polynomial::zero(p, order);
        for (t, c) in terms {
            poly.add_term(t, c)?;
        }
        poly.normalize();
        Ok(poly)
    }

    /// `bias + sum_i weights[i] * x_{i+1}`, an order-1 polynomial.
    pub fn affine(bias: f64, weights: &[f64]) -> Result<Self> {
        let p = weights.len();
        let terms = std::iter::once((ExponentVector::zeros(p), bias)).chain(
            weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (ExponentVector::unit(p, i), w)),
        );
        Polynomial::from_terms(p, 1, terms)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest degree among stored terms (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, ExponentVector::degree)
    }

    pub fn coef(&self, t: &ExponentVector) -> f64 {
        self.terms.get(t).copied().unwrap_or(0.0)
    }

    pub fn intercept(&self) -> f64 {
        self.coef(&ExponentVector::zeros(self.p))
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    /// Adds `coef` to the coefficient of `t`.
    pub fn add_term(&mut self, t: ExponentVector, coef: f64) -> Result<()> {
        if t.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: t.len(),
                context: "exponent vector length",
            });
        }
        if t.degree() > self.order {
            return Err(Error::invalid(format!(
                "term {t} has degree {} above polynomial order {}",
                t.degree(),
                self.order
            )));
        }
        *self.terms.entry(t).or_insert(0.0) += coef;
        Ok(())
    }

    /// Drops entries that are exactly zero.
    pub fn normalize(&mut self) {
        self.terms.retain(|_, c| *c != 0.0);
    }

    /// Largest absolute coefficient difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Polynomial) -> f64 {
        let mut worst: f64 = 0.0;
        for (t, c) in &self.terms {
            worst = worst.max((c - other.coef(t)).abs());
        }
        for (t, c) in &other.terms {
            if !self.terms.contains_key(t) {
                worst = worst.max(c.abs());
            }
        }
        worst
    }

    /// Coefficient-wise equality within `tol` absolute; `tol = 0` is exact.
    pub fn approx_eq(&self, other: &Polynomial, tol: f64) -> bool {
        self.p == other.p && self.max_abs_diff(other) <= tol
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: x.len(),
                context: "evaluation point",
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(t, c)| c * t.monomial_value(x))
            .sum())
    }

    /// Dense coefficient vector indexed by graded-lex position, length `N_{p,order}`.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        let n = count_terms(self.p, self.order)? as usize;
        let mut dense = vec![0.0; n];
        for (t, &c) in &self.terms {
            dense[monomial_index(t)? as usize] = c;
        }
        Ok(dense)
    }

    /// The `k` terms with the largest absolute coefficient, ties in graded-lex order.
    pub fn top_k(&self, k: usize) -> Vec<(ExponentVector, f64)> {
        let mut all: Vec<(ExponentVector, f64)> =
            self.terms.iter().map(|(t, &c)| (t.clone(), c)).collect();
        all.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0)));
        all.truncate(k);
        all
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PolynomialFile::try_from(self)?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Polynomial::from_json(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// `weights[0] + sum_i weights[i] * polys[i-1]`, term by term.
pub fn linear_combination(weights: &[f64], polys: &[&Polynomial]) -> Result<Polynomial> {
    if weights.len() != polys.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: polys.len() + 1,
            got: weights.len(),
            context: "linear combination weights (bias first)",
        });
    }
    let first = polys
        .first()
        .ok_or_else(|| Error::invalid("linear combination needs at least one polynomial"))?;
    let (p, order) = (first.p, first.order);
    if let Some(bad) = polys.iter().find(|q| q.p != p || q.order != order) {
        return Err(Error::invalid(format!(
            "mismatched polynomials: (p={}, order={}) vs (p={p}, order={order})",
            bad.p, bad.order
        )));
    }
    let mut out = Polynomial::zero(p, order);
    out.terms.insert(ExponentVector::zeros(p), weights[0]);
    for (w, poly) in weights[1..].iter().zip(polys) {
        if *w == 0.0 {
            continue;
        }
        for (t, c) in &poly.terms {
            *out.terms.entry(t.clone()).or_insert(0.0) += w * c;
        }
    }
    out.normalize();
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TermEntry {
    exponents: Vec<u32>,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialFile {
    p: usize,
    order: u32,
    terms: Vec<TermEntry>,
}

impl TryFrom<&Polynomial> for PolynomialFile {
    type Error = Error;

    fn try_from(poly: &Polynomial) -> Result<Self> {
        let terms = poly
            .terms
            .iter()
            .map(|(t, &coef)| {
                if coef.is_finite() {
                    Ok(TermEntry {
                        exponents: t.0.clone(),
                        coef,
                    })
                } else {
                    Err(Error::invalid(format!(
                        "coefficient of {t} is {coef}; JSON cannot represent it"
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Ok(PolynomialFile {
            p: poly.p,
            order: poly.order,
            terms,
        })
    }
}

impl TryFrom<PolynomialFile> for Polynomial {
    type Error = Error;

    fn try_from(file: PolynomialFile) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let terms = file
            .terms
            .into_iter()
            .map(|e| {
                let t = ExponentVector(e.exponents);
                if !seen.insert(t.clone()) {
                    return Err(Error::invalid(format!("duplicate term {t}")));
                }
                Ok((t, e.coef))
            })
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(file.p, file.order, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev<const N: usize>(e: [u32; N]) -> ExponentVector {
        ExponentVector::from(e)
    }

    #[test]
    fn count_terms_examples() {
        assert_eq!(count_terms(1, 1).unwrap(), 2);
        assert_eq!(count_terms(3, 2).unwrap(), 10);
        assert_eq!(count_terms(5, 0).unwrap(), 1);
    }

    #[test]
    fn count_terms_brute_force() {
        for p in 1..=4usize {
            for q in 0..=4u32 {
                let mut n = 0;
                let bound = (q + 1).pow(p as u32);
                for code in 0..bound {
                    let mut c = code;
                    let mut deg = 0;
                    for _ in 0..p {
                        deg += c % (q + 1);
                        c /= q + 1;
                    }
                    if deg <= q {
                        n += 1;
                    }
                }
                assert_eq!(count_terms(p, q).unwrap(), n, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn count_terms_overflow_is_an_error() {
        assert!(matches!(count_terms(1 << 20, 40), Err(Error::Overflow(_))));
        assert!(count_terms(0, 2).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_monomials(2, 1).unwrap(),
            vec![ev([0, 0]), ev([0, 1]), ev([1, 0])]
        );
        assert_eq!(
            enumerate_monomials(2, 2).unwrap(),
            vec![
                ev([0, 0]),
                ev([0, 1]),
                ev([1, 0]),
                ev([0, 2]),
                ev([1, 1]),
                ev([2, 0])
            ]
        );
        assert_eq!(
            enumerate_monomials(1, 3).unwrap(),
            vec![ev([0]), ev([1]), ev([2]), ev([3])]
        );
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        for p in 1..=6usize {
            for q in 0..=6u32 {
                let all = enumerate_monomials(p, q).unwrap();
                assert_eq!(all.len() as u64, count_terms(p, q).unwrap());
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                assert!(all.iter().all(|t| t.degree() <= q && t.len() == p));
                for (k, t) in all.iter().enumerate() {
                    assert_eq!(monomial_index(t).unwrap(), k as u64);
                    assert_eq!(&monomial_at(p, k as u64).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn multiset_examples() {
        assert_eq!(ev([2, 1, 0, 1]).to_multiset().elements(), vec![1, 1, 2, 4]);
        assert!(ev([0, 0, 0]).to_multiset().is_empty());
        assert_eq!(ev([0, 3]).to_multiset().elements(), vec![2, 2, 2]);
    }

    #[test]
    fn multiset_map_is_injective() {
        let all = enumerate_monomials(4, 4).unwrap();
        let set: std::collections::BTreeSet<Vec<usize>> =
            all.iter().map(|t| t.to_multiset().elements()).collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn evaluate_examples() {
        let poly = Polynomial::from_terms(2, 1, [(ev([0, 0]), 1.0), (ev([1, 0]), 2.0)]).unwrap();
        assert_eq!(poly.evaluate(&[3.0, 7.0]).unwrap(), 7.0);
        assert_eq!(poly.evaluate(&[0.0, 0.0]).unwrap(), poly.intercept());

        let poly = Polynomial::from_terms(2, 3, [(ev([2, 1]), -2.0)]).unwrap();
        assert_eq!(poly.evaluate(&[2.0, 0.5]).unwrap(), -4.0);
        assert!(poly.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn linear_combination_examples() {
        let p = Polynomial::from_terms(2, 1, [(ev([1, 0]), 3.0), (ev([0, 0]), 0.5)]).unwrap();
        let shifted = linear_combination(&[2.0, 1.0], &[&p]).unwrap();
        assert_eq!(shifted.intercept(), 2.5);
        assert_eq!(shifted.coef(&ev([1, 0])), 3.0);

        let same = linear_combination(&[0.0, 0.5, 0.5], &[&p, &p]).unwrap();
        assert!(same.approx_eq(&p, 0.0));

        let a = Polynomial::from_terms(2, 1, [(ev([1, 0]), 3.0)]).unwrap();
        let b = Polynomial::from_terms(2, 1, [(ev([1, 0]), 1.0), (ev([0, 1]), 4.0)]).unwrap();
        let got = linear_combination(&[1.0, 2.0, -1.0], &[&a, &b]).unwrap();
        let want = Polynomial::from_terms(
            2,
            1,
            [(ev([0, 0]), 1.0), (ev([1, 0]), 5.0), (ev([0, 1]), -4.0)],
        )
        .unwrap();
        assert!(got.approx_eq(&want, 0.0));
        for x in [[0.3, -0.9], [1.5, 2.0], [-4.0, 0.25]] {
            let direct = 1.0 + 2.0 * a.evaluate(&x).unwrap() - b.evaluate(&x).unwrap();
            assert!((got.evaluate(&x).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_combination_rejects_mismatch() {
        let a = Polynomial::zero(2, 1);
        let b = Polynomial::zero(3, 1);
        let c = Polynomial::zero(2, 2);
        assert!(linear_combination(&[0.0, 1.0, 1.0], &[&a, &b]).is_err());
        assert!(linear_combination(&[0.0, 1.0, 1.0], &[&a, &c]).is_err());
        assert!(linear_combination(&[0.0], &[&a]).is_err());
    }

    #[test]
    fn normalization_drops_zeros() {
        let poly =
            Polynomial::from_terms(1, 2, [(ev([1]), 1.0), (ev([1]), -1.0), (ev([2]), 0.0)])
                .unwrap();
        assert!(poly.is_empty());
    }

    #[test]
    fn add_term_validates() {
        let mut poly = Polynomial::zero(2, 2);
        assert!(poly.add_term(ev([3, 0]), 1.0).is_err());
        assert!(poly.add_term(ev([1]), 1.0).is_err());
    }

    #[test]
    fn json_layout() {
        let poly = Polynomial::from_terms(
            2,
            2,
            [(ev([1, 1]), 0.1), (ev([0, 0]), -3.0), (ev([0, 1]), 1e-300)],
        )
        .unwrap();
        let json = poly.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["p"], 2);
        assert_eq!(value["order"], 2);
        let exps: Vec<_> = value["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["exponents"].clone())
            .collect();
        assert_eq!(exps, vec![serde_json::json!([0, 0]), serde_json::json!([0, 1]), serde_json::json!([1, 1])]);
        assert_eq!(Polynomial::from_json(&json).unwrap(), poly);
    }

    #[test]
    fn json_rejects_bad_terms() {
        let dup = r#"{"p":1,"order":1,"terms":[{"exponents":[1],"coef":1.0},{"exponents":[1],"coef":2.0}]}"#;
        assert!(Polynomial::from_json(dup).is_err());
        let deep = r#"{"p":1,"order":1,"terms":[{"exponents":[2],"coef":1.0}]}"#;
        assert!(Polynomial::from_json(deep).is_err());
        let mut nan = Polynomial::zero(1, 1);
        nan.add_term(ev([1]), f64::NAN).unwrap();
        assert!(nan.to_json().is_err());
    }

    #[test]
    fn top_k_orders_by_magnitude() {
        let poly = Polynomial::from_terms(
            2,
            2,
            [(ev([0, 0]), 0.1), (ev([1, 0]), -5.0), (ev([0, 1]), 2.0), (ev([2, 0]), 2.0)],
        )
        .unwrap();
        let top = poly.top_k(3);
        assert_eq!(top[0], (ev([1, 0]), -5.0));
        assert_eq!(top[1], (ev([0, 1]), 2.0));
        assert_eq!(top[2], (ev([2, 0]), 2.0));
    }

    #[test]
    fn labels() {
        assert_eq!(ev([0, 0]).label(), "1");
        assert_eq!(ev([2, 0, 1]).label(), "x1^2*x3");
    }
}
