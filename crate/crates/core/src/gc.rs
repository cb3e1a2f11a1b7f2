//! Elements of the general conformal algebra `gc_N`, the lambda-bracket, the
//! algebra-axiom checkers, the canonical embedding of `gc_1`, and the
//! combinatorial polynomial identities used by the decomposition machinery.
//!
//! An element is a finite sum `Σ_n Σ_{i,j} f_{ij}^{[n]}(∂) J^n_{E_ij}`, stored
//! per degree as an `N×N` matrix of `∂`-polynomials. The bracket of two basis
//! elements is
//!
//! ```text
//! [J^m_A λ J^n_B] = Σ_{s=0..m} C(m,s) (∂+λ)^s J^{m+n−s}_{AB}
//!                 − Σ_{s=0..n} C(n,s) (−λ)^s  J^{m+n−s}_{BA}
//! ```
//!
//! extended to arbitrary elements by sesquilinearity: a coefficient `f(∂)` on
//! the left contributes `f(−λ)`, on the right `f(∂+λ)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::matrix::PolyMatrix;
use crate::poly::{MPoly, Var};
use crate::scalar::Scalar;

/// Element of `gc_N`: degree `n ↦ N×N` matrix of structure polynomials in `∂`.
///
/// No all-zero matrices are stored; the zero element has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcElement {
    size: usize,
    terms: BTreeMap<u32, PolyMatrix>,
}

/// Element of `ℂ[λ] ⊗ gc_N` (bracket output): degree `n ↦ N×N` matrix of
/// polynomials in `∂` and `λ` (and `μ` inside the Jacobi checker).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcLambdaValue {
    size: usize,
    terms: BTreeMap<u32, PolyMatrix>,
}

/// Witness for a failed algebra-axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub degree: u32,
    pub row: usize,
    pub col: usize,
    /// Difference between the two sides at the witness position.
    pub difference: MPoly,
}

impl GcElement {
    pub fn zero(size: usize) -> Self {
        assert!(size >= 1, "gc_N needs N >= 1");
        GcElement {
            size,
            terms: BTreeMap::new(),
        }
    }

    /// `f(∂) J^n_A` for a matrix `A` of `∂`-polynomials (commonly constant).
    pub fn term(size: usize, n: u32, matrix: PolyMatrix) -> Result<Self, Error> {
        let mut g = Self::zero(size);
        g.set_term(n, matrix)?;
        Ok(g)
    }

    /// `J^n_{E_ij}` with a polynomial coefficient (zero-based `i`, `j`).
    pub fn single(size: usize, n: u32, i: usize, j: usize, coeff: MPoly) -> Result<Self, Error> {
        let mut m = PolyMatrix::zeros(size, size);
        m[(i, j)] = coeff;
        Self::term(size, n, m)
    }

    fn set_term(&mut self, n: u32, matrix: PolyMatrix) -> Result<(), Error> {
        if matrix.rows() != self.size || matrix.cols() != self.size {
            return Err(Error::DimensionMismatch(format!(
                "term matrix {}x{} in gc_{}",
                matrix.rows(),
                matrix.cols(),
                self.size
            )));
        }
        for i in 0..self.size {
            for j in 0..self.size {
                if matrix[(i, j)].degree_in(Var::Lambda) > 0
                    || matrix[(i, j)].degree_in(Var::Mu) > 0
                {
                    return Err(Error::InvalidInput(
                        "structure polynomials may only use ∂".into(),
                    ));
                }
            }
        }
        if !matrix.is_zero() {
            self.terms.insert(n, matrix);
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal degree with a nonzero structure matrix; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn term_matrix(&self, n: u32) -> Option<&PolyMatrix> {
        self.terms.get(&n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &PolyMatrix)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &GcElement) -> Result<GcElement, Error> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch("gc element addition".into()));
        }
        let mut out = self.clone();
        for (&n, m) in &other.terms {
            let sum = match out.terms.get(&n) {
                Some(cur) => cur + m,
                None => m.clone(),
            };
            if sum.is_zero() {
                out.terms.remove(&n);
            } else {
                out.terms.insert(n, sum);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> GcElement {
        GcElement {
            size: self.size,
            terms: self.terms.iter().map(|(&n, m)| (n, -m)).collect(),
        }
    }

    pub fn sub(&self, other: &GcElement) -> Result<GcElement, Error> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> GcElement {
        if c.is_zero() {
            return GcElement::zero(self.size);
        }
        GcElement {
            size: self.size,
            terms: self.terms.iter().map(|(&n, m)| (n, m.scale(c))).collect(),
        }
    }

    /// Multiplies every structure polynomial by a `∂`-polynomial (the
    /// `ℂ[∂]`-module structure of `gc_N`).
    pub fn scale_del_poly(&self, f: &MPoly) -> Result<GcElement, Error> {
        if f.degree_in(Var::Lambda) > 0 || f.degree_in(Var::Mu) > 0 {
            return Err(Error::InvalidInput("∂-scaling polynomial must use only ∂".into()));
        }
        if f.is_zero() {
            return Ok(GcElement::zero(self.size));
        }
        Ok(GcElement {
            size: self.size,
            terms: self
                .terms
                .iter()
                .map(|(&n, m)| (n, m.scale_poly(f)))
                .collect(),
        })
    }
}

impl GcLambdaValue {
    pub fn zero(size: usize) -> Self {
        GcLambdaValue {
            size,
            terms: BTreeMap::new(),
        }
    }

    /// Views an algebra element inside `ℂ[λ] ⊗ gc_N`.
    pub fn from_element(g: &GcElement) -> Self {
        GcLambdaValue {
            size: g.size,
            terms: g.terms.clone(),
        }
    }

    fn from_terms(size: usize, terms: BTreeMap<u32, PolyMatrix>) -> Self {
        let terms = terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        GcLambdaValue { size, terms }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn term_matrix(&self, n: u32) -> Option<&PolyMatrix> {
        self.terms.get(&n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &PolyMatrix)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &GcLambdaValue) -> Result<GcLambdaValue, Error> {
        if self.size != other.size {
            return Err(Error::DimensionMismatch("lambda value addition".into()));
        }
        let mut terms = self.terms.clone();
        for (&n, m) in &other.terms {
            let sum = match terms.get(&n) {
                Some(cur) => cur + m,
                None => m.clone(),
            };
            if sum.is_zero() {
                terms.remove(&n);
            } else {
                terms.insert(n, sum);
            }
        }
        Ok(GcLambdaValue::from_terms(self.size, terms))
    }

    pub fn neg(&self) -> GcLambdaValue {
        GcLambdaValue {
            size: self.size,
            terms: self.terms.iter().map(|(&n, m)| (n, -m)).collect(),
        }
    }

    pub fn sub(&self, other: &GcLambdaValue) -> Result<GcLambdaValue, Error> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a polynomial in `(∂, λ, μ)`.
    pub fn scale_poly(&self, p: &MPoly) -> GcLambdaValue {
        if p.is_zero() {
            return GcLambdaValue::zero(self.size);
        }
        GcLambdaValue {
            size: self.size,
            terms: self
                .terms
                .iter()
                .map(|(&n, m)| (n, m.scale_poly(p)))
                .collect(),
        }
    }

    /// Substitutes a variable in every coefficient.
    pub fn substitute(&self, v: Var, replacement: &MPoly) -> GcLambdaValue {
        GcLambdaValue::from_terms(
            self.size,
            self.terms
                .iter()
                .map(|(&n, m)| (n, m.substitute_all(v, replacement)))
                .collect(),
        )
    }

    /// First position where the two values differ.
    pub fn first_difference(&self, other: &GcLambdaValue) -> Option<AxiomWitness> {
        let degrees: std::collections::BTreeSet<u32> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        let zero = PolyMatrix::zeros(self.size, self.size);
        for n in degrees {
            let a = self.terms.get(&n).unwrap_or(&zero);
            let b = other.terms.get(&n).unwrap_or(&zero);
            for i in 0..self.size {
                for j in 0..self.size {
                    if a[(i, j)] != b[(i, j)] {
                        return Some(AxiomWitness {
                            degree: n,
                            row: i,
                            col: j,
                            difference: &a[(i, j)] - &b[(i, j)],
                        });
                    }
                }
            }
        }
        None
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> Scalar {
    let b = num_integer::binomial(BigInt::from(n), BigInt::from(k));
    Scalar::new(b, BigInt::from(1)).expect("denominator is one")
}

/// Bilinear bracket on raw term maps with an arbitrary parameter polynomial.
///
/// `param` is the formal parameter of the bracket (`λ`, `μ`, or `λ+μ`); the
/// left argument's `∂`-coefficients are evaluated at `−param`, the right
/// argument's at `∂+param`, and the basis brackets follow the `gc_N` formula.
/// Coefficients may carry other formal variables, which pass through inert;
/// this is what lets the Jacobi identity be checked by nesting.
pub(crate) fn bracket_terms(
    a: &BTreeMap<u32, PolyMatrix>,
    b: &BTreeMap<u32, PolyMatrix>,
    param: &MPoly,
) -> BTreeMap<u32, PolyMatrix> {
    let minus_param = -param;
    let del_plus_param = &MPoly::del() + param;

    let max_m = a.keys().next_back().copied().unwrap_or(0);
    let max_n = b.keys().next_back().copied().unwrap_or(0);
    let max_s = max_m.max(max_n) as usize;
    let mut plus_pows = Vec::with_capacity(max_s + 1);
    let mut minus_pows = Vec::with_capacity(max_s + 1);
    plus_pows.push(MPoly::one());
    minus_pows.push(MPoly::one());
    for s in 1..=max_s {
        plus_pows.push(&plus_pows[s - 1] * &del_plus_param);
        minus_pows.push(&minus_pows[s - 1] * &minus_param);
    }

    let mut out: BTreeMap<u32, PolyMatrix> = BTreeMap::new();
    let mut accumulate = |deg: u32, m: PolyMatrix| {
        if m.is_zero() {
            return;
        }
        out.entry(deg)
            .and_modify(|cur| *cur = &*cur + &m)
            .or_insert(m);
    };

    for (&m, pa) in a {
        let fa = pa.substitute_all(Var::Del, &minus_param);
        for (&n, pb) in b {
            let gb = pb.substitute_all(Var::Del, &del_plus_param);
            let fg = &fa * &gb;
            let gf = &gb * &fa;
            for s in 0..=m {
                let coeff = plus_pows[s as usize].scale(&binomial(m, s));
                accumulate(m + n - s, fg.scale_poly(&coeff));
            }
            for s in 0..=n {
                let coeff = minus_pows[s as usize].scale(&binomial(n, s));
                accumulate(m + n - s, -&gf.scale_poly(&coeff));
            }
        }
    }
    out.retain(|_, m| !m.is_zero());
    out
}

/// The lambda-bracket `[a λ b]` of two `gc_N` elements.
pub fn lambda_bracket(a: &GcElement, b: &GcElement) -> Result<GcLambdaValue, Error> {
    if a.size != b.size {
        return Err(Error::DimensionMismatch(format!(
            "bracket of gc_{} with gc_{}",
            a.size, b.size
        )));
    }
    Ok(GcLambdaValue::from_terms(
        a.size,
        bracket_terms(&a.terms, &b.terms, &MPoly::lambda()),
    ))
}

fn bracket_value(a: &GcLambdaValue, b: &GcLambdaValue, param: &MPoly) -> GcLambdaValue {
    GcLambdaValue::from_terms(a.size, bracket_terms(&a.terms, &b.terms, param))
}

/// Checks skew-symmetry `[a λ b] = −[b −λ−∂ a]` and reports the first
/// offending coefficient if it fails.
pub fn check_skew_symmetry(a: &GcElement, b: &GcElement) -> Result<Option<AxiomWitness>, Error> {
    let ab = lambda_bracket(a, b)?;
    let ba = lambda_bracket(b, a)?;
    Ok(skew_difference(&ab, &ba))
}

/// Core of the skew check on precomputed bracket values: compares `ab`
/// against `−(ba with λ ↦ −λ−∂)`. Exposed separately so corrupted values can
/// be exercised directly.
pub fn skew_difference(ab: &GcLambdaValue, ba: &GcLambdaValue) -> Option<AxiomWitness> {
    let swapped = ba
        .substitute(Var::Lambda, &-(&MPoly::lambda() + &MPoly::del()))
        .neg();
    ab.first_difference(&swapped)
}

/// Checks the Jacobi identity
/// `[a λ [b μ c]] = [[a λ b] λ+μ c] + [b μ [a λ c]]`.
pub fn check_jacobi(
    a: &GcElement,
    b: &GcElement,
    c: &GcElement,
) -> Result<Option<AxiomWitness>, Error> {
    if a.size != b.size || a.size != c.size {
        return Err(Error::DimensionMismatch("jacobi triple".into()));
    }
    let va = GcLambdaValue::from_element(a);
    let vb = GcLambdaValue::from_element(b);
    let vc = GcLambdaValue::from_element(c);
    let lam = MPoly::lambda();
    let mu = MPoly::mu();
    let lam_mu = &lam + &mu;

    let lhs = bracket_value(&va, &bracket_value(&vb, &vc, &mu), &lam);
    let rhs1 = bracket_value(&bracket_value(&va, &vb, &lam), &vc, &lam_mu);
    let rhs2 = bracket_value(&vb, &bracket_value(&va, &vc, &lam), &mu);
    Ok(lhs.first_difference(&rhs1.add(&rhs2).expect("sizes match")))
}

/// Canonical embedding `gc_1 → gc_N`, `f(∂)J^n ↦ f(∂)J^n_{I_N}`.
pub fn canonical_embed(g: &GcElement, n: usize) -> Result<GcElement, Error> {
    if g.size != 1 {
        return Err(Error::DimensionMismatch(
            "canonical embedding starts from gc_1".into(),
        ));
    }
    let mut out = GcElement::zero(n);
    for (&deg, m) in &g.terms {
        let coeff = m[(0, 0)].clone();
        out.set_term(deg, PolyMatrix::identity(n).scale_poly(&coeff))?;
    }
    Ok(out)
}

/// The three binomial identities used by the decomposition proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinatorialFormula {
    /// `Σ_{i=0..n} C(n,i)(−y)^i(x+y)^{n−i} = x^n`
    Telescope,
    /// `Σ_{i=2..n+1} C(n+1,i)(−y)^i(x+y)^{n+1−i} = (n+1)y(x+y)^n − (x+y)^{n+1} + x^{n+1}`
    TailShifted,
    /// `Σ_{i=2..n+1} C(n+1,i)(−y)^i x^{n+1−i} = (n+1)yx^n + (x−y)^{n+1} − x^{n+1}`
    TailPlain,
}

/// Evaluates both sides of the chosen formula as exact two-variable
/// polynomials and returns their equality.
pub fn combinatorial_identity(which: CombinatorialFormula, n: u32) -> bool {
    let x = MPoly::del();
    let y = MPoly::lambda();
    let xy = &x + &y;
    let neg_y = -&y;
    match which {
        CombinatorialFormula::Telescope => {
            let mut lhs = MPoly::zero();
            for i in 0..=n {
                let t = neg_y.pow(i).scale(&binomial(n, i));
                lhs = &lhs + &(&t * &xy.pow(n - i));
            }
            lhs == x.pow(n)
        }
        CombinatorialFormula::TailShifted => {
            let mut lhs = MPoly::zero();
            for i in 2..=(n + 1) {
                let t = neg_y.pow(i).scale(&binomial(n + 1, i));
                lhs = &lhs + &(&t * &xy.pow(n + 1 - i));
            }
            let rhs = &(&y.scale(&Scalar::from_int((n + 1) as i64)) * &xy.pow(n)) - &xy.pow(n + 1);
            lhs == &rhs + &x.pow(n + 1)
        }
        CombinatorialFormula::TailPlain => {
            let mut lhs = MPoly::zero();
            for i in 2..=(n + 1) {
                let t = neg_y.pow(i).scale(&binomial(n + 1, i));
                lhs = &lhs + &(&t * &x.pow(n + 1 - i));
            }
            let rhs = &(&y.scale(&Scalar::from_int((n + 1) as i64)) * &x.pow(n))
                + &(&x - &y).pow(n + 1);
            lhs == &rhs - &x.pow(n + 1)
        }
    }
}

impl fmt::Display for GcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, m) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.size == 1 {
                write!(f, "({})J^{}", m[(0, 0)], n)?;
            } else {
                write!(f, "J^{}_{}", n, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for GcLambdaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, m) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.size == 1 {
                write!(f, "({})J^{}", m[(0, 0)], n)?;
            } else {
                write!(f, "J^{}_{}", n, m)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    n: u32,
    entries: Vec<(usize, usize, MPoly)>,
}

#[derive(Serialize, Deserialize)]
struct GcElementJson {
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for GcElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(&n, m)| {
                let mut entries = Vec::new();
                for i in 0..self.size {
                    for j in 0..self.size {
                        if !m[(i, j)].is_zero() {
                            entries.push((i + 1, j + 1, m[(i, j)].clone()));
                        }
                    }
                }
                TermJson { n, entries }
            })
            .collect();
        GcElementJson {
            n: self.size,
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GcElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = GcElementJson::deserialize(deserializer)?;
        if raw.n == 0 {
            return Err(de::Error::custom("N must be at least 1"));
        }
        let mut g = GcElement::zero(raw.n);
        for t in raw.terms {
            let mut m = g
                .terms
                .remove(&t.n)
                .unwrap_or_else(|| PolyMatrix::zeros(raw.n, raw.n));
            for (i, j, p) in t.entries {
                if i == 0 || j == 0 || i > raw.n || j > raw.n {
                    return Err(de::Error::custom("entry index out of range (1-based)"));
                }
                m[(i - 1, j - 1)] = &m[(i - 1, j - 1)] + &p;
            }
            g.set_term(t.n, m).map_err(de::Error::custom)?;
        }
        Ok(g)
    }
}

/// Serializes like [`GcElement`] but with `(∂, λ)`-coefficients.
impl Serialize for GcLambdaValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(&n, m)| {
                let mut entries = Vec::new();
                for i in 0..self.size {
                    for j in 0..self.size {
                        if !m[(i, j)].is_zero() {
                            entries.push((i + 1, j + 1, m[(i, j)].clone()));
                        }
                    }
                }
                TermJson { n, entries }
            })
            .collect();
        GcElementJson {
            n: self.size,
            terms,
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn j(size: usize, n: u32, i: usize, jj: usize) -> GcElement {
        GcElement::single(size, n, i, jj, MPoly::one()).unwrap()
    }

    fn j1_gc1() -> GcElement {
        GcElement::term(1, 1, PolyMatrix::identity(1)).unwrap()
    }

    fn j0_gc1() -> GcElement {
        GcElement::term(1, 0, PolyMatrix::identity(1)).unwrap()
    }

    #[test]
    fn degree_zero_bracket_is_commutator() {
        // [J^0_A λ J^0_B] = J^0_{AB−BA}
        let a = PolyMatrix::from_scalar_grid(&[
            vec![s(1), s(2)],
            vec![s(0), s(-1)],
        ])
        .unwrap();
        let b = PolyMatrix::from_scalar_grid(&[
            vec![s(0), s(1)],
            vec![s(3), s(1)],
        ])
        .unwrap();
        let ga = GcElement::term(2, 0, a.clone()).unwrap();
        let gb = GcElement::term(2, 0, b.clone()).unwrap();
        let br = lambda_bracket(&ga, &gb).unwrap();
        let comm = &(&a * &b) - &(&b * &a);
        assert_eq!(br.degree(), Some(0));
        assert_eq!(br.term_matrix(0).unwrap(), &comm);
    }

    #[test]
    fn hv_brackets() {
        // [J^1 λ J^1] = (∂+2λ)J^1 and [J^1 λ J^0] = (∂+λ)J^0 in gc_1.
        let br11 = lambda_bracket(&j1_gc1(), &j1_gc1()).unwrap();
        let expect = MPoly::del() + MPoly::lambda().scale(&s(2));
        assert_eq!(br11.terms.len(), 1);
        assert_eq!(br11.term_matrix(1).unwrap()[(0, 0)], expect);

        let br10 = lambda_bracket(&j1_gc1(), &j0_gc1()).unwrap();
        assert_eq!(br10.terms.len(), 1);
        assert_eq!(
            br10.term_matrix(0).unwrap()[(0, 0)],
            MPoly::del() + MPoly::lambda()
        );

        let br00 = lambda_bracket(&j0_gc1(), &j0_gc1()).unwrap();
        assert!(br00.is_zero());
    }

    #[test]
    fn skew_symmetry_holds_and_detects_corruption() {
        assert_eq!(check_skew_symmetry(&j1_gc1(), &j1_gc1()).unwrap(), None);

        let a = j(2, 2, 0, 1);
        let b = j(2, 1, 1, 0);
        assert_eq!(check_skew_symmetry(&a, &b).unwrap(), None);

        // corrupt one coefficient of [a λ b] and recheck
        let ab = lambda_bracket(&a, &b).unwrap();
        let ba = lambda_bracket(&b, &a).unwrap();
        let mut corrupted = ab.clone();
        let key = *corrupted.terms.keys().next().unwrap();
        let mut m = corrupted.terms[&key].clone();
        m[(0, 0)] = &m[(0, 0)] + &MPoly::lambda();
        corrupted.terms.insert(key, m);
        let witness = skew_difference(&corrupted, &ba);
        assert!(witness.is_some());
    }

    #[test]
    fn jacobi_holds_for_generators() {
        let l = j1_gc1();
        assert_eq!(check_jacobi(&l, &l, &l).unwrap(), None);

        let a = j(3, 2, 0, 1);
        let b = j(3, 1, 1, 2);
        let c = j(3, 0, 2, 0);
        assert_eq!(check_jacobi(&a, &b, &c).unwrap(), None);
    }

    #[test]
    fn embedding_matches_canonical_form() {
        // (a∂+b)J^0 + J^1 ↦ (a∂+b)J^0_{I_N} + J^1_{I_N}
        let f0 = MPoly::linear_in_del(&s(2), &Scalar::ratio(-1, 3));
        let g1 = GcElement::term(1, 0, PolyMatrix::identity(1).scale_poly(&f0))
            .unwrap()
            .add(&j1_gc1())
            .unwrap();
        let emb = canonical_embed(&g1, 3).unwrap();
        assert_eq!(emb.degree(), Some(1));
        assert_eq!(
            emb.term_matrix(0).unwrap(),
            &PolyMatrix::identity(3).scale_poly(&f0)
        );
        assert_eq!(emb.term_matrix(1).unwrap(), &PolyMatrix::identity(3));

        assert!(canonical_embed(&GcElement::zero(1), 4).unwrap().is_zero());
    }

    #[test]
    fn embedding_preserves_brackets() {
        let x = GcElement::single(1, 2, 0, 0, MPoly::linear_in_del(&s(1), &s(-2))).unwrap();
        let y = GcElement::single(1, 1, 0, 0, MPoly::del()).unwrap();
        let n = 3;
        let lhs = lambda_bracket(
            &canonical_embed(&x, n).unwrap(),
            &canonical_embed(&y, n).unwrap(),
        )
        .unwrap();
        let inner = lambda_bracket(&x, &y).unwrap();
        // embed the gc_1 bracket value coefficient-wise
        let mut expect = GcLambdaValue::zero(n);
        for (&d, m) in inner.terms() {
            expect
                .terms
                .insert(d, PolyMatrix::identity(n).scale_poly(&m[(0, 0)]));
        }
        assert_eq!(lhs, expect);
    }

    #[test]
    fn combinatorial_identity_examples() {
        // n=2, formula (1): (x+y)² − 2y(x+y) + y² = x²
        assert!(combinatorial_identity(CombinatorialFormula::Telescope, 2));
        // n=1, formula (2): y² = 2y(x+y) − (x+y)² + x²
        assert!(combinatorial_identity(CombinatorialFormula::TailShifted, 1));
        // n=0, formula (3): empty sum equals yx⁰ + (x−y) − x = 0
        assert!(combinatorial_identity(CombinatorialFormula::TailPlain, 0));
    }

    #[test]
    fn sesquilinearity() {
        // bracket(∂a, b) = −λ·bracket(a,b); bracket(a, ∂b) = (∂+λ)·bracket(a,b)
        let a = j(2, 1, 0, 1);
        let b = j(2, 2, 1, 1);
        let base = lambda_bracket(&a, &b).unwrap();
        let da = a.scale_del_poly(&MPoly::del()).unwrap();
        let db = b.scale_del_poly(&MPoly::del()).unwrap();
        assert_eq!(
            lambda_bracket(&da, &b).unwrap(),
            base.scale_poly(&-MPoly::lambda())
        );
        assert_eq!(
            lambda_bracket(&a, &db).unwrap(),
            base.scale_poly(&(MPoly::del() + MPoly::lambda()))
        );
    }

    #[test]
    fn element_json_round_trip() {
        let g = GcElement::single(2, 1, 0, 1, MPoly::linear_in_del(&s(1), &Scalar::ratio(1, 2)))
            .unwrap()
            .add(&j(2, 0, 1, 1))
            .unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: GcElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}
