//! Sparse exact polynomials in the three formal variables `∂`, `λ`, `μ`.
//!
//! One polynomial type serves every context in the crate: structure
//! polynomials of algebra elements live in `∂` alone, bracket values and
//! module actions in `(∂, λ)`, and the Jacobi/commutator identities in all of
//! `(∂, λ, μ)`. Terms are kept in a canonical sparse map, so equality of
//! values is equality of representations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

/// The fixed variable set, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// `∂`, the translation generator.
    Del = 0,
    /// `λ`, the bracket parameter.
    Lambda = 1,
    /// `μ`, the second parameter used in Jacobi and commutator checks.
    Mu = 2,
}

impl Var {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Var::Del => "∂",
            Var::Lambda => "λ",
            Var::Mu => "μ",
        }
    }
}

type Exps = [u32; 3];

/// Sparse polynomial with exact rational coefficients.
///
/// Invariant: no stored zero coefficients; the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert([0, 0, 0], c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        let mut exps = [0u32; 3];
        exps[v.index()] = 1;
        MPoly::monomial(exps, Scalar::one())
    }

    /// Shorthand for `∂`.
    pub fn del() -> Self {
        MPoly::var(Var::Del)
    }

    /// Shorthand for `λ`.
    pub fn lambda() -> Self {
        MPoly::var(Var::Lambda)
    }

    /// Shorthand for `μ`.
    pub fn mu() -> Self {
        MPoly::var(Var::Mu)
    }

    pub fn monomial(exps: Exps, coeff: Scalar) -> Self {
        let mut p = MPoly::zero();
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// The linear polynomial `a∂ + b` used all over the Virasoro machinery.
    pub fn linear_in_del(a: &Scalar, b: &Scalar) -> Self {
        let mut p = MPoly::zero();
        p.add_term([1, 0, 0], a.clone());
        p.add_term([0, 0, 0], b.clone());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (exps, c) = self.terms.iter().next().unwrap();
                if *exps == [0, 0, 0] {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Degree in one variable; zero for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|e| e[v.index()])
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, exps: Exps) -> Scalar {
        self.terms.get(&exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, exps: Exps, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (*e, k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact substitution of one variable by an arbitrary polynomial.
    ///
    /// The substitution is simultaneous: occurrences of `v` inside
    /// `replacement` are not re-substituted.
    pub fn substitute(&self, v: Var, replacement: &MPoly) -> Self {
        let idx = v.index();
        let max_e = self.terms.keys().map(|e| e[idx]).max().unwrap_or(0);
        // replacement powers 0..=max_e
        let mut pows = Vec::with_capacity(max_e as usize + 1);
        pows.push(MPoly::one());
        for _ in 1..=max_e {
            pows.push(&pows[pows.len() - 1] * replacement);
        }
        let mut out = MPoly::zero();
        for (exps, c) in &self.terms {
            let e = exps[idx];
            let mut rest = *exps;
            rest[idx] = 0;
            let base = MPoly::monomial(rest, c.clone());
            out = &out + &(&base * &pows[e as usize]);
        }
        out
    }

    /// `Some(c)` with `self = c · other`, when the two are proportional.
    ///
    /// Zero is proportional to everything with factor zero; a nonzero
    /// polynomial is never proportional to zero.
    pub fn proportion_to(&self, other: &MPoly) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if other.is_zero() {
            return None;
        }
        let (e_s, c_s) = self.terms.iter().next_back().unwrap();
        let (e_o, c_o) = other.terms.iter().next_back().unwrap();
        if e_s != e_o {
            return None;
        }
        let ratio = c_s / c_o;
        if *self == other.scale(&ratio) {
            Some(ratio)
        } else {
            None
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest monomial first
        for (exps, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const_term = *exps == [0, 0, 0];
            if !abs.is_one() || is_const_term {
                write!(f, "{abs}")?;
            }
            for v in [Var::Del, Var::Lambda, Var::Mu] {
                let e = exps[v.index()];
                if e == 1 {
                    write!(f, "{}", v.symbol())?;
                } else if e > 1 {
                    write!(f, "{}^{}", v.symbol(), e)?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(u32, u32, u32, Scalar)> = self
            .terms
            .iter()
            .map(|(e, c)| (e[0], e[1], e[2], c.clone()))
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<(u32, u32, u32, Scalar)> = Vec::deserialize(deserializer)?;
        let mut p = MPoly::zero();
        for (e0, e1, e2, c) in rows {
            if p.terms.contains_key(&[e0, e1, e2]) {
                return Err(de::Error::custom("duplicate exponent triple"));
            }
            p.add_term([e0, e1, e2], c);
        }
        Ok(p)
    }
}
