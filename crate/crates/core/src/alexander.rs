//! Integer Laurent polynomials and Fox's formula for the first homology of
//! cyclic branched covers.
//!
//! For a knot with Alexander polynomial Δ, |H1(Σn)| = |∏_{i=1}^{n-1} Δ(ζ_n^i)|,
//! infinite exactly when the product vanishes. The product is computed as the
//! absolute resultant of Δ and 1 + t + ... + t^{n-1}, with no floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::scalar::ExactInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlexanderError {
    #[error("Δ(1) = {0}, expected ±1 for an Alexander polynomial")]
    NotAlexanderNormalized(String),
    #[error("cover degree {0} must be at least 2")]
    InvalidDegree(i64),
    #[error("cannot parse polynomial {0:?}: {1}")]
    Parse(String, String),
}

/// Finitely supported map exponent → coefficient, with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly<T> {
    terms: BTreeMap<i64, T>,
}

impl<T: ExactInt> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::from_terms([(0, c)])
    }

    pub fn monomial(exp: i64, c: T) -> Self {
        Self::from_terms([(exp, c)])
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, T)>) -> Self {
        let mut map: BTreeMap<i64, T> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert_with(T::zero);
            *slot = slot.clone() + c;
        }
        map.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: map }
    }

    /// Ascending coefficients c0 + c1 t + ... of an ordinary polynomial.
    pub fn from_coeffs(coeffs: &[T]) -> Self {
        Self::from_terms(coeffs.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coefficient(&self, exp: i64) -> T {
        self.terms.get(&exp).cloned().unwrap_or_else(T::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficients after multiplying by the unit t^{-min_exp}, ascending.
    pub fn dense(&self) -> Vec<T> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Vec::new();
        };
        (lo..=hi).map(|e| self.coefficient(e)).collect()
    }

    /// Value at t = ±1, where negative powers are harmless.
    pub fn eval_unit(&self, t_negative: bool) -> T {
        self.terms.iter().fold(T::zero(), |acc, (&e, c)| {
            if t_negative && e.rem_euclid(2) == 1 {
                acc - c.clone()
            } else {
                acc + c.clone()
            }
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|(&e1, c1)| {
            other
                .terms
                .iter()
                .map(move |(&e2, c2)| (e1 + e2, c1.clone() * c2.clone()))
        }))
    }

    /// Δ(1/t).
    pub fn reciprocal(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (-e, c.clone())))
    }
}

impl<T: ExactInt> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{mag}t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{mag}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl<T: ExactInt> FromStr for LaurentPoly<T> {
    type Err = AlexanderError;

    /// Parses sums of terms like `3t^-2`, `- t`, `2*t^4`, `7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| AlexanderError::Parse(s.to_string(), msg.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // split into signed terms, keeping '-' that belongs to an exponent
        let mut pieces: Vec<String> = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev.is_some() && prev != Some('^') {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
            prev = Some(ch);
        }
        pieces.push(current);

        let mut terms = Vec::new();
        for piece in pieces {
            let (negative, body) = match piece.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coeff, exp) = match body.find('t') {
                None => (body, None),
                Some(pos) => {
                    let coeff = body[..pos].trim_end_matches('*');
                    let rest = &body[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| err("expected ^ after t"))?
                            .parse::<i64>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (coeff, Some(exp))
                }
            };
            let c: i64 = if coeff.is_empty() {
                1
            } else {
                coeff.parse().map_err(|_| err("bad coefficient"))?
            };
            let c = if negative { -c } else { c };
            terms.push((exp.unwrap_or(0), T::from_i64(c)));
        }
        Ok(Self::from_terms(terms))
    }
}

impl<T: ExactInt> Serialize for LaurentPoly<T> {
    /// `[[exponent, coefficient], ...]` in ascending exponent order.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, i64)> = self
            .terms
            .iter()
            .map(|(&e, c)| {
                c.to_i64()
                    .map(|c| (e, c))
                    .ok_or_else(|| serde::ser::Error::custom("coefficient exceeds i64"))
            })
            .collect::<Result<_, _>>()?;
        pairs.serialize(serializer)
    }
}

impl<'de, T: ExactInt> Deserialize<'de> for LaurentPoly<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pairs(Vec<(i64, i64)>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Pairs(p) => Ok(Self::from_terms(
                p.into_iter().map(|(e, c)| (e, T::from_i64(c))),
            )),
        }
    }
}

/// Resultant of two polynomials given by ascending coefficients, via the
/// Sylvester determinant.
pub fn resultant<T: ExactInt>(f: &[T], g: &[T]) -> T {
    let trim = |v: &[T]| -> Vec<T> {
        let mut v = v.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let (f, g) = (trim(f), trim(g));
    if f.is_empty() || g.is_empty() {
        return T::zero();
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return T::one();
    }
    let mut s = IntMatrix::zeros(size, size);
    for row in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(row, row + k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + row, row + k)] = c.clone();
        }
    }
    s.determinant()
}

/// |H1(Σn)|: a positive integer, or infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchedCoverOrder<T> {
    Finite(T),
    Infinite,
}

impl<T: ExactInt> Serialize for BranchedCoverOrder<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            BranchedCoverOrder::Finite(v) => match v.to_u64() {
                Some(x) => serializer.serialize_u64(x),
                None => serializer.collect_str(v),
            },
            BranchedCoverOrder::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

impl<T: ExactInt> fmt::Display for BranchedCoverOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchedCoverOrder::Finite(v) => write!(f, "{v}"),
            BranchedCoverOrder::Infinite => f.write_str("infinite"),
        }
    }
}

/// Fox's formula for the n-fold cyclic branched cover.
pub fn branched_cover_order<T: ExactInt>(
    delta: &LaurentPoly<T>,
    n: i64,
) -> Result<BranchedCoverOrder<T>, AlexanderError> {
    if n < 2 {
        return Err(AlexanderError::InvalidDegree(n));
    }
    let at_one = delta.eval_unit(false);
    if !at_one.abs().is_one() {
        return Err(AlexanderError::NotAlexanderNormalized(at_one.to_string()));
    }
    let cyclotomic_product = vec![T::one(); n as usize];
    let r = resultant(&delta.dense(), &cyclotomic_product).abs();
    Ok(if r.is_zero() {
        BranchedCoverOrder::Infinite
    } else {
        BranchedCoverOrder::Finite(r)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlexanderValidation {
    pub valid: bool,
    pub value_at_one: String,
    pub symmetric: bool,
    pub diagnostics: Vec<String>,
}

/// Checks Δ(1) = ±1 and Δ(t) ≐ Δ(1/t) up to units ±t^k.
pub fn validate_alexander<T: ExactInt>(delta: &LaurentPoly<T>) -> AlexanderValidation {
    let at_one = delta.eval_unit(false);
    let normalized = at_one.abs().is_one();
    let dense = delta.dense();
    let reversed: Vec<T> = dense.iter().rev().cloned().collect();
    let negated: Vec<T> = reversed.iter().map(|c| -c.clone()).collect();
    let symmetric = !dense.is_empty() && (dense == reversed || dense == negated);
    let mut diagnostics = Vec::new();
    if !normalized {
        diagnostics.push(format!("value at t = 1 is {at_one}, expected ±1"));
    }
    if !symmetric {
        diagnostics.push("not symmetric under t ↦ 1/t up to a unit ±t^k".to_string());
    }
    AlexanderValidation {
        valid: normalized && symmetric,
        value_at_one: at_one.to_string(),
        symmetric,
        diagnostics,
    }
}

/// Alexander polynomial of the trefoil, t² − t + 1.
pub fn trefoil() -> LaurentPoly<BigInt> {
    LaurentPoly::from_coeffs(&[1, -1, 1].map(BigInt::from))
}

/// Alexander polynomial of the figure-eight knot, t² − 3t + 1.
pub fn figure_eight() -> LaurentPoly<BigInt> {
    LaurentPoly::from_coeffs(&[1, -3, 1].map(BigInt::from))
}

/// Alexander polynomial of the Conway knot, 1.
pub fn conway_knot() -> LaurentPoly<BigInt> {
    LaurentPoly::constant(BigInt::from(1))
}
