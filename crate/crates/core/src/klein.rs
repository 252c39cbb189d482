//! The Klein-bottle group K = ⟨x, y | x y x⁻¹ = y⁻¹⟩, the fundamental group
//! of the twisted I-bundle over the Klein bottle.
//!
//! Every element has the unique normal form x^a y^b. Moving y^b past x^c
//! flips its sign c times, which gives the law
//! `(a, b)(c, d) = (a + c, (-1)^c b + d)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid3::Sign3;
use crate::fpgroup::{abelianization, coset_enumerate, AbelianInvariants, Presentation, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KleinError {
    #[error("slope y^{0} x^(2*{1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("cannot parse Klein element {0:?} (expected x^a y^b)")]
    Parse(String),
}

/// x^a y^b in normal form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct KleinElement {
    pub a: i64,
    pub b: i64,
}

fn parity_sign(n: i64) -> i64 {
    if n.is_even() {
        1
    } else {
        -1
    }
}

impl KleinElement {
    pub const IDENTITY: KleinElement = KleinElement { a: 0, b: 0 };
    pub const X: KleinElement = KleinElement { a: 1, b: 0 };
    pub const Y: KleinElement = KleinElement { a: 0, b: 1 };

    pub fn new(a: i64, b: i64) -> Self {
        KleinElement { a, b }
    }

    pub fn inverse(self) -> Self {
        KleinElement {
            a: -self.a,
            b: -parity_sign(self.a) * self.b,
        }
    }

    pub fn pow(self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self };
        (0..n.unsigned_abs()).fold(Self::IDENTITY, |acc, _| k_multiply(acc, base))
    }

    /// g · self · g⁻¹
    pub fn conjugated_by(self, g: KleinElement) -> Self {
        k_multiply(k_multiply(g, self), g.inverse())
    }
}

impl fmt::Display for KleinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} y^{}", self.a, self.b)
    }
}

impl FromStr for KleinElement {
    type Err = KleinError;

    /// Accepts `x^a y^b`, with either factor optional and bare `x`/`y` for exponent 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KleinError::Parse(s.to_string());
        let mut out = KleinElement::IDENTITY;
        let mut seen_y = false;
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.is_empty() || tokens.len() > 2 {
            if s.trim() == "1" {
                return Ok(out);
            }
            return Err(bad());
        }
        for tok in tokens {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            match base {
                "x" if !seen_y && out.a == 0 => out.a = exp,
                "y" if !seen_y => {
                    out.b = exp;
                    seen_y = true;
                }
                "1" if exp == 1 => {}
                _ => return Err(bad()),
            }
        }
        Ok(out)
    }
}

impl Serialize for KleinElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KleinElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn k_multiply(g: KleinElement, h: KleinElement) -> KleinElement {
    KleinElement {
        a: g.a + h.a,
        b: parity_sign(h.a) * g.b + h.b,
    }
}

/// The two left orderings lifted from `1 → ⟨⟨y⟩⟩ → K → ⟨x⟩ → 1`; they
/// agree on the x-exponent and disagree on the sign of y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KleinOrderingId {
    O1,
    O2,
}

impl KleinOrderingId {
    pub fn other(self) -> Self {
        match self {
            KleinOrderingId::O1 => KleinOrderingId::O2,
            KleinOrderingId::O2 => KleinOrderingId::O1,
        }
    }
}

pub fn k_sign(g: KleinElement, ord: KleinOrderingId) -> Sign3 {
    use std::cmp::Ordering::*;
    let y_sign = match ord {
        KleinOrderingId::O1 => g.b,
        KleinOrderingId::O2 => -g.b,
    };
    match (g.a.cmp(&0), y_sign.cmp(&0)) {
        (Greater, _) | (Equal, Greater) => Sign3::Positive,
        (Less, _) | (Equal, Less) => Sign3::Negative,
        (Equal, Equal) => Sign3::Trivial,
    }
}

/// The ordering whose positive cone is g·P_ord·g⁻¹. Conjugation by x flips
/// the sign of y and x² is central, so only the parity of `a` matters.
pub fn k_conjugate_ordering(g: KleinElement, ord: KleinOrderingId) -> KleinOrderingId {
    if g.a.is_even() {
        ord
    } else {
        ord.other()
    }
}

/// y^m x^{2n} in the peripheral subgroup ⟨y, x²⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KleinPeripheral {
    pub m: i64,
    pub n: i64,
}

impl KleinPeripheral {
    pub fn new(m: i64, n: i64) -> Self {
        KleinPeripheral { m, n }
    }

    pub fn element(self) -> KleinElement {
        // x² is central: y^m x^{2n} = x^{2n} y^m
        KleinElement::new(2 * self.n, self.m)
    }

    pub fn to_word(self, p: &Presentation) -> Word {
        let x = p.parse_word("x").expect("klein presentation has x");
        let y = p.parse_word("y").expect("klein presentation has y");
        y.pow(self.m).concat(&x.pow(2 * self.n))
    }

    /// The same unoriented slope with m > 0, or n > 0 when m = 0.
    pub fn normalized(self) -> Self {
        if self.m < 0 || (self.m == 0 && self.n < 0) {
            KleinPeripheral::new(-self.m, -self.n)
        } else {
            self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KleinFillClass {
    /// Quotient ⟨x⟩ ≅ Z, left-orderable.
    InfiniteCyclicQuotientLo,
    /// Quotient Z/2 * Z/2, not left-orderable (has torsion).
    FreeProductOfFiniteNotLo,
    /// Finite quotient, not left-orderable.
    FiniteNotLo,
}

impl KleinFillClass {
    pub fn is_lo(self) -> bool {
        self == KleinFillClass::InfiniteCyclicQuotientLo
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinFilling {
    pub slope: KleinPeripheral,
    pub class: KleinFillClass,
    pub abelianization: AbelianInvariants,
    /// Order of the quotient when certified by coset enumeration.
    pub quotient_order: Option<usize>,
}

/// Coset cap used when auditing finite Klein fillings.
pub const KLEIN_FILL_COSET_CAP: usize = 20_000;

/// Filling of the twisted I-bundle along y^m x^{2n}.
///
/// The slope y gives K/⟨⟨y⟩⟩ = ⟨x⟩ ≅ Z; the slope x² gives the infinite
/// dihedral group Z/2 * Z/2; every other primitive slope gives a finite
/// (prism-manifold) group.
pub fn klein_fill(slope: KleinPeripheral) -> Result<KleinFilling, KleinError> {
    if slope.m.gcd(&slope.n) != 1 {
        return Err(KleinError::NotPrimitive(slope.m, slope.n));
    }
    let k = Presentation::klein_group();
    let filled = k.with_relator(slope.to_word(&k));
    let ab = abelianization(&filled);
    let (class, quotient_order) = match (slope.m.abs(), slope.n.abs()) {
        (1, 0) => (KleinFillClass::InfiniteCyclicQuotientLo, None),
        (0, 1) => (KleinFillClass::FreeProductOfFiniteNotLo, None),
        _ => (
            KleinFillClass::FiniteNotLo,
            coset_enumerate(&filled, &[], KLEIN_FILL_COSET_CAP).index(),
        ),
    };
    Ok(KleinFilling {
        slope,
        class,
        abelianization: ab,
        quotient_order,
    })
}
