//! Slopes on a torus boundary and the gluing maps between boundary framings.
//!
//! A slope `p/q` is the primitive class pμ + qλ written as the column vector
//! (p, q). Slopes are unoriented, so each is stored in the normal form
//! q > 0, or (1, 0) when q = 0. Gluing matrices act on column vectors from
//! the left.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("slope ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("gluing matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("cannot parse slope {0:?} (expected p/q)")]
    Parse(String),
}

/// A primitive peripheral class, up to sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// The meridian μ = 1/0, the trivial filling slope.
    pub const MERIDIAN: Slope = Slope { p: 1, q: 0 };
    /// The longitude λ = 0/1.
    pub const LONGITUDE: Slope = Slope { p: 0, q: 1 };

    pub fn new(p: i64, q: i64) -> Result<Self, SlopeError> {
        if p.gcd(&q) != 1 {
            return Err(SlopeError::NotPrimitive(p, q));
        }
        Ok(if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        })
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    /// p/q ↦ -p/q, the slope seen from the mirror image.
    pub fn mirror(self) -> Slope {
        Slope::new(-self.p, self.q).expect("negation preserves primitivity")
    }

    /// Compares p/q against an integer, treating 1/0 as +∞.
    pub fn cmp_integer(self, n: i64) -> std::cmp::Ordering {
        if self.q == 0 {
            return std::cmp::Ordering::Greater;
        }
        (self.p as i128).cmp(&(n as i128 * self.q as i128))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SlopeError::Parse(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer 2×2 matrix `[[a, b], [c, d]]` with determinant ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GluingMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl GluingMatrix {
    pub const IDENTITY: GluingMatrix = GluingMatrix {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    /// The splice identification μ1 ↦ λ2, λ1 ↦ μ2.
    pub const SPLICE: GluingMatrix = GluingMatrix {
        a: 0,
        b: 1,
        c: 1,
        d: 0,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, SlopeError> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(SlopeError::NotUnimodular(det));
        }
        Ok(GluingMatrix { a, b, c, d })
    }

    pub fn from_row_major(entries: [i64; 4]) -> Result<Self, SlopeError> {
        Self::new(entries[0], entries[1], entries[2], entries[3])
    }

    pub fn row_major(self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(self) -> Self {
        let det = self.determinant();
        GluingMatrix {
            a: det * self.d,
            b: -det * self.b,
            c: -det * self.c,
            d: det * self.a,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(self, other: GluingMatrix) -> Self {
        GluingMatrix {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    fn act(self, p: i64, q: i64) -> (i64, i64) {
        (self.a * p + self.b * q, self.c * p + self.d * q)
    }
}

impl Serialize for GluingMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.row_major().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GluingMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = <[i64; 4]>::deserialize(deserializer)?;
        GluingMatrix::from_row_major(entries).map_err(serde::de::Error::custom)
    }
}

/// Minimal geometric intersection number |p q' - p' q|.
pub fn intersection_number(alpha: Slope, beta: Slope) -> u64 {
    (alpha.p as i128 * beta.q as i128 - beta.p as i128 * alpha.q as i128).unsigned_abs() as u64
}

/// Image of a slope under a gluing map.
pub fn apply_gluing(m: GluingMatrix, alpha: Slope) -> Slope {
    let (p, q) = m.act(alpha.p, alpha.q);
    Slope::new(p, q).expect("unimodular maps preserve primitivity")
}

/// Preferred meridians (μ1, μ2) = (f⁻¹(λ2), f(λ1)) of a splice, when the union
/// is an integer homology sphere, i.e. Δ(f(λ1), λ2) = 1.
pub fn splice_framing(f: GluingMatrix, lambda1: Slope, lambda2: Slope) -> Option<(Slope, Slope)> {
    if union_homology_order(f, lambda1, lambda2) != 1 {
        return None;
    }
    Some((apply_gluing(f.inverse(), lambda2), apply_gluing(f, lambda1)))
}

/// |H1| of the filling along `alpha` of a knot exterior framed by (μ, λ);
/// 0 stands for infinite first homology.
pub fn filling_homology_order(alpha: Slope) -> u64 {
    alpha.p.unsigned_abs()
}

/// |H1(M1 ∪_f M2)| for knot exteriors with longitudes λ1, λ2; 0 stands for infinite.
pub fn union_homology_order(f: GluingMatrix, lambda1: Slope, lambda2: Slope) -> u64 {
    intersection_number(apply_gluing(f, lambda1), lambda2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(s(2, -1), s(-2, 1));
        assert_eq!(s(-1, 0), Slope::MERIDIAN);
        assert_eq!(s(0, -1), Slope::LONGITUDE);
        assert_eq!(Slope::new(2, 4), Err(SlopeError::NotPrimitive(2, 4)));
        assert_eq!(Slope::new(0, 0), Err(SlopeError::NotPrimitive(0, 0)));
        assert_eq!("3/-2".parse::<Slope>().unwrap(), s(-3, 2));
        assert_eq!("5".parse::<Slope>().unwrap(), s(5, 1));
        assert!("x/2".parse::<Slope>().is_err());
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_number(s(1, 0), s(0, 1)), 1);
        assert_eq!(intersection_number(s(2, 1), s(1, 1)), 1);
        for n in -6i64..=6 {
            assert_eq!(
                intersection_number(s(n, 1), s(1, n)),
                (n * n - 1).unsigned_abs()
            );
        }
        assert_eq!(intersection_number(s(3, 2), s(-3, -2)), 0);
    }

    #[test]
    fn gluing_examples() {
        assert_eq!(apply_gluing(GluingMatrix::SPLICE, s(3, 2)), s(2, 3));
        assert_eq!(apply_gluing(GluingMatrix::IDENTITY, s(-5, 7)), s(-5, 7));
        let shear = GluingMatrix::new(1, 1, 0, 1).unwrap();
        assert_eq!(apply_gluing(shear, s(0, 1)), s(1, 1));
        assert_eq!(apply_gluing(shear, s(1, 0)), s(1, 0));
        assert_eq!(GluingMatrix::new(2, 0, 0, 1), Err(SlopeError::NotUnimodular(2)));
    }

    #[test]
    fn inverse_and_compose() {
        let f = GluingMatrix::new(2, 1, 1, 1).unwrap();
        assert_eq!(f.compose(f.inverse()), GluingMatrix::IDENTITY);
        let g = GluingMatrix::new(0, 1, 1, -1).unwrap();
        assert_eq!(g.inverse().compose(g), GluingMatrix::IDENTITY);
    }

    #[test]
    fn splice_framing_examples() {
        let l = Slope::LONGITUDE;
        assert_eq!(
            splice_framing(GluingMatrix::SPLICE, l, l),
            Some((Slope::MERIDIAN, Slope::MERIDIAN))
        );
        assert_eq!(splice_framing(GluingMatrix::IDENTITY, l, l), None);

        // brute-force oracle for μ1: the slope with f(μ1) = λ2
        let f = GluingMatrix::new(1, 1, 1, 0).unwrap();
        let (mu1, mu2) = splice_framing(f, l, l).unwrap();
        let mut found = None;
        for p in -3i64..=3 {
            for q in -3i64..=3 {
                if let Ok(c) = Slope::new(p, q) {
                    if apply_gluing(f, c) == l {
                        found = Some(c);
                    }
                }
            }
        }
        assert_eq!(Some(mu1), found);
        assert_eq!(mu1, s(-1, 1));
        assert_eq!(mu2, s(1, 0));
        assert_eq!(intersection_number(mu1, l), 1);
        assert_eq!(intersection_number(mu2, l), 1);
    }

    #[test]
    fn homology_orders() {
        assert_eq!(filling_homology_order(s(0, 1)), 0);
        assert_eq!(filling_homology_order(s(1, 7)), 1);
        assert_eq!(filling_homology_order(s(4, 1)), 4);
        let l = Slope::LONGITUDE;
        assert_eq!(union_homology_order(GluingMatrix::SPLICE, l, l), 1);
        assert_eq!(union_homology_order(GluingMatrix::IDENTITY, l, l), 0);
        // column convention: [[1,0],[2,1]] fixes λ
        let f = GluingMatrix::new(1, 0, 2, 1).unwrap();
        assert_eq!(union_homology_order(f, l, l), 0);
        // λ1 = (1, 2) is sent to (1, 4)
        assert_eq!(union_homology_order(f, s(1, 0), l), 1);
        assert_eq!(union_homology_order(f, l, s(1, 0)), 1);
        let g = GluingMatrix::new(1, 2, 0, 1).unwrap();
        assert_eq!(union_homology_order(g, l, l), 2);
    }

    #[test]
    fn compare_with_integer() {
        use std::cmp::Ordering::*;
        assert_eq!(s(1, 1).cmp_integer(1), Equal);
        assert_eq!(s(-1, 1).cmp_integer(1), Less);
        assert_eq!(s(3, 2).cmp_integer(1), Greater);
        assert_eq!(Slope::MERIDIAN.cmp_integer(1000), Greater);
    }

    #[test]
    fn matrix_json_is_row_major() {
        let f = GluingMatrix::new(1, 2, 0, 1).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, "[1,2,0,1]");
        assert_eq!(serde_json::from_str::<GluingMatrix>(&js).unwrap(), f);
        assert!(serde_json::from_str::<GluingMatrix>("[2,0,0,2]").is_err());
    }
}
