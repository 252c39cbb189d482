//! Finitely presented groups: words, abelianization, Dehn filling relators,
//! amalgamated products and coset enumeration.
//!
//! Relators are written as whitespace-separated generator names; the
//! uppercase form of a name denotes its inverse, and `name^k` a power.
//! `"s1 s2 s1 S2 S1 S2"` is the braid relation in `⟨s1, s2⟩`.

mod todd_coxeter;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid3::{BraidWord, Generator};
use crate::linalg::IntMatrix;
use crate::slopes::Slope;

pub use todd_coxeter::{coset_enumerate, CosetOutcome, CosetTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("bad token {0:?} in word")]
    BadToken(String),
    #[error("invalid generator name {0:?}: names need a lowercase letter and may use [a-z0-9_]")]
    BadGeneratorName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("generator name clash: {0:?} occurs in both presentations")]
    NameClash(String),
    #[error("letter refers to generator {0} but the presentation has {1}")]
    LetterOutOfRange(usize, usize),
}

/// A generator or its inverse, by index into a presentation's generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn shifted(self, offset: usize) -> Self {
        Letter {
            generator: self.generator + offset,
            inverse: self.inverse,
        }
    }
}

/// A word in the generators of some presentation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self^n` for any integer n.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last().is_some_and(|&t| t == l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    fn shifted(&self, offset: usize) -> Self {
        Word(self.0.iter().map(|l| l.shifted(offset)).collect())
    }

    /// Translates a braid word, with σ1 and σ2 mapped to generators `s1` and `s2`.
    pub fn from_braid(w: &BraidWord, s1: usize, s2: usize) -> Self {
        Word(
            w.letters()
                .iter()
                .map(|l| {
                    let g = match l.generator() {
                        Generator::S1 => s1,
                        Generator::S2 => s2,
                    };
                    Letter::new(g, !l.is_positive())
                })
                .collect(),
        )
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && name.chars().any(|c| c.is_ascii_lowercase())
}

/// Generators and relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !valid_name(g) {
                return Err(GroupError::BadGeneratorName(g.clone()));
            }
            if !seen.insert(g.as_str()) {
                return Err(GroupError::DuplicateGenerator(g.clone()));
            }
        }
        let n = generators.len();
        for r in &relators {
            if let Some(l) = r.0.iter().find(|l| l.generator >= n) {
                return Err(GroupError::LetterOutOfRange(l.generator, n));
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Builds a presentation from generator names and relator strings.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, GroupError> {
        let p = Presentation::new(generators.iter().map(|s| s.to_string()).collect(), vec![])?;
        let relators = relators
            .iter()
            .map(|r| p.parse_word(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { relators, ..p })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn with_relator(&self, relator: Word) -> Self {
        let mut out = self.clone();
        out.relators.push(relator);
        out
    }

    /// Parses `"s1 s2^-2 S1"`-style words against this presentation's generators.
    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| GroupError::BadToken(token.to_string()))?;
                    (b, e)
                }
                None => (token, 1),
            };
            let (gen, inverse) = if let Some(i) = self.generator_index(base) {
                (i, false)
            } else if let Some(i) = self
                .generators
                .iter()
                .position(|g| g.to_ascii_uppercase() == base)
            {
                (i, true)
            } else {
                return Err(GroupError::UnknownGenerator(base.to_string()));
            };
            let letter = Letter::new(gen, inverse != (exp < 0));
            letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        }
        Ok(Word(letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|l| {
                let name = &self.generators[l.generator];
                if l.inverse {
                    name.to_ascii_uppercase()
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix<BigInt> {
        let n = self.generators.len();
        let rows = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); n];
                for l in &r.0 {
                    if l.inverse {
                        row[l.generator] -= 1;
                    } else {
                        row[l.generator] += 1;
                    }
                }
                row
            })
            .collect();
        IntMatrix::from_rows(rows, n)
    }

    /// The three-strand braid group ⟨s1, s2 | s1 s2 s1 = s2 s1 s2⟩.
    pub fn braid_group() -> Self {
        Presentation::parse(&["s1", "s2"], &["s1 s2 s1 S2 S1 S2"]).expect("static presentation")
    }

    /// The Klein-bottle group ⟨x, y | x y x⁻¹ = y⁻¹⟩.
    pub fn klein_group() -> Self {
        Presentation::parse(&["x", "y"], &["x y X y"]).expect("static presentation")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PresentationJson {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| self.format_word(r)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PresentationJson::deserialize(deserializer)?;
        let gens: Vec<&str> = raw.generators.iter().map(String::as_str).collect();
        let rels: Vec<&str> = raw.relators.iter().map(String::as_str).collect();
        Presentation::parse(&gens, &rels).map_err(serde::de::Error::custom)
    }
}

/// Abelian group Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk with t1 | t2 | ... | tk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "int_list")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, or None when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().filter_map(|t| t.to_u64()).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

mod int_list {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|b| match b.to_u64() {
                Some(x) => Entry::Small(x),
                None => Entry::Big(b.to_string()),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Entry::Small(x) => Ok(BigInt::from(x)),
                Entry::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

/// Abelian invariants via the Smith normal form of the relation matrix.
pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let invariants = p.relation_matrix().smith_invariants();
    AbelianInvariants {
        free_rank: p.generators.len() - invariants.len(),
        torsion: invariants.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Adds the filling relator μ^p λ^q for the slope p/q.
pub fn dehn_fill(p: &Presentation, mu: &Word, lambda: &Word, alpha: Slope) -> Presentation {
    let relator = mu.pow(alpha.p()).concat(&lambda.pow(alpha.q())).free_reduce();
    p.with_relator(relator)
}

/// Amalgamated product: disjoint union plus one relator `u v⁻¹` per pair,
/// with `u` a word of `p1` and `v` a word of `p2`.
pub fn amalgam(
    p1: &Presentation,
    p2: &Presentation,
    pairs: &[(Word, Word)],
) -> Result<Presentation, GroupError> {
    let names: HashSet<&str> = p1.generators.iter().map(String::as_str).collect();
    if let Some(clash) = p2.generators.iter().find(|g| names.contains(g.as_str())) {
        return Err(GroupError::NameClash(clash.clone()));
    }
    let upper1: HashSet<String> = p1.generators.iter().map(|g| g.to_ascii_uppercase()).collect();
    if let Some(clash) = p2
        .generators
        .iter()
        .find(|g| upper1.contains(&g.to_ascii_uppercase()))
    {
        return Err(GroupError::NameClash(clash.clone()));
    }
    let offset = p1.generators.len();
    let n2 = p2.generators.len();
    for (u, v) in pairs {
        if let Some(l) = u.0.iter().find(|l| l.generator >= offset) {
            return Err(GroupError::LetterOutOfRange(l.generator, offset));
        }
        if let Some(l) = v.0.iter().find(|l| l.generator >= n2) {
            return Err(GroupError::LetterOutOfRange(l.generator, n2));
        }
    }
    let mut generators = p1.generators.clone();
    generators.extend(p2.generators.iter().cloned());
    let mut relators = p1.relators.clone();
    relators.extend(p2.relators.iter().map(|r| r.shifted(offset)));
    relators.extend(
        pairs
            .iter()
            .map(|(u, v)| u.concat(&v.shifted(offset).inverse()).free_reduce()),
    );
    Presentation::new(generators, relators)
}

/// The trefoil exterior glued to the twisted I-bundle over the Klein bottle
/// along σ2 ↦ y⁻¹, Δ² ↦ y⁻¹x²; the result is +4 surgery on the figure-eight knot.
pub fn trefoil_klein_manifold() -> Presentation {
    let b3 = Presentation::braid_group();
    let k = Presentation::klein_group();
    let pairs = vec![
        (
            Word::from_braid(&BraidWord::sigma2_pow(1), 0, 1),
            k.parse_word("Y").expect("static word"),
        ),
        (
            Word::from_braid(&BraidWord::delta_pow(2), 0, 1),
            k.parse_word("Y x x").expect("static word"),
        ),
    ];
    amalgam(&b3, &k, &pairs).expect("disjoint generator names")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum B1Verdict {
    LoCertified,
    Unknown,
}

/// Left-orderability from a surjection onto Z: a prime 3-manifold group with
/// positive first Betti number is left-orderable. Primeness is a caller-supplied
/// hypothesis, never inferred.
pub fn lo_by_positive_b1(p: &Presentation, prime: bool) -> (B1Verdict, AbelianInvariants) {
    let ab = abelianization(p);
    let verdict = if prime && ab.free_rank >= 1 {
        B1Verdict::LoCertified
    } else {
        B1Verdict::Unknown
    };
    (verdict, ab)
}

/// `true` when the finite index `n` of a coset table is 1; only closed tables certify.
pub fn certifies_trivial(outcome: &CosetOutcome) -> bool {
    matches!(outcome, CosetOutcome::Index { index: 1, .. })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(free_rank: usize, torsion: &[i64]) -> AbelianInvariants {
        AbelianInvariants {
            free_rank,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
        }
    }

    #[test]
    fn parse_words() {
        let p = Presentation::braid_group();
        let w = p.parse_word("s1 S2^2 s2^-1 s1^0").unwrap();
        assert_eq!(p.format_word(&w), "s1 S2 S2 S2");
        assert!(matches!(
            p.parse_word("s3"),
            Err(GroupError::UnknownGenerator(_))
        ));
        assert!(matches!(p.parse_word("s1^x"), Err(GroupError::BadToken(_))));
    }

    #[test]
    fn generator_validation() {
        assert!(matches!(
            Presentation::parse(&["X"], &[]),
            Err(GroupError::BadGeneratorName(_))
        ));
        assert!(matches!(
            Presentation::parse(&["x", "x"], &[]),
            Err(GroupError::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(abelianization(&trefoil_klein_manifold()), inv(0, &[4]));
        assert_eq!(abelianization(&Presentation::braid_group()), inv(1, &[]));
        assert_eq!(abelianization(&Presentation::klein_group()), inv(1, &[2]));
        let free = Presentation::parse(&["u", "v"], &[]).unwrap();
        assert_eq!(abelianization(&free), inv(2, &[]));
    }

    #[test]
    fn amalgam_reproduces_displayed_presentation() {
        let m = trefoil_klein_manifold();
        let expected = Presentation::parse(
            &["s1", "s2", "x", "y"],
            &[
                "s1 s2 s1 S2 S1 S2",
                "x y X y",
                "s2 y",
                "s1 s2 s1 s1 s2 s1 X X y",
            ],
        )
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn amalgam_free_product_and_clash() {
        let b3 = Presentation::braid_group();
        let k = Presentation::klein_group();
        let fp = amalgam(&b3, &k, &[]).unwrap();
        assert_eq!(fp.generators().len(), 4);
        assert_eq!(fp.relators().len(), 2);
        assert_eq!(abelianization(&fp), inv(2, &[2]));
        assert!(matches!(
            amalgam(&b3, &b3, &[]),
            Err(GroupError::NameClash(_))
        ));
    }

    #[test]
    fn dehn_fill_examples() {
        let b3 = Presentation::braid_group();
        let mu = Word::from_braid(&BraidWord::sigma2_pow(1), 0, 1);
        let lambda = Word::from_braid(&BraidWord::trefoil_longitude(), 0, 1);

        let filled = dehn_fill(&b3, &mu, &lambda, Slope::MERIDIAN);
        assert_eq!(filled.relators().last().unwrap(), &mu);
        assert_eq!(abelianization(&filled), AbelianInvariants::trivial());

        let zero = dehn_fill(&b3, &mu, &lambda, Slope::LONGITUDE);
        assert_eq!(zero.relators().last().unwrap(), &lambda.free_reduce());
        assert_eq!(abelianization(&zero), inv(1, &[]));

        let four = dehn_fill(&b3, &mu, &lambda, Slope::new(4, 1).unwrap());
        assert_eq!(abelianization(&four), inv(0, &[4]));
    }

    #[test]
    fn positive_b1_rule() {
        let b3 = Presentation::braid_group();
        let mu = Word::from_braid(&BraidWord::sigma2_pow(1), 0, 1);
        let lambda = Word::from_braid(&BraidWord::trefoil_longitude(), 0, 1);
        let zero = dehn_fill(&b3, &mu, &lambda, Slope::LONGITUDE);
        assert_eq!(lo_by_positive_b1(&zero, true).0, B1Verdict::LoCertified);
        assert_eq!(lo_by_positive_b1(&zero, false).0, B1Verdict::Unknown);
        for flag in [true, false] {
            assert_eq!(
                lo_by_positive_b1(&trefoil_klein_manifold(), flag).0,
                B1Verdict::Unknown
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let m = trefoil_klein_manifold();
        let js = serde_json::to_string(&m).unwrap();
        let back: Presentation = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        let ab = abelianization(&m);
        let js = serde_json::to_string(&ab).unwrap();
        assert_eq!(js, r#"{"free_rank":0,"torsion":[4]}"#);
        assert_eq!(serde_json::from_str::<AbelianInvariants>(&js).unwrap(), ab);
    }

    #[test]
    fn display() {
        assert_eq!(inv(1, &[2]).to_string(), "Z + Z/2");
        assert_eq!(AbelianInvariants::trivial().to_string(), "0");
        assert_eq!(
            Presentation::klein_group().to_string(),
            "< x, y | x y X y >"
        );
    }
}
