//! Exact computation in the three-strand braid group.
//!
//! Words use the ASCII alphabet `a` = σ1, `A` = σ1⁻¹, `b` = σ2, `B` = σ2⁻¹;
//! whitespace is ignored. Two independent decision procedures are provided:
//!
//! * the word problem through the quotient `B3 / ⟨Δ²⟩ ≅ Z/2 * Z/3` together
//!   with the exponent sum (the kernel of the quotient is generated by Δ²,
//!   whose exponent sum is 6), and
//! * Dehornoy handle reduction, which decides σ1-positivity and therefore
//!   the Dubrovina-Dubrovin (DD) ordering.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on handle-reduction rewrite steps.
pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("invalid braid letter {0:?} (expected one of a, A, b, B)")]
    InvalidLetter(char),
    #[error("braid generator index {0} out of range (expected 1 or 2)")]
    InvalidGenerator(u8),
    #[error("braid letter sign {0} out of range (expected +1 or -1)")]
    InvalidSign(i8),
    #[error("handle reduction exceeded {0} steps")]
    StepCapExceeded(u64),
    #[error("no Δ² floor found within |m| <= {0}")]
    BoundExceeded(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S1,
    S2,
}

/// A single letter σi^±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    generator: Generator,
    positive: bool,
}

impl BraidLetter {
    pub const S1: BraidLetter = BraidLetter::of(Generator::S1, true);
    pub const S1_INV: BraidLetter = BraidLetter::of(Generator::S1, false);
    pub const S2: BraidLetter = BraidLetter::of(Generator::S2, true);
    pub const S2_INV: BraidLetter = BraidLetter::of(Generator::S2, false);

    pub const fn of(generator: Generator, positive: bool) -> Self {
        BraidLetter {
            generator,
            positive,
        }
    }

    pub fn new(index: u8, sign: i8) -> Result<Self, BraidError> {
        let generator = match index {
            1 => Generator::S1,
            2 => Generator::S2,
            other => return Err(BraidError::InvalidGenerator(other)),
        };
        let positive = match sign {
            1 => true,
            -1 => false,
            other => return Err(BraidError::InvalidSign(other)),
        };
        Ok(BraidLetter::of(generator, positive))
    }

    pub fn generator(self) -> Generator {
        self.generator
    }

    pub fn index(self) -> u8 {
        match self.generator {
            Generator::S1 => 1,
            Generator::S2 => 2,
        }
    }

    pub fn sign(self) -> i8 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn inverse(self) -> Self {
        BraidLetter::of(self.generator, !self.positive)
    }

    fn cancels(self, other: BraidLetter) -> bool {
        self.generator == other.generator && self.positive != other.positive
    }

    pub fn to_char(self) -> char {
        match (self.generator, self.positive) {
            (Generator::S1, true) => 'a',
            (Generator::S1, false) => 'A',
            (Generator::S2, true) => 'b',
            (Generator::S2, false) => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<Self, BraidError> {
        match c {
            'a' => Ok(BraidLetter::S1),
            'A' => Ok(BraidLetter::S1_INV),
            'b' => Ok(BraidLetter::S2),
            'B' => Ok(BraidLetter::S2_INV),
            other => Err(BraidError::InvalidLetter(other)),
        }
    }
}

/// A finite word in σ1^±1, σ2^±1. Words are not required to be reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord(Vec<BraidLetter>);

impl BraidWord {
    pub fn empty() -> Self {
        BraidWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<BraidLetter>) -> Self {
        BraidWord(letters)
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// σ1 if `generator` is S1, σ2 otherwise, raised to `k`.
    pub fn generator_power(generator: Generator, k: i64) -> Self {
        let letter = BraidLetter::of(generator, k > 0);
        BraidWord(vec![letter; k.unsigned_abs() as usize])
    }

    pub fn sigma1_pow(k: i64) -> Self {
        Self::generator_power(Generator::S1, k)
    }

    pub fn sigma2_pow(k: i64) -> Self {
        Self::generator_power(Generator::S2, k)
    }

    /// Δ = σ1σ2σ1.
    pub fn delta() -> Self {
        BraidWord(vec![BraidLetter::S1, BraidLetter::S2, BraidLetter::S1])
    }

    /// Δ^n for any integer n.
    pub fn delta_pow(n: i64) -> Self {
        let base = if n >= 0 {
            Self::delta()
        } else {
            Self::delta().inverse()
        };
        base.pow(n.unsigned_abs())
    }

    /// The peripheral longitude Δ²σ2⁻⁶ of the trefoil exterior.
    pub fn trefoil_longitude() -> Self {
        Self::delta_pow(2).concat(&Self::sigma2_pow(-6))
    }

    pub fn inverse(&self) -> Self {
        BraidWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &BraidWord) -> Self {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        BraidWord(letters)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut letters = Vec::with_capacity(self.len() * n as usize);
        for _ in 0..n {
            letters.extend_from_slice(&self.0);
        }
        BraidWord(letters)
    }

    /// γ⁻¹ · self · γ
    pub fn conjugate_by(&self, gamma: &BraidWord) -> Self {
        gamma.inverse().concat(self).concat(gamma)
    }

    fn sigma1_signs(&self) -> (bool, bool) {
        let mut pos = false;
        let mut neg = false;
        for l in &self.0 {
            if l.generator == Generator::S1 {
                if l.positive {
                    pos = true;
                } else {
                    neg = true;
                }
            }
        }
        (pos, neg)
    }

    /// σ1 occurs, and only with positive exponents.
    pub fn is_sigma1_positive(&self) -> bool {
        matches!(self.sigma1_signs(), (true, false))
    }

    /// σ1 occurs, and only with negative exponents.
    pub fn is_sigma1_negative(&self) -> bool {
        matches!(self.sigma1_signs(), (false, true))
    }
}

impl std::ops::Mul for &BraidWord {
    type Output = BraidWord;
    fn mul(self, rhs: &BraidWord) -> BraidWord {
        self.concat(rhs)
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(BraidLetter::from_char)
            .collect::<Result<Vec<_>, _>>()
            .map(BraidWord)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sign of an element with respect to a left ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign3 {
    Positive,
    Trivial,
    Negative,
}

impl Sign3 {
    pub fn negate(self) -> Self {
        match self {
            Sign3::Positive => Sign3::Negative,
            Sign3::Trivial => Sign3::Trivial,
            Sign3::Negative => Sign3::Positive,
        }
    }

    /// Ordering of the identity relative to an element of this sign.
    pub fn identity_vs(self) -> Ordering {
        match self {
            Sign3::Positive => Ordering::Less,
            Sign3::Trivial => Ordering::Equal,
            Sign3::Negative => Ordering::Greater,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign3::Positive => "positive",
            Sign3::Trivial => "trivial",
            Sign3::Negative => "negative",
        }
    }
}

impl fmt::Display for Sign3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &BraidWord) -> BraidWord {
    let mut out: Vec<BraidLetter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last().is_some_and(|&top| top.cancels(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    BraidWord(out)
}

pub fn exponent_sum(w: &BraidWord) -> i64 {
    w.0.iter().map(|l| l.sign() as i64).sum()
}

/// Letter of the modular group `Z/2 * Z/3`: the involution ā or a nonzero
/// power of the order-three element b̄.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModLetter {
    A,
    B(u8),
}

/// Reduced alternating word in `⟨ā⟩ * ⟨b̄⟩`, the image of a braid in `B3 / ⟨Δ²⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModularWord(Vec<ModLetter>);

impl ModularWord {
    pub fn letters(&self) -> &[ModLetter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    fn push(&mut self, letter: ModLetter) {
        match (self.0.last().copied(), letter) {
            (Some(ModLetter::A), ModLetter::A) => {
                self.0.pop();
            }
            (Some(ModLetter::B(e)), ModLetter::B(f)) => {
                self.0.pop();
                let r = (e + f) % 3;
                if r != 0 {
                    self.0.push(ModLetter::B(r));
                }
            }
            (_, l) => self.0.push(l),
        }
    }
}

impl fmt::Display for ModularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l {
                ModLetter::A => f.write_str("a")?,
                ModLetter::B(1) => f.write_str("b")?,
                ModLetter::B(e) => write!(f, "b^{e}")?,
            }
        }
        Ok(())
    }
}

// σ1 ↦ b̄²ā, σ2 ↦ āb̄², where ā is the image of Δ and b̄ that of σ1σ2.
fn modular_letters(l: BraidLetter) -> [ModLetter; 2] {
    use ModLetter::*;
    match (l.generator, l.positive) {
        (Generator::S1, true) => [B(2), A],
        (Generator::S1, false) => [A, B(1)],
        (Generator::S2, true) => [A, B(2)],
        (Generator::S2, false) => [B(1), A],
    }
}

/// Image of `w` in the modular group, in reduced normal form.
pub fn modular_image(w: &BraidWord) -> ModularWord {
    let mut out = ModularWord(Vec::with_capacity(2 * w.len()));
    for &l in &w.0 {
        for m in modular_letters(l) {
            out.push(m);
        }
    }
    out
}

/// Word problem: w = 1 iff its modular image is trivial and its exponent sum is zero.
pub fn is_trivial(w: &BraidWord) -> bool {
    exponent_sum(w) == 0 && modular_image(w).is_empty()
}

/// Returns `k` when `w` represents σ2^k.
pub fn as_sigma2_power(w: &BraidWord) -> Option<i64> {
    let k = exponent_sum(w);
    is_trivial(&w.concat(&BraidWord::sigma2_pow(-k))).then_some(k)
}

/// Handle reduction with the default step cap.
pub fn handle_reduce(w: &BraidWord) -> Result<BraidWord, BraidError> {
    handle_reduce_with_cap(w, DEFAULT_STEP_CAP)
}

/// Dehornoy handle reduction for σ1-handles.
///
/// After free reduction the interior of the leftmost handle σ1^e σ2^m σ1^-e
/// contains no σ1 and is therefore a power of σ2; it is replaced by
/// (σ2^-e σ1^sgn(m) σ2^e)^|m|. The result contains σ1 with a single sign or
/// not at all. Termination is a theorem, so hitting `cap` is an internal error.
pub fn handle_reduce_with_cap(w: &BraidWord, cap: u64) -> Result<BraidWord, BraidError> {
    let mut word = free_reduce(w).0;
    let mut steps = 0u64;
    while let Some((start, end)) = leftmost_handle(&word) {
        steps += 1;
        if steps > cap {
            return Err(BraidError::StepCapExceeded(cap));
        }
        let e_pos = word[start].positive;
        let interior = &word[start + 1..end];
        let m: i64 = interior.iter().map(|l| l.sign() as i64).sum();
        let mut replacement = Vec::with_capacity(3 * interior.len());
        let conj = BraidLetter::of(Generator::S2, !e_pos);
        let conj_inv = conj.inverse();
        let mid = BraidLetter::of(Generator::S1, m > 0);
        for _ in 0..m.unsigned_abs() {
            replacement.push(conj);
            replacement.push(mid);
            replacement.push(conj_inv);
        }
        let mut next = Vec::with_capacity(word.len() + replacement.len());
        next.extend_from_slice(&word[..start]);
        next.extend(replacement);
        next.extend_from_slice(&word[end + 1..]);
        word = free_reduce(&BraidWord(next)).0;
    }
    Ok(BraidWord(word))
}

// Positions of two consecutive σ1-letters of opposite sign, leftmost first.
fn leftmost_handle(word: &[BraidLetter]) -> Option<(usize, usize)> {
    let mut prev: Option<usize> = None;
    for (i, l) in word.iter().enumerate() {
        if l.generator != Generator::S1 {
            continue;
        }
        if let Some(p) = prev {
            if word[p].positive != l.positive {
                return Some((p, i));
            }
        }
        prev = Some(i);
    }
    None
}

/// Sign in the DD ordering: positive iff `w` has a σ1-positive representative
/// or equals σ2^k with k < 0.
pub fn dd_sign(w: &BraidWord) -> Result<Sign3, BraidError> {
    let reduced = handle_reduce(w)?;
    Ok(match reduced.sigma1_signs() {
        (true, false) => Sign3::Positive,
        (false, true) => Sign3::Negative,
        (true, true) => unreachable!("handle reduction left a σ1-handle"),
        (false, false) => match exponent_sum(&reduced).cmp(&0) {
            Ordering::Less => Sign3::Positive,
            Ordering::Equal => Sign3::Trivial,
            Ordering::Greater => Sign3::Negative,
        },
    })
}

/// Compares `u` and `v` in the DD ordering: `u < v` iff `u⁻¹v` is positive.
pub fn dd_compare(u: &BraidWord, v: &BraidWord) -> Result<Ordering, BraidError> {
    Ok(dd_sign(&u.inverse().concat(v))?.identity_vs())
}

/// Sign of `w` in the conjugate ordering whose cone is `{w : γ⁻¹wγ ∈ P_DD}`.
pub fn conj_sign(w: &BraidWord, gamma: &BraidWord) -> Result<Sign3, BraidError> {
    dd_sign(&w.conjugate_by(gamma))
}

/// The integer `m` with Δ^{2m} ≤ w < Δ^{2m+2} in the DD ordering.
///
/// Every letter σi^±1 lies strictly between Δ⁻² and Δ², so by Malyutin's
/// inequalities (α < Δ^{2k}, β < Δ^{2l} ⟹ αβ < Δ^{2(k+l)}, and dually) a word
/// of n letters lies strictly between Δ^{-2n} and Δ^{2n}. The search range
/// |m| ≤ n is therefore exhaustive.
pub fn delta_floor(w: &BraidWord) -> Result<i64, BraidError> {
    let bound = w.len() as i64;
    // Δ^{2m} ≤ w, monotone decreasing in m
    let at_least = |m: i64| -> Result<bool, BraidError> {
        let s = dd_sign(&BraidWord::delta_pow(-2 * m).concat(w))?;
        Ok(s != Sign3::Negative)
    };
    let (mut lo, mut hi) = (-bound, bound);
    if !at_least(lo)? {
        return Err(BraidError::BoundExceeded(bound));
    }
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if at_least(mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if at_least(lo + 1)? {
        return Err(BraidError::BoundExceeded(bound));
    }
    Ok(lo)
}

/// Whether `w` commutes with σ2, decided by the word problem on the commutator.
pub fn commutes_with_sigma2(w: &BraidWord) -> bool {
    let s2 = BraidWord::sigma2_pow(1);
    let comm = w.concat(&s2).concat(&w.inverse()).concat(&s2.inverse());
    is_trivial(&comm)
}

/// σ2^k Δ^{2l} in the peripheral subgroup ⟨σ2, Δ²⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeripheralElement {
    pub k: i64,
    pub l: i64,
}

impl PeripheralElement {
    pub fn new(k: i64, l: i64) -> Self {
        PeripheralElement { k, l }
    }

    pub fn to_word(self) -> BraidWord {
        BraidWord::sigma2_pow(self.k).concat(&BraidWord::delta_pow(2 * self.l))
    }
}

/// Returns (k, l) with w = σ2^k Δ^{2l}, or None if w is not in ⟨σ2, Δ²⟩.
///
/// Δ² lies in the kernel of the modular quotient, so the image of w must be the
/// image of σ2^k. Each braid letter contributes at most two modular letters
/// and the image of σ2^k has length 2|k|, so |k| ≤ len(w).
pub fn peripheral_parse(w: &BraidWord) -> Option<PeripheralElement> {
    let image = modular_image(w);
    let bound = w.len() as i64;
    let k = (-bound..=bound).find(|&k| modular_image(&BraidWord::sigma2_pow(k)) == image)?;
    let rest = exponent_sum(w) - k;
    if rest % 6 != 0 {
        return None;
    }
    let pe = PeripheralElement::new(k, rest / 6);
    is_trivial(&w.concat(&pe.to_word().inverse())).then_some(pe)
}

/// The two orderings a conjugate of the DD ordering can induce on ⟨σ2, Δ²⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PeripheralOrderType {
    /// σ2^k Δ^{2l} positive iff l > 0, or l = 0 and k > 0.
    PosK,
    /// σ2^k Δ^{2l} positive iff l > 0, or l = 0 and k < 0.
    NegK,
}

impl PeripheralOrderType {
    pub fn is_positive(self, pe: PeripheralElement) -> bool {
        match pe.l.cmp(&0) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match self {
                PeripheralOrderType::PosK => pe.k > 0,
                PeripheralOrderType::NegK => pe.k < 0,
            },
        }
    }
}

/// Restriction of the γ-conjugate of the DD ordering to ⟨σ2, Δ²⟩.
pub fn restricted_order_type(gamma: &BraidWord) -> PeripheralOrderType {
    if commutes_with_sigma2(gamma) {
        PeripheralOrderType::NegK
    } else {
        PeripheralOrderType::PosK
    }
}
