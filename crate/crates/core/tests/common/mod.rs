#![allow(dead_code)]

use orderable::braid3::{BraidLetter, BraidWord};
use proptest::prelude::*;

pub const LETTERS: [BraidLetter; 4] = [
    BraidLetter::S1,
    BraidLetter::S1_INV,
    BraidLetter::S2,
    BraidLetter::S2_INV,
];

pub fn word(max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(0..4usize, 0..=max_len)
        .prop_map(|ix| BraidWord::from_letters(ix.into_iter().map(|i| LETTERS[i]).collect()))
}

/// σ1-positive words, plus negative powers of σ2: the DD positive cone.
pub fn dd_positive(max_len: usize) -> impl Strategy<Value = BraidWord> {
    let sigma1_positive = (prop::collection::vec(0..3usize, 0..max_len), any::<prop::sample::Index>())
        .prop_map(|(ix, at)| {
            let choices = [BraidLetter::S1, BraidLetter::S2, BraidLetter::S2_INV];
            let mut letters: Vec<BraidLetter> = ix.into_iter().map(|i| choices[i]).collect();
            let pos = at.index(letters.len() + 1);
            letters.insert(pos, BraidLetter::S1);
            BraidWord::from_letters(letters)
        });
    prop_oneof![
        4 => sigma1_positive,
        1 => (1..=max_len as i64).prop_map(|k| BraidWord::sigma2_pow(-k)),
    ]
}

/// Products of conjugates of the braid relator: always the identity.
pub fn trivial_word(max_len: usize) -> impl Strategy<Value = BraidWord> {
    let relator: BraidWord = "a b a B A B".parse().unwrap();
    prop::collection::vec((word(max_len), any::<bool>()), 0..3).prop_map(move |parts| {
        parts.into_iter().fold(BraidWord::empty(), |acc, (u, flip)| {
            let r = if flip { relator.inverse() } else { relator.clone() };
            acc.concat(&u.concat(&r).concat(&u.inverse()))
        })
    })
}
