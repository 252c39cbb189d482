//! Seeded random braid words for property checks.
//!
//! ChaCha8 keeps streams identical across platforms, so a seed fixes every
//! sampled word.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid3::{BraidLetter, BraidWord, PeripheralElement};

pub const DEFAULT_SEED: u64 = 0x005e_edb3;

const LETTERS: [BraidLetter; 4] = [
    BraidLetter::S1,
    BraidLetter::S1_INV,
    BraidLetter::S2,
    BraidLetter::S2_INV,
];

pub struct WordSampler {
    rng: ChaCha8Rng,
}

impl WordSampler {
    pub fn new(seed: u64) -> Self {
        WordSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A word of exactly `len` uniformly chosen letters.
    pub fn word(&mut self, len: usize) -> BraidWord {
        BraidWord::from_letters((0..len).map(|_| LETTERS[self.rng.gen_range(0..4)]).collect())
    }

    /// A word whose length is uniform in `0..=max_len`.
    pub fn word_up_to(&mut self, max_len: usize) -> BraidWord {
        let len = self.rng.gen_range(0..=max_len);
        self.word(len)
    }

    pub fn words(&mut self, count: usize, max_len: usize) -> Vec<BraidWord> {
        (0..count).map(|_| self.word_up_to(max_len)).collect()
    }

    /// A σ1-positive word of length in `1..=max_len`: σ1 occurs, σ1⁻¹ does not.
    pub fn sigma1_positive(&mut self, max_len: usize) -> BraidWord {
        let len = self.rng.gen_range(1..=max_len.max(1));
        let forced = self.rng.gen_range(0..len);
        let choices = [BraidLetter::S1, BraidLetter::S2, BraidLetter::S2_INV];
        BraidWord::from_letters(
            (0..len)
                .map(|i| {
                    if i == forced {
                        BraidLetter::S1
                    } else {
                        choices[self.rng.gen_range(0..3)]
                    }
                })
                .collect(),
        )
    }

    /// An element of the DD positive cone: usually σ1-positive, sometimes σ2^k with k < 0.
    pub fn dd_positive(&mut self, max_len: usize) -> BraidWord {
        if self.rng.gen_bool(0.2) {
            let k = self.rng.gen_range(1..=max_len.max(1)) as i64;
            BraidWord::sigma2_pow(-k)
        } else {
            self.sigma1_positive(max_len)
        }
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Conjugators for compatibility checks: every fourth is σ2^k Δ^{2l},
    /// which commutes with σ2, the rest are words of length <= `max_len`.
    pub fn conjugators(&mut self, count: usize, max_len: usize) -> Vec<BraidWord> {
        (0..count)
            .map(|i| {
                if i % 4 == 0 {
                    PeripheralElement::new(self.int_in(-3, 3), self.int_in(-2, 2)).to_word()
                } else {
                    self.word_up_to(max_len)
                }
            })
            .collect()
    }
}
