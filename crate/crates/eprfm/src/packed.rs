//! Bit-packed symbol sequences.
//!
//! Symbols are stored as fixed-width `b`-bit ranks, least significant first,
//! with every 64-bit word holding a whole number of symbols. Word-aligned
//! symbol slots are what make the in-block rank arithmetic of the EPR
//! dictionary a handful of register operations, so the packing layout here
//! and the EPR block layout are one and the same.

use crate::error::{Error, Result};

/// Symbols per 64-bit word for the given symbol width.
///
/// This is `floor(64 / bits)`, reduced if necessary so that the guard bit of
/// the last symbol's comparison lane still falls inside the word (only
/// `bits = 1` is affected, dropping from 64 to 63 symbols per word).
pub fn chars_per_word(bits: u32) -> usize {
    let mut c = (64 / bits) as usize;
    while c > 0 && guard_bit(c - 1, bits) >= 64 {
        c -= 1;
    }
    c
}

/// Bit position of symbol `j`'s guard bit in the merged comparison word.
///
/// Symbols at even slots keep their guard at the top of their own lane;
/// symbols at odd slots are counted via the shifted word and land one bit
/// above their slot base after the merge.
pub(crate) fn guard_bit(j: usize, bits: u32) -> u32 {
    if j % 2 == 0 {
        (j as u32 + 1) * bits
    } else {
        j as u32 * bits + 1
    }
}

/// A sequence of `b`-bit symbol ranks packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedText {
    words: Vec<u64>,
    len: usize,
    bits: u32,
    chars_per_word: usize,
}

impl PackedText {
    /// Pack a rank sequence. Fails if any rank needs more than `bits` bits.
    pub fn pack(ranks: &[u8], bits: u32) -> Result<Self> {
        assert!(bits >= 1 && bits <= 8);
        let cpw = chars_per_word(bits);
        let mut words = vec![0u64; ranks.len().div_ceil(cpw)];
        for (j, &r) in ranks.iter().enumerate() {
            if (r as u64) >> bits != 0 {
                return Err(Error::RankOverflow { rank: r as usize, bits });
            }
            words[j / cpw] |= (r as u64) << ((j % cpw) as u32 * bits);
        }
        Ok(PackedText { words, len: ranks.len(), bits, chars_per_word: cpw })
    }

    /// Symbol rank at 0-based position `j`.
    #[inline]
    pub fn get(&self, j: usize) -> u8 {
        debug_assert!(j < self.len);
        let w = self.words[j / self.chars_per_word];
        ((w >> ((j % self.chars_per_word) as u32 * self.bits)) & ((1 << self.bits) - 1)) as u8
    }

    /// The raw 64-bit word holding block `p`.
    #[inline]
    pub fn word(&self, p: usize) -> u64 {
        self.words[p]
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn chars_per_word(&self) -> usize {
        self.chars_per_word
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    pub(crate) fn from_raw(words: Vec<u64>, len: usize, bits: u32) -> Result<Self> {
        let cpw = chars_per_word(bits);
        if words.len() != len.div_ceil(cpw) {
            return Err(Error::Truncated("packed text word count"));
        }
        Ok(PackedText { words, len, bits, chars_per_word: cpw })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_sequence_has_no_words() {
        let p = PackedText::pack(&[], 3).unwrap();
        assert_eq!(p.len(), 0);
        assert!(p.words().is_empty());
    }

    #[test]
    fn dna_block_round_trips() {
        // ACGCGTAT as 2-bit ranks
        let ranks = [0, 1, 2, 1, 2, 3, 0, 3];
        let p = PackedText::pack(&ranks, 2).unwrap();
        let back: Vec<u8> = p.iter().collect();
        assert_eq!(back, ranks);
    }

    #[test]
    fn rank_overflow_is_rejected() {
        assert!(PackedText::pack(&[4], 2).is_err());
        assert!(PackedText::pack(&[3], 2).is_ok());
    }

    #[test]
    fn chars_per_word_layout() {
        assert_eq!(chars_per_word(1), 63);
        assert_eq!(chars_per_word(2), 32);
        assert_eq!(chars_per_word(3), 21);
        assert_eq!(chars_per_word(4), 16);
        assert_eq!(chars_per_word(5), 12);
    }

    #[test]
    fn trailing_bits_are_zero() {
        for bits in 1..=5u32 {
            let cpw = chars_per_word(bits);
            let n = cpw * 2 + 3;
            let ranks: Vec<u8> = (0..n).map(|j| (j % (1 << bits)) as u8).collect();
            let p = PackedText::pack(&ranks, bits).unwrap();
            let used = (n - 2 * cpw) as u32 * bits;
            assert_eq!(p.words()[2] >> used, 0);
        }
    }

    proptest! {
        #[test]
        fn pack_then_get_is_identity(
            bits in 1u32..=5,
            seq in proptest::collection::vec(0u8..32, 0..1000),
        ) {
            let seq: Vec<u8> = seq.into_iter().map(|r| r % (1 << bits) as u8).collect();
            let p = PackedText::pack(&seq, bits).unwrap();
            let back: Vec<u8> = p.iter().collect();
            prop_assert_eq!(back, seq);
        }
    }
}
