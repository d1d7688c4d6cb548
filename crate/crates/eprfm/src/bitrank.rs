//! Two-level constant-time rank over a plain bit vector.
//!
//! Blocks are single 64-bit words; a superblock spans four blocks. Block
//! counts are relative to the enclosing superblock and fit in 16 bits,
//! superblock counts are absolute 64-bit values. The in-block count is a
//! masked popcount. Both count arrays carry one trailing virtual entry so
//! that a query at the very end of the vector reads no out-of-range word.

use crate::error::{Error, Result};

pub const BLOCK_BITS: usize = 64;
pub const BLOCKS_PER_SUPERBLOCK: usize = 4;

/// A bit vector with O(1) `rank1` support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBitVector {
    words: Vec<u64>,
    n_bits: usize,
    /// Per block: ones from the superblock start to the block start.
    blocks: Vec<u16>,
    /// Per superblock: ones before the superblock.
    superblocks: Vec<u64>,
}

impl RankBitVector {
    /// Build from raw words; trailing bits past `n_bits` must be zero.
    pub fn from_words(words: Vec<u64>, n_bits: usize) -> Self {
        debug_assert_eq!(words.len(), n_bits.div_ceil(BLOCK_BITS));
        debug_assert!(n_bits % BLOCK_BITS == 0 || words.last().map_or(true, |w| w >> (n_bits % BLOCK_BITS) == 0));
        let num_blocks = words.len();
        let mut blocks = Vec::with_capacity(num_blocks + 1);
        let mut superblocks = Vec::new();
        let mut total = 0u64;
        let mut in_superblock = 0u64;
        for p in 0..=num_blocks {
            if p % BLOCKS_PER_SUPERBLOCK == 0 {
                superblocks.push(total);
                in_superblock = 0;
            }
            blocks.push(in_superblock as u16);
            if p < num_blocks {
                let ones = words[p].count_ones() as u64;
                in_superblock += ones;
                total += ones;
            }
        }
        RankBitVector { words, n_bits, blocks, superblocks }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut words = Vec::new();
        let mut n_bits = 0usize;
        for b in bits {
            if n_bits % BLOCK_BITS == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1u64 << (n_bits % BLOCK_BITS);
            }
            n_bits += 1;
        }
        Self::from_words(words, n_bits)
    }

    pub fn len(&self) -> usize {
        self.n_bits
    }

    pub fn is_empty(&self) -> bool {
        self.n_bits == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n_bits);
        self.words[i / BLOCK_BITS] >> (i % BLOCK_BITS) & 1 == 1
    }

    /// Number of 1 bits among the first `i` bits; `rank1(0) = 0`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.n_bits);
        let p = i / BLOCK_BITS;
        let t = i % BLOCK_BITS;
        let mut r = self.superblocks[p / BLOCKS_PER_SUPERBLOCK] + self.blocks[p] as u64;
        if t != 0 {
            r += (self.words[p] & ((1u64 << t) - 1)).count_ones() as u64;
        }
        r as usize
    }

    /// Same as [`rank1`](Self::rank1) with a bounds error instead of a panic.
    pub fn try_rank1(&self, i: usize) -> Result<usize> {
        if i > self.n_bits {
            return Err(Error::PositionOutOfRange { position: i, n: self.n_bits });
        }
        Ok(self.rank1(i))
    }

    pub fn count_ones(&self) -> usize {
        self.rank1(self.n_bits)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        self.words.len() * 8 + self.blocks.len() * 2 + self.superblocks.len() * 8
    }

    pub(crate) fn count_parts(&self) -> (&[u16], &[u64]) {
        (&self.blocks, &self.superblocks)
    }

    /// Rebuild from persisted parts, verifying the stored count arrays.
    pub(crate) fn from_saved(
        words: Vec<u64>,
        n_bits: usize,
        blocks: Vec<u16>,
        superblocks: Vec<u64>,
    ) -> Result<Self> {
        if words.len() != n_bits.div_ceil(BLOCK_BITS) {
            return Err(Error::Truncated("bit vector word count"));
        }
        if n_bits % BLOCK_BITS != 0 && words.last().is_some_and(|w| w >> (n_bits % BLOCK_BITS) != 0)
        {
            return Err(Error::Truncated("bit vector trailing bits"));
        }
        let rebuilt = Self::from_words(words, n_bits);
        if rebuilt.blocks != blocks || rebuilt.superblocks != superblocks {
            return Err(Error::Truncated("bit vector count arrays inconsistent"));
        }
        Ok(rebuilt)
    }
}
