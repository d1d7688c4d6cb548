//! The Enhanced Prefixsum Rank dictionary.
//!
//! Answers `prefix_occ(c, i)` — occurrences of characters lexicographically
//! `<= c` among the first `i` BWT characters — in constant time, computed
//! directly on the packed BWT. Per stored character there are two levels of
//! cumulative counts (blocks and superblocks); the in-block remainder is a
//! lane-wise subtract-and-mask over one 64-bit word followed by a single
//! popcount.
//!
//! # Lane arithmetic
//!
//! Characters occupy `b`-bit slots, least significant first. Comparison
//! lanes are `2b` bits wide. For a character `c` the rank mask `rb(c)`
//! repeats the lane value `2^b + c`. Subtracting a `b`-bit slot value `x`
//! from that lane leaves the lane's bit `b` (the guard bit) set iff
//! `x <= c`; since the minuend is at least `2^b` and the subtrahend below
//! `2^b`, no borrow ever crosses a lane. Slots at even positions are
//! compared in place, slots at odd positions after shifting the word right
//! by `b`; the two guard-bit words are merged with a 1-bit shift so one
//! popcount counts both.
//!
//! No count array is stored for the largest character: everything is `<=`
//! it, so its prefix rank is the position itself.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::packed::{chars_per_word, guard_bit, PackedText};

/// Blocks (64-bit BWT words) per superblock. A superblock spans at most
/// 64 * 63 characters, so block counts fit in 16 bits.
pub const BLOCKS_PER_SUPERBLOCK: usize = 64;

/// The fixed word masks driving the in-block comparison for one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneMasks {
    bits: u32,
    /// Selects the `b`-bit slot at the bottom of each `2b`-bit lane.
    even_slots: u64,
    /// Selects the guard bit of each lane.
    guards: u64,
    /// `rb(c)` per character rank: lane value `2^b + c`, repeated.
    rank_masks: Vec<u64>,
    /// `prefix[t]`: guard-bit positions of the first `t` characters in the
    /// merged word.
    prefix_guards: Vec<u64>,
}

/// Intermediate words of one in-block comparison, exposed for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockTransform {
    /// Guard bits of characters at even slots (compared in place).
    pub even_slots: u64,
    /// Guard bits of characters at odd slots (compared after the `b`-bit
    /// shift), before the merge shift.
    pub odd_slots: u64,
    /// `even_slots | (odd_slots << 1)`.
    pub merged: u64,
}

impl LaneMasks {
    pub fn new(bits: u32, sigma_eff: usize) -> Self {
        assert!(bits >= 1 && bits <= 8);
        let lane = 2 * bits;
        let mut even_slots = 0u64;
        let mut guards = 0u64;
        let mut off = 0;
        while off < 64 {
            even_slots |= ((1u64 << bits) - 1) << off;
            if off + bits < 64 {
                guards |= 1u64 << (off + bits);
            }
            off += lane;
        }
        let rank_masks = (0..sigma_eff as u64)
            .map(|c| {
                let lane_value = (1u64 << bits) | c;
                let mut m = 0u64;
                let mut off = 0;
                while off < 64 {
                    m |= lane_value << off;
                    off += lane;
                }
                m
            })
            .collect();
        let cpw = chars_per_word(bits);
        let mut prefix_guards = Vec::with_capacity(cpw + 1);
        let mut acc = 0u64;
        prefix_guards.push(0);
        for j in 0..cpw {
            acc |= 1u64 << guard_bit(j, bits);
            prefix_guards.push(acc);
        }
        LaneMasks { bits, even_slots, guards, rank_masks, prefix_guards }
    }

    pub fn even_slot_mask(&self) -> u64 {
        self.even_slots
    }

    pub fn guard_mask(&self) -> u64 {
        self.guards
    }

    pub fn rank_mask(&self, c_rank: u8) -> u64 {
        self.rank_masks[c_rank as usize]
    }

    /// Compare every character slot of `word` against `c_rank`.
    #[inline]
    pub fn transform(&self, word: u64, c_rank: u8) -> BlockTransform {
        let rb = self.rank_masks[c_rank as usize];
        let even = rb.wrapping_sub(word & self.even_slots) & self.guards;
        let odd = rb.wrapping_sub((word >> self.bits) & self.even_slots) & self.guards;
        BlockTransform { even_slots: even, odd_slots: odd, merged: even | (odd << 1) }
    }

    /// Number of the first `t` characters of `word` that are `<= c_rank`.
    #[inline]
    pub fn in_block_prefix_rank(&self, word: u64, c_rank: u8, t: usize) -> usize {
        (self.transform(word, c_rank).merged & self.prefix_guards[t]).count_ones() as usize
    }
}

/// Constant-time prefix-sum rank dictionary over a packed BWT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EprDictionary {
    bwt: PackedText,
    sigma_eff: usize,
    bits: u32,
    masks: LaneMasks,
    /// `(num_blocks + 1) * (sigma_eff - 1)` entries; per block and stored
    /// rank, characters `<= rank` from the superblock start to the block
    /// start.
    blocks: Vec<u16>,
    /// Per superblock and stored rank, characters `<= rank` before the
    /// superblock.
    superblocks: Vec<u64>,
}

impl EprDictionary {
    /// One linear scan over the packed BWT.
    pub fn build(bwt: PackedText, alphabet: &Alphabet) -> Result<Self> {
        let sigma_eff = alphabet.sigma_eff();
        let bits = alphabet.bits_per_char();
        assert_eq!(bits, bwt.bits());
        Self::build_raw(bwt, sigma_eff)
    }

    pub(crate) fn build_raw(bwt: PackedText, sigma_eff: usize) -> Result<Self> {
        let bits = bwt.bits();
        let stored = sigma_eff - 1;
        let cpb = bwt.chars_per_word();
        let n = bwt.len();
        let num_blocks = bwt.words().len();
        let num_superblocks = num_blocks / BLOCKS_PER_SUPERBLOCK + 1;

        let mut blocks = Vec::with_capacity((num_blocks + 1) * stored);
        let mut superblocks = Vec::with_capacity(num_superblocks * stored);
        // occurrences of each character seen so far
        let mut totals = vec![0u64; sigma_eff];
        // cumulative <=r counts at the current superblock start
        let mut at_superblock = vec![0u64; stored];

        for p in 0..=num_blocks {
            if p % BLOCKS_PER_SUPERBLOCK == 0 {
                let mut run = 0u64;
                for r in 0..stored {
                    run += totals[r];
                    superblocks.push(run);
                    at_superblock[r] = run;
                }
            }
            let mut run = 0u64;
            for r in 0..stored {
                run += totals[r];
                blocks.push((run - at_superblock[r]) as u16);
            }
            if p < num_blocks {
                for j in p * cpb..((p + 1) * cpb).min(n) {
                    let c = bwt.get(j) as usize;
                    if c >= sigma_eff {
                        return Err(Error::RankOutOfRange { rank: c, sigma_eff });
                    }
                    totals[c] += 1;
                }
            }
        }

        Ok(EprDictionary {
            masks: LaneMasks::new(bits, sigma_eff),
            bwt,
            sigma_eff,
            bits,
            blocks,
            superblocks,
        })
    }

    pub fn len(&self) -> usize {
        self.bwt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bwt.is_empty()
    }

    pub fn sigma_eff(&self) -> usize {
        self.sigma_eff
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn masks(&self) -> &LaneMasks {
        &self.masks
    }

    pub fn bwt(&self) -> &PackedText {
        &self.bwt
    }

    pub fn chars_per_block(&self) -> usize {
        self.bwt.chars_per_word()
    }

    /// Characters `<= c_rank` among the first `i` BWT characters. For the
    /// largest rank the answer is `i` with no memory access.
    #[inline]
    pub fn prefix_occ(&self, c_rank: u8, i: usize) -> usize {
        debug_assert!(i <= self.bwt.len());
        debug_assert!((c_rank as usize) < self.sigma_eff);
        let r = c_rank as usize;
        if r == self.sigma_eff - 1 {
            return i;
        }
        let cpb = self.bwt.chars_per_word();
        let stored = self.sigma_eff - 1;
        let p = i / cpb;
        let t = i % cpb;
        let mut count = self.superblocks[(p / BLOCKS_PER_SUPERBLOCK) * stored + r]
            + self.blocks[p * stored + r] as u64;
        if t != 0 {
            count += self.masks.in_block_prefix_rank(self.bwt.word(p), c_rank, t) as u64;
        }
        count as usize
    }

    /// Occurrences of exactly `c_rank` among the first `i` BWT characters:
    /// the difference of two prefix ranks (one, for the smallest rank).
    #[inline]
    pub fn occ(&self, c_rank: u8, i: usize) -> usize {
        let le = self.prefix_occ(c_rank, i);
        if c_rank == 0 {
            le
        } else {
            le - self.prefix_occ(c_rank - 1, i)
        }
    }

    /// Checked variant of [`prefix_occ`](Self::prefix_occ).
    pub fn try_prefix_occ(&self, c_rank: u8, i: usize) -> Result<usize> {
        if i > self.bwt.len() {
            return Err(Error::PositionOutOfRange { position: i, n: self.bwt.len() });
        }
        if c_rank as usize >= self.sigma_eff {
            return Err(Error::RankOutOfRange { rank: c_rank as usize, sigma_eff: self.sigma_eff });
        }
        Ok(self.prefix_occ(c_rank, i))
    }

    /// The BWT character at 0-based position `i`.
    #[inline]
    pub fn access(&self, i: usize) -> u8 {
        self.bwt.get(i)
    }

    pub(crate) fn bwt_bytes(&self) -> usize {
        self.bwt.words().len() * 8
    }

    pub(crate) fn count_bytes(&self) -> usize {
        self.blocks.len() * 2 + self.superblocks.len() * 8
    }

    pub(crate) fn count_parts(&self) -> (&[u16], &[u64]) {
        (&self.blocks, &self.superblocks)
    }

    pub(crate) fn from_parts(
        bwt: PackedText,
        sigma_eff: usize,
        blocks: Vec<u16>,
        superblocks: Vec<u64>,
    ) -> Result<Self> {
        let rebuilt = Self::build_raw(bwt, sigma_eff)?;
        if rebuilt.blocks != blocks || rebuilt.superblocks != superblocks {
            return Err(Error::Truncated("EPR count arrays inconsistent with BWT"));
        }
        Ok(rebuilt)
    }
}
