//! Balanced binary wavelet tree, the O(log sigma) rank baseline.
//!
//! One bit vector per level over the dense-rank codes, most significant bit
//! first; node spans are derived arithmetically during the walk, nothing is
//! stored per node. `occ` and `prefix_occ` come out of the same root-to-leaf
//! traversal: going right, everything routed left is lexicographically
//! smaller.

use crate::bitrank::RankBitVector;
use crate::error::{Error, Result};
use crate::packed::PackedText;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTree {
    levels: Vec<RankBitVector>,
    sigma_eff: usize,
    bits: u32,
    n: usize,
}

impl WaveletTree {
    pub fn build(bwt: &PackedText, sigma_eff: usize) -> Result<Self> {
        let bits = bwt.bits();
        let n = bwt.len();
        let mut current: Vec<u8> = bwt.iter().collect();
        if let Some(&c) = current.iter().find(|&&c| c as usize >= sigma_eff) {
            return Err(Error::RankOutOfRange { rank: c as usize, sigma_eff });
        }
        let mut levels = Vec::with_capacity(bits as usize);
        for k in 0..bits {
            let shift = bits - 1 - k;
            levels.push(RankBitVector::from_bits(
                current.iter().map(|&c| c >> shift & 1 == 1),
            ));
            // Stable-partition each node span by this level's bit. A node
            // span is a maximal run of equal top-k code prefixes; `current`
            // is already sorted by those.
            let node_of = |c: u8| (c as u32) >> (shift + 1);
            let mut next = Vec::with_capacity(n);
            let mut start = 0;
            while start < n {
                let prefix = node_of(current[start]);
                let end = start
                    + current[start..].iter().take_while(|&&c| node_of(c) == prefix).count();
                next.extend(current[start..end].iter().filter(|&&c| c >> shift & 1 == 0));
                next.extend(current[start..end].iter().filter(|&&c| c >> shift & 1 == 1));
                start = end;
            }
            current = next;
        }
        Ok(WaveletTree { levels, sigma_eff, bits, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sigma_eff(&self) -> usize {
        self.sigma_eff
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn levels(&self) -> &[RankBitVector] {
        &self.levels
    }

    /// `(occ, prefix_occ)` at position `i` in one traversal.
    #[inline]
    pub fn occ_and_prefix_occ(&self, c_rank: u8, i: usize) -> (usize, usize) {
        debug_assert!(i <= self.n);
        debug_assert!((c_rank as usize) < self.sigma_eff);
        let mut lo = 0usize;
        let mut hi = self.n;
        let mut pos = i;
        let mut below = 0usize;
        for k in 0..self.bits {
            let level = &self.levels[k as usize];
            let ones_lo = level.rank1(lo);
            let ones_pos = level.rank1(lo + pos) - ones_lo;
            let ones_node = level.rank1(hi) - ones_lo;
            let zeros_node = (hi - lo) - ones_node;
            if c_rank >> (self.bits - 1 - k) & 1 == 0 {
                hi = lo + zeros_node;
                pos -= ones_pos;
            } else {
                below += pos - ones_pos;
                lo += zeros_node;
                pos = ones_pos;
            }
        }
        (pos, below + pos)
    }

    /// Occurrences of `c_rank` among the first `i` characters.
    #[inline]
    pub fn occ(&self, c_rank: u8, i: usize) -> usize {
        self.occ_and_prefix_occ(c_rank, i).0
    }

    /// Occurrences of characters `<= c_rank` among the first `i` characters.
    #[inline]
    pub fn prefix_occ(&self, c_rank: u8, i: usize) -> usize {
        self.occ_and_prefix_occ(c_rank, i).1
    }

    pub fn try_prefix_occ(&self, c_rank: u8, i: usize) -> Result<usize> {
        if i > self.n {
            return Err(Error::PositionOutOfRange { position: i, n: self.n });
        }
        if c_rank as usize >= self.sigma_eff {
            return Err(Error::RankOutOfRange { rank: c_rank as usize, sigma_eff: self.sigma_eff });
        }
        Ok(self.prefix_occ(c_rank, i))
    }

    /// The character at 0-based position `i`, reassembled from its path bits.
    pub fn access(&self, i: usize) -> u8 {
        debug_assert!(i < self.n);
        let mut lo = 0usize;
        let mut hi = self.n;
        let mut pos = i;
        let mut code = 0u8;
        for k in 0..self.bits {
            let level = &self.levels[k as usize];
            let bit = level.get(lo + pos);
            let ones_lo = level.rank1(lo);
            let ones_pos = level.rank1(lo + pos) - ones_lo;
            let ones_node = level.rank1(hi) - ones_lo;
            let zeros_node = (hi - lo) - ones_node;
            code <<= 1;
            if bit {
                code |= 1;
                lo += zeros_node;
                pos = ones_pos;
            } else {
                hi = lo + zeros_node;
                pos -= ones_pos;
            }
        }
        code
    }

    pub(crate) fn from_levels(
        levels: Vec<RankBitVector>,
        sigma_eff: usize,
        bits: u32,
        n: usize,
    ) -> Result<Self> {
        if levels.len() != bits as usize || levels.iter().any(|l| l.len() != n) {
            return Err(Error::Truncated("wavelet level shape"));
        }
        Ok(WaveletTree { levels, sigma_eff, bits, n })
    }

    pub(crate) fn bwt_bytes(&self) -> usize {
        self.levels.iter().map(|l| l.words().len() * 8).sum()
    }

    pub(crate) fn count_bytes(&self) -> usize {
        self.levels.iter().map(|l| l.heap_bytes() - l.words().len() * 8).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epr::EprDictionary;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pack(l: &[u8], sigma_eff: usize) -> PackedText {
        let bits = (usize::BITS - (sigma_eff - 1).leading_zeros()).max(1);
        PackedText::pack(l, bits).unwrap()
    }

    #[test]
    fn binary_alphabet_is_a_single_level() {
        let l = [0u8, 1, 1, 0, 1];
        let wt = WaveletTree::build(&pack(&l, 2), 2).unwrap();
        assert_eq!(wt.levels().len(), 1);
        let level: Vec<bool> = (0..5).map(|i| wt.levels()[0].get(i)).collect();
        assert_eq!(level, [false, true, true, false, true]);
    }

    #[test]
    fn mississippi_top_level_marks_s() {
        // L = "ipssm$pissii"; rank(s) = 4 = 0b100 is the only code with the
        // top of the 3 bits set.
        let l = [1u8, 3, 4, 4, 2, 0, 3, 1, 4, 4, 1, 1];
        let wt = WaveletTree::build(&pack(&l, 5), 5).unwrap();
        let top: Vec<bool> = (0..12).map(|i| wt.levels()[0].get(i)).collect();
        let expected: Vec<bool> = l.iter().map(|&c| c == 4).collect();
        assert_eq!(top, expected);
        assert_eq!(wt.occ(1, 12), 4); // Occ(i, 12) = 4
        assert_eq!(wt.prefix_occ(3, 5), 3);
        for c in 0..5 {
            assert_eq!(wt.occ(c, 0), 0);
        }
    }

    #[test]
    fn every_level_has_n_bits() {
        let mut rng = StdRng::seed_from_u64(23);
        let l: Vec<u8> = (0..777).map(|_| rng.gen_range(0..11)).collect();
        let wt = WaveletTree::build(&pack(&l, 11), 11).unwrap();
        assert_eq!(wt.levels().len(), 4);
        for level in wt.levels() {
            assert_eq!(level.len(), 777);
        }
    }

    #[test]
    fn access_round_trips_and_ranks_match_epr() {
        let mut rng = StdRng::seed_from_u64(29);
        for &sigma_eff in &[2usize, 5, 11, 17, 28] {
            for _ in 0..5 {
                let n = rng.gen_range(1..=1024);
                let l: Vec<u8> = (0..n).map(|_| rng.gen_range(0..sigma_eff as u8)).collect();
                let packed = pack(&l, sigma_eff);
                let wt = WaveletTree::build(&packed, sigma_eff).unwrap();
                let epr = EprDictionary::build_raw(packed, sigma_eff).unwrap();
                for (i, &c) in l.iter().enumerate() {
                    assert_eq!(wt.access(i), c);
                }
                for c in 0..sigma_eff as u8 {
                    for i in (0..=n).step_by(7).chain([n]) {
                        assert_eq!(wt.occ(c, i), epr.occ(c, i), "sigma={sigma_eff} c={c} i={i}");
                        assert_eq!(wt.prefix_occ(c, i), epr.prefix_occ(c, i));
                    }
                }
                // everything is <= the largest rank
                for i in 0..=n {
                    assert_eq!(wt.prefix_occ(sigma_eff as u8 - 1, i), i);
                }
            }
        }
    }

    #[test]
    fn bounds_are_checked() {
        let wt = WaveletTree::build(&pack(&[0, 1, 2], 4), 4).unwrap();
        assert!(wt.try_prefix_occ(3, 3).is_ok());
        assert!(wt.try_prefix_occ(4, 3).is_err());
        assert!(wt.try_prefix_occ(0, 4).is_err());
    }
}
