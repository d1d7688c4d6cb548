//! Unidirectional FM index: C table, backward search, count, and locate via
//! a sampled suffix array, generic over the rank dictionary.

use crate::alphabet::Alphabet;
use crate::epr::EprDictionary;
use crate::error::{Error, Result};
use crate::packed::PackedText;
use crate::suffix::{build_suffix_array, bwt_from_sa};
use crate::wavelet::WaveletTree;

/// The Occ / Prefix-Occ abstraction both dictionaries implement.
pub trait RankDict {
    fn len(&self) -> usize;
    fn sigma_eff(&self) -> usize;
    /// Occurrences of `c_rank` among the first `i` BWT characters.
    fn occ(&self, c_rank: u8, i: usize) -> usize;
    /// Occurrences of characters `<= c_rank` among the first `i` BWT characters.
    fn prefix_occ(&self, c_rank: u8, i: usize) -> usize;
    /// BWT character at 0-based position `i`.
    fn access(&self, i: usize) -> u8;
    /// Bytes holding the (packed or level-wise) BWT payload.
    fn bwt_bytes(&self) -> usize;
    /// Bytes holding the block/superblock count structures.
    fn count_bytes(&self) -> usize;
}

impl RankDict for EprDictionary {
    fn len(&self) -> usize {
        self.len()
    }
    fn sigma_eff(&self) -> usize {
        self.sigma_eff()
    }
    #[inline]
    fn occ(&self, c_rank: u8, i: usize) -> usize {
        EprDictionary::occ(self, c_rank, i)
    }
    #[inline]
    fn prefix_occ(&self, c_rank: u8, i: usize) -> usize {
        EprDictionary::prefix_occ(self, c_rank, i)
    }
    fn access(&self, i: usize) -> u8 {
        EprDictionary::access(self, i)
    }
    fn bwt_bytes(&self) -> usize {
        EprDictionary::bwt_bytes(self)
    }
    fn count_bytes(&self) -> usize {
        EprDictionary::count_bytes(self)
    }
}

impl RankDict for WaveletTree {
    fn len(&self) -> usize {
        self.len()
    }
    fn sigma_eff(&self) -> usize {
        self.sigma_eff()
    }
    #[inline]
    fn occ(&self, c_rank: u8, i: usize) -> usize {
        WaveletTree::occ(self, c_rank, i)
    }
    #[inline]
    fn prefix_occ(&self, c_rank: u8, i: usize) -> usize {
        WaveletTree::prefix_occ(self, c_rank, i)
    }
    fn access(&self, i: usize) -> u8 {
        WaveletTree::access(self, i)
    }
    fn bwt_bytes(&self) -> usize {
        WaveletTree::bwt_bytes(self)
    }
    fn count_bytes(&self) -> usize {
        WaveletTree::count_bytes(self)
    }
}

/// 1-based inclusive interval into the sorted-rotation order. Empty iff
/// `a > b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchRange {
    pub a: usize,
    pub b: usize,
}

impl SearchRange {
    pub fn full(n: usize) -> Self {
        SearchRange { a: 1, b: n }
    }

    pub fn empty() -> Self {
        SearchRange { a: 1, b: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.a > self.b
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.b - self.a + 1
        }
    }
}

/// Suffix-array samples at every eta-th text position, so any occurrence is
/// recovered in fewer than eta LF steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledSa {
    rate: usize,
    /// Sorted BWT rows carrying a sample.
    rows: Vec<u32>,
    /// 1-based text position per sampled row.
    positions: Vec<u32>,
}

impl SampledSa {
    fn build(sa: &[u32], rate: usize) -> Self {
        assert!(rate >= 1);
        let mut rows = Vec::new();
        let mut positions = Vec::new();
        for (row0, &pos) in sa.iter().enumerate() {
            if pos as usize % rate == 1 % rate {
                rows.push(row0 as u32 + 1);
                positions.push(pos);
            }
        }
        SampledSa { rate, rows, positions }
    }

    pub fn rate(&self) -> usize {
        self.rate
    }

    #[inline]
    fn lookup(&self, row: usize) -> Option<usize> {
        self.rows
            .binary_search(&(row as u32))
            .ok()
            .map(|i| self.positions[i] as usize)
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        (self.rows.len() + self.positions.len()) * 4
    }

    pub(crate) fn parts(&self) -> (usize, &[u32], &[u32]) {
        (self.rate, &self.rows, &self.positions)
    }

    pub(crate) fn from_parts(rate: usize, rows: Vec<u32>, positions: Vec<u32>) -> Result<Self> {
        if rows.len() != positions.len() || rows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Truncated("suffix-array samples"));
        }
        Ok(SampledSa { rate, rows, positions })
    }
}

/// Which dictionary backs an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DictKind {
    Epr,
    Wavelet,
}

/// FM index over a sentinel-terminated text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmIndex<D: RankDict> {
    dict: D,
    counts: Vec<usize>,
    alphabet: Alphabet,
    samples: SampledSa,
    n: usize,
}

pub const DEFAULT_SAMPLE_RATE: usize = 10;

fn counts_from_dict<D: RankDict>(dict: &D) -> Vec<usize> {
    let n = dict.len();
    let sigma_eff = dict.sigma_eff();
    let mut counts = Vec::with_capacity(sigma_eff + 1);
    counts.push(0);
    for c in 0..sigma_eff {
        counts.push(dict.prefix_occ(c as u8, n));
    }
    counts
}

impl<D: RankDict> FmIndex<D> {
    pub(crate) fn from_built_parts(dict: D, alphabet: Alphabet, samples: SampledSa) -> Self {
        let n = dict.len();
        let counts = counts_from_dict(&dict);
        FmIndex { dict, counts, alphabet, samples, n }
    }

    /// Text length including the sentinel.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dict(&self) -> &D {
        &self.dict
    }

    pub fn samples(&self) -> &SampledSa {
        &self.samples
    }

    /// `C[c]`: BWT characters lexicographically smaller than rank `c`.
    #[inline]
    pub fn count_smaller(&self, c_rank: u8) -> usize {
        self.counts[c_rank as usize]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// One backward-search step: the range of `cP` given the range of `P`.
    #[inline]
    pub fn backward_extend(&self, range: SearchRange, c_rank: u8) -> SearchRange {
        if range.is_empty() {
            return SearchRange::empty();
        }
        let c = self.counts[c_rank as usize];
        SearchRange {
            a: c + self.dict.occ(c_rank, range.a - 1) + 1,
            b: c + self.dict.occ(c_rank, range.b),
        }
    }

    /// Map a sentinel-free pattern to ranks.
    pub fn pattern_ranks(&self, pattern: &[u8]) -> Result<Vec<u8>> {
        self.alphabet.ranks_of(pattern).map_err(|e| match e {
            Error::UnknownSymbol { symbol: crate::alphabet::SENTINEL, .. } => {
                Error::PatternHasSentinel
            }
            other => other,
        })
    }

    /// Range of rotations starting with `pattern`; the empty pattern maps to
    /// the full range.
    pub fn range_of(&self, pattern: &[u8]) -> Result<SearchRange> {
        let ranks = self.pattern_ranks(pattern)?;
        let mut range = SearchRange::full(self.n);
        for &c in ranks.iter().rev() {
            range = self.backward_extend(range, c);
            if range.is_empty() {
                break;
            }
        }
        Ok(range)
    }

    /// Number of occurrences of `pattern` in the text.
    pub fn count(&self, pattern: &[u8]) -> Result<usize> {
        Ok(self.range_of(pattern)?.len())
    }

    /// LF mapping: row of the rotation one position to the left.
    #[inline]
    pub fn lf(&self, row: usize) -> usize {
        let c = self.dict.access(row - 1);
        self.counts[c as usize] + self.dict.occ(c, row)
    }

    /// 1-based text positions for every row of `range`, in ascending order.
    pub fn locate(&self, range: SearchRange) -> Vec<usize> {
        let mut out = Vec::with_capacity(range.len());
        for row in range.a..=range.b.min(self.n) {
            let mut row = row;
            let mut steps = 0usize;
            loop {
                if let Some(pos) = self.samples.lookup(row) {
                    out.push(pos + steps);
                    break;
                }
                row = self.lf(row);
                steps += 1;
                debug_assert!(steps < self.samples.rate());
            }
        }
        out.sort_unstable();
        out
    }

    /// Positions of `pattern`, ascending.
    pub fn find_all(&self, pattern: &[u8]) -> Result<Vec<usize>> {
        let range = self.range_of(pattern)?;
        Ok(self.locate(range))
    }

    /// Recover the text (rank sequence, sentinel terminal) by walking the LF
    /// mapping from the top row.
    pub fn reconstruct_ranks(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.n];
        let mut row = 1usize;
        for k in (0..self.n - 1).rev() {
            let c = self.dict.access(row - 1);
            out[k] = c;
            row = self.lf(row);
        }
        out[self.n - 1] = 0;
        out
    }

    /// Recover the original text bytes (without the sentinel).
    pub fn reconstruct_text(&self) -> Result<Vec<u8>> {
        self.reconstruct_ranks()[..self.n - 1]
            .iter()
            .map(|&r| self.alphabet.symbol_of(r))
            .collect()
    }

    /// Rank-structure bytes, split as (bwt, counts, fixed overhead).
    pub fn dict_space(&self) -> (usize, usize, usize) {
        (self.dict.bwt_bytes(), self.dict.count_bytes(), dict_fixed_bytes())
    }

    /// Total index bytes including C table and suffix-array samples.
    pub fn index_bytes(&self) -> usize {
        let (bwt, counts, fixed) = self.dict_space();
        bwt + counts + fixed + self.counts.len() * 8 + self.samples.heap_bytes()
    }
}

/// Fixed per-dictionary overhead charged by the space accounting: layout
/// parameters and the alphabet descriptor as persisted in the index header.
pub fn dict_fixed_bytes() -> usize {
    64
}

/// Shared construction path: ranks with sentinel -> packed BWT.
pub(crate) fn packed_bwt(ranks_with_sentinel: &[u8], bits: u32) -> Result<(PackedText, Vec<u32>)> {
    let sa = build_suffix_array(ranks_with_sentinel)?;
    let bwt = bwt_from_sa(ranks_with_sentinel, &sa);
    let packed = PackedText::pack(&bwt, bits)?;
    Ok((packed, sa.positions().to_vec()))
}

fn ranks_with_sentinel(alphabet: &Alphabet, text: &[u8]) -> Result<Vec<u8>> {
    let mut ranks = alphabet.ranks_of(text)?;
    ranks.push(0);
    Ok(ranks)
}

impl FmIndex<EprDictionary> {
    /// Build an EPR-backed index over `text` (sentinel appended).
    pub fn build_epr(text: &[u8], alphabet: &Alphabet, sample_rate: usize) -> Result<Self> {
        assert!(alphabet.sentinel_included());
        let ranks = ranks_with_sentinel(alphabet, text)?;
        Self::build_epr_from_ranks(&ranks, alphabet, sample_rate)
    }

    pub(crate) fn build_epr_from_ranks(
        ranks: &[u8],
        alphabet: &Alphabet,
        sample_rate: usize,
    ) -> Result<Self> {
        let (packed, sa) = packed_bwt(ranks, alphabet.bits_per_char())?;
        let dict = EprDictionary::build(packed, alphabet)?;
        let samples = SampledSa::build(&sa, sample_rate);
        Ok(Self::from_built_parts(dict, alphabet.clone(), samples))
    }
}

impl FmIndex<WaveletTree> {
    /// Build a wavelet-tree-backed index over `text` (sentinel appended).
    pub fn build_wavelet(text: &[u8], alphabet: &Alphabet, sample_rate: usize) -> Result<Self> {
        assert!(alphabet.sentinel_included());
        let ranks = ranks_with_sentinel(alphabet, text)?;
        Self::build_wavelet_from_ranks(&ranks, alphabet, sample_rate)
    }

    pub(crate) fn build_wavelet_from_ranks(
        ranks: &[u8],
        alphabet: &Alphabet,
        sample_rate: usize,
    ) -> Result<Self> {
        let (packed, sa) = packed_bwt(ranks, alphabet.bits_per_char())?;
        let dict = WaveletTree::build(&packed, alphabet.sigma_eff())?;
        let samples = SampledSa::build(&sa, sample_rate);
        Ok(Self::from_built_parts(dict, alphabet.clone(), samples))
    }
}
