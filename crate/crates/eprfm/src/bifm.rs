//! Bidirectional FM index: paired indices over the text and its reverse,
//! kept synchronized through the `smaller` offset, which a prefix-sum rank
//! dictionary delivers with a single rank query pair per step.

use crate::alphabet::Alphabet;
use crate::epr::EprDictionary;
use crate::error::Result;
use crate::fm::{FmIndex, RankDict, SearchRange};
use crate::suffix::reverse_text;
use crate::wavelet::WaveletTree;

/// Mirrored 1-based ranges for the current pattern infix: `[a, b]` in the
/// index of the text, `[a_rev, b_rev]` in the index of the reversed text.
/// Both are empty together and always have equal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiSearchRange {
    pub fwd: SearchRange,
    pub rev: SearchRange,
}

impl BiSearchRange {
    pub fn empty() -> Self {
        BiSearchRange { fwd: SearchRange::empty(), rev: SearchRange::empty() }
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }
}

/// Two FM indices with the same alphabet and dictionary kind, one for the
/// text and one for its reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiFmIndex<D: RankDict> {
    fwd: FmIndex<D>,
    rev: FmIndex<D>,
}

impl<D: RankDict> BiFmIndex<D> {
    pub(crate) fn from_pair(fwd: FmIndex<D>, rev: FmIndex<D>) -> Self {
        assert_eq!(fwd.len(), rev.len());
        BiFmIndex { fwd, rev }
    }

    /// The index over the original text; locate and counting run here.
    pub fn fwd(&self) -> &FmIndex<D> {
        &self.fwd
    }

    /// The index over the reversed text.
    pub fn rev(&self) -> &FmIndex<D> {
        &self.rev
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.fwd.alphabet()
    }

    /// State for the empty pattern: the full range in both indices.
    pub fn init_range(&self) -> BiSearchRange {
        BiSearchRange {
            fwd: SearchRange::full(self.len()),
            rev: SearchRange::full(self.len()),
        }
    }

    /// Extend the infix `P` to `Pc`: a backward step in the reverse index,
    /// then the forward range is re-synchronized through `smaller`, the
    /// number of occurrences in the old reverse range preceded by a
    /// character below `c`.
    pub fn extend_right(&self, state: BiSearchRange, c_rank: u8) -> BiSearchRange {
        Self::extend(&self.rev, state.rev, state.fwd, c_rank, |rev, fwd| BiSearchRange {
            fwd,
            rev,
        })
    }

    /// Extend the infix `P` to `cP`: the mirror image of
    /// [`extend_right`](Self::extend_right), with the roles of the two
    /// indices swapped.
    pub fn extend_left(&self, state: BiSearchRange, c_rank: u8) -> BiSearchRange {
        Self::extend(&self.fwd, state.fwd, state.rev, c_rank, |fwd, rev| BiSearchRange {
            fwd,
            rev,
        })
    }

    fn extend(
        stepped: &FmIndex<D>,
        step_range: SearchRange,
        mirror: SearchRange,
        c_rank: u8,
        assemble: impl Fn(SearchRange, SearchRange) -> BiSearchRange,
    ) -> BiSearchRange {
        if step_range.is_empty() {
            return BiSearchRange::empty();
        }
        let stepped_new = stepped.backward_extend(step_range, c_rank);
        if stepped_new.is_empty() {
            return BiSearchRange::empty();
        }
        let smaller = if c_rank == 0 {
            0
        } else {
            stepped.dict().prefix_occ(c_rank - 1, step_range.b)
                - stepped.dict().prefix_occ(c_rank - 1, step_range.a - 1)
        };
        let a = mirror.a + smaller;
        let mirror_new = SearchRange { a, b: a + (stepped_new.b - stepped_new.a) };
        assemble(stepped_new, mirror_new)
    }

    /// Occurrence count of the current infix.
    pub fn count(&self, state: BiSearchRange) -> usize {
        state.len()
    }

    /// Positions of the current infix in the original text, ascending.
    pub fn locate(&self, state: BiSearchRange) -> Vec<usize> {
        self.fwd.locate(state.fwd)
    }
}

fn split_ranks(alphabet: &Alphabet, text: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    let mut ranks = alphabet.ranks_of(text)?;
    ranks.push(0);
    let reversed = reverse_text(&ranks)?;
    Ok((ranks, reversed))
}

impl BiFmIndex<EprDictionary> {
    pub fn build_epr(text: &[u8], alphabet: &Alphabet, sample_rate: usize) -> Result<Self> {
        let (ranks, reversed) = split_ranks(alphabet, text)?;
        Ok(Self::from_pair(
            FmIndex::build_epr_from_ranks(&ranks, alphabet, sample_rate)?,
            FmIndex::build_epr_from_ranks(&reversed, alphabet, sample_rate)?,
        ))
    }
}

impl BiFmIndex<WaveletTree> {
    pub fn build_wavelet(text: &[u8], alphabet: &Alphabet, sample_rate: usize) -> Result<Self> {
        let (ranks, reversed) = split_ranks(alphabet, text)?;
        Ok(Self::from_pair(
            FmIndex::build_wavelet_from_ranks(&ranks, alphabet, sample_rate)?,
            FmIndex::build_wavelet_from_ranks(&reversed, alphabet, sample_rate)?,
        ))
    }
}
