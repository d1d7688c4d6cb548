//! FM and 2FM indices over arbitrary finite ordered alphabets.
//!
//! The rank dictionary behind the index is pluggable:
//!
//! * [`EprDictionary`] answers prefix-sum rank queries in constant time,
//!   straight off the packed BWT, via lane-wise subtract-and-mask plus
//!   two-level per-character count arrays.
//! * [`WaveletTree`] is the classic O(log sigma) baseline.
//!
//! On top sit the unidirectional [`FmIndex`] (backward search, count,
//! locate through a sampled suffix array) and the bidirectional
//! [`BiFmIndex`] (synchronized left/right extension of a pattern infix).
//! The [`bench`] module reproduces the runtime and space trends of the two
//! dictionaries at desk scale, and [`io`] persists indices in a versioned,
//! checksummed binary format.

pub mod alphabet;
pub mod bench;
pub mod bifm;
pub mod bitrank;
pub mod epr;
pub mod error;
pub mod fm;
pub mod io;
pub mod packed;
pub mod suffix;
pub mod wavelet;

pub use alphabet::{Alphabet, SENTINEL};
pub use bifm::{BiFmIndex, BiSearchRange};
pub use bitrank::RankBitVector;
pub use epr::{EprDictionary, LaneMasks};
pub use error::{Error, Result};
pub use fm::{
    dict_fixed_bytes, DictKind, FmIndex, RankDict, SampledSa, SearchRange, DEFAULT_SAMPLE_RATE,
};
pub use packed::PackedText;
pub use suffix::{build_suffix_array, bwt_from_sa, reverse_text, SuffixArray};
pub use wavelet::WaveletTree;
