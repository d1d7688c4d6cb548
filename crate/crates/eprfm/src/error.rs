use thiserror::Error;

/// Errors produced by index construction, queries, and persistence.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol:?} (byte 0x{symbol:02x}) is not in the alphabet{}", position_note(.position))]
    UnknownSymbol { symbol: u8, position: Option<usize> },

    #[error("rank {rank} out of range for alphabet of effective size {sigma_eff}")]
    RankOutOfRange { rank: usize, sigma_eff: usize },

    #[error("rank {rank} does not fit into {bits} bits")]
    RankOverflow { rank: usize, bits: u32 },

    #[error("position {position} out of range (n = {n})")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("text does not end with the sentinel")]
    SentinelMissing,

    #[error("sentinel occurs at interior position {position}")]
    SentinelNotUnique { position: usize },

    #[error("alphabet must have an effective size of at least 2")]
    AlphabetTooSmall,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(u8),

    #[error("patterns must not contain the sentinel")]
    PatternHasSentinel,

    #[error("empty search range")]
    EmptyRange,

    #[error("query length {m} exceeds text length {n}")]
    QueryTooLong { m: usize, n: usize },

    #[error("bad magic bytes (not an index file)")]
    BadMagic,

    #[error("unsupported index format version {0}")]
    UnsupportedVersion(u32),

    #[error("index file checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("index file truncated or malformed: {0}")]
    Truncated(&'static str),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn position_note(position: &Option<usize>) -> String {
    match position {
        Some(p) => format!(" at position {p}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
