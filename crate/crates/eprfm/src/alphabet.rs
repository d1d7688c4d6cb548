//! Ordered finite alphabets with dense integer ranks.
//!
//! Every packed structure in this crate encodes a symbol by its dense rank
//! using a fixed number of bits per symbol. When the sentinel is included it
//! always takes rank 0, so DNA indexes use 3 bits per symbol, not 2.

use crate::error::{Error, Result};

/// The terminal sentinel byte. It is appended by the index layer and must not
/// occur in input texts or patterns.
pub const SENTINEL: u8 = b'$';

/// An ordered set of symbols with a dense, order-preserving rank assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    sentinel_included: bool,
    bits_per_char: u32,
}

impl Alphabet {
    /// Alphabet over the given symbols, without a sentinel. Symbols are
    /// sorted; duplicates and the sentinel byte are rejected.
    pub fn new(symbols: &[u8]) -> Result<Self> {
        Self::build(symbols, false)
    }

    /// Alphabet over the given symbols plus the sentinel at rank 0.
    /// This is what the index layer always uses.
    pub fn with_sentinel(symbols: &[u8]) -> Result<Self> {
        Self::build(symbols, true)
    }

    fn build(symbols: &[u8], sentinel_included: bool) -> Result<Self> {
        let mut symbols = symbols.to_vec();
        symbols.sort_unstable();
        for pair in symbols.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateSymbol(pair[0]));
            }
        }
        if symbols.contains(&SENTINEL) {
            return Err(Error::DuplicateSymbol(SENTINEL));
        }
        let sigma_eff = symbols.len() + usize::from(sentinel_included);
        if sigma_eff < 2 {
            return Err(Error::AlphabetTooSmall);
        }
        let bits_per_char = (usize::BITS - (sigma_eff - 1).leading_zeros()).max(1);
        Ok(Alphabet { symbols, sentinel_included, bits_per_char })
    }

    /// DNA nucleotides `ACGT`.
    pub fn dna() -> Self {
        Self::new(b"ACGT").unwrap()
    }

    /// A 10-letter reduced amino acid alphabet (Murphy-style class
    /// representatives), used for benchmarking.
    pub fn murphy10() -> Self {
        Self::new(b"ACFGHKLPST").unwrap()
    }

    /// The 16 IUPAC nucleotide codes.
    pub fn iupac16() -> Self {
        Self::new(b"ABCDGHKMNRSTUVWY").unwrap()
    }

    /// A 27-symbol protein alphabet (26 letters plus stop).
    pub fn protein27() -> Self {
        Self::new(b"*ABCDEFGHIJKLMNOPQRSTUVWXYZ").unwrap()
    }

    /// A benchmark alphabet of the given size, drawn from a fixed symbol pool.
    pub fn of_size(sigma: usize) -> Result<Self> {
        const POOL: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789abcdefghijklmnopqrstuvwxyz";
        if sigma > POOL.len() {
            return Err(Error::AlphabetTooSmall);
        }
        Self::new(&POOL[..sigma])
    }

    /// Number of symbols excluding the sentinel.
    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    /// Effective alphabet size: sigma plus one if the sentinel is included.
    pub fn sigma_eff(&self) -> usize {
        self.symbols.len() + usize::from(self.sentinel_included)
    }

    /// Bits per packed symbol, `ceil(log2(sigma_eff))`.
    pub fn bits_per_char(&self) -> u32 {
        self.bits_per_char
    }

    pub fn sentinel_included(&self) -> bool {
        self.sentinel_included
    }

    /// The symbols excluding the sentinel, in increasing order.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Dense rank of a symbol. The sentinel has rank 0 when included.
    pub fn rank_of(&self, symbol: u8) -> Result<u8> {
        if self.sentinel_included && symbol == SENTINEL {
            return Ok(0);
        }
        match self.symbols.binary_search(&symbol) {
            Ok(i) => Ok((i + usize::from(self.sentinel_included)) as u8),
            Err(_) => Err(Error::UnknownSymbol { symbol, position: None }),
        }
    }

    /// Inverse of [`rank_of`](Self::rank_of).
    pub fn symbol_of(&self, rank: u8) -> Result<u8> {
        let rank = rank as usize;
        if rank >= self.sigma_eff() {
            return Err(Error::RankOutOfRange { rank, sigma_eff: self.sigma_eff() });
        }
        if self.sentinel_included {
            if rank == 0 {
                return Ok(SENTINEL);
            }
            Ok(self.symbols[rank - 1])
        } else {
            Ok(self.symbols[rank])
        }
    }

    /// Map a whole text to ranks, reporting the position of the first symbol
    /// outside the alphabet. The sentinel is rejected here; it is appended in
    /// rank form by the caller.
    pub fn ranks_of(&self, text: &[u8]) -> Result<Vec<u8>> {
        text.iter()
            .enumerate()
            .map(|(i, &s)| {
                if s == SENTINEL {
                    return Err(Error::UnknownSymbol { symbol: s, position: Some(i + 1) });
                }
                self.rank_of(s)
                    .map_err(|_| Error::UnknownSymbol { symbol: s, position: Some(i + 1) })
            })
            .collect()
    }
}
