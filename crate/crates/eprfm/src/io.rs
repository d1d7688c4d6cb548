//! Versioned binary index files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "EPRX" | version u32 | endian tag u8 (0x01)
//! alphabet: symbol count u16 | symbol bytes | sentinel flag u8 | bits u8
//! structure tag u8 (0 EPR-uni, 1 WT-uni, 2 EPR-bi, 3 WT-bi)
//! n u64 | blob* (each: length u64 | payload)
//! checksum u64 (FNV-1a over every preceding byte)
//! ```
//!
//! One dictionary + C table + sample blob per direction; bidirectional
//! indices carry two sets. Loading verifies checksum, magic, and version,
//! and recomputes the redundant count structures to cross-check the stored
//! ones.

use std::fs;
use std::path::Path;

use crate::alphabet::Alphabet;
use crate::bifm::BiFmIndex;
use crate::bitrank::RankBitVector;
use crate::epr::EprDictionary;
use crate::error::{Error, Result};
use crate::fm::{FmIndex, RankDict, SampledSa};
use crate::packed::PackedText;
use crate::wavelet::WaveletTree;

pub const MAGIC: [u8; 4] = *b"EPRX";
pub const FORMAT_VERSION: u32 = 1;
const LITTLE_ENDIAN_TAG: u8 = 0x01;

const TAG_EPR_UNI: u8 = 0;
const TAG_WT_UNI: u8 = 1;
const TAG_EPR_BI: u8 = 2;
const TAG_WT_BI: u8 = 3;

/// Any index an index file can hold.
pub enum AnyIndex {
    EprUni(FmIndex<EprDictionary>),
    WtUni(FmIndex<WaveletTree>),
    EprBi(BiFmIndex<EprDictionary>),
    WtBi(BiFmIndex<WaveletTree>),
}

impl AnyIndex {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            AnyIndex::EprUni(i) => i.alphabet(),
            AnyIndex::WtUni(i) => i.alphabet(),
            AnyIndex::EprBi(i) => i.alphabet(),
            AnyIndex::WtBi(i) => i.alphabet(),
        }
    }

    /// Text length including the sentinel.
    pub fn len(&self) -> usize {
        match self {
            AnyIndex::EprUni(i) => i.len(),
            AnyIndex::WtUni(i) => i.len(),
            AnyIndex::EprBi(i) => i.len(),
            AnyIndex::WtBi(i) => i.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn structure_name(&self) -> &'static str {
        match self {
            AnyIndex::EprUni(_) => "EPR-uni",
            AnyIndex::WtUni(_) => "WT-uni",
            AnyIndex::EprBi(_) => "EPR-bi",
            AnyIndex::WtBi(_) => "WT-bi",
        }
    }

    pub fn count(&self, pattern: &[u8]) -> Result<usize> {
        match self {
            AnyIndex::EprUni(i) => i.count(pattern),
            AnyIndex::WtUni(i) => i.count(pattern),
            AnyIndex::EprBi(i) => i.fwd().count(pattern),
            AnyIndex::WtBi(i) => i.fwd().count(pattern),
        }
    }

    pub fn find_all(&self, pattern: &[u8]) -> Result<Vec<usize>> {
        match self {
            AnyIndex::EprUni(i) => i.find_all(pattern),
            AnyIndex::WtUni(i) => i.find_all(pattern),
            AnyIndex::EprBi(i) => i.fwd().find_all(pattern),
            AnyIndex::WtBi(i) => i.fwd().find_all(pattern),
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new() -> Self {
        Writer { buf: Vec::new() }
    }

    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    fn bytes(&mut self, v: &[u8]) {
        self.buf.extend_from_slice(v);
    }

    fn blob(&mut self, payload: &[u8]) {
        self.u64(payload.len() as u64);
        self.bytes(payload);
    }

    fn finish(mut self) -> Vec<u8> {
        let checksum = fnv1a64(&self.buf);
        self.u64(checksum);
        self.buf
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.buf.len() {
            return Err(Error::Truncated("unexpected end of file"));
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn blob(&mut self) -> Result<Reader<'a>> {
        let len = self.u64()? as usize;
        Ok(Reader { buf: self.take(len)?, pos: 0 })
    }

    fn u16_vec(&mut self, len: usize) -> Result<Vec<u16>> {
        self.take(len * 2)?
            .chunks_exact(2)
            .map(|c| Ok(u16::from_le_bytes(c.try_into().unwrap())))
            .collect()
    }

    fn u32_vec(&mut self, len: usize) -> Result<Vec<u32>> {
        self.take(len * 4)?
            .chunks_exact(4)
            .map(|c| Ok(u32::from_le_bytes(c.try_into().unwrap())))
            .collect()
    }

    fn u64_vec(&mut self, len: usize) -> Result<Vec<u64>> {
        self.take(len * 8)?
            .chunks_exact(8)
            .map(|c| Ok(u64::from_le_bytes(c.try_into().unwrap())))
            .collect()
    }

    fn done(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Truncated("trailing bytes in blob"));
        }
        Ok(())
    }
}

fn write_epr_blob(dict: &EprDictionary) -> Vec<u8> {
    let mut w = Writer::new();
    w.u64(dict.len() as u64);
    w.u8(dict.bits() as u8);
    w.u16(dict.sigma_eff() as u16);
    let bwt = dict.bwt();
    w.u64(bwt.words().len() as u64);
    for &word in bwt.words() {
        w.u64(word);
    }
    let (blocks, superblocks) = dict.count_parts();
    w.u64(blocks.len() as u64);
    for &m in blocks {
        w.u16(m);
    }
    w.u64(superblocks.len() as u64);
    for &m in superblocks {
        w.u64(m);
    }
    w.buf
}

fn read_epr_blob(r: &mut Reader<'_>) -> Result<EprDictionary> {
    let n = r.u64()? as usize;
    let bits = r.u8()? as u32;
    if !(1..=8).contains(&bits) {
        return Err(Error::Truncated("bits per char"));
    }
    let sigma_eff = r.u16()? as usize;
    if sigma_eff < 2 || sigma_eff > 1 << bits {
        return Err(Error::Truncated("effective alphabet size"));
    }
    let num_words = r.u64()? as usize;
    let words = r.u64_vec(num_words)?;
    let bwt = PackedText::from_raw(words, n, bits)?;
    let num_blocks = r.u64()? as usize;
    let blocks = r.u16_vec(num_blocks)?;
    let num_superblocks = r.u64()? as usize;
    let superblocks = r.u64_vec(num_superblocks)?;
    r.done()?;
    EprDictionary::from_parts(bwt, sigma_eff, blocks, superblocks)
}

fn write_wt_blob(wt: &WaveletTree) -> Vec<u8> {
    let mut w = Writer::new();
    w.u64(wt.len() as u64);
    w.u8(wt.bits() as u8);
    w.u16(wt.sigma_eff() as u16);
    for level in wt.levels() {
        w.u64(level.words().len() as u64);
        for &word in level.words() {
            w.u64(word);
        }
        let (blocks, superblocks) = level.count_parts();
        w.u64(blocks.len() as u64);
        for &m in blocks {
            w.u16(m);
        }
        w.u64(superblocks.len() as u64);
        for &m in superblocks {
            w.u64(m);
        }
    }
    w.buf
}

fn read_wt_blob(r: &mut Reader<'_>) -> Result<WaveletTree> {
    let n = r.u64()? as usize;
    let bits = r.u8()? as u32;
    if !(1..=8).contains(&bits) {
        return Err(Error::Truncated("bits per char"));
    }
    let sigma_eff = r.u16()? as usize;
    let mut levels = Vec::with_capacity(bits as usize);
    for _ in 0..bits {
        let num_words = r.u64()? as usize;
        let words = r.u64_vec(num_words)?;
        let num_blocks = r.u64()? as usize;
        let blocks = r.u16_vec(num_blocks)?;
        let num_superblocks = r.u64()? as usize;
        let superblocks = r.u64_vec(num_superblocks)?;
        levels.push(RankBitVector::from_saved(words, n, blocks, superblocks)?);
    }
    r.done()?;
    WaveletTree::from_levels(levels, sigma_eff, bits, n)
}

fn write_counts_blob(counts: &[usize]) -> Vec<u8> {
    let mut w = Writer::new();
    w.u64(counts.len() as u64);
    for &c in counts {
        w.u64(c as u64);
    }
    w.buf
}

fn read_counts_blob(r: &mut Reader<'_>) -> Result<Vec<usize>> {
    let len = r.u64()? as usize;
    let v = r.u64_vec(len)?;
    r.done()?;
    Ok(v.into_iter().map(|x| x as usize).collect())
}

fn write_samples_blob(samples: &SampledSa) -> Vec<u8> {
    let (rate, rows, positions) = samples.parts();
    let mut w = Writer::new();
    w.u64(rate as u64);
    w.u64(rows.len() as u64);
    for &r in rows {
        w.u32(r);
    }
    for &p in positions {
        w.u32(p);
    }
    w.buf
}

fn read_samples_blob(r: &mut Reader<'_>) -> Result<SampledSa> {
    let rate = r.u64()? as usize;
    if rate == 0 {
        return Err(Error::Truncated("sample rate"));
    }
    let len = r.u64()? as usize;
    let rows = r.u32_vec(len)?;
    let positions = r.u32_vec(len)?;
    r.done()?;
    SampledSa::from_parts(rate, rows, positions)
}

fn write_uni<D: RankDict>(
    w: &mut Writer,
    idx: &FmIndex<D>,
    dict_blob: impl Fn(&D) -> Vec<u8>,
) {
    w.blob(&dict_blob(idx.dict()));
    w.blob(&write_counts_blob(idx.counts()));
    w.blob(&write_samples_blob(idx.samples()));
}

fn read_uni<D: RankDict>(
    r: &mut Reader<'_>,
    alphabet: &Alphabet,
    n: usize,
    dict_blob: impl Fn(&mut Reader<'_>) -> Result<D>,
) -> Result<FmIndex<D>> {
    let dict = dict_blob(&mut r.blob()?)?;
    if dict.len() != n || dict.sigma_eff() != alphabet.sigma_eff() {
        return Err(Error::Truncated("dictionary shape mismatch"));
    }
    let counts = read_counts_blob(&mut r.blob()?)?;
    let samples = read_samples_blob(&mut r.blob()?)?;
    let idx = FmIndex::from_built_parts(dict, alphabet.clone(), samples);
    if idx.counts() != counts {
        return Err(Error::Truncated("C table inconsistent with dictionary"));
    }
    Ok(idx)
}

/// Serialize an index to its on-disk byte representation.
pub fn index_to_bytes(index: &AnyIndex) -> Vec<u8> {
    let mut w = Writer::new();
    w.bytes(&MAGIC);
    w.u32(FORMAT_VERSION);
    w.u8(LITTLE_ENDIAN_TAG);
    let alphabet = index.alphabet();
    w.u16(alphabet.symbols().len() as u16);
    w.bytes(alphabet.symbols());
    w.u8(alphabet.sentinel_included() as u8);
    w.u8(alphabet.bits_per_char() as u8);
    let tag = match index {
        AnyIndex::EprUni(_) => TAG_EPR_UNI,
        AnyIndex::WtUni(_) => TAG_WT_UNI,
        AnyIndex::EprBi(_) => TAG_EPR_BI,
        AnyIndex::WtBi(_) => TAG_WT_BI,
    };
    w.u8(tag);
    w.u64(index.len() as u64);
    match index {
        AnyIndex::EprUni(i) => write_uni(&mut w, i, |d| write_epr_blob(d)),
        AnyIndex::WtUni(i) => write_uni(&mut w, i, |d| write_wt_blob(d)),
        AnyIndex::EprBi(i) => {
            write_uni(&mut w, i.fwd(), |d| write_epr_blob(d));
            write_uni(&mut w, i.rev(), |d| write_epr_blob(d));
        }
        AnyIndex::WtBi(i) => {
            write_uni(&mut w, i.fwd(), |d| write_wt_blob(d));
            write_uni(&mut w, i.rev(), |d| write_wt_blob(d));
        }
    }
    w.finish()
}

/// Parse an index from its on-disk byte representation.
pub fn index_from_bytes(bytes: &[u8]) -> Result<AnyIndex> {
    if bytes.len() < MAGIC.len() + 8 {
        return Err(Error::Truncated("file too short"));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let body = &bytes[..bytes.len() - 8];
    let stored = u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap());
    let computed = fnv1a64(body);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    let mut r = Reader { buf: body, pos: 4 };
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    if r.u8()? != LITTLE_ENDIAN_TAG {
        return Err(Error::Truncated("endianness tag"));
    }
    let sym_count = r.u16()? as usize;
    let symbols = r.take(sym_count)?.to_vec();
    let sentinel = r.u8()? != 0;
    let bits = r.u8()? as u32;
    let alphabet = if sentinel {
        Alphabet::with_sentinel(&symbols)
    } else {
        Alphabet::new(&symbols)
    }
    .map_err(|_| Error::Truncated("alphabet descriptor"))?;
    if alphabet.bits_per_char() != bits {
        return Err(Error::Truncated("alphabet bit width"));
    }
    let tag = r.u8()?;
    let n = r.u64()? as usize;
    let index = match tag {
        TAG_EPR_UNI => AnyIndex::EprUni(read_uni(&mut r, &alphabet, n, read_epr_blob)?),
        TAG_WT_UNI => AnyIndex::WtUni(read_uni(&mut r, &alphabet, n, read_wt_blob)?),
        TAG_EPR_BI => {
            let fwd = read_uni(&mut r, &alphabet, n, read_epr_blob)?;
            let rev = read_uni(&mut r, &alphabet, n, read_epr_blob)?;
            AnyIndex::EprBi(BiFmIndex::from_pair(fwd, rev))
        }
        TAG_WT_BI => {
            let fwd = read_uni(&mut r, &alphabet, n, read_wt_blob)?;
            let rev = read_uni(&mut r, &alphabet, n, read_wt_blob)?;
            AnyIndex::WtBi(BiFmIndex::from_pair(fwd, rev))
        }
        _ => return Err(Error::Truncated("structure tag")),
    };
    r.done()?;
    Ok(index)
}

/// Write an index file.
pub fn save_index(path: &Path, index: &AnyIndex) -> Result<()> {
    fs::write(path, index_to_bytes(index))?;
    Ok(())
}

/// Read and validate an index file.
pub fn load_index(path: &Path) -> Result<AnyIndex> {
    let bytes = fs::read(path)?;
    index_from_bytes(&bytes)
}
