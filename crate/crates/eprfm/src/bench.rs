//! Measurement harness: uniform text generation, query sampling from the
//! text (so no search terminates early), timed stepping runs over both
//! dictionary kinds, and space accounting.
//!
//! Timing covers search steps only, never index build or IO; each
//! configuration runs 3 warm-up and 5 measured repetitions and reports the
//! median. Every repetition recomputes the occurrence-sum checksum, which
//! must agree across repetitions and across dictionaries.

use std::hint::black_box;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::alphabet::Alphabet;
use crate::bifm::BiFmIndex;
use crate::error::{Error, Result};
use crate::fm::{DictKind, FmIndex, RankDict, SearchRange, DEFAULT_SAMPLE_RATE};

/// How a query is stepped through the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// m backward steps per query on a unidirectional index.
    UniBackward,
    /// Right half forward from the middle, then the left half backward, on a
    /// bidirectional index. One step per extended character.
    BiSplit,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::UniBackward => "uni-backward",
            Mode::BiSplit => "bi-split",
        }
    }
}

/// One benchmark configuration.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Alphabet size excluding the sentinel.
    pub sigma: usize,
    /// Text length excluding the sentinel.
    pub n: usize,
    /// Number of sampled queries.
    pub q: usize,
    /// Query length.
    pub m: usize,
    pub dict: DictKind,
    pub mode: Mode,
    pub seed: u64,
}

impl BenchConfig {
    /// Desk-scale defaults: n = 10^6, q = 10^4, m = 50.
    pub fn desk(sigma: usize, dict: DictKind, mode: Mode, seed: u64) -> Self {
        BenchConfig { sigma, n: 1_000_000, q: 10_000, m: 50, dict, mode, seed }
    }
}

/// Results of one configuration run.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub dict: DictKind,
    pub sigma_eff: usize,
    pub n: usize,
    pub q: usize,
    pub m: usize,
    pub mode: Mode,
    /// Search steps per measured repetition, counted not estimated.
    pub steps: usize,
    /// Median wall time of the measured repetitions, nanoseconds.
    pub wall_ns: u64,
    pub ns_per_step: f64,
    /// Packed BWT (or wavelet level) payload bytes.
    pub bwt_bytes: usize,
    /// Block/superblock count-structure bytes.
    pub count_bytes: usize,
    /// Fixed per-dictionary overhead bytes (layout parameters, alphabet
    /// descriptor), reported rather than hidden.
    pub fixed_bytes: usize,
    /// Whole index including C table and suffix-array samples; both
    /// directions for bidirectional runs.
    pub index_bytes: usize,
    /// Rank-structure bits divided by `log2(sigma_eff) * n`.
    pub ratio: f64,
    /// Sum of occurrence counts over all queries; identical across
    /// repetitions, dictionaries, and modes for the same text and queries.
    pub checksum: u64,
}

impl BenchReport {
    pub fn csv_header() -> &'static str {
        "dict,sigma_eff,n,q,m,mode,steps,ns_per_step,index_bytes,ratio,checksum"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.2},{},{:.4},{}",
            dict_name(self.dict),
            self.sigma_eff,
            self.n,
            self.q,
            self.m,
            self.mode.name(),
            self.steps,
            self.ns_per_step,
            self.index_bytes,
            self.ratio,
            self.checksum
        )
    }
}

pub fn dict_name(dict: DictKind) -> &'static str {
    match dict {
        DictKind::Epr => "epr",
        DictKind::Wavelet => "wt",
    }
}

/// Uniform random text over the alphabet's symbols. Deterministic per seed.
pub fn gen_text(alphabet: &Alphabet, n: usize, seed: u64) -> Vec<u8> {
    let symbols = alphabet.symbols();
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect()
}

/// `q` length-`m` substrings of `text` at uniform offsets, so every query
/// occurs at least once.
pub fn sample_queries(text: &[u8], q: usize, m: usize, seed: u64) -> Result<Vec<Vec<u8>>> {
    if m > text.len() {
        return Err(Error::QueryTooLong { m, n: text.len() });
    }
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    Ok((0..q)
        .map(|_| {
            let off = rng.gen_range(0..=text.len() - m);
            text[off..off + m].to_vec()
        })
        .collect())
}

const WARMUP_REPS: usize = 3;
const MEASURED_REPS: usize = 5;

/// Run `pass` 3 + 5 times; median measured nanoseconds plus the checksum,
/// which must be identical in every repetition.
fn measure(mut pass: impl FnMut() -> u64) -> (u64, u64) {
    let mut checksum = None;
    let mut times = Vec::with_capacity(MEASURED_REPS);
    for rep in 0..WARMUP_REPS + MEASURED_REPS {
        let start = Instant::now();
        let sum = black_box(pass());
        let elapsed = start.elapsed().as_nanos() as u64;
        match checksum {
            None => checksum = Some(sum),
            Some(c) => assert_eq!(c, sum, "checksum drifted between repetitions"),
        }
        if rep >= WARMUP_REPS {
            times.push(elapsed.max(1));
        }
    }
    times.sort_unstable();
    (times[MEASURED_REPS / 2], checksum.unwrap())
}

fn uni_pass<D: RankDict>(idx: &FmIndex<D>, queries: &[Vec<u8>]) -> u64 {
    let mut sum = 0u64;
    for ranks in queries {
        let mut range = SearchRange::full(idx.len());
        for &c in ranks.iter().rev() {
            range = idx.backward_extend(range, c);
        }
        sum += range.len() as u64;
    }
    sum
}

fn bi_pass<D: RankDict>(idx: &BiFmIndex<D>, queries: &[Vec<u8>]) -> u64 {
    let mut sum = 0u64;
    for ranks in queries {
        let mid = ranks.len() / 2;
        let mut st = idx.init_range();
        for &c in &ranks[mid..] {
            st = idx.extend_right(st, c);
        }
        for &c in ranks[..mid].iter().rev() {
            st = idx.extend_left(st, c);
        }
        sum += st.len() as u64;
    }
    sum
}

/// Space figures for one rank dictionary plus its index superstructure.
pub fn space_report<D: RankDict>(idx: &FmIndex<D>) -> (usize, usize, usize, usize, f64) {
    let (bwt, counts, fixed) = idx.dict_space();
    let bits = ((bwt + counts + fixed) * 8) as f64;
    let ratio = bits / ((idx.dict().sigma_eff() as f64).log2() * idx.len() as f64);
    (bwt, counts, fixed, idx.index_bytes(), ratio)
}

fn report_from<D: RankDict>(
    config: &BenchConfig,
    idx: &FmIndex<D>,
    index_bytes: usize,
    wall_ns: u64,
    checksum: u64,
) -> BenchReport {
    let steps = config.q * config.m;
    let (bwt_bytes, count_bytes, fixed_bytes, _, ratio) = space_report(idx);
    BenchReport {
        dict: config.dict,
        sigma_eff: idx.dict().sigma_eff(),
        n: idx.len(),
        q: config.q,
        m: config.m,
        mode: config.mode,
        steps,
        wall_ns,
        ns_per_step: wall_ns as f64 / steps.max(1) as f64,
        bwt_bytes,
        count_bytes,
        fixed_bytes,
        index_bytes,
        ratio,
        checksum,
    }
}

/// Build, sample, and time one configuration.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    let alphabet = Alphabet::with_sentinel(Alphabet::of_size(config.sigma)?.symbols())?;
    let text = gen_text(&alphabet, config.n, config.seed);
    let queries = sample_queries(&text, config.q, config.m, config.seed)?;
    // rank conversion is index plumbing, not a search step; keep it out of
    // the timed region
    let rank_queries: Vec<Vec<u8>> = queries
        .iter()
        .map(|p| alphabet.ranks_of(p))
        .collect::<Result<_>>()?;

    let report = match (config.mode, config.dict) {
        (Mode::UniBackward, DictKind::Epr) => {
            let idx = FmIndex::build_epr(&text, &alphabet, DEFAULT_SAMPLE_RATE)?;
            let (ns, sum) = measure(|| uni_pass(&idx, &rank_queries));
            report_from(config, &idx, idx.index_bytes(), ns, sum)
        }
        (Mode::UniBackward, DictKind::Wavelet) => {
            let idx = FmIndex::build_wavelet(&text, &alphabet, DEFAULT_SAMPLE_RATE)?;
            let (ns, sum) = measure(|| uni_pass(&idx, &rank_queries));
            report_from(config, &idx, idx.index_bytes(), ns, sum)
        }
        (Mode::BiSplit, DictKind::Epr) => {
            let idx = BiFmIndex::build_epr(&text, &alphabet, DEFAULT_SAMPLE_RATE)?;
            let (ns, sum) = measure(|| bi_pass(&idx, &rank_queries));
            let bytes = idx.fwd().index_bytes() + idx.rev().index_bytes();
            report_from(config, idx.fwd(), bytes, ns, sum)
        }
        (Mode::BiSplit, DictKind::Wavelet) => {
            let idx = BiFmIndex::build_wavelet(&text, &alphabet, DEFAULT_SAMPLE_RATE)?;
            let (ns, sum) = measure(|| bi_pass(&idx, &rank_queries));
            let bytes = idx.fwd().index_bytes() + idx.rev().index_bytes();
            report_from(config, idx.fwd(), bytes, ns, sum)
        }
    };
    Ok(report)
}
