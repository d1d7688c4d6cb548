use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use eprfm::bench::{dict_name, run_bench, BenchConfig, BenchReport, Mode};
use eprfm::io::{load_index, save_index, AnyIndex};
use eprfm::{Alphabet, BiFmIndex, DictKind, Error, FmIndex, SENTINEL};

/// Full-text index over arbitrary ordered alphabets: build, query, and
/// benchmark FM / 2FM indices backed by a constant-time prefix-sum rank
/// dictionary or a wavelet tree.
#[derive(Parser)]
#[command(name = "eprfm", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index file from a text file.
    Build(BuildArgs),
    /// Count pattern occurrences in an index.
    Count(CountArgs),
    /// List the 1-based positions of a pattern.
    Locate(LocateArgs),
    /// Run the timing/space benchmark and print CSV.
    Bench(BenchArgs),
    /// Generate a uniform random text.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphabetChoice {
    /// ACGT
    Dna,
    /// 10-letter reduced amino acid alphabet
    Murphy10,
    /// 16 IUPAC nucleotide codes
    Iupac,
    /// 26 letters plus stop
    Protein,
    /// the distinct bytes of the input
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum DictChoice {
    Epr,
    Wt,
}

impl From<DictChoice> for DictKind {
    fn from(d: DictChoice) -> DictKind {
        match d {
            DictChoice::Epr => DictKind::Epr,
            DictChoice::Wt => DictKind::Wavelet,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Input text file.
    input: PathBuf,
    /// Output index file.
    out: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    alphabet: AlphabetChoice,
    #[arg(long, value_enum, default_value = "epr")]
    dict: DictChoice,
    /// Build the paired forward/reverse index for bidirectional search.
    #[arg(long)]
    bidirectional: bool,
    /// Suffix-array sampling rate (a sample every this many text positions).
    #[arg(long, default_value_t = 10)]
    sample_rate: usize,
    /// Treat the input as FASTA: strip header lines, concatenate sequences.
    #[arg(long)]
    fasta: bool,
}

#[derive(Args)]
struct CountArgs {
    index: PathBuf,
    /// Pattern to count; omit when using --patterns-file.
    pattern: Option<String>,
    /// File with one pattern per line.
    #[arg(long, conflicts_with = "pattern")]
    patterns_file: Option<PathBuf>,
}

#[derive(Args)]
struct LocateArgs {
    index: PathBuf,
    pattern: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Alphabet sizes to sweep (sentinel excluded).
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 10, 16, 27])]
    sigma: Vec<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    q: usize,
    #[arg(long, default_value_t = 50)]
    m: usize,
    /// Restrict to one dictionary kind (default: both).
    #[arg(long, value_enum)]
    dict: Option<DictChoice>,
    /// Also run the bidirectional split-search mode.
    #[arg(long)]
    bidirectional: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// Output text file.
    out: PathBuf,
    #[arg(long, value_enum, default_value = "dna")]
    alphabet: AlphabetChoice,
    /// Alphabet size drawn from a fixed pool; overrides --alphabet.
    #[arg(long)]
    sigma: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                // help/version are successful outcomes, everything else is
                // a usage error
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for data/validation problems, 3 for a corrupt or unreadable index file.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BadMagic
        | Error::UnsupportedVersion(_)
        | Error::ChecksumMismatch { .. }
        | Error::Truncated(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> eprfm::Result<()> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Count(args) => cmd_count(args),
        Command::Locate(args) => cmd_locate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn read_text(path: &PathBuf, fasta: bool) -> eprfm::Result<Vec<u8>> {
    let raw = fs::read(path)?;
    if fasta {
        let mut text = Vec::with_capacity(raw.len());
        for line in raw.split(|&b| b == b'\n') {
            let line = line.strip_suffix(b"\r").unwrap_or(line);
            if line.first() == Some(&b'>') {
                continue;
            }
            text.extend_from_slice(line);
        }
        Ok(text)
    } else {
        // a single trailing newline is file formatting, not text
        let mut text = raw;
        if text.last() == Some(&b'\n') {
            text.pop();
            if text.last() == Some(&b'\r') {
                text.pop();
            }
        }
        Ok(text)
    }
}

fn choose_alphabet(choice: AlphabetChoice, text: &[u8]) -> eprfm::Result<Alphabet> {
    let base = match choice {
        AlphabetChoice::Dna => Alphabet::dna(),
        AlphabetChoice::Murphy10 => Alphabet::murphy10(),
        AlphabetChoice::Iupac => Alphabet::iupac16(),
        AlphabetChoice::Protein => Alphabet::protein27(),
        AlphabetChoice::Auto => {
            if let Some(p) = text.iter().position(|&b| b == SENTINEL) {
                return Err(Error::UnknownSymbol { symbol: SENTINEL, position: Some(p + 1) });
            }
            let mut symbols: Vec<u8> = text.to_vec();
            symbols.sort_unstable();
            symbols.dedup();
            Alphabet::new(&symbols)?
        }
    };
    Alphabet::with_sentinel(base.symbols())
}

fn cmd_build(args: BuildArgs) -> eprfm::Result<()> {
    let text = read_text(&args.input, args.fasta)?;
    let alphabet = choose_alphabet(args.alphabet, &text)?;
    // validate the text against declared alphabets up front so the error
    // names the offending position
    alphabet.ranks_of(&text)?;
    let start = Instant::now();
    let dict: DictKind = args.dict.into();
    let index = match (dict, args.bidirectional) {
        (DictKind::Epr, false) => {
            AnyIndex::EprUni(FmIndex::build_epr(&text, &alphabet, args.sample_rate)?)
        }
        (DictKind::Wavelet, false) => {
            AnyIndex::WtUni(FmIndex::build_wavelet(&text, &alphabet, args.sample_rate)?)
        }
        (DictKind::Epr, true) => {
            AnyIndex::EprBi(BiFmIndex::build_epr(&text, &alphabet, args.sample_rate)?)
        }
        (DictKind::Wavelet, true) => {
            AnyIndex::WtBi(BiFmIndex::build_wavelet(&text, &alphabet, args.sample_rate)?)
        }
    };
    let build_time = start.elapsed();
    save_index(&args.out, &index)?;
    let bytes = fs::metadata(&args.out)?.len();
    println!(
        "built {} index: n={} sigma_eff={} bytes={} build_time={:.3}s",
        index.structure_name(),
        index.len(),
        index.alphabet().sigma_eff(),
        bytes,
        build_time.as_secs_f64()
    );
    Ok(())
}

fn cmd_count(args: CountArgs) -> eprfm::Result<()> {
    let index = load_index(&args.index)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match (&args.pattern, &args.patterns_file) {
        (Some(p), None) => {
            writeln!(out, "{}", index.count(p.as_bytes())?)?;
        }
        (None, Some(path)) => {
            let raw = fs::read_to_string(path)?;
            for line in raw.lines() {
                writeln!(out, "{}", index.count(line.as_bytes())?)?;
            }
        }
        (None, None) => {
            // empty pattern matches every rotation
            writeln!(out, "{}", index.count(b"")?)?;
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
    Ok(())
}

fn cmd_locate(args: LocateArgs) -> eprfm::Result<()> {
    let index = load_index(&args.index)?;
    let positions = index.find_all(args.pattern.as_bytes())?;
    let line: Vec<String> = positions.iter().map(|p| p.to_string()).collect();
    println!("{}", line.join(" "));
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> eprfm::Result<()> {
    let dicts: Vec<DictKind> = match args.dict {
        Some(d) => vec![d.into()],
        None => vec![DictKind::Epr, DictKind::Wavelet],
    };
    let modes: Vec<Mode> = if args.bidirectional {
        vec![Mode::UniBackward, Mode::BiSplit]
    } else {
        vec![Mode::UniBackward]
    };
    println!("{}", BenchReport::csv_header());
    for &sigma in &args.sigma {
        for &mode in &modes {
            for &dict in &dicts {
                let config = BenchConfig {
                    sigma,
                    n: args.n,
                    q: args.q,
                    m: args.m,
                    dict,
                    mode,
                    seed: args.seed,
                };
                let report = run_bench(&config)?;
                println!("{}", report.csv_row());
                eprintln!(
                    "# {} sigma={} mode={}: {:.2} ns/step",
                    dict_name(dict),
                    sigma,
                    mode.name(),
                    report.ns_per_step
                );
            }
        }
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> eprfm::Result<()> {
    let alphabet = match args.sigma {
        Some(sigma) => Alphabet::of_size(sigma)?,
        None => match args.alphabet {
            AlphabetChoice::Dna => Alphabet::dna(),
            AlphabetChoice::Murphy10 => Alphabet::murphy10(),
            AlphabetChoice::Iupac => Alphabet::iupac16(),
            AlphabetChoice::Protein => Alphabet::protein27(),
            AlphabetChoice::Auto => Alphabet::dna(),
        },
    };
    let text = eprfm::bench::gen_text(&alphabet, args.n, args.seed);
    fs::write(&args.out, &text)?;
    println!("wrote {} symbols (sigma={}) to {}", text.len(), alphabet.sigma(), args.out.display());
    Ok(())
}
