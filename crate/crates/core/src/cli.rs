//! Batch driver: discriminant sweeps, class group inspection, Hilbert symbols
//! and unit norms from the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chevalley::{verify_with_group, ChevalleyReport};
use crate::error::Error;
use crate::normlocal::{hilbert_symbol, hilbert_symbols, Cycle, CycleChoice, Place};
use crate::pell::{fundamental_unit_norm, surd_expansion};
use crate::quadform::{FormClassGroup, FundamentalDiscriminant, DEFAULT_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

const CHUNK: i64 = 4096;

#[derive(Debug, Parser)]
#[command(name = "ambiclass", version, about = "Ambiguous class numbers of quadratic fields")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the ambiguous class number formula over a discriminant range
    Verify(VerifyArgs),
    /// Print class representatives, structure and ambiguous classes of D
    #[command(allow_negative_numbers = true)]
    Classgroup {
        d: i64,
        /// Allow |D| above the default bound of 10^6
        #[arg(long)]
        allow_large: bool,
    },
    /// Hilbert symbol (a, b)_v at one place, or at every relevant place
    #[command(allow_negative_numbers = true)]
    Hilbert {
        a: String,
        b: String,
        /// A prime, `inf`, or `all`
        place: String,
    },
    /// Continued fraction of omega_D and the norm of the fundamental unit
    Pell { d: i64 },
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    #[arg(long)]
    min: i64,
    #[arg(long)]
    max: i64,
    #[arg(long, value_enum, default_value_t = CycleArg::Both)]
    cycle: CycleArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Jsonl)]
    format: OutputFormat,
    /// Write records here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Stop after the first failing record
    #[arg(long)]
    fail_fast: bool,
    /// Allow |D| above the default bound of 10^6
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CycleArg {
    Ordinary,
    Narrow,
    Both,
}

impl CycleArg {
    pub fn cycles(self) -> &'static [Cycle] {
        match self {
            CycleArg::Ordinary => &[Cycle::Ordinary],
            CycleArg::Narrow => &[Cycle::Narrow],
            CycleArg::Both => &[Cycle::Ordinary, Cycle::Narrow],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

/// Parameters of a verification sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub min_d: i64,
    pub max_d: i64,
    pub cycles: CycleArg,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub parallelism: usize,
    pub fail_fast: bool,
    pub bound: u64,
}

impl SweepConfig {
    pub fn new(min_d: i64, max_d: i64) -> Self {
        Self {
            min_d,
            max_d,
            cycles: CycleArg::Both,
            output_format: OutputFormat::Jsonl,
            output_path: None,
            parallelism: default_jobs(),
            fail_fast: false,
            bound: DEFAULT_BOUND,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.min_d > self.max_d {
            return Err(format!("--min {} exceeds --max {}", self.min_d, self.max_d));
        }
        if self.parallelism == 0 {
            return Err("--jobs must be positive".into());
        }
        for end in [self.min_d, self.max_d] {
            if end.unsigned_abs() > self.bound {
                return Err(format!(
                    "|{end}| exceeds the bound {}; pass --allow-large to override",
                    self.bound
                ));
            }
        }
        Ok(())
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// One output row per (D, cycle). Field order is the column order in CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    #[serde(rename = "D")]
    pub d: i64,
    pub t: u32,
    pub cycle: String,
    pub h: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub norm_group_order: u64,
    pub unit_index: u32,
    pub eps_norm: Option<i8>,
    pub remark_applicable: bool,
    pub remark_holds: Option<bool>,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl VerificationRecord {
    pub fn from_report(report: &ChevalleyReport) -> Self {
        Self {
            d: report.discriminant.value(),
            t: report.discriminant.t(),
            cycle: report.cycle.requested().to_string(),
            h: report.class_number,
            lhs: report.lhs_ambiguous,
            rhs: report.rhs_formula,
            norm_group_order: report.norm_group_order,
            unit_index: report.unit_index,
            eps_norm: report.unit_norm_sign,
            remark_applicable: report.remark_applicable,
            remark_holds: report.remark_holds,
            matches: report.matches,
        }
    }

    /// A record passes when both identities match and the decomposition
    /// check did not fail.
    pub fn passes(&self) -> bool {
        self.matches && self.remark_holds != Some(false)
    }
}

/// Counts reported on the summary line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub verified: u64,
    pub mismatched: u64,
    pub skipped: u64,
    pub remark_applicable: u64,
}

impl SweepSummary {
    pub fn exit_code(&self) -> i32 {
        if self.mismatched > 0 {
            EXIT_MISMATCH
        } else {
            EXIT_OK
        }
    }
}

impl std::fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "summary: verified={} mismatched={} skipped={} remark_applicable={}",
            self.verified, self.mismatched, self.skipped, self.remark_applicable
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("D = {d}: {source}")]
    Verification { d: i64, source: Error },
}

impl SweepError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Verification { .. } => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        }
    }
}

/// Verification records for every requested cycle of one integer, or `None`
/// when it is not a fundamental discriminant.
pub fn records_for(
    n: i64,
    cycles: CycleArg,
    bound: u64,
) -> Result<Option<Vec<VerificationRecord>>, Error> {
    let Ok(d) = FundamentalDiscriminant::new(n) else {
        return Ok(None);
    };
    let group = FormClassGroup::with_bound(&d, bound)?;
    let mut records = Vec::with_capacity(2);
    let mut previous: Option<ChevalleyReport> = None;
    for &c in cycles.cycles() {
        let choice = CycleChoice::new(c, &d);
        // a normalized request repeats the previous computation
        let report = match previous.take() {
            Some(mut r) if r.cycle.effective() == choice.effective() => {
                r.cycle = choice;
                r
            }
            _ => verify_with_group(&group, c)?,
        };
        records.push(VerificationRecord::from_report(&report));
        previous = Some(report);
    }
    Ok(Some(records))
}

enum RecordSink<W: Write> {
    Jsonl(W),
    Csv(csv::Writer<W>),
}

impl<W: Write> RecordSink<W> {
    fn new(format: OutputFormat, w: W) -> Self {
        match format {
            OutputFormat::Jsonl => RecordSink::Jsonl(w),
            OutputFormat::Csv => RecordSink::Csv(csv::Writer::from_writer(w)),
        }
    }

    fn write(&mut self, rec: &VerificationRecord) -> Result<(), SweepError> {
        match self {
            RecordSink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                w.write_all(b"\n")?;
            }
            RecordSink::Csv(w) => w.serialize(rec)?,
        }
        Ok(())
    }

    fn finish(self) -> Result<(), SweepError> {
        match self {
            RecordSink::Jsonl(mut w) => w.flush()?,
            RecordSink::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

/// Runs the sweep, writing records in increasing `D` (then cycle) order to
/// `out` regardless of the worker count.
pub fn run_sweep<W: Write>(config: &SweepConfig, out: W) -> Result<SweepSummary, SweepError> {
    config.validate().map_err(SweepError::Usage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| SweepError::Usage(e.to_string()))?;

    let mut sink = RecordSink::new(config.output_format, out);
    let mut summary = SweepSummary::default();
    let mut start = config.min_d;
    'chunks: loop {
        let end = start.saturating_add(CHUNK - 1).min(config.max_d);
        let results: Vec<_> = pool.install(|| {
            (start..=end)
                .into_par_iter()
                .map(|n| (n, records_for(n, config.cycles, config.bound)))
                .collect()
        });
        for (n, result) in results {
            let records = result.map_err(|source| SweepError::Verification { d: n, source })?;
            let Some(records) = records else {
                summary.skipped += 1;
                continue;
            };
            for rec in records {
                sink.write(&rec)?;
                if rec.remark_applicable {
                    summary.remark_applicable += 1;
                }
                if rec.passes() {
                    summary.verified += 1;
                } else {
                    summary.mismatched += 1;
                    if config.fail_fast {
                        break 'chunks;
                    }
                }
            }
        }
        if end == config.max_d {
            break;
        }
        start = end + 1;
    }
    sink.finish()?;
    Ok(summary)
}

#[derive(Serialize)]
struct ClassGroupRecord {
    #[serde(rename = "D")]
    d: i64,
    cycle: &'static str,
    order: usize,
    classes: Vec<[i64; 3]>,
    structure: Vec<u64>,
    ambiguous_count: usize,
    ambiguous: Vec<[i64; 3]>,
}

#[derive(Serialize)]
struct SymbolAt {
    place: String,
    symbol: i8,
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args, out, err),
        Command::Classgroup { d, allow_large } => cmd_classgroup(d, allow_large, out),
        Command::Hilbert { a, b, place } => cmd_hilbert(&a, &b, &place, out),
        Command::Pell { d } => cmd_pell(d, out),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn usage<E: std::fmt::Display>(e: E) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = SweepConfig {
        min_d: args.min,
        max_d: args.max,
        cycles: args.cycle,
        output_format: args.format,
        output_path: args.out,
        parallelism: args.jobs.unwrap_or_else(default_jobs),
        fail_fast: args.fail_fast,
        bound: if args.allow_large { u64::MAX } else { DEFAULT_BOUND },
    };
    let summary = match &config.output_path {
        Some(path) => {
            config.validate().map_err(usage)?;
            let file = File::create(path)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            run_sweep(&config, BufWriter::new(file))
        }
        None => run_sweep(&config, BufWriter::new(&mut *out)),
    }
    .map_err(|e| (e.exit_code(), e.to_string()))?;
    writeln!(err, "{summary}").map_err(usage)?;
    Ok(summary.exit_code())
}

fn cmd_classgroup(d: i64, allow_large: bool, out: &mut dyn Write) -> CmdResult {
    let disc = FundamentalDiscriminant::new(d).map_err(usage)?;
    let bound = if allow_large { u64::MAX } else { DEFAULT_BOUND };
    let narrow = FormClassGroup::with_bound(&disc, bound).map_err(usage)?;
    let cycles: &[Cycle] = if disc.is_real() {
        &[Cycle::Narrow, Cycle::Ordinary]
    } else {
        &[Cycle::Ordinary]
    };
    let triple = |f: crate::quadform::QuadraticForm| [f.a, f.b, f.c];
    for &c in cycles {
        let g = narrow.for_cycle(CycleChoice::new(c, &disc));
        let ambiguous = g.ambiguous_classes();
        let rec = ClassGroupRecord {
            d,
            cycle: c.as_str(),
            order: g.order(),
            classes: (0..g.order()).map(|x| triple(g.representative(x))).collect(),
            structure: g.group_structure(),
            ambiguous_count: ambiguous.len(),
            ambiguous: ambiguous.iter().map(|&x| triple(g.representative(x))).collect(),
        };
        serde_json::to_writer(&mut *out, &rec).map_err(usage)?;
        writeln!(out).map_err(usage)?;
    }
    Ok(EXIT_OK)
}

/// Parses `n` or `n/m`.
pub fn parse_rational(s: &str) -> Result<Rational64, String> {
    let bad = || format!("invalid rational {s:?}");
    let q = match s.split_once('/') {
        Some((n, m)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let m: i64 = m.trim().parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            Rational64::new(n, m)
        }
        None => Rational64::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if *q.numer() == 0 {
        return Err(format!("{s:?} must be nonzero"));
    }
    Ok(q)
}

fn cmd_hilbert(a: &str, b: &str, place: &str, out: &mut dyn Write) -> CmdResult {
    let qa = parse_rational(a).map_err(usage)?;
    let qb = parse_rational(b).map_err(usage)?;
    let value = if place == "all" {
        let symbols = hilbert_symbols(qa, qb).map_err(usage)?;
        let product: i8 = symbols.iter().map(|&(_, s)| s).product();
        let symbols: Vec<SymbolAt> = symbols
            .into_iter()
            .map(|(v, s)| SymbolAt {
                place: v.to_string(),
                symbol: s,
            })
            .collect();
        serde_json::json!({ "a": qa.to_string(), "b": qb.to_string(), "symbols": symbols, "product": product })
    } else {
        let v: Place = place.parse().map_err(usage)?;
        let s = hilbert_symbol(qa, qb, v).map_err(usage)?;
        serde_json::json!({ "a": qa.to_string(), "b": qb.to_string(), "place": v.to_string(), "symbol": s })
    };
    writeln!(out, "{value}").map_err(usage)?;
    Ok(EXIT_OK)
}

fn cmd_pell(d: i64, out: &mut dyn Write) -> CmdResult {
    let disc = FundamentalDiscriminant::new(d).map_err(usage)?;
    let e = surd_expansion(&disc).map_err(usage)?;
    let norm = fundamental_unit_norm(&disc).map_err(usage)?;
    let value = serde_json::json!({
        "D": d,
        "preperiod": e.preperiod,
        "period": e.period,
        "period_length": e.period_length(),
        "unit_norm": norm,
    });
    writeln!(out, "{value}").map_err(usage)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ambiclass").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/4").unwrap(), Rational64::new(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), Rational64::from_integer(7));
        assert!(parse_rational("0").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn inverted_range_is_usage_error() {
        let (code, _, err) = run_capture(&["verify", "--min", "10", "--max", "5"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("exceeds"));
    }

    #[test]
    fn large_range_needs_flag() {
        let (code, _, _) = run_capture(&["verify", "--min", "-2000000", "--max", "-1999990"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, _) = run_capture(&["verify", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn small_sweep_matches() {
        let (code, out, err) =
            run_capture(&["verify", "--min", "-40", "--max", "-3", "--cycle", "ordinary", "--jobs", "2"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let records: Vec<VerificationRecord> = out
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        // fundamental discriminants in [-40, -3]
        let expected = [-40, -39, -35, -31, -24, -23, -20, -19, -15, -11, -8, -7, -4, -3];
        assert_eq!(records.iter().map(|r| r.d).collect::<Vec<_>>(), expected);
        assert!(records.iter().all(|r| r.matches));
        assert!(err.contains("skipped=24"));
    }
}
