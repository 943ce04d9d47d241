//! `colcrush` — generate columns, encode them, run queries on the encoded
//! form, ask the advisor, and benchmark the codecs.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use colcrush_core::advisor;
use colcrush_core::column::{Column, ColumnKind, ColumnStats, Value};
use colcrush_core::encoded::{EncodedColumn, Scheme};
use colcrush_core::generate::{generate, Distribution, GenerateSpec};
use colcrush_core::io;
use colcrush_core::query::{self, brute_force_query, CmpOp, Operand, Predicate};
use colcrush_core::rle::rle_space_bytes;
use colcrush_core::Error;

const SEED_ENV: &str = "COLCRUSH_SEED";

#[derive(Parser)]
#[command(name = "colcrush", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic column and write it as a .colc file
    Gen(GenArgs),
    /// Encode a column file under one scheme, producing a .cold file
    Encode(EncodeArgs),
    /// Decode an encoded file back into a plain column file
    Decode(DecodeArgs),
    /// Run an EQ/LEQ predicate against an encoded file
    Query(QueryArgs),
    /// Recommend a scheme for a column file or explicit statistics
    Advise(AdviseArgs),
    /// Space-model reproduction plus a measured codec timing matrix
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Int,
    String,
}

impl From<KindArg> for ColumnKind {
    fn from(k: KindArg) -> ColumnKind {
        match k {
            KindArg::Int => ColumnKind::Int32,
            KindArg::String => ColumnKind::String,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Uniform,
    Zipf,
}

#[derive(Args)]
struct GenParams {
    /// Number of rows
    #[arg(long)]
    rows: usize,
    /// Domain size (number of candidate distinct values)
    #[arg(long)]
    distinct: usize,
    /// Value type
    #[arg(long, value_enum, default_value = "int")]
    kind: KindArg,
    /// Value distribution
    #[arg(long, value_enum, default_value = "uniform")]
    dist: DistArg,
    /// Zipf exponent (with --dist zipf)
    #[arg(long, default_value_t = Distribution::DEFAULT_ZIPF_EXPONENT)]
    zipf_s: f64,
    /// Sort the column after sampling
    #[arg(long)]
    sorted: bool,
    /// RNG seed; falls back to $COLCRUSH_SEED, then 42
    #[arg(long)]
    seed: Option<u64>,
}

impl GenParams {
    fn seed(&self) -> u64 {
        self.seed
            .or_else(|| std::env::var(SEED_ENV).ok()?.parse().ok())
            .unwrap_or(42)
    }

    fn spec(&self) -> GenerateSpec {
        GenerateSpec {
            kind: self.kind.into(),
            row_count: self.rows,
            domain_size: self.distinct,
            distribution: match self.dist {
                DistArg::Uniform => Distribution::Uniform,
                DistArg::Zipf => Distribution::Zipf(self.zipf_s),
            },
            sorted: self.sorted,
            seed: self.seed(),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    params: GenParams,
    /// Output .colc path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    /// Input .colc path
    #[arg(long)]
    input: PathBuf,
    /// Compression scheme
    #[arg(long)]
    scheme: String,
    /// Output .cold path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    /// Input .cold path
    #[arg(long)]
    input: PathBuf,
    /// Output .colc path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Encoded .cold path
    #[arg(long)]
    input: PathBuf,
    /// Predicate, e.g. "state=Alaska" or "qty<=7"
    #[arg(long)]
    pred: String,
    /// Optional .colc column to project instead of counting
    #[arg(long)]
    project: Option<PathBuf>,
}

#[derive(Args)]
struct AdviseArgs {
    /// Column file to derive statistics from
    #[arg(long)]
    input: Option<PathBuf>,
    /// Explicit statistics instead of a file
    #[arg(long, requires = "distinct")]
    rows: Option<usize>,
    #[arg(long, requires = "rows")]
    distinct: Option<usize>,
    #[arg(long, value_enum, default_value = "int")]
    kind: KindArg,
    #[arg(long)]
    sorted: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    params: GenParams,
    /// Timed repetitions per measurement (after one warm-up)
    #[arg(long, default_value_t = 5)]
    runs: usize,
    /// Write the report as JSON here as well
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One exit code per failure family, so scripts can tell them apart.
fn exit_code(err: &anyhow::Error) -> ExitCode {
    let code = match err.downcast_ref::<Error>() {
        Some(Error::MalformedFile(_)) | Some(Error::CorruptStream(_)) => 3,
        Some(Error::UnknownCodecTag(_)) => 4,
        Some(Error::TypeMismatch { .. }) => 5,
        Some(Error::Io(_)) => 6,
        _ => 1,
    };
    ExitCode::from(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(a) => {
            let col = generate(&a.params.spec())?;
            io::write_column_file(&col, &a.out)?;
            println!(
                "wrote {} rows ({} distinct, seed {}) to {}",
                col.row_count(),
                col.domain_size(),
                a.params.seed(),
                a.out.display()
            );
        }
        Command::Encode(a) => {
            let scheme = parse_scheme(&a.scheme)?;
            let col = io::read_column_file(&a.input)?;
            let enc = EncodedColumn::encode(&col, scheme)?;
            io::write_encoded_file(&enc, &a.out)?;
            println!(
                "{}: {} rows, payload {} bytes (raw {})",
                scheme.name(),
                enc.row_count(),
                enc.payload_bytes(),
                4 * enc.row_count()
            );
        }
        Command::Decode(a) => {
            let enc = io::read_encoded_file(&a.input)?;
            let col = enc.decode()?;
            io::write_column_file(&col, &a.out)?;
            println!("decoded {} rows to {}", col.row_count(), a.out.display());
        }
        Command::Query(a) => {
            let enc = io::read_encoded_file(&a.input)?;
            let pred = parse_predicate(&a.pred, enc.kind())?;
            let project = a.project.as_deref().map(io::read_column_file).transpose()?;
            let result = query::execute(&enc, &pred, project.as_ref())?;
            match result {
                query::QueryResult::Projected(vals) => {
                    for v in &vals {
                        match v {
                            Value::Int(x) => println!("{x}"),
                            Value::Str(s) => println!("{s}"),
                        }
                    }
                    eprintln!("{} rows", vals.len());
                }
                other => println!("{}", other.count()),
            }
        }
        Command::Advise(a) => {
            let stats = match (&a.input, a.rows, a.distinct) {
                (Some(path), _, _) => io::read_column_file(path)?.stats(),
                (None, Some(rows), Some(distinct)) => ColumnStats {
                    kind: a.kind.into(),
                    row_count: rows,
                    domain_size: distinct,
                    is_sorted: a.sorted,
                },
                _ => anyhow::bail!("pass --input FILE or both --rows and --distinct"),
            };
            let rec = advisor::advise(&stats);
            println!("recommendation: {}", rec.primary.name());
            if let Some(pre) = rec.preprocessing {
                println!("preprocess:     {}", pre.name());
            }
            println!("rationale:      {}", rec.rationale);
            for f in &rec.flags {
                println!("note:           {f}");
            }
            println!("{}", serde_json::to_string_pretty(&rec)?);
        }
        Command::Bench(a) => bench(&a)?,
    }
    Ok(())
}

fn parse_scheme(s: &str) -> anyhow::Result<Scheme> {
    Scheme::parse(s).ok_or_else(|| {
        anyhow::anyhow!(
            "unknown scheme {s:?}; expected one of {}",
            Scheme::ALL.map(|s| s.name()).join(", ")
        )
    })
}

/// `column=value` or `column<=value`; the operand type follows the column's.
fn parse_predicate(text: &str, kind: ColumnKind) -> anyhow::Result<Predicate> {
    let (column, op, raw) = if let Some((c, v)) = text.split_once("<=") {
        (c, CmpOp::Leq, v)
    } else if let Some((c, v)) = text.split_once('=') {
        (c, CmpOp::Eq, v)
    } else {
        anyhow::bail!("predicate {text:?} must look like NAME=VALUE or NAME<=VALUE");
    };
    let operand = match kind {
        ColumnKind::Int32 => Operand::Int(
            raw.trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("operand {raw:?} is not an integer"))?,
        ),
        ColumnKind::String => Operand::Str(raw.to_string()),
    };
    Ok(Predicate {
        column: column.trim().to_string(),
        op,
        operand,
    })
}

#[derive(Serialize)]
struct BenchReport {
    rows: usize,
    distinct: usize,
    sorted: bool,
    seed: u64,
    runs: usize,
    clock: &'static str,
    space_model_1e9: Vec<SpaceModelLine>,
    schemes: Vec<SchemeReport>,
    scan_baseline: TimingLine,
}

#[derive(Serialize)]
struct SpaceModelLine {
    scheme: String,
    bytes: u64,
}

#[derive(Serialize)]
struct SchemeReport {
    scheme: String,
    measured_bytes: u64,
    predicted_bytes: Option<u64>,
    encode: TimingLine,
    count_eq: QueryTiming,
    count_leq: QueryTiming,
}

#[derive(Serialize)]
struct TimingLine {
    median_micros: f64,
}

#[derive(Serialize)]
struct QueryTiming {
    median_micros: f64,
    answer: u64,
    oracle_match: bool,
}

fn median_micros(times: &mut [Duration]) -> f64 {
    times.sort();
    times[times.len() / 2].as_secs_f64() * 1e6
}

fn time_runs<T>(runs: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut last = f(); // warm-up
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let t = Instant::now();
        last = f();
        times.push(t.elapsed());
    }
    (median_micros(&mut times), last)
}

/// The reference stat line the space model reproduces analytically: 1e9 rows
/// in 1e6 runs over 1e6 distinct values.
fn space_model_lines() -> Vec<SpaceModelLine> {
    let mut lines = vec![SpaceModelLine {
        scheme: "raw".into(),
        bytes: 4_000_000_000,
    }];
    for scheme in [Scheme::VlRle, Scheme::VslRle, Scheme::VsRle, Scheme::VsbRle] {
        lines.push(SpaceModelLine {
            scheme: scheme.name().into(),
            bytes: rle_space_bytes(scheme.rle_variant().unwrap(), 1_000_000, 1_000_000, 1_000_000_000),
        });
    }
    lines
}

fn probe_value(col: &Column) -> Value {
    col.domain()
        .get(col.domain_size() / 2)
        .unwrap_or(Value::Int(0))
}

fn bench(a: &BenchArgs) -> anyhow::Result<()> {
    let col = generate(&a.params.spec())?;
    let t = probe_value(&col);
    let eq_pred = pred_for(&t, CmpOp::Eq);
    let leq_pred = pred_for(&t, CmpOp::Leq);
    let oracle_eq = brute_force_query(&col, &eq_pred, None)?.count();
    let oracle_leq = brute_force_query(&col, &leq_pred, None)?.count();

    let mut schemes = Vec::new();
    for scheme in Scheme::ALL {
        if !scheme.admits(col.kind(), col.is_sorted(), col.row_count()) {
            continue;
        }
        let (encode_us, enc) = time_runs(a.runs, || EncodedColumn::encode(&col, scheme));
        let enc = enc?;
        let (eq_us, eq_ans) = time_runs(a.runs, || query::count_eq(&enc, &t));
        let eq_ans = eq_ans?;
        let (leq_us, leq_ans) = time_runs(a.runs, || query::count_leq(&enc, &t));
        let leq_ans = leq_ans?;
        if eq_ans != oracle_eq || leq_ans != oracle_leq {
            anyhow::bail!(
                "{}: answer mismatch (eq {} vs {}, leq {} vs {}); refusing to report timings",
                scheme.name(),
                eq_ans,
                oracle_eq,
                leq_ans,
                oracle_leq
            );
        }
        schemes.push(SchemeReport {
            scheme: scheme.name().into(),
            measured_bytes: enc.payload_bytes(),
            predicted_bytes: predicted_bytes(&col, scheme),
            encode: TimingLine { median_micros: encode_us },
            count_eq: QueryTiming { median_micros: eq_us, answer: eq_ans, oracle_match: true },
            count_leq: QueryTiming { median_micros: leq_us, answer: leq_ans, oracle_match: true },
        });
    }

    let (scan_us, _) = time_runs(a.runs, || brute_force_query(&col, &eq_pred, None).unwrap().count());
    let report = BenchReport {
        rows: col.row_count(),
        distinct: col.domain_size(),
        sorted: col.is_sorted(),
        seed: a.params.seed(),
        runs: a.runs,
        clock: "monotonic (std::time::Instant), median after 1 warm-up",
        space_model_1e9: space_model_lines(),
        schemes,
        scan_baseline: TimingLine { median_micros: scan_us },
    };
    print_report(&report);
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_vec_pretty(&report)?)?;
        println!("\nreport written to {}", path.display());
    }
    Ok(())
}

fn pred_for(t: &Value, op: CmpOp) -> Predicate {
    Predicate {
        column: "a".into(),
        op,
        operand: match t {
            Value::Int(v) => Operand::Int(*v),
            Value::Str(s) => Operand::Str(s.clone()),
        },
    }
}

/// Analytic prediction where a closed-form model exists.
fn predicted_bytes(col: &Column, scheme: Scheme) -> Option<u64> {
    let stats = col.stats();
    let runs = count_runs(col);
    match scheme {
        Scheme::BitDict => Some(colcrush_core::dict::bit_dict_space_bytes(&stats)),
        _ => scheme
            .rle_variant()
            .map(|v| rle_space_bytes(v, runs, stats.domain_size as u64, stats.row_count as u64)),
    }
}

fn count_runs(col: &Column) -> u64 {
    match col.ints() {
        Some(v) => v.windows(2).filter(|w| w[0] != w[1]).count() as u64 + !v.is_empty() as u64,
        None => 0,
    }
}

fn print_report(r: &BenchReport) {
    println!(
        "bench: {} rows, {} distinct, sorted={}, seed {}, {} timed runs",
        r.rows, r.distinct, r.sorted, r.seed, r.runs
    );
    println!("\nspace model at 1e9 rows / 1e6 runs:");
    for line in &r.space_model_1e9 {
        println!("  {:<10} {:>14} bytes", line.scheme, line.bytes);
    }
    println!("\n{:<10} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "scheme", "bytes", "predicted", "encode us", "eq us", "leq us");
    for s in &r.schemes {
        println!(
            "{:<10} {:>12} {:>12} {:>12.1} {:>12.2} {:>12.2}",
            s.scheme,
            s.measured_bytes,
            s.predicted_bytes.map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
            s.encode.median_micros,
            s.count_eq.median_micros,
            s.count_leq.median_micros,
        );
    }
    println!(
        "\nuncompressed scan baseline (count eq): {:.2} us",
        r.scan_baseline.median_micros
    );
}
