//! `gt`: Good-Turing estimates from token streams, simulation experiments
//! and Poisson-mixture limits.
//!
//! Exit codes: 0 success, 1 output/other failure, 2 unreadable input or bad
//! usage, 3 malformed UTF-8, 4 inconsistent count table, 5 schema
//! violation, 6 quadrature failure.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Cursor, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gt_core::harness::{run_experiment, ExperimentConfig};
use gt_core::io::{
    count_tokens, format_float, parse_phi_csv, write_lambda_csv, write_per_symbol_csv,
    write_phi_csv, write_summary_csv, write_zeta_csv, Delimiter, PHI_HEADER, ZETA_HEADER,
};
use gt_core::limits::{poisson_mixture_with_depth, DEFAULT_KMAX, QUADRATURE_MAX_DEPTH};
use gt_core::sampling::FrequencyTable;
use gt_core::shadow::MixingDistribution;
use gt_core::{good_turing_totals, Error};

#[derive(Parser)]
#[command(
    name = "gt",
    version,
    about = "Good-Turing total-probability estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count tokens and print the count-of-counts table.
    Count {
        /// Input file; `-` or absent reads stdin.
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Single literal separator character (default: any whitespace run).
        #[arg(long)]
        delimiter: Option<String>,
    },
    /// Print Good-Turing totals from tokens or a `k,phi_k` table.
    Estimate {
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        delimiter: Option<String>,
        /// Also print the probability of each individual symbol seen k times.
        #[arg(long)]
        per_symbol: bool,
    },
    /// Run a Monte Carlo experiment described by a JSON config.
    Simulate {
        config: PathBuf,
        /// Directory receiving report.json and report.csv.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Worker threads (default: available cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Evaluate the Poisson-mixture limit of a mixing distribution.
    Limit {
        q_spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: usize,
        /// Recursion cap for adaptive Simpson on density segments.
        #[arg(long, default_value_t = QUADRATURE_MAX_DEPTH)]
        max_depth: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count {
            input,
            output,
            delimiter,
        } => cmd_count(input.as_deref(), output.as_deref(), delimiter.as_deref()),
        Command::Estimate {
            input,
            output,
            delimiter,
            per_symbol,
        } => cmd_estimate(
            input.as_deref(),
            output.as_deref(),
            delimiter.as_deref(),
            per_symbol,
        ),
        Command::Simulate {
            config,
            out_dir,
            threads,
        } => cmd_simulate(&config, &out_dir, threads),
        Command::Limit {
            q_spec,
            kmax,
            max_depth,
            output,
        } => cmd_limit(&q_spec, kmax, max_depth, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gt: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn open_input(path: Option<&Path>) -> CliResult<Box<dyn BufRead>> {
    match path {
        None => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) => File::open(p)
            .map(|f| Box::new(BufReader::new(f)) as Box<dyn BufRead>)
            .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", p.display()))),
    }
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    let result = match output {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush())
        }
    };
    result.map_err(|e| Failure::new(1, format!("cannot write output: {e}")))
}

fn parse_delimiter(flag: Option<&str>) -> CliResult<Delimiter> {
    let Some(raw) = flag else {
        return Ok(Delimiter::Whitespace);
    };
    let unescaped = match raw {
        "\\n" => "\n",
        "\\t" => "\t",
        other => other,
    };
    let mut chars = unescaped.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(Delimiter::Char(c)),
        _ => Err(Failure::new(2, "--delimiter takes exactly one character")),
    }
}

fn ingest_error(e: Error) -> Failure {
    match e {
        Error::Utf8 { offset } => {
            Failure::new(3, format!("malformed UTF-8 at byte offset {offset}"))
        }
        Error::Io(msg) => Failure::new(2, format!("cannot read input: {msg}")),
        other => Failure::new(1, other.to_string()),
    }
}

fn tokens_to_table<R: BufRead>(reader: R, delimiter: Delimiter) -> CliResult<FrequencyTable> {
    let counts = count_tokens(reader, delimiter).map_err(ingest_error)?;
    Ok(FrequencyTable::from_symbol_counts(counts.into_values()))
}

fn cmd_count(
    input: Option<&Path>,
    output: Option<&Path>,
    delimiter: Option<&str>,
) -> CliResult<()> {
    let delimiter = parse_delimiter(delimiter)?;
    let table = tokens_to_table(open_input(input)?, delimiter)?;
    if table.n() == 0 {
        eprintln!("gt: warning: input contains no tokens");
    }
    emit(output, &write_phi_csv(&table))
}

fn cmd_estimate(
    input: Option<&Path>,
    output: Option<&Path>,
    delimiter: Option<&str>,
    per_symbol: bool,
) -> CliResult<()> {
    let delimiter = parse_delimiter(delimiter)?;
    let mut reader = open_input(input)?;
    let mut first = Vec::new();
    reader
        .read_until(b'\n', &mut first)
        .map_err(|e| Failure::new(2, format!("cannot read input: {e}")))?;

    let table = if first.trim_ascii() == PHI_HEADER.as_bytes() {
        let mut rest = String::new();
        reader
            .read_to_string(&mut rest)
            .map_err(|e| match e.kind() {
                io::ErrorKind::InvalidData => Failure::new(3, "malformed UTF-8 in count table"),
                _ => Failure::new(2, format!("cannot read input: {e}")),
            })?;
        let text = format!("{PHI_HEADER}\n{rest}");
        parse_phi_csv(&text).map_err(|e| Failure::new(4, format!("invalid count table: {e}")))?
    } else {
        tokens_to_table(Cursor::new(first).chain(reader), delimiter)?
    };

    if table.n() == 0 {
        eprintln!("gt: warning: input is empty; no estimate");
        return emit(output, &format!("{ZETA_HEADER}\n"));
    }
    let zeta = good_turing_totals(&table).map_err(|e| Failure::new(1, e.to_string()))?;
    let mut text = write_zeta_csv(&zeta);
    if per_symbol {
        text.push('\n');
        text.push_str(&write_per_symbol_csv(&table));
    }
    emit(output, &text)
}

fn cmd_simulate(config_path: &Path, out_dir: &Path, threads: Option<usize>) -> CliResult<()> {
    let text = read_file(config_path)?;
    let mut config: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| Failure::new(5, format!("config: {e}")))?;
    if let Ok(raw) = std::env::var("GT_SEED") {
        config.seed = raw.trim().parse().map_err(|_| {
            Failure::new(
                5,
                format!("GT_SEED must be an unsigned integer, got {raw:?}"),
            )
        })?;
    }
    config
        .validate()
        .map_err(|e| Failure::new(5, format!("config: {e}")))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::new(1, format!("cannot start thread pool: {e}")))?;
    let report = pool
        .install(|| run_experiment(&config))
        .map_err(|e| match e {
            Error::Quadrature { .. } => Failure::new(6, e.to_string()),
            Error::Config(_)
            | Error::UnsupportedN(_)
            | Error::Domain(_)
            | Error::Normalization { .. } => Failure::new(5, format!("config: {e}")),
            other => Failure::new(1, other.to_string()),
        })?;

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::new(1, format!("cannot create {}: {e}", out_dir.display())))?;
    let mut json =
        serde_json::to_string_pretty(&report).map_err(|e| Failure::new(1, e.to_string()))?;
    json.push('\n');
    emit(Some(&out_dir.join("report.json")), &json)?;
    emit(
        Some(&out_dir.join("report.csv")),
        &write_summary_csv(&report),
    )?;

    let mut lines = String::new();
    for row in &report.summary {
        lines.push_str(&format!(
            "n={} trials={} median_l1_xi_lambda={} median_l1_zeta_lambda={} median_l1_zeta_xi={}\n",
            row.n,
            row.trials,
            format_float(row.l1_xi_lambda.median),
            format_float(row.l1_zeta_lambda.median),
            format_float(row.l1_zeta_xi.median),
        ));
    }
    emit(None, &lines)
}

fn cmd_limit(q_path: &Path, kmax: usize, max_depth: u32, output: Option<&Path>) -> CliResult<()> {
    let text = read_file(q_path)?;
    let q: MixingDistribution = serde_json::from_str(&text)
        .map_err(|e| Failure::new(5, format!("mixing distribution: {e}")))?;
    let lambda = poisson_mixture_with_depth(&q, kmax, max_depth).map_err(|e| match e {
        Error::Quadrature { .. } => Failure::new(6, e.to_string()),
        other => Failure::new(1, other.to_string()),
    })?;
    emit(output, &write_lambda_csv(&lambda))
}
