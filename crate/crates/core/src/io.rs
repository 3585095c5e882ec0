//! Text exchange formats.
//!
//! All numbers are written with `.` as decimal point, rows end in `\n`, and
//! floats carry 12 significant digits.
//!
//! | table          | header              | extra rows        |
//! |----------------|---------------------|-------------------|
//! | count-of-counts| `k,phi_k`           | `# n=<n>` after header |
//! | Good-Turing    | `k,zeta_k`          |                   |
//! | per-symbol     | `k,per_symbol_prob` |                   |
//! | Poisson limit  | `k,lambda_k`        | `tail,<tail_mass>` last |

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::estimator::{good_turing_per_symbol, GoodTuringVector};
use crate::harness::ExperimentReport;
use crate::limits::PoissonMixtureVector;
use crate::sampling::FrequencyTable;

pub const PHI_HEADER: &str = "k,phi_k";
pub const ZETA_HEADER: &str = "k,zeta_k";
pub const PER_SYMBOL_HEADER: &str = "k,per_symbol_prob";
pub const LAMBDA_HEADER: &str = "k,lambda_k";

/// Formats `x` rounded to 12 significant digits, in the shortest decimal
/// form that reproduces the rounded value.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn write_phi_csv(freq: &FrequencyTable) -> String {
    let mut out = format!("{PHI_HEADER}\n# n={}\n", freq.n());
    for (k, phi) in freq.phi_entries() {
        let _ = writeln!(out, "{k},{phi}");
    }
    out
}

/// Parses a count-of-counts table. A missing `# n=` row means `n` is
/// taken from `Σ k φ_k`; a present one must agree with it.
pub fn parse_phi_csv(text: &str) -> Result<FrequencyTable> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == PHI_HEADER => {}
        _ => return Err(Error::Parse(format!("expected header {PHI_HEADER:?}"))),
    }
    let mut declared_n = None;
    let mut phi: Vec<(u64, u64)> = Vec::new();
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some(value) = meta.trim().strip_prefix("n=") {
                let n = value.trim().parse::<u64>().map_err(|_| {
                    Error::Parse(format!("line {}: bad n metadata {value:?}", lineno + 1))
                })?;
                declared_n = Some(n);
            }
            continue;
        }
        let (k, count) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected k,phi_k", lineno + 1)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("line {}: bad integer {s:?}", lineno + 1)))
        };
        let k = parse(k)?;
        if k == 0 {
            return Err(Error::Parse(format!("line {}: k must be >= 1", lineno + 1)));
        }
        phi.push((k, parse(count)?));
    }
    let implied = phi.iter().try_fold(0u64, |acc, &(k, c)| {
        k.checked_mul(c).and_then(|v| acc.checked_add(v))
    });
    let implied = implied.ok_or_else(|| Error::Parse("sum of k * phi_k overflows".into()))?;
    FrequencyTable::from_phi(declared_n.unwrap_or(implied), phi)
}

pub fn write_zeta_csv(zeta: &GoodTuringVector) -> String {
    let mut out = format!("{ZETA_HEADER}\n");
    for (k, v) in zeta.entries() {
        let _ = writeln!(out, "{k},{}", format_float(v));
    }
    out
}

/// Per-symbol probabilities for every `1 <= k <= n-1` with `φ_k >= 1`.
pub fn write_per_symbol_csv(freq: &FrequencyTable) -> String {
    let mut out = format!("{PER_SYMBOL_HEADER}\n");
    for (k, _) in freq.phi_entries() {
        if let Ok(p) = good_turing_per_symbol(freq, k) {
            let _ = writeln!(out, "{k},{}", format_float(p));
        }
    }
    out
}

pub fn write_lambda_csv(lambda: &PoissonMixtureVector) -> String {
    let mut out = format!("{LAMBDA_HEADER}\n");
    for (k, v) in lambda.lambda.iter().enumerate() {
        let _ = writeln!(out, "{k},{}", format_float(*v));
    }
    let _ = writeln!(out, "tail,{}", format_float(lambda.tail_mass));
    out
}

/// Flat per-`n` summary of an experiment.
pub fn write_summary_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(
        "n,trials,mean_l1_xi_lambda,median_l1_xi_lambda,max_l1_xi_lambda,\
         mean_l1_zeta_lambda,median_l1_zeta_lambda,max_l1_zeta_lambda,\
         mean_l1_zeta_xi,median_l1_zeta_xi,max_l1_zeta_xi,triangle_violations\n",
    );
    for row in &report.summary {
        let _ = write!(out, "{},{}", row.n, row.trials);
        for s in [row.l1_xi_lambda, row.l1_zeta_lambda, row.l1_zeta_xi] {
            let _ = write!(
                out,
                ",{},{},{}",
                format_float(s.mean),
                format_float(s.median),
                format_float(s.max)
            );
        }
        let _ = writeln!(out, ",{}", row.triangle_violations);
    }
    out
}

/// How tokens are separated in a text stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Any run of Unicode whitespace.
    #[default]
    Whitespace,
    /// A single literal character; empty tokens are skipped and a final
    /// line break at the end of input is ignored.
    Char(char),
}

/// Counts tokens in one pass over `reader`.
///
/// Memory grows with the number of distinct tokens, not with input length
/// (beyond the longest line).
pub fn count_tokens<R: BufRead>(
    mut reader: R,
    delimiter: Delimiter,
) -> Result<HashMap<String, u64>> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut bump = |token: &str| {
        if !token.is_empty() {
            match counts.get_mut(token) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(token.to_owned(), 1);
                }
            }
        }
    };
    let mut buf = Vec::new();
    let mut offset = 0u64;
    let mut carry = String::new();
    loop {
        buf.clear();
        let read = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::Io(e.to_string()))?;
        if read == 0 {
            break;
        }
        let line = std::str::from_utf8(&buf).map_err(|e| Error::Utf8 {
            offset: offset + e.valid_up_to() as u64,
        })?;
        offset += read as u64;
        match delimiter {
            Delimiter::Whitespace => line.split_whitespace().for_each(&mut bump),
            Delimiter::Char(c) => {
                carry.push_str(line);
                let mut parts: Vec<&str> = carry.split(c).collect();
                let rest = parts.pop().unwrap_or("").to_owned();
                parts.into_iter().for_each(&mut bump);
                carry = rest;
            }
        }
    }
    if let Delimiter::Char(_) = delimiter {
        let last = carry
            .strip_suffix('\n')
            .map(|s| s.strip_suffix('\r').unwrap_or(s))
            .unwrap_or(&carry);
        bump(last);
    }
    Ok(counts)
}
