//! Bit-stable serialization of sweep tables, realization records, cache
//! files, and fit results.
//!
//! Reals in tables are printed in fixed notation with 6 significant digits;
//! re-parsing an emitted file and re-emitting it reproduces the bytes
//! exactly. Cache files carry full-precision values.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::clustering::OptimumResult;
use crate::error::{Error, Result};
use crate::evolution::Strategy;
use crate::experiments::{PowerLawFit, RealizationResult, SweepRow, SweepSummary};
use crate::language::ComprehensionCache;

pub const SWEEP_HEADER: &str = "model,N,r,R,realizations,mean_w,se_w,mean_w_star,se_w_star,\
mean_i_star,se_i_star,i_star_count,mean_k_star,se_k_star";

pub const FIT_HEADER: &str = "model,N,n_points,r_cutoff,gamma,intercept,r_squared";

/// Decimal places that keep 6 significant digits of `x` in fixed notation,
/// based on the canonical bucket 10^mag <= |x| < 10^(mag+1).
fn decimals_for(x: f64) -> usize {
    let a = x.abs();
    let mut mag = a.log10().floor() as i32;
    if 10f64.powi(mag + 1) <= a {
        mag += 1;
    } else if 10f64.powi(mag) > a {
        mag -= 1;
    }
    (5 - mag).max(0) as usize
}

/// Fixed-notation rendering with 6 significant digits; non-finite values
/// render as `nan`. Stable under parse-and-reformat.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return "nan".to_string();
    }
    if x == 0.0 {
        return "0.000000".to_string();
    }
    let mut decimals = decimals_for(x);
    loop {
        let formatted = format!("{x:.decimals$}");
        let rounded: f64 = formatted.parse().expect("fixed notation parses");
        if rounded == 0.0 {
            return formatted;
        }
        // rounding may have carried |x| across a power of ten
        let wanted = decimals_for(rounded);
        if wanted == decimals {
            return formatted;
        }
        decimals = wanted;
    }
}

fn format_optional(x: Option<f64>) -> String {
    match x {
        Some(v) => format_real(v),
        None => "nan".to_string(),
    }
}

/// Renders a sweep summary as the fixed-header comma-separated table.
pub fn format_sweep_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in &summary.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.strategy,
            row.n,
            format_real(row.r_rel),
            row.set_size,
            row.realizations,
            format_real(row.mean_w),
            format_real(row.se_w),
            format_real(row.mean_w_star),
            format_real(row.se_w_star),
            format_optional(row.mean_i_star),
            format_optional(row.se_i_star),
            row.i_star_count,
            format_real(row.mean_k_star),
            format_real(row.se_k_star),
        ));
    }
    out
}

fn parse_field<T: FromStr>(path: &str, line: usize, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Malformed {
        path: path.to_string(),
        line,
        reason: format!("expected {what}, got `{field}`"),
    })
}

fn parse_real(path: &str, line: usize, field: &str) -> Result<f64> {
    if field == "nan" {
        return Ok(f64::NAN);
    }
    parse_field(path, line, field, "a number")
}

/// Parses a sweep table emitted by [`format_sweep_csv`].
pub fn parse_sweep_csv(text: &str, path: &str) -> Result<SweepSummary> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == SWEEP_HEADER => {}
        other => {
            return Err(Error::Malformed {
                path: path.to_string(),
                line: 1,
                reason: format!("expected sweep header, got `{}`", other.map_or("", |o| o.1)),
            })
        }
    }
    let mut rows = Vec::new();
    for (index, raw) in lines {
        let line = index + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 14 {
            return Err(Error::Malformed {
                path: path.to_string(),
                line,
                reason: format!("expected 14 fields, got {}", fields.len()),
            });
        }
        let strategy = Strategy::from_str(fields[0]).map_err(|reason| Error::Malformed {
            path: path.to_string(),
            line,
            reason,
        })?;
        let i_star_count: usize = parse_field(path, line, fields[11], "an integer")?;
        let mean_i_star = parse_real(path, line, fields[9])?;
        let se_i_star = parse_real(path, line, fields[10])?;
        rows.push(SweepRow {
            strategy,
            n: parse_field(path, line, fields[1], "an integer")?,
            r_rel: parse_real(path, line, fields[2])?,
            set_size: parse_field(path, line, fields[3], "an integer")?,
            realizations: parse_field(path, line, fields[4], "an integer")?,
            mean_w: parse_real(path, line, fields[5])?,
            se_w: parse_real(path, line, fields[6])?,
            mean_w_star: parse_real(path, line, fields[7])?,
            se_w_star: parse_real(path, line, fields[8])?,
            mean_i_star: (i_star_count > 0).then_some(mean_i_star),
            se_i_star: (i_star_count > 0).then_some(se_i_star),
            i_star_count,
            mean_k_star: parse_real(path, line, fields[12])?,
            se_k_star: parse_real(path, line, fields[13])?,
        });
    }
    Ok(SweepSummary { rows })
}

/// One JSON object per realization, in row order.
pub fn format_realizations_jsonl(records: &[RealizationResult]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Per-(model, N) power-law fit rows.
#[derive(Clone, Debug, PartialEq)]
pub struct FitRow {
    pub strategy: Strategy,
    pub n: usize,
    pub fit: PowerLawFit,
}

pub fn format_fit_csv(rows: &[FitRow]) -> String {
    let mut out = String::from(FIT_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.strategy,
            row.n,
            row.fit.n_points,
            format_real(row.fit.r_cutoff),
            format_real(row.fit.gamma),
            format_real(row.fit.intercept),
            format_real(row.fit.r_squared),
        ));
    }
    out
}

/// Renders a mutual-comprehension matrix as a cache file: an `N=<n>` header
/// line followed by N comma-separated rows at full precision.
pub fn format_cache_file(cache: &ComprehensionCache) -> String {
    let n = cache.n();
    let mut out = format!("N={n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| cache.mutual(i, j).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses a cache file; the matrix must be square, finite, symmetric, and
/// within [0, 1].
pub fn parse_cache_file(text: &str, path: &str) -> Result<ComprehensionCache> {
    let mut lines = text.lines().enumerate();
    let n: usize = match lines.next() {
        Some((_, header)) if header.starts_with("N=") => {
            parse_field(path, 1, &header[2..], "an integer")?
        }
        _ => {
            return Err(Error::Malformed {
                path: path.to_string(),
                line: 1,
                reason: "expected `N=<n>` header".to_string(),
            })
        }
    };
    if n == 0 {
        return Err(Error::Malformed {
            path: path.to_string(),
            line: 1,
            reason: "matrix must be at least 1x1".to_string(),
        });
    }
    let mut mutual = Vec::with_capacity(n * n);
    let mut row_count = 0usize;
    for (index, raw) in lines {
        let line = index + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != n {
            return Err(Error::Malformed {
                path: path.to_string(),
                line,
                reason: format!("expected {n} values, got {}", fields.len()),
            });
        }
        for field in fields {
            let value: f64 = parse_field(path, line, field.trim(), "a number")?;
            if !value.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&value) {
                return Err(Error::Malformed {
                    path: path.to_string(),
                    line,
                    reason: format!("comprehension {value} outside [0, 1]"),
                });
            }
            mutual.push(value);
        }
        row_count += 1;
    }
    if row_count != n {
        return Err(Error::Malformed {
            path: path.to_string(),
            line: row_count + 1,
            reason: format!("expected {n} rows, got {row_count}"),
        });
    }
    for i in 0..n {
        for j in 0..i {
            if (mutual[i * n + j] - mutual[j * n + i]).abs() > 1e-9 {
                return Err(Error::Malformed {
                    path: path.to_string(),
                    line: i + 2,
                    reason: format!("matrix not symmetric at ({i}, {j})"),
                });
            }
            // make the stored matrix exactly symmetric
            mutual[i * n + j] = mutual[j * n + i];
        }
    }
    Ok(ComprehensionCache::from_mutual(n, mutual))
}

pub fn write_sweep_csv(path: &Path, summary: &SweepSummary) -> Result<()> {
    fs::write(path, format_sweep_csv(summary))?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<SweepSummary> {
    let text = fs::read_to_string(path)?;
    parse_sweep_csv(&text, &path.display().to_string())
}

pub fn write_realizations_jsonl(path: &Path, records: &[RealizationResult]) -> Result<()> {
    fs::write(path, format_realizations_jsonl(records))?;
    Ok(())
}

pub fn write_fit_csv(path: &Path, rows: &[FitRow]) -> Result<()> {
    fs::write(path, format_fit_csv(rows))?;
    Ok(())
}

pub fn write_cache_file(path: &Path, cache: &ComprehensionCache) -> Result<()> {
    fs::write(path, format_cache_file(cache))?;
    Ok(())
}

pub fn read_cache_file(path: &Path) -> Result<ComprehensionCache> {
    let text = fs::read_to_string(path)?;
    parse_cache_file(&text, &path.display().to_string())
}

pub fn write_optimum_json(path: &Path, optimum: &OptimumResult) -> Result<()> {
    let mut text = serde_json::to_string_pretty(optimum).expect("optimum serializes");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
