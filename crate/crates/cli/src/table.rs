//! Rows of the `table` subcommand and their CSV / JSON forms.

use std::io::{Read, Write};

use mixquant::{lloyd, mixture_density, solve, LloydOptions, QuantizationResult};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::number::{self, ser_opt_f64, ser_vec_f64};

pub const CSV_HEADER: [&str; 9] =
    ["n", "k", "m", "case", "codebook", "error", "oracle_error", "gap", "failure"];

/// Separator between codepoints inside the CSV `codebook` column.
const POINT_SEP: char = ';';

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub case: Option<String>,
    /// Points left of 3/4, plus 3/4 itself for odd n; the rest follow by symmetry.
    #[serde(serialize_with = "ser_vec_f64")]
    pub codebook: Vec<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub error: Option<f64>,
    #[serde(default, serialize_with = "ser_opt_f64")]
    pub oracle_error: Option<f64>,
    /// `|error - oracle_error|`
    #[serde(default, serialize_with = "ser_opt_f64")]
    pub gap: Option<f64>,
    /// Set when this row could not be computed; the other values are empty.
    #[serde(default)]
    pub failure: Option<String>,
}

/// Label for the `case` column.
pub fn case_label(r: &QuantizationResult) -> String {
    r.config().map_or_else(|| "explicit".to_string(), |c| c.case.to_string())
}

impl TableRow {
    pub fn from_result(r: &QuantizationResult) -> Self {
        let (k, m) = r.occupancy();
        TableRow {
            n: r.n,
            k: Some(k),
            m: Some(m),
            case: Some(case_label(r)),
            codebook: r.left_half().to_vec(),
            error: Some(r.error),
            oracle_error: None,
            gap: None,
            failure: None,
        }
    }

    pub fn failed(n: usize, why: String) -> Self {
        TableRow {
            n,
            k: None,
            m: None,
            case: None,
            codebook: Vec::new(),
            error: None,
            oracle_error: None,
            gap: None,
            failure: Some(why),
        }
    }

    pub fn to_record(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(number::machine).unwrap_or_default();
        let points: Vec<String> = self.codebook.iter().map(|&x| number::machine(x)).collect();
        vec![
            self.n.to_string(),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.case.clone().unwrap_or_default(),
            points.join(&POINT_SEP.to_string()),
            opt(self.error),
            opt(self.oracle_error),
            opt(self.gap),
            self.failure.clone().unwrap_or_default(),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        if rec.len() != CSV_HEADER.len() {
            return Err(CliError::Usage(format!("expected {} columns, got {}", CSV_HEADER.len(), rec.len())));
        }
        let bad = |col: &str, v: &str| CliError::Usage(format!("bad {col} value {v:?}"));
        let int = |i: usize| -> Result<Option<usize>> {
            let v = &rec[i];
            if v.is_empty() {
                return Ok(None);
            }
            v.parse().map(Some).map_err(|_| bad(CSV_HEADER[i], v))
        };
        let float = |i: usize| -> Result<Option<f64>> {
            let v = &rec[i];
            if v.is_empty() {
                return Ok(None);
            }
            v.parse().map(Some).map_err(|_| bad(CSV_HEADER[i], v))
        };
        let text = |i: usize| Some(rec[i].to_string()).filter(|s| !s.is_empty());
        let codebook = if rec[4].is_empty() {
            Vec::new()
        } else {
            rec[4]
                .split(POINT_SEP)
                .map(|s| s.parse::<f64>().map_err(|_| bad("codebook", s)))
                .collect::<Result<_>>()?
        };
        Ok(TableRow {
            n: int(0)?.ok_or_else(|| bad("n", ""))?,
            k: int(1)?,
            m: int(2)?,
            case: text(3),
            codebook,
            error: float(5)?,
            oracle_error: float(6)?,
            gap: float(7)?,
            failure: text(8),
        })
    }
}

/// One row; solver failures end up in the `failure` column.
pub fn compute_row(n: usize, oracle: Option<&LloydOptions>) -> TableRow {
    let r = match solve(n) {
        Ok(r) => r,
        Err(e) => return TableRow::failed(n, e.to_string()),
    };
    let mut row = TableRow::from_result(&r);
    if let Some(opts) = oracle {
        let density = mixture_density(0.5).expect("valid weight");
        match lloyd(&density, n, opts) {
            Ok(o) => {
                row.oracle_error = Some(o.error);
                row.gap = Some((r.error - o.error).abs());
            }
            Err(e) => row.failure = Some(format!("oracle: {e}")),
        }
    }
    row
}

/// Rows for `from..=to` in ascending `n`, computed on a pool of `jobs` threads.
pub fn compute_table(from: usize, to: usize, jobs: usize, oracle: Option<&LloydOptions>) -> Result<Vec<TableRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    // indexed collect keeps the order of n whatever the completion order
    Ok(pool.install(|| (from..=to).into_par_iter().map(|n| compute_row(n, oracle)).collect()))
}

pub fn write_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.to_record())?;
    }
    w.flush().map_err(|e| CliError::io(None, e))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TableRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Usage(format!("unexpected header {header:?}")));
    }
    r.records().map(|rec| TableRow::from_record(&rec?)).collect()
}

pub fn write_json<W: Write>(rows: &[TableRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out).map_err(|e| CliError::io(None, e))
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<TableRow>> {
    Ok(serde_json::from_reader(input)?)
}

pub fn write_text<W: Write>(rows: &[TableRow], mut out: W) -> Result<()> {
    let with_oracle = rows.iter().any(|r| r.oracle_error.is_some());
    let io = |e| CliError::io(None, e);
    let mut header = format!("{:>5} {:>4} {:>4} {:>8} {:>12}", "n", "k", "m", "case", "error");
    if with_oracle {
        header.push_str(&format!(" {:>12} {:>12}", "oracle", "gap"));
    }
    writeln!(out, "{header}  codebook (left half)").map_err(io)?;
    for r in rows {
        if let Some(why) = &r.failure {
            if r.error.is_none() {
                writeln!(out, "{:>5}  failed: {why}", r.n).map_err(io)?;
                continue;
            }
        }
        let num = |x: Option<f64>| x.map(number::text).unwrap_or_else(|| "-".into());
        let int = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let mut line = format!(
            "{:>5} {:>4} {:>4} {:>8} {:>12}",
            r.n,
            int(r.k),
            int(r.m),
            r.case.as_deref().unwrap_or("-"),
            num(r.error)
        );
        if with_oracle {
            line.push_str(&format!(" {:>12} {:>12}", num(r.oracle_error), num(r.gap)));
        }
        let pts: Vec<String> = r.codebook.iter().map(|&x| number::text(x)).collect();
        writeln!(out, "{line}  {}", pts.join(" ")).map_err(io)?;
    }
    Ok(())
}
