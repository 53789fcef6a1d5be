//! Command-line front end: argument definitions, output formats and the
//! subcommand implementations. `main` only maps the outcome to an exit code.

pub mod args;
pub mod error;
pub mod number;
pub mod plot;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use mixquant::{lloyd, mixture_density, seed_sequence, solve, verify, OracleReport};
use rayon::prelude::*;
use serde::Serialize;

use args::{Cli, Command, Format, OracleArgs, PlotArgs, PlotKind, QuantizeArgs, SequenceArgs, TableArgs, VerifyArgs};
use error::{CliError, Result};
use number::{ser_f64, ser_vec_f64};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest error gap for `verify` to call the two results equal.
pub const AGREE_ERROR: f64 = 1e-7;
/// Largest codepoint gap for `verify` to call the two results equal.
pub const AGREE_POINTS: f64 = 1e-5;

/// What happened after the output was written.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Success,
    /// Output was produced but flags a numerical problem (exit status 3).
    Numerical(String),
}

#[derive(Debug, Serialize)]
struct Meta {
    #[serde(serialize_with = "ser_f64")]
    tol: f64,
    version: &'static str,
}

#[derive(Debug, Serialize)]
struct QuantizeOutput {
    n: usize,
    k: usize,
    m: usize,
    case: String,
    #[serde(serialize_with = "ser_vec_f64")]
    codebook: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    error: f64,
    meta: Meta,
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    n: usize,
    #[serde(serialize_with = "ser_f64")]
    p: f64,
    #[serde(serialize_with = "ser_vec_f64")]
    codebook: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    error: f64,
    iterations: usize,
    restart_index: usize,
    converged: bool,
    seed: u64,
    prng: String,
    meta: Meta,
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    n: usize,
    #[serde(serialize_with = "ser_f64")]
    error: f64,
    #[serde(serialize_with = "ser_f64")]
    oracle_error: f64,
    #[serde(serialize_with = "ser_f64")]
    error_gap: f64,
    #[serde(serialize_with = "ser_f64")]
    point_gap: f64,
    agree: bool,
}

#[derive(Debug, Serialize)]
struct SequenceRow {
    n: usize,
    a: usize,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Quantize(a) => quantize(a),
        Command::Table(a) => table(a),
        Command::Sequence(a) => sequence(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Plot(a) => plot(a),
    }
}

/// Runs `body` against the destination, buffered; `None` means stdout.
fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(Some(path), e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| CliError::io(Some(path), e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush().map_err(|e| CliError::io(None, e))
        }
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::io(None, e)
}

fn json_line<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w).map_err(io_err)
}

fn csv_rows(w: &mut dyn Write, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(header)?;
    for r in rows {
        c.write_record(r)?;
    }
    c.flush().map_err(io_err)
}

fn join(points: &[f64], f: fn(f64) -> String, sep: &str) -> String {
    points.iter().map(|&x| f(x)).collect::<Vec<_>>().join(sep)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn quantize(a: QuantizeArgs) -> Result<Outcome> {
    check_tol(a.tol)?;
    if a.n == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()));
    }
    let density = mixture_density(a.p)?;
    let out = if a.p == 0.5 {
        let r = solve(a.n)?;
        let (k, m) = r.occupancy();
        QuantizeOutput {
            n: a.n,
            k,
            m,
            case: table::case_label(&r),
            codebook: r.codebook.points().to_vec(),
            error: r.error,
            meta: Meta { tol: a.tol, version: VERSION },
        }
    } else if a.n == 1 {
        // the mean is the only closed form available for other weights
        let mom = density.moments();
        QuantizeOutput {
            n: 1,
            k: usize::from(mom.mean <= 0.5),
            m: usize::from(mom.mean > 0.5 && mom.mean < 0.75),
            case: "explicit".into(),
            codebook: vec![mom.mean],
            error: mom.variance,
            meta: Meta { tol: a.tol, version: VERSION },
        }
    } else {
        return Err(CliError::Usage(format!(
            "closed forms for n >= 2 need p = 0.5 (got p = {}); use `mixquant oracle -n {} --p {}` instead",
            a.p, a.n, a.p
        )));
    };

    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json => json_line(w, &out),
        Format::Csv => csv_rows(
            w,
            &["n", "k", "m", "case", "codebook", "error"],
            vec![vec![
                out.n.to_string(),
                out.k.to_string(),
                out.m.to_string(),
                out.case.clone(),
                join(&out.codebook, number::machine, ";"),
                number::machine(out.error),
            ]],
        ),
        Format::Text => {
            writeln!(w, "n         {}", out.n).map_err(io_err)?;
            writeln!(w, "k, m      {}, {}", out.k, out.m).map_err(io_err)?;
            writeln!(w, "case      {}", out.case).map_err(io_err)?;
            writeln!(w, "codebook  {}", join(&out.codebook, number::text, " ")).map_err(io_err)?;
            writeln!(w, "error     {}", number::text(out.error)).map_err(io_err)
        }
    })?;
    Ok(Outcome::Success)
}

fn table(a: TableArgs) -> Result<Outcome> {
    if a.from == 0 || a.from > a.to {
        return Err(CliError::Usage(format!("need 1 <= from <= to, got {}..{}", a.from, a.to)));
    }
    let jobs = args::jobs_or_default(a.jobs)?;
    let opts = a.oracle.options();
    if a.with_oracle {
        check_tol(opts.tol)?;
        if opts.restarts == 0 {
            return Err(CliError::Usage("--restarts must be at least 1".into()));
        }
    }
    let rows = table::compute_table(a.from, a.to, jobs, a.with_oracle.then_some(&opts))?;
    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json => table::write_json(&rows, w),
        Format::Csv => table::write_csv(&rows, w),
        Format::Text => table::write_text(&rows, w),
    })?;
    let failed: Vec<usize> = rows.iter().filter(|r| r.failure.is_some()).map(|r| r.n).collect();
    Ok(if failed.is_empty() {
        Outcome::Success
    } else {
        Outcome::Numerical(format!("rows failed for n = {failed:?}"))
    })
}

fn sequence(a: SequenceArgs) -> Result<Outcome> {
    let range = a.range.resolve()?;
    let rows: Vec<SequenceRow> = range.map(|n| SequenceRow { n, a: seed_sequence(n) }).collect();
    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json if rows.len() == 1 => json_line(w, &rows[0]),
        Format::Json => json_line(w, &rows),
        Format::Csv => csv_rows(
            w,
            &["n", "a"],
            rows.iter().map(|r| vec![r.n.to_string(), r.a.to_string()]).collect(),
        ),
        Format::Text if rows.len() == 1 => writeln!(w, "{}", rows[0].a).map_err(io_err),
        Format::Text => rows
            .iter()
            .try_for_each(|r| writeln!(w, "{:>6} {}", r.n, r.a))
            .map_err(io_err),
    })?;
    Ok(Outcome::Success)
}

fn oracle_output(report: OracleReport, p: f64, tol: f64) -> OracleOutput {
    OracleOutput {
        n: report.n,
        p,
        codebook: report.codebook.into_inner(),
        error: report.error,
        iterations: report.iterations,
        restart_index: report.restart_index,
        converged: report.converged,
        seed: report.seed,
        prng: report.prng,
        meta: Meta { tol, version: VERSION },
    }
}

fn oracle(a: OracleArgs) -> Result<Outcome> {
    if a.n == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()));
    }
    let density = mixture_density(a.p)?;
    let opts = a.oracle.options();
    let out = oracle_output(lloyd(&density, a.n, &opts)?, a.p, opts.tol);
    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json => json_line(w, &out),
        Format::Csv => csv_rows(
            w,
            &["n", "p", "codebook", "error", "iterations", "restart_index", "converged", "seed"],
            vec![vec![
                out.n.to_string(),
                number::machine(out.p),
                join(&out.codebook, number::machine, ";"),
                number::machine(out.error),
                out.iterations.to_string(),
                out.restart_index.to_string(),
                out.converged.to_string(),
                out.seed.to_string(),
            ]],
        ),
        Format::Text => {
            writeln!(w, "n           {}  (p = {})", out.n, number::text(out.p)).map_err(io_err)?;
            writeln!(w, "codebook    {}", join(&out.codebook, number::text, " ")).map_err(io_err)?;
            writeln!(w, "error       {}", number::text(out.error)).map_err(io_err)?;
            writeln!(
                w,
                "best run    restart {}, {} sweeps, {}",
                out.restart_index,
                out.iterations,
                if out.converged { "converged" } else { "NOT converged" }
            )
            .map_err(io_err)?;
            writeln!(w, "seed        {}  {}", out.seed, out.prng).map_err(io_err)
        }
    })?;
    Ok(if out.converged {
        Outcome::Success
    } else {
        Outcome::Numerical(format!("best Lloyd run did not converge in {} sweeps", out.iterations))
    })
}

fn verify_cmd(a: VerifyArgs) -> Result<Outcome> {
    let range = a.range.resolve()?;
    let jobs = args::jobs_or_default(a.jobs)?;
    let opts = a.oracle.options();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let rows: Vec<VerifyRow> = pool.install(|| {
        range
            .into_par_iter()
            .map(|n| {
                let v = verify(n, &opts)?;
                Ok(VerifyRow {
                    n,
                    error: v.closed_form.error,
                    oracle_error: v.oracle.error,
                    error_gap: v.error_gap,
                    point_gap: v.max_point_gap,
                    agree: v.error_gap < AGREE_ERROR && v.max_point_gap < AGREE_POINTS,
                })
            })
            .collect::<Result<_>>()
    })?;

    emit(a.output.out.as_deref(), |w| match a.output.format {
        Format::Json => json_line(w, &rows),
        Format::Csv => csv_rows(
            w,
            &["n", "error", "oracle_error", "error_gap", "point_gap", "agree"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        number::machine(r.error),
                        number::machine(r.oracle_error),
                        number::machine(r.error_gap),
                        number::machine(r.point_gap),
                        r.agree.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            writeln!(w, "{:>5} {:>12} {:>12} {:>11} {:>11}  agree", "n", "error", "oracle", "error gap", "point gap")
                .map_err(io_err)?;
            rows.iter()
                .try_for_each(|r| {
                    writeln!(
                        w,
                        "{:>5} {:>12} {:>12} {:>11} {:>11}  {}",
                        r.n,
                        number::text(r.error),
                        number::text(r.oracle_error),
                        number::text(r.error_gap),
                        number::text(r.point_gap),
                        if r.agree { "yes" } else { "NO" }
                    )
                })
                .map_err(io_err)
        }
    })?;

    let bad: Vec<usize> = rows.iter().filter(|r| !r.agree).map(|r| r.n).collect();
    Ok(if bad.is_empty() {
        Outcome::Success
    } else {
        Outcome::Numerical(format!("closed form and oracle disagree for n = {bad:?}"))
    })
}

fn plot(a: PlotArgs) -> Result<Outcome> {
    let svg = match a.kind {
        PlotKind::Codepoints => {
            if a.n == 0 {
                return Err(CliError::Usage("-n must be at least 1".into()));
            }
            plot::codepoints_svg(a.n)?
        }
        PlotKind::Density => plot::density_svg(&mixture_density(a.p)?),
    };
    emit(a.out.as_deref(), |w| w.write_all(svg.as_bytes()).map_err(io_err))?;
    Ok(Outcome::Success)
}
