//! The `heaps-zipf` command line.
//!
//! Primary records go to stdout (CSV with a header line, or JSON lines);
//! growth curves and rank tables go to files in the output directory
//! (`--out-dir`, else `$HEAPS_ZIPF_OUT_DIR`, else `.`).
//!
//! | subcommand    | stdout columns                                   | files                   |
//! |---------------|--------------------------------------------------|-------------------------|
//! | `expect`      | `method,value,error`                             |                         |
//! | `simulate`    | `mean,std_error,trials`                          | `growth.csv` (`m,d`)    |
//! | `fit`         | `exponent,log_intercept,residual_rms,points_used,at_bracket_edge` |        |
//! | `analyze`     | `tokens,distinct,invalid_utf8,tokenizer,alpha_hat,alpha_at_edge,beta_hat,product,deviation` | `growth.csv`, `ranks.csv` (`token,count`) |
//! | `reciprocity` | `trial,alpha_hat,beta_hat,product,deviation`     |                         |
//!
//! Exit status: 0 on success, 1 for invalid arguments or input, 2 when a
//! numerical routine misses its accuracy target.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{analyze_readers, TOKENIZER_RULE};
use crate::error::{Error, Result};
use crate::expectation::{
    asymptotic_expected_distinct, closed_form_expected_distinct, exact_expected_distinct,
    integral_expected_distinct, ExpectationResult, LowerLimit, CLOSED_FORM_MAX_N,
};
use crate::fit::{fit_corpus, fit_heaps_points, FitResult, DEFAULT_MIN_M};
use crate::numerics::RandomStream;
use crate::simulate::{
    geometric_checkpoints, monte_carlo_distinct, simulate_corpus, simulate_growth_curve,
    GrowthPoint,
};
use crate::zipf::ZipfParams;

pub const OUT_DIR_ENV: &str = "HEAPS_ZIPF_OUT_DIR";
pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "heaps-zipf",
    version,
    about = "Expected vocabulary growth under a generalized Zipf law",
    allow_negative_numbers = true
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for records and tables.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Directory for growth and rank tables.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected distinct count of an n-token text by every method.
    #[command(allow_negative_numbers = true)]
    Expect {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: u64,
        /// Absolute accuracy of the exact series [default: 1e-9, raised
        /// to the rounding floor for large counts].
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Monte Carlo distinct count and one growth curve.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit a Heaps exponent to an `m,d` CSV growth curve.
    #[command(allow_negative_numbers = true)]
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_M)]
        min_m: u64,
    },
    /// Tokenize text files (`-` for stdin) and fit both exponents.
    #[command(allow_negative_numbers = true)]
    Analyze {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MIN_M)]
        min_m: u64,
    },
    /// Simulate corpora and fit both exponents to each.
    #[command(allow_negative_numbers = true)]
    Reciprocity {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MIN_M)]
        min_m: u64,
    },
}

impl RunConfig {
    /// Argument checks that clap's types do not express.
    pub fn validate(&self) -> Result<()> {
        let alpha = match &self.command {
            Command::Expect { alpha, eps, .. } => {
                if let Some(e) = eps {
                    if e.is_nan() || *e <= 0.0 {
                        return Err(Error::domain(format!("--eps must be positive (got {e})")));
                    }
                }
                Some(*alpha)
            }
            Command::Simulate { alpha, trials, .. } => {
                if *trials < 2 {
                    return Err(Error::domain(
                        "--trials must be at least 2 for a standard error",
                    ));
                }
                Some(*alpha)
            }
            Command::Reciprocity { alpha, trials, .. } => {
                if *trials < 1 {
                    return Err(Error::domain("--trials must be at least 1"));
                }
                Some(*alpha)
            }
            Command::Fit { .. } | Command::Analyze { .. } => None,
        };
        if let Some(a) = alpha {
            if a.is_nan() || a <= 1.0 || a.is_infinite() {
                return Err(Error::domain(format!(
                    "--alpha must satisfy alpha > 1 (got {a}); the Zipf normalizer diverges otherwise"
                )));
            }
        }
        Ok(())
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical { .. } => 2,
        _ => 1,
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match cfg.validate().and_then(|()| dispatch(&cfg, out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn write_records<R: Serialize>(
    w: &mut dyn Write,
    format: OutputFormat,
    header: &[&str],
    records: &[R],
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut wr = csv::WriterBuilder::new()
                .has_headers(false)
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(w);
            wr.write_record(header)?;
            for r in records {
                wr.serialize(r)?;
            }
            wr.flush()?;
        }
        OutputFormat::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn write_table<R: Serialize>(
    dir: &Path,
    stem: &str,
    format: OutputFormat,
    header: &[&str],
    records: &[R],
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let mut w = BufWriter::new(File::create(&path)?);
    write_records(&mut w, format, header, records)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ExpectRecord {
    method: String,
    value: f64,
    error: f64,
}

impl From<ExpectationResult> for ExpectRecord {
    fn from(r: ExpectationResult) -> Self {
        ExpectRecord {
            method: r.method.to_string(),
            value: r.value,
            error: r.abs_error_bound,
        }
    }
}

#[derive(Serialize)]
struct FitRecord {
    exponent: f64,
    log_intercept: f64,
    residual_rms: f64,
    points_used: usize,
    at_bracket_edge: bool,
}

impl From<FitResult> for FitRecord {
    fn from(f: FitResult) -> Self {
        FitRecord {
            exponent: f.exponent,
            log_intercept: f.log_intercept,
            residual_rms: f.residual_rms,
            points_used: f.points_used,
            at_bracket_edge: f.at_bracket_edge,
        }
    }
}

#[derive(Serialize)]
struct AnalyzeRecord {
    tokens: u64,
    distinct: u64,
    invalid_utf8: u64,
    tokenizer: &'static str,
    alpha_hat: f64,
    alpha_at_edge: bool,
    beta_hat: f64,
    product: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct ReciprocityRecord {
    trial: u64,
    alpha_hat: f64,
    beta_hat: f64,
    product: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct TokenCount<'a> {
    token: &'a str,
    count: u64,
}

#[derive(Deserialize)]
struct CurveRow {
    m: f64,
    d: f64,
}

fn dispatch(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let fmt = cfg.format;
    match &cfg.command {
        Command::Expect { alpha, n, eps } => {
            let params = ZipfParams::new(*alpha)?;
            let upper = integral_expected_distinct(&params, *n, LowerLimit::FromZero)?;
            // Integral0 bounds the series from above
            let eps = eps.unwrap_or_else(|| DEFAULT_EPS.max(128.0 * f64::EPSILON * upper.value));
            let mut recs: Vec<ExpectRecord> = vec![
                exact_expected_distinct(&params, *n, eps)?.into(),
                integral_expected_distinct(&params, *n, LowerLimit::FromOne)?.into(),
                upper.into(),
            ];
            if *n <= CLOSED_FORM_MAX_N {
                recs.push(closed_form_expected_distinct(&params, *n)?.into());
            }
            recs.push(asymptotic_expected_distinct(&params, *n).into());
            write_records(out, fmt, &["method", "value", "error"], &recs)
        }
        Command::Simulate {
            alpha,
            n,
            trials,
            seed,
        } => {
            let params = ZipfParams::new(*alpha)?;
            let est = monte_carlo_distinct(&params, *n, *trials, *seed)?;
            let curve = simulate_growth_curve(
                &params,
                *n,
                &mut RandomStream::derive(*seed, 0),
                &geometric_checkpoints(*n),
            )?;
            write_table(&cfg.out_dir, "growth", fmt, &["m", "d"], curve.points())?;
            write_records(out, fmt, &["mean", "std_error", "trials"], &[est])
        }
        Command::Fit { input, min_m } => {
            let mut rdr = csv::Reader::from_path(input)?;
            let mut pts = Vec::new();
            for row in rdr.deserialize::<CurveRow>() {
                let row = row?;
                pts.push((row.m, row.d));
            }
            let fit = fit_heaps_points(&pts, *min_m as f64)?;
            write_records(
                out,
                fmt,
                &[
                    "exponent",
                    "log_intercept",
                    "residual_rms",
                    "points_used",
                    "at_bracket_edge",
                ],
                &[FitRecord::from(fit)],
            )
        }
        Command::Analyze { input, min_m } => {
            let mut readers: Vec<Box<dyn io::BufRead>> = Vec::new();
            for path in input {
                if path.as_os_str() == "-" {
                    readers.push(Box::new(BufReader::new(io::stdin())));
                } else {
                    let f = File::open(path).map_err(|e| {
                        Error::domain(format!("cannot open {}: {e}", path.display()))
                    })?;
                    readers.push(Box::new(BufReader::new(f)));
                }
            }
            let analysis = analyze_readers(readers)?;
            let growth: Vec<GrowthPoint> = analysis.curve.points().to_vec();
            write_table(&cfg.out_dir, "growth", fmt, &["m", "d"], &growth)?;
            let ranks: Vec<TokenCount> = analysis
                .table
                .entries()
                .iter()
                .map(|(t, c)| TokenCount {
                    token: t,
                    count: *c,
                })
                .collect();
            write_table(&cfg.out_dir, "ranks", fmt, &["token", "count"], &ranks)?;
            let fit = fit_corpus(&analysis.curve, &analysis.table, *min_m)?;
            let rec = AnalyzeRecord {
                tokens: analysis.table.total(),
                distinct: analysis.table.len() as u64,
                invalid_utf8: analysis.invalid_utf8,
                tokenizer: TOKENIZER_RULE,
                alpha_hat: fit.zipf.exponent,
                alpha_at_edge: fit.zipf.at_bracket_edge,
                beta_hat: fit.heaps.exponent,
                product: fit.report.product,
                deviation: fit.report.deviation,
            };
            write_records(
                out,
                fmt,
                &[
                    "tokens",
                    "distinct",
                    "invalid_utf8",
                    "tokenizer",
                    "alpha_hat",
                    "alpha_at_edge",
                    "beta_hat",
                    "product",
                    "deviation",
                ],
                &[rec],
            )
        }
        Command::Reciprocity {
            alpha,
            n,
            trials,
            seed,
            min_m,
        } => {
            let params = ZipfParams::new(*alpha)?;
            let checkpoints = geometric_checkpoints(*n);
            let recs: Vec<ReciprocityRecord> = (0..*trials)
                .into_par_iter()
                .map(|t| -> Result<ReciprocityRecord> {
                    let mut stream = RandomStream::derive(*seed, t);
                    let (curve, table) = simulate_corpus(&params, *n, &mut stream, &checkpoints)?;
                    let fit = fit_corpus(&curve, &table, *min_m)?;
                    Ok(ReciprocityRecord {
                        trial: t,
                        alpha_hat: fit.report.alpha_hat,
                        beta_hat: fit.report.beta_hat,
                        product: fit.report.product,
                        deviation: fit.report.deviation,
                    })
                })
                .collect::<Result<_>>()?;
            write_records(
                out,
                fmt,
                &["trial", "alpha_hat", "beta_hat", "product", "deviation"],
                &recs,
            )
        }
    }
}
