//! Heaps and Zipf exponent estimators and the reciprocity report.

use serde::Serialize;

use crate::corpus::RankFrequency;
use crate::error::{Error, Result};
use crate::numerics::{zeta, NeumaierSum};
use crate::simulate::GrowthCurve;

/// Growth-curve points with fewer tokens than this are dropped by default;
/// the power law only holds asymptotically.
pub const DEFAULT_MIN_M: u64 = 1000;

/// Search interval for the Zipf exponent MLE.
pub const ALPHA_BRACKET: (f64, f64) = (1.0 + 1e-6, 20.0);

/// A fitted exponent with its intercept and residual diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub exponent: f64,
    pub log_intercept: f64,
    pub residual_rms: f64,
    pub points_used: usize,
    /// The optimum sits on the boundary of the search interval.
    pub at_bracket_edge: bool,
}

/// Least-squares line through `(ln x, ln y)` over points with `x ≥ min_x`
/// and `y ≥ 1`.
pub fn fit_heaps_points(points: &[(f64, f64)], min_x: f64) -> Result<FitResult> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x >= min_x && *x > 0.0 && *y >= 1.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if used.len() < 2 {
        return Err(Error::domain(format!(
            "Heaps fit needs at least 2 points with m >= {min_x} and d >= 1 (found {})",
            used.len()
        )));
    }
    let k = used.len() as f64;
    let mx = used.iter().map(|p| p.0).collect::<NeumaierSum>().value() / k;
    let my = used.iter().map(|p| p.1).collect::<NeumaierSum>().value() / k;
    let sxx = used
        .iter()
        .map(|p| (p.0 - mx).powi(2))
        .collect::<NeumaierSum>()
        .value();
    let sxy = used
        .iter()
        .map(|p| (p.0 - mx) * (p.1 - my))
        .collect::<NeumaierSum>()
        .value();
    if sxx <= 0.0 {
        return Err(Error::domain(
            "Heaps fit needs at least 2 distinct token counts",
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = used
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .collect::<NeumaierSum>()
        .value();
    Ok(FitResult {
        exponent: slope,
        log_intercept: intercept,
        residual_rms: (ss / k).sqrt(),
        points_used: used.len(),
        at_bracket_edge: false,
    })
}

/// Fit `d ≈ K·m^β` to a growth curve; `exponent` is `β`, `log_intercept` is `ln K`.
pub fn fit_heaps(curve: &GrowthCurve, min_m: u64) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = curve
        .points()
        .iter()
        .map(|p| (p.m as f64, p.d as f64))
        .collect();
    fit_heaps_points(&pts, min_m as f64)
}

struct RankSummary {
    total: f64,
    weighted_log_rank: f64,
}

fn summarize(table: &RankFrequency) -> Result<RankSummary> {
    let total = table.total();
    if table.is_empty() || total < 2 {
        return Err(Error::domain("Zipf fit needs at least 2 tokens"));
    }
    if table.len() < 2 {
        return Err(Error::domain(
            "Zipf fit needs at least 2 distinct tokens; a single type leaves alpha unidentifiable",
        ));
    }
    let weighted_log_rank = table
        .counts()
        .enumerate()
        .map(|(j, c)| c as f64 * ((j + 1) as f64).ln())
        .collect::<NeumaierSum>()
        .value();
    Ok(RankSummary {
        total: total as f64,
        weighted_log_rank,
    })
}

/// `ℓ(α) = -α Σ c_j ln j - N ln ζ(α)`, the log-likelihood of the table
/// under the Zipf law with ranks taken from table order.
pub fn zipf_log_likelihood(table: &RankFrequency, alpha: f64) -> Result<f64> {
    let s = summarize(table)?;
    Ok(-alpha * s.weighted_log_rank - s.total * zeta(alpha)?.ln())
}

/// `d ln ζ / dα` by central differences.
fn dlog_zeta(alpha: f64) -> Result<f64> {
    let h = 1e-4 * (alpha - 1.0).min(1.0);
    Ok((zeta(alpha + h)?.ln() - zeta(alpha - h)?.ln()) / (2.0 * h))
}

/// Maximum-likelihood Zipf exponent of a rank-frequency table.
///
/// `ℓ` is concave in `α` (`ln ζ` is convex), so the score has at most one
/// root in [`ALPHA_BRACKET`]; it is found by bisection. When the score does
/// not change sign the nearer edge is returned with `at_bracket_edge` set.
/// `residual_rms` is the RMS of `ln(c_j/N) - (-α ln j - ln ζ(α))`, a
/// diagnostic only.
pub fn fit_zipf_alpha(table: &RankFrequency) -> Result<FitResult> {
    let s = summarize(table)?;
    let score = |a: f64| -> Result<f64> { Ok(-s.weighted_log_rank - s.total * dlog_zeta(a)?) };
    let (mut lo, mut hi) = ALPHA_BRACKET;
    let (alpha, edge) = if score(lo)? <= 0.0 {
        (lo, true)
    } else if score(hi)? >= 0.0 {
        (hi, true)
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if score(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * mid {
                break;
            }
        }
        (0.5 * (lo + hi), false)
    };
    let ln_zeta = zeta(alpha)?.ln();
    let ss = table
        .counts()
        .enumerate()
        .map(|(j, c)| {
            let fitted = -alpha * ((j + 1) as f64).ln() - ln_zeta;
            ((c as f64 / s.total).ln() - fitted).powi(2)
        })
        .collect::<NeumaierSum>()
        .value();
    Ok(FitResult {
        exponent: alpha,
        log_intercept: -ln_zeta,
        residual_rms: (ss / table.len() as f64).sqrt(),
        points_used: table.len(),
        at_bracket_edge: edge,
    })
}

/// How close `α̂·β̂` is to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReciprocityReport {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub product: f64,
    pub deviation: f64,
}

pub fn reciprocity_report(alpha_hat: f64, beta_hat: f64) -> Result<ReciprocityReport> {
    for (name, v) in [("alpha_hat", alpha_hat), ("beta_hat", beta_hat)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::domain(format!(
                "{name} must be finite and positive (got {v})"
            )));
        }
    }
    let product = alpha_hat * beta_hat;
    Ok(ReciprocityReport {
        alpha_hat,
        beta_hat,
        product,
        deviation: (product - 1.0).abs(),
    })
}

/// Heaps fit, Zipf fit and reciprocity for one corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusFit {
    pub heaps: FitResult,
    pub zipf: FitResult,
    pub report: ReciprocityReport,
}

pub fn fit_corpus(curve: &GrowthCurve, table: &RankFrequency, min_m: u64) -> Result<CorpusFit> {
    let heaps = fit_heaps(curve, min_m)?;
    let zipf = fit_zipf_alpha(table)?;
    let report = reciprocity_report(zipf.exponent, heaps.exponent)?;
    Ok(CorpusFit {
        heaps,
        zipf,
        report,
    })
}
