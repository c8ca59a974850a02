//! Expected number of distinct words in `n` i.i.d. Zipf tokens.
//!
//! With `p_i` the rank probabilities, `E X(n) = Σ_i 1 - (1 - p_i)^n`. This
//! module evaluates it four ways:
//!
//! - [`exact_expected_distinct`]: the series itself, with a certified bound.
//! - [`integral_expected_distinct`]: the integral of the term function from
//!   1 (a lower bound on the series) or from 0 (an upper bound).
//! - [`closed_form_expected_distinct`]: the from-0 integral in closed form,
//!   via the binomial expansion and
//!   `Σ_{i=0}^n C(n,i)(-1)^i/(i+x) = n!/(x(x+1)…(x+n))`.
//! - [`asymptotic_expected_distinct`]: `Γ(1 - 1/α)·(n/ζ(α))^(1/α)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    hurwitz_zeta_ln, integrate_finite, lgamma, DoubleDouble, NeumaierSum, SemiInfinite,
};
use crate::zipf::ZipfParams;

/// Distance from a pole below which the identity evaluators refuse to run.
pub const POLE_GUARD: f64 = 1e-9;

/// Largest `n` the direct alternating sum accepts. Beyond this the binomial
/// coefficients overflow `f64`; the product form has no such limit.
pub const ALTERNATING_SUM_MAX_N: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExpectationMethod {
    ExactSeries,
    Integral0,
    Integral1,
    ClosedForm,
    Asymptotic,
}

impl fmt::Display for ExpectationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExpectationMethod::ExactSeries => "ExactSeries",
            ExpectationMethod::Integral0 => "Integral0",
            ExpectationMethod::Integral1 => "Integral1",
            ExpectationMethod::ClosedForm => "ClosedForm",
            ExpectationMethod::Asymptotic => "Asymptotic",
        };
        f.write_str(s)
    }
}

/// A value for `E X` and how far it may be from the quantity its method
/// computes. `Asymptotic` carries an infinite bound: it is a limit form,
/// not an enclosure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: ExpectationMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerLimit {
    FromZero,
    FromOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityForm {
    Sum,
    Product,
}

/// `1 - (1 - p)^n`, evaluated as `-(exp(n·ln(1-p)) - 1)`.
#[inline]
pub fn occupancy(p: f64, n: f64) -> f64 {
    -(n * (-p).ln_1p()).exp_m1()
}

/// The series term `1 - (1 - p_i)^n` for rank `i`.
pub fn distinct_term(params: &ZipfParams, i: u64, n: u64) -> Result<f64> {
    Ok(occupancy(params.pmf(i)?, n as f64))
}

/// Ranks above `2^HEAD_LIMIT_LOG2` are never summed term by term.
const HEAD_LIMIT_LOG2: u32 = 34;

/// Largest per-rank occupancy `n·p_{M+1}` tolerated at the head/tail split.
const SPLIT_OCCUPANCY: f64 = 0.25;

/// The series `Σ_i 1 - (1 - p_i)^n`, to within `eps`.
///
/// Ranks `1..=M` are summed term by term, `M` the smallest power of two
/// with `n·p_{M+1} ≤ 1/4`. The tail `i > M` is expanded binomially,
/// `Σ_{k≥1} (-1)^(k+1) C(n,k) ζ(kα, M+1) / ζ(α)^k`, where `ζ(s, q)` is the
/// Hurwitz zeta function. Partial sums of that expansion alternately over-
/// and under-estimate each term (Bonferroni), so the first omitted
/// summand bounds the tail error. Its first summand `n·Σ_{i>M} p_i` is the
/// plain `1 - (1-p)^n ≤ n·p` bound.
pub fn exact_expected_distinct(params: &ZipfParams, n: u64, eps: f64) -> Result<ExpectationResult> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::domain(format!("eps must be positive (got {eps})")));
    }
    let method = ExpectationMethod::ExactSeries;
    if n == 0 {
        return Ok(ExpectationResult {
            value: 0.0,
            abs_error_bound: 0.0,
            method,
        });
    }
    let nf = n as f64;
    let alpha = params.alpha();

    let mut m: u64 = 1;
    while nf * params.pmf_unchecked(m + 1) > SPLIT_OCCUPANCY {
        if m >= 1 << HEAD_LIMIT_LOG2 {
            return Err(Error::numerical(
                format!("series head would exceed 2^{HEAD_LIMIT_LOG2} terms"),
                f64::NAN,
            ));
        }
        m *= 2;
    }

    let mut head = NeumaierSum::new();
    for i in (1..=m).rev() {
        head.add(occupancy(params.pmf_unchecked(i), nf));
    }

    let ln_c = params.zeta_alpha().ln();
    let mut tail = NeumaierSum::new();
    let mut ln_binom = 0.0;
    let mut tail_bound = 0.0;
    let mut k: u64 = 1;
    loop {
        if k > n {
            break;
        }
        ln_binom += ((nf - k as f64 + 1.0) / k as f64).ln();
        let kf = k as f64;
        let ln_mag = ln_binom + hurwitz_zeta_ln(kf * alpha, m + 1)? - kf * ln_c;
        let mag = ln_mag.exp();
        if mag <= 0.5 * eps {
            tail_bound = mag;
            break;
        }
        if k >= 256 {
            return Err(Error::numerical(
                "tail expansion did not reach the requested accuracy",
                head.value() + tail.value(),
            ));
        }
        tail.add(if k % 2 == 1 { mag } else { -mag });
        k += 1;
    }

    let value = (head.value() + tail.value()).clamp(0.0, nf);
    let rounding = 64.0 * f64::EPSILON * value;
    if rounding > 0.5 * eps {
        return Err(Error::numerical(
            format!("eps = {eps:e} is below the rounding floor {rounding:e}"),
            value,
        ));
    }
    Ok(ExpectationResult {
        value,
        abs_error_bound: tail_bound + rounding,
        method,
    })
}

/// `∫_a^∞ 1 - (1 - 1/(ζ(α) x^α))^n dx` for `a ∈ {0, 1}`.
///
/// Below `x0 = ζ(α)^(-1/α)` the per-rank probability would exceed 1; the
/// integrand is taken as 1 there, so the from-0 value is `x0` plus the
/// integral from `x0`.
pub fn integral_expected_distinct(
    params: &ZipfParams,
    n: u64,
    lower: LowerLimit,
) -> Result<ExpectationResult> {
    let method = match lower {
        LowerLimit::FromZero => ExpectationMethod::Integral0,
        LowerLimit::FromOne => ExpectationMethod::Integral1,
    };
    if n == 0 {
        return Ok(ExpectationResult {
            value: 0.0,
            abs_error_bound: 0.0,
            method,
        });
    }
    let alpha = params.alpha();
    let c = params.zeta_alpha();
    let nf = n as f64;
    let integrand = |x: f64| -> f64 {
        let p = 1.0 / (c * x.powf(alpha));
        if p >= 1.0 {
            1.0
        } else {
            occupancy(p, nf)
        }
    };
    let quad = SemiInfinite::new()
        .abs_tol(1e-12)
        .rel_tol(1e-12)
        .max_intervals(20_000)
        .decay_exponent(alpha);
    let (offset, start) = match lower {
        LowerLimit::FromOne => (0.0, 1.0),
        LowerLimit::FromZero => {
            let x0 = c.powf(-1.0 / alpha);
            (x0, x0)
        }
    };
    let r = quad.integrate(integrand, start)?;
    Ok(ExpectationResult {
        value: offset + r.value,
        abs_error_bound: r.error_estimate + 4.0 * f64::EPSILON * offset,
        method,
    })
}

/// Natural log of `1 − (Integral0 − Integral1)`.
///
/// The difference of the two integrals is `∫_0^1` of the clamped integrand,
/// which equals `1 − ∫_{x0}^1 (1 − p(x))^n dx`. That deficit is far below
/// the rounding of either integral once `n` is moderate, so it is evaluated
/// on its own, scaled by its peak at `x = 1`. A finite result certifies the
/// gap is strictly less than one.
pub fn integral_gap_ln_deficit(params: &ZipfParams, n: u64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let alpha = params.alpha();
    let c = params.zeta_alpha();
    let nf = n as f64;
    let x0 = c.powf(-1.0 / alpha);
    let ln_peak = (-1.0 / c).ln_1p();
    let g = |x: f64| -> f64 {
        let p = 1.0 / (c * x.powf(alpha));
        if p >= 1.0 {
            0.0
        } else {
            (nf * ((-p).ln_1p() - ln_peak)).exp()
        }
    };
    let r = integrate_finite(g, x0, 1.0, 0.0, 1e-10)?;
    if r.value.is_nan() || r.value <= 0.0 {
        return Err(Error::numerical("gap deficit underflowed", r.value));
    }
    Ok(nf * ln_peak + r.value.ln())
}

fn check_poles(n: u64, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(format!("x must be finite (got {x})")));
    }
    let nearest = (-x).round();
    if nearest >= 0.0 && nearest <= n as f64 && (x + nearest).abs() < POLE_GUARD {
        return Err(Error::domain(format!(
            "x = {x} is within {POLE_GUARD:e} of the pole at {}",
            -nearest
        )));
    }
    Ok(())
}

/// `n!/(x(x+1)…(x+n))` in log space with a separate sign.
///
/// Returns the value and a relative rounding estimate. Each factor is
/// taken as `k/(x+k) = 1/(1 + x/k)`, so the log terms stay small.
fn product_form(n: u64, x: f64) -> (f64, f64) {
    let mut negative = x < 0.0;
    let mut log_sum = NeumaierSum::new();
    log_sum.add(-x.abs().ln());
    let mut log_mass = x.abs().ln().abs();
    for k in 1..=n {
        let kf = k as f64;
        let r = x / kf;
        let term = if r > -0.5 {
            r.ln_1p()
        } else {
            let shifted = kf + x;
            if shifted < 0.0 {
                negative = !negative;
            }
            shifted.abs().ln() - kf.ln()
        };
        log_sum.add(-term);
        log_mass += term.abs();
    }
    let magnitude = log_sum.value().exp();
    let rel = 4.0 * f64::EPSILON * (1.0 + log_mass);
    (if negative { -magnitude } else { magnitude }, rel)
}

/// Both sides of `Σ_{i=0}^n C(n,i)(-1)^i/(i+x) = n!/(x(x+1)…(x+n))`.
///
/// `Sum` evaluates the alternating series term by term in double-double
/// arithmetic; it still cancels catastrophically as `n` grows and is
/// limited to `n ≤ 1000`. `Product` works in log space for any `n`.
pub fn alternating_identity(n: u64, x: f64, form: IdentityForm) -> Result<f64> {
    check_poles(n, x)?;
    match form {
        IdentityForm::Product => Ok(product_form(n, x).0),
        IdentityForm::Sum => {
            if n > ALTERNATING_SUM_MAX_N {
                return Err(Error::domain(format!(
                    "alternating sum form is limited to n <= {ALTERNATING_SUM_MAX_N} (got {n})"
                )));
            }
            let mut binom = DoubleDouble::new(1.0);
            let mut acc = DoubleDouble::ZERO;
            for i in 0..=n {
                if i > 0 {
                    binom =
                        binom * DoubleDouble::new((n - i + 1) as f64) / DoubleDouble::new(i as f64);
                }
                let term = binom / DoubleDouble::sum_of(i as f64, x);
                acc = if i % 2 == 0 { acc + term } else { acc - term };
            }
            Ok(acc.to_f64())
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(Error::domain(format!("alpha must exceed 1 (got {alpha})")));
    }
    Ok(())
}

/// `∫_1^∞ 1 - (1 - y^-α)^n dy` exactly: `-1 - (1/α)·n!/∏_{k=0}^n (k - 1/α)`.
///
/// Expanding `(1 - y^-α)^n` binomially and integrating term by term gives
/// `Σ_{i=1}^n C(n,i)(-1)^(i+1)/(iα - 1)`; pulling out `1/α`, adding the
/// `i = 0` term and applying the product identity gives the form above.
pub fn closed_form_tail_integral(alpha: f64, n: u64) -> Result<f64> {
    check_alpha(alpha)?;
    let x = -1.0 / alpha;
    check_poles(n, x)?;
    Ok(-1.0 - product_form(n, x).0 / alpha)
}

/// Largest `n` for which the CLI reports the closed form (O(n) work).
pub const CLOSED_FORM_MAX_N: u64 = 10_000_000;

/// The from-0 integral in closed form.
///
/// Substituting `y = x·ζ(α)^(1/α)` maps the integral from `x0 = ζ(α)^(-1/α)`
/// onto [`closed_form_tail_integral`], so
/// `Integral0 = ζ(α)^(-1/α) · (1 + closed_form_tail_integral(α, n))`.
pub fn closed_form_expected_distinct(params: &ZipfParams, n: u64) -> Result<ExpectationResult> {
    if n == 0 {
        return Ok(ExpectationResult {
            value: 0.0,
            abs_error_bound: 0.0,
            method: ExpectationMethod::ClosedForm,
        });
    }
    let alpha = params.alpha();
    let x = -1.0 / alpha;
    check_poles(n, x)?;
    let (s, rel) = product_form(n, x);
    let tail = -1.0 - s / alpha;
    let scale = params.zeta_alpha().powf(x);
    let value = scale * (1.0 + tail);
    let abs_error_bound = scale * (s.abs() / alpha) * rel + 4.0 * f64::EPSILON * value.abs();
    Ok(ExpectationResult {
        value,
        abs_error_bound,
        method: ExpectationMethod::ClosedForm,
    })
}

/// `Γ(1 - 1/α)·(n/ζ(α))^(1/α)`, the leading-order growth of `E X(n)`.
pub fn asymptotic_expected_distinct(params: &ZipfParams, n: u64) -> ExpectationResult {
    let method = ExpectationMethod::Asymptotic;
    if n == 0 {
        return ExpectationResult {
            value: 0.0,
            abs_error_bound: f64::INFINITY,
            method,
        };
    }
    let alpha = params.alpha();
    let ln_gamma = lgamma(1.0 - 1.0 / alpha).expect("1 - 1/alpha lies in (0, 1)");
    let ln_value = ln_gamma + ((n as f64).ln() - params.zeta_alpha().ln()) / alpha;
    ExpectationResult {
        value: ln_value.exp(),
        abs_error_bound: f64::INFINITY,
        method,
    }
}
