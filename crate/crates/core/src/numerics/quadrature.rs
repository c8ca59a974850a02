//! Adaptive Gauss–Kronrod quadrature over `[a, ∞)`.
//!
//! The half line is folded onto `(0, 1]` with `y = a·t^-m`. The default
//! `m = 1` is the plain `y = a/t` map. When the integrand is known to decay
//! like `y^-p` with `1 < p < 2`, `y = a/t` leaves an integrable endpoint
//! singularity of order `t^(p-2)`; choosing `m = 1/(p-1)` makes the mapped
//! integrand bounded at `t = 0` (see [`SemiInfinite::decay_exponent`]).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::compensated::NeumaierSum;
use crate::error::{Error, Result};

/// Value of a definite integral with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of subintervals in the final partition.
    pub intervals: usize,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(Error::numerical(
            format!("integrand is not finite on [{lo}, {hi}]"),
            f64::NAN,
        ));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        lo,
        hi,
        value,
        error,
    })
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    initial: &[(f64, f64)],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadratureResult> {
    let mut heap = BinaryHeap::new();
    for &(lo, hi) in initial {
        heap.push(gauss_kronrod_21(f, lo, hi)?);
    }
    let totals = |heap: &BinaryHeap<Panel>| -> (f64, f64) {
        let v: NeumaierSum = heap.iter().map(|p| p.value).collect();
        let e: NeumaierSum = heap.iter().map(|p| p.error).collect();
        (v.value(), e.value())
    };
    let (mut value, mut error) = totals(&heap);
    loop {
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
        if heap.len() >= max_intervals {
            return Err(Error::numerical(
                format!(
                    "quadrature error estimate {error:e} above tolerance after {} subintervals",
                    heap.len()
                ),
                value,
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::numerical(
                "quadrature subinterval collapsed below floating-point resolution",
                value,
            ));
        }
        let left = gauss_kronrod_21(f, worst.lo, mid)?;
        let right = gauss_kronrod_21(f, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            (value, error) = totals(&heap);
        }
    }
    let (value, error) = totals(&heap);
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        intervals: heap.len(),
    })
}

/// Configurable integrator for `∫_a^∞ f(y) dy`.
#[derive(Clone, Copy, Debug)]
pub struct SemiInfinite {
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
    decay: Option<f64>,
}

impl Default for SemiInfinite {
    fn default() -> Self {
        SemiInfinite {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_intervals: 4000,
            decay: None,
        }
    }
}

impl SemiInfinite {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }

    /// Declare that `f(y)` decays like `y^-p` as `y → ∞`.
    ///
    /// For `p < 2` the map becomes `y = a·t^-m` with `m = 1/(p-1)` (capped at
    /// 64); for `p ≥ 2` it stays `y = a/t`.
    pub fn decay_exponent(mut self, p: f64) -> Self {
        self.decay = Some(p);
        self
    }

    fn grading(&self) -> Result<f64> {
        match self.decay {
            None => Ok(1.0),
            Some(p) if p.is_nan() || p <= 1.0 => Err(Error::domain(format!(
                "decay exponent must exceed 1 for a convergent integral (got {p})"
            ))),
            Some(p) if p >= 2.0 => Ok(1.0),
            Some(p) => Ok((1.0 / (p - 1.0)).min(64.0)),
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<QuadratureResult> {
        if !a.is_finite() {
            return Err(Error::domain(format!(
                "lower limit must be finite (got {a})"
            )));
        }
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        let m = self.grading()?;
        let f = &f;
        // mapped integrand on t ∈ (0, 1]: f(y)·|dy/dt| with y = b·t^-m
        let mapped = move |b: f64, t: f64| -> f64 {
            let y = b * t.powf(-m);
            if !y.is_finite() {
                return 0.0;
            }
            m * (f(y) * y) / t
        };
        if a > 0.0 {
            adaptive(
                &|t| mapped(a, t),
                &[(0.0, 1.0)],
                self.abs_tol,
                self.rel_tol,
                self.max_intervals,
            )
        } else {
            // [a, 1] directly, then u ∈ [1, 2] carries t = 2 - u onto [1, ∞)
            let g = |u: f64| -> f64 {
                if u <= 1.0 {
                    f(u)
                } else {
                    mapped(1.0, 2.0 - u)
                }
            };
            adaptive(
                &g,
                &[(a, 1.0), (1.0, 2.0)],
                self.abs_tol,
                self.rel_tol,
                self.max_intervals,
            )
        }
    }
}

/// `∫_a^∞ f(y) dy` to absolute tolerance `tol` using the `y = a/t` map.
///
/// Fails with [`Error::Numerical`] (carrying the best value) when the error
/// estimate cannot be pushed below `tol`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!(
            "tolerance must be positive (got {tol})"
        )));
    }
    SemiInfinite::new().abs_tol(tol).integrate(f, a)
}

/// `∫_lo^hi f(x) dx` over a finite interval.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::domain(format!("bad interval [{lo}, {hi}]")));
    }
    if !(abs_tol > 0.0 || rel_tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    if lo == hi {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
        });
    }
    adaptive(&f, &[(lo, hi)], abs_tol, rel_tol, 4000)
}
