//! Riemann/Hurwitz zeta via Euler–Maclaurin, and ln Γ via Lanczos.

use std::f64::consts::E;

use super::compensated::NeumaierSum;
use crate::error::{Error, Result};

/// `zeta` rejects `alpha <= 1 + ZETA_DOMAIN_MARGIN`.
pub const ZETA_DOMAIN_MARGIN: f64 = 1e-9;

/// Bernoulli numbers B_2, B_4, ..., B_30.
#[allow(clippy::excessive_precision)]
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Sum `Σ_{i≥q} i^-s` as `(scale, mantissa)` with value `mantissa · e^scale`.
///
/// Terms below the switch point `Q` are summed directly; the remainder from
/// `Q` on is the Euler–Maclaurin expansion, whose terms shrink roughly like
/// `((s + 2j) / 2πQ)^2`, so `Q` grows with `s`.
fn hurwitz_scaled(s: f64, q: u64) -> (f64, f64) {
    let qf = q as f64;
    let scale = if q == 1 { 0.0 } else { -s * qf.ln() };
    let rel = |i: u64| -> f64 {
        if q == 1 {
            (i as f64).powf(-s)
        } else {
            (i as f64 / qf).powf(-s)
        }
    };

    let switch = q.max(((s + 30.0) / 1.8).ceil().min(1e6) as u64);
    let mut acc = NeumaierSum::new();
    let mut i = q;
    while i < switch {
        let t = rel(i);
        acc.add(t);
        // remainder after i is at most i^{1-s}/(s-1)
        if t * (i as f64) / (s - 1.0) < 1e-17 * acc.value() {
            return (scale, acc.value());
        }
        i += 1;
    }

    let big_q = switch as f64;
    let mut em = NeumaierSum::new();
    em.add(big_q / (s - 1.0));
    em.add(0.5);
    let mut rising = s;
    let mut factorial = 2.0;
    let mut q_pow = 1.0 / big_q;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b / factorial * rising * q_pow;
        em.add(term);
        if term.abs() <= 1e-18 * em.value() {
            break;
        }
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (s + k - 1.0) * (s + k);
        factorial *= (k + 1.0) * (k + 2.0);
        q_pow /= big_q * big_q;
    }
    acc.add(rel(switch) * em.value());
    (scale, acc.value())
}

/// Riemann zeta `ζ(alpha) = Σ_{i≥1} i^-alpha` for real `alpha > 1`.
pub fn zeta(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 1.0 + ZETA_DOMAIN_MARGIN {
        return Err(Error::domain(format!(
            "zeta requires alpha > 1 (got {alpha}); the series diverges otherwise"
        )));
    }
    Ok(hurwitz_scaled(alpha, 1).1)
}

/// Natural log of the Hurwitz tail `Σ_{i≥q} i^-s`, for `s > 1` and `q ≥ 1`.
///
/// Works in log space so large `s` and `q` do not underflow.
pub fn hurwitz_zeta_ln(s: f64, q: u64) -> Result<f64> {
    if s.is_nan() || s <= 1.0 + ZETA_DOMAIN_MARGIN {
        return Err(Error::domain(format!(
            "hurwitz zeta requires s > 1 (got {s})"
        )));
    }
    if q == 0 {
        return Err(Error::domain("hurwitz zeta requires q >= 1"));
    }
    let (scale, mantissa) = hurwitz_scaled(s, q);
    Ok(scale + mantissa.ln())
}

// Lanczos coefficients, g = 10.900511 (Pugh 2004).
const LANCZOS_G: f64 = 10.900511;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// ln(2·sqrt(e/π))
#[allow(clippy::excessive_precision)]
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452223455184457816472122518527279025978;

/// `ln Γ(x)` for `x > 0`.
pub fn lgamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("lgamma requires x > 0 (got {x})")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(lgamma_positive(x))
}

fn lgamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return lgamma_positive(x + 1.0) - x.ln();
    }
    let s = LANCZOS_COEF
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEF[0], |s, (i, &c)| s + c / (x + i as f64 - 1.0));
    s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_G) / E).ln()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Independent oracle: backward partial sum plus the integral bracket on
    /// the remainder. Returns (lower, upper).
    fn zeta_bracket(alpha: f64, m: u64) -> (f64, f64) {
        let mut s = 0.0;
        for i in (1..=m).rev() {
            s += (i as f64).powf(-alpha);
        }
        let mf = m as f64;
        (
            s + (mf + 1.0).powf(1.0 - alpha) / (alpha - 1.0),
            s + mf.powf(1.0 - alpha) / (alpha - 1.0),
        )
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zeta_two_and_four() {
        let (lo, hi) = zeta_bracket(2.0, 1_000_000);
        let z2 = zeta(2.0).unwrap();
        assert!(z2 >= lo - 1e-14 && z2 <= hi + 1e-14, "{lo} {z2} {hi}");
        assert!(rel(z2, PI * PI / 6.0) < 1e-15);

        let (lo, hi) = zeta_bracket(4.0, 10_000);
        let z4 = zeta(4.0).unwrap();
        assert!(z4 >= lo - 1e-15 && z4 <= hi + 1e-15);
        assert!(rel(z4, PI.powi(4) / 90.0) < 1e-15);
    }

    #[test]
    fn zeta_reference_values() {
        // 30-digit reference values
        for (a, z) in [
            (1.2, 5.5915824411777518836),
            (1.5, 2.6123753486854883433),
            (3.0, 1.2020569031595942854),
        ] {
            assert!(rel(zeta(a).unwrap(), z) < 1e-13, "alpha {a}");
        }
    }

    #[test]
    fn zeta_near_one_matches_pole() {
        // ζ(1+δ) = 1/δ + γ + O(δ)
        let s = 1.0 + 1e-7;
        let d = s - 1.0;
        let z = zeta(s).unwrap();
        let euler_gamma = 0.5772156649015329;
        assert!(
            rel(z, 1.0 / d + euler_gamma) < 1e-12,
            "{z} vs {}",
            1.0 / d + euler_gamma
        );
    }

    #[test]
    fn zeta_rejects_divergent() {
        assert!(zeta(1.0).is_err());
        assert!(zeta(1.0 + 1e-10).is_err());
        assert!(zeta(0.5).is_err());
        assert!(zeta(f64::NAN).is_err());
    }

    #[test]
    fn zeta_decreases_to_one() {
        let mut prev = f64::INFINITY;
        for k in 1..200 {
            let a = 1.0 + 0.1 * k as f64;
            let z = zeta(a).unwrap();
            assert!(z < prev && z > 1.0);
            prev = z;
        }
        assert_eq!(zeta(200.0).unwrap(), 1.0);
    }

    #[test]
    fn hurwitz_matches_direct_tail() {
        for (s, q) in [(2.0, 5u64), (3.5, 100), (1.3, 2), (40.0, 3), (7.0, 1000)] {
            let direct: f64 = (q..q + 2_000_000)
                .rev()
                .map(|i| (i as f64).powf(-s))
                .sum::<f64>()
                + ((q + 2_000_000) as f64).powf(1.0 - s) / (s - 1.0);
            let ln = hurwitz_zeta_ln(s, q).unwrap();
            assert!(rel(ln.exp(), direct) < 1e-6, "s={s} q={q}");
        }
        // large s: dominated by the first term
        let ln = hurwitz_zeta_ln(500.0, 7).unwrap();
        assert!((ln - (-500.0 * 7f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn lgamma_known_values() {
        assert!(lgamma(1.0).unwrap().abs() < 1e-15);
        assert!(lgamma(2.0).unwrap().abs() < 1e-15);
        let ln_sqrt_pi = 0.5 * PI.ln();
        assert!(rel(lgamma(0.5).unwrap(), ln_sqrt_pi) < 1e-14);
        assert!(rel(lgamma(10.0).unwrap(), 362880f64.ln()) < 1e-14);
        assert!(lgamma(0.0).is_err());
        assert!(lgamma(-1.5).is_err());
    }

    /// Γ(x) = lim n^x n! / (x (x+1) ... (x+n)); the truncation error is
    /// O(1/n), so two levels of Richardson extrapolation are applied.
    fn lgamma_limit_product(x: f64, n: u64) -> f64 {
        let at = |n: u64| -> f64 {
            let mut acc = x * (n as f64).ln() - x.ln();
            for k in 1..=n {
                acc -= (x / k as f64).ln_1p();
            }
            acc
        };
        let (a, b, c) = (at(n), at(2 * n), at(4 * n));
        let r1 = 2.0 * b - a;
        let r2 = 2.0 * c - b;
        (4.0 * r2 - r1) / 3.0
    }

    #[test]
    fn lgamma_half_matches_limit_product() {
        let oracle = lgamma_limit_product(0.5, 200_000);
        assert!((oracle - 0.5 * PI.ln()).abs() < 1e-10);
        assert!((lgamma(0.5).unwrap() - oracle).abs() < 1e-10);
        for x in [0.25, 1.0 / 3.0, 2.0 / 3.0, 0.9] {
            let oracle = lgamma_limit_product(x, 200_000);
            assert!((lgamma(x).unwrap() - oracle).abs() < 1e-9, "x={x}");
        }
    }

    proptest! {
        #[test]
        fn zeta_bracketing(alpha in 1.05f64..10.0, m in 2u64..2000) {
            let (lo, hi) = zeta_bracket(alpha, m);
            let z = zeta(alpha).unwrap();
            let slack = 1e-13 * z;
            prop_assert!(z >= lo - slack && z <= hi + slack, "{} <= {} <= {}", lo, z, hi);
        }

        #[test]
        fn gamma_recurrence(x in 0.1f64..10.0) {
            let lhs = lgamma(x + 1.0).unwrap().exp();
            let rhs = x * lgamma(x).unwrap().exp();
            prop_assert!(((lhs - rhs) / rhs).abs() < 1e-10);
        }
    }
}
