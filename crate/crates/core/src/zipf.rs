//! The generalized Zipf law over the infinite rank vocabulary.

use crate::error::{Error, Result};
use crate::numerics::{hurwitz_zeta_ln, zeta, RandomStream, ZETA_DOMAIN_MARGIN};

/// A word rank, 1 for the most probable word.
pub type Rank = u64;

/// Exponent `α > 1` with the normalizer `ζ(α)` and sampler constants cached.
///
/// `p_i = 1 / (ζ(α) · i^α)` for `i = 1, 2, ...`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZipfParams {
    alpha: f64,
    zeta_alpha: f64,
    sampler: RejectionInversion,
}

impl ZipfParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 1.0 + ZETA_DOMAIN_MARGIN {
            return Err(Error::domain(format!(
                "Zipf exponent must satisfy alpha > 1 (got {alpha})"
            )));
        }
        let zeta_alpha = zeta(alpha)?;
        Ok(ZipfParams {
            alpha,
            zeta_alpha,
            sampler: RejectionInversion::new(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Cached `ζ(α)`.
    pub fn zeta_alpha(&self) -> f64 {
        self.zeta_alpha
    }

    /// Probability of rank `i`. Rank 0 does not exist.
    pub fn pmf(&self, i: Rank) -> Result<f64> {
        if i == 0 {
            return Err(Error::domain("ranks start at 1"));
        }
        Ok(self.pmf_unchecked(i))
    }

    #[inline]
    pub(crate) fn pmf_unchecked(&self, i: Rank) -> f64 {
        (i as f64).powf(-self.alpha) / self.zeta_alpha
    }

    /// Integral bracket `(lower, upper)` on the tail mass `Σ_{i>m} p_i`.
    ///
    /// `lower = (m+1)^(1-α) / ((α-1)ζ(α))`, `upper = m^(1-α) / ((α-1)ζ(α))`.
    pub fn tail_mass_bounds(&self, m: u64) -> Result<(f64, f64)> {
        if m == 0 {
            return Err(Error::domain("tail bound needs m >= 1"));
        }
        let denom = (self.alpha - 1.0) * self.zeta_alpha;
        let mf = m as f64;
        let lower = (mf + 1.0).powf(1.0 - self.alpha) / denom;
        let upper = mf.powf(1.0 - self.alpha) / denom;
        Ok((lower, upper))
    }

    /// Exact tail mass `Σ_{i>m} p_i` through the Hurwitz zeta function.
    pub fn tail_mass(&self, m: u64) -> f64 {
        if m == 0 {
            return 1.0;
        }
        let ln_tail = hurwitz_zeta_ln(self.alpha, m + 1).expect("alpha validated at construction");
        (ln_tail - self.zeta_alpha.ln()).exp()
    }

    /// Draw one rank with probability exactly `p_i`.
    ///
    /// Ranks are unbounded in principle; draws beyond `u64::MAX` saturate to
    /// `u64::MAX`. That happens with probability `Σ_{i>2^64} p_i`, which is
    /// below `2e-10` for `α ≥ 1.5` but not negligible as `α → 1`.
    #[inline]
    pub fn sample_rank(&self, stream: &mut RandomStream) -> Rank {
        self.sampler.sample(stream)
    }

    /// `n` independent ranks.
    pub fn sample_text(&self, n: usize, stream: &mut RandomStream) -> Vec<Rank> {
        (0..n).map(|_| self.sample_rank(stream)).collect()
    }
}

/// `ln(1+x)/x`, continuous at 0.
#[inline]
fn ln1p_over(x: f64) -> f64 {
    if x.abs() > 1e-8 {
        x.ln_1p() / x
    } else {
        1.0 - x * (0.5 - x / 3.0)
    }
}

/// `(e^x - 1)/x`, continuous at 0.
#[inline]
fn expm1_over(x: f64) -> f64 {
    if x.abs() > 1e-8 {
        x.exp_m1() / x
    } else {
        1.0 + x * (0.5 + x / 6.0)
    }
}

/// Rejection-inversion sampling (Hörmann & Derflinger) for the unbounded
/// Zipf law, with hat function `h(x) = x^-α`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct RejectionInversion {
    alpha: f64,
    h_integral_x1: f64,
    h_integral_inf: f64,
    squeeze: f64,
}

impl RejectionInversion {
    fn new(alpha: f64) -> Self {
        let mut r = RejectionInversion {
            alpha,
            h_integral_x1: 0.0,
            h_integral_inf: 1.0 / (alpha - 1.0),
            squeeze: 0.0,
        };
        r.h_integral_x1 = r.h_integral(1.5) - 1.0;
        r.squeeze = 2.0 - r.h_integral_inv(r.h_integral(2.5) - r.h(2.0));
        r
    }

    #[inline]
    fn h(&self, x: f64) -> f64 {
        (-self.alpha * x.ln()).exp()
    }

    /// `H(x) = (x^(1-α) - 1)/(1-α)`, an antiderivative of `h` with `H(1) = 0`.
    #[inline]
    fn h_integral(&self, x: f64) -> f64 {
        let ln_x = x.ln();
        expm1_over((1.0 - self.alpha) * ln_x) * ln_x
    }

    #[inline]
    fn h_integral_inv(&self, y: f64) -> f64 {
        let t = (y * (1.0 - self.alpha)).max(-1.0);
        (ln1p_over(t) * y).exp()
    }

    fn sample(&self, stream: &mut RandomStream) -> Rank {
        loop {
            // v ∈ (0, 1] keeps u strictly below H(∞)
            let v = 1.0 - stream.uniform01();
            let u = self.h_integral_inf + v * (self.h_integral_x1 - self.h_integral_inf);
            let x = self.h_integral_inv(u);
            let k = ((x + 0.5) as u64).max(1);
            let kf = k as f64;
            if kf - x <= self.squeeze || u >= self.h_integral(kf + 0.5) - self.h(kf) {
                return k;
            }
        }
    }
}
