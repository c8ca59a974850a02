//! Monte Carlo vocabulary growth under the Zipf text model.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::RankFrequency;
use crate::error::{Error, Result};
use crate::numerics::{NeumaierSum, RandomStream};
use crate::zipf::{Rank, ZipfParams};

/// Tokens seen `m` and distinct words seen `d` after them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub m: u64,
    pub d: u64,
}

/// An empirical Heaps curve.
///
/// Invariants: `m` strictly increasing, `d` nondecreasing, `d ≤ m`,
/// `d ≥ 1` once `m ≥ 1`, and `d` grows by at most the number of new tokens
/// between consecutive points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrowthCurve {
    points: Vec<GrowthPoint>,
}

impl GrowthCurve {
    pub fn new(points: Vec<GrowthPoint>) -> Result<Self> {
        for p in &points {
            if p.d > p.m || (p.m > 0 && p.d == 0) {
                return Err(Error::domain(format!(
                    "growth point (m={}, d={}) is infeasible",
                    p.m, p.d
                )));
            }
        }
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.m <= a.m {
                return Err(Error::domain(
                    "growth curve token counts must strictly increase",
                ));
            }
            if b.d < a.d || b.d - a.d > b.m - a.m {
                return Err(Error::domain(format!(
                    "distinct count cannot go from {} to {} between m={} and m={}",
                    a.d, b.d, a.m, b.m
                )));
            }
        }
        Ok(GrowthCurve { points })
    }

    pub fn points(&self) -> &[GrowthPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<GrowthPoint> {
        self.points.last().copied()
    }
}

/// `1, 2, 4, …` up to `n`, with `n` appended when it is not a power of two.
pub fn geometric_checkpoints(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = 1u64;
    while m <= n {
        out.push(m);
        match m.checked_mul(2) {
            Some(next) => m = next,
            None => break,
        }
    }
    if n > 0 && out.last() != Some(&n) {
        out.push(n);
    }
    out
}

fn check_checkpoints(checkpoints: &[u64], n: u64) -> Result<()> {
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("checkpoints must be strictly increasing"));
    }
    if let Some(&last) = checkpoints.last() {
        if last > n {
            return Err(Error::domain(format!(
                "checkpoint {last} exceeds the text length {n}"
            )));
        }
    }
    Ok(())
}

/// Single pass over `tokens`, recording the distinct count at each
/// checkpoint. Checkpoint 0 records `(0, 0)`.
pub fn growth_curve_from_tokens<K, I>(tokens: I, checkpoints: &[u64]) -> Result<GrowthCurve>
where
    K: Hash + Eq,
    I: IntoIterator<Item = K>,
{
    let max = checkpoints.last().copied().unwrap_or(0);
    check_checkpoints(checkpoints, max)?;
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    while next.peek() == Some(&&0) {
        points.push(GrowthPoint { m: 0, d: 0 });
        next.next();
    }
    let mut m = 0u64;
    for tok in tokens {
        if next.peek().is_none() {
            break;
        }
        seen.insert(tok);
        m += 1;
        if next.peek() == Some(&&m) {
            points.push(GrowthPoint {
                m,
                d: seen.len() as u64,
            });
            next.next();
        }
    }
    if let Some(&c) = next.next() {
        return Err(Error::domain(format!(
            "token stream ended at {m}, before checkpoint {c}"
        )));
    }
    GrowthCurve::new(points)
}

/// Sample `n` tokens and record distinct-so-far at each checkpoint.
pub fn simulate_growth_curve(
    params: &ZipfParams,
    n: u64,
    stream: &mut RandomStream,
    checkpoints: &[u64],
) -> Result<GrowthCurve> {
    check_checkpoints(checkpoints, n)?;
    let ranks = (0..n).map(|_| params.sample_rank(stream));
    growth_curve_from_tokens(ranks, checkpoints)
}

/// Number of distinct ranks in `n` draws.
pub fn distinct_count(params: &ZipfParams, n: u64, stream: &mut RandomStream) -> u64 {
    let mut seen: HashSet<Rank> = HashSet::new();
    for _ in 0..n {
        seen.insert(params.sample_rank(stream));
    }
    seen.len() as u64
}

/// Per-trial distinct counts; trial `t` draws from `RandomStream::derive(seed, t)`.
pub fn trial_counts(
    params: &ZipfParams,
    n: u64,
    trials: std::ops::Range<u64>,
    seed: u64,
) -> Vec<u64> {
    trials
        .into_par_iter()
        .map(|t| distinct_count(params, n, &mut RandomStream::derive(seed, t)))
        .collect()
}

/// Mean and standard error of a Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl MCEstimate {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("a standard error needs at least two trials"));
        }
        let t = samples.len() as f64;
        let mean = samples.iter().copied().collect::<NeumaierSum>().value() / t;
        let ss = samples
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .collect::<NeumaierSum>()
            .value();
        Ok(MCEstimate {
            mean,
            std_error: (ss / (t - 1.0) / t).sqrt(),
            trials: samples.len() as u64,
        })
    }
}

/// Monte Carlo estimate of `E X(n)` over `trials` independent texts.
///
/// Trials run in parallel; each owns a derived stream, so the result does
/// not depend on scheduling.
pub fn monte_carlo_distinct(
    params: &ZipfParams,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if trials < 2 {
        return Err(Error::domain(format!(
            "need at least 2 trials (got {trials})"
        )));
    }
    let counts: Vec<f64> = trial_counts(params, n, 0..trials, seed)
        .into_iter()
        .map(|c| c as f64)
        .collect();
    MCEstimate::from_samples(&counts)
}

/// One synthetic text as a corpus: its growth curve and its rank-frequency
/// table, with each rank standing in as a token (its decimal string).
pub fn simulate_corpus(
    params: &ZipfParams,
    n: u64,
    stream: &mut RandomStream,
    checkpoints: &[u64],
) -> Result<(GrowthCurve, RankFrequency)> {
    check_checkpoints(checkpoints, n)?;
    let mut counts: HashMap<Rank, u64> = HashMap::new();
    let mut points = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    if next.peek() == Some(&&0) {
        points.push(GrowthPoint { m: 0, d: 0 });
        next.next();
    }
    for m in 1..=n {
        *counts.entry(params.sample_rank(stream)).or_insert(0) += 1;
        if next.peek() == Some(&&m) {
            points.push(GrowthPoint {
                m,
                d: counts.len() as u64,
            });
            next.next();
        }
    }
    let curve = GrowthCurve::new(points)?;
    let table = RankFrequency::from_counts(counts.into_iter().map(|(r, c)| (r.to_string(), c)))?;
    Ok((curve, table))
}
