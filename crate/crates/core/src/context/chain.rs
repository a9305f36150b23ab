//! Brute-force simulation of the measurement chain
//! prepare(a) → evolve → measure C → collapse → evolve → measure B,
//! keeping only runs in which B yields the post-selected label.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::kinematics::OutcomeDistribution;
use crate::linalg::vector;
use crate::tolerance;

/// Runs per independent random stream. Block `k` always draws from stream
/// `k` of the seed, so totals do not depend on how blocks are scheduled.
pub const CHAIN_BLOCK: u64 = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSampleReport {
    pub requested: u64,
    pub retained: u64,
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub frequencies: OutcomeDistribution,
    pub seed: u64,
}

impl ChainSampleReport {
    /// (frequency − p) / √(p(1−p)/retained) per label. Zero-variance labels
    /// score 0 on exact agreement and ±∞ otherwise.
    pub fn z_scores(&self, analytic: &OutcomeDistribution) -> Result<Vec<f64>> {
        self.frequencies
            .entries()
            .iter()
            .map(|(label, freq)| {
                let p = analytic.probability(label)?;
                let sigma = (p * (1.0 - p) / self.retained as f64).sqrt();
                let diff = freq - p;
                Ok(if sigma > 0.0 {
                    diff / sigma
                } else if diff.abs() <= tolerance::CONSTRUCTION {
                    0.0
                } else {
                    diff.signum() * f64::INFINITY
                })
            })
            .collect()
    }
}

/// Cumulative distribution over B outcomes for the state collapsed onto
/// one C outcome and evolved to t₂.
struct Branch {
    post_cdf: Vec<f64>,
}

pub fn sample_chain(ctx: &Context, samples: u64, seed: u64) -> Result<ChainSampleReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mid = ctx.require_intermediate()?;
    let post = ctx.postselection();
    let post_index = post.observable.index_of(&post.label)?;
    let to_mid = ctx.evolution(mid.time - ctx.preparation().time)?;
    let to_post = ctx.evolution(post.time - mid.time)?;

    let psi = to_mid.apply(ctx.preparation().state.amplitudes());
    let mut c_probabilities = Vec::with_capacity(mid.observable.len());
    let mut branches = Vec::with_capacity(mid.observable.len());
    for outcome in mid.observable.outcomes() {
        let projected = outcome.projector.project(&psi);
        let p = vector::norm_sqr(&projected);
        if p <= tolerance::ZERO_PROBABILITY {
            c_probabilities.push(0.0);
            branches.push(Branch { post_cdf: Vec::new() });
            continue;
        }
        c_probabilities.push(p);
        let collapsed = vector::scale(&projected, num_complex::Complex64::new(1.0 / p.sqrt(), 0.0));
        let evolved = to_post.apply(&collapsed);
        let post_probs: Vec<f64> = post
            .observable
            .outcomes()
            .iter()
            .map(|o| o.projector.expectation(&evolved))
            .collect();
        branches.push(Branch {
            post_cdf: cumulative(&post_probs),
        });
    }
    let c_cdf = cumulative(&c_probabilities);

    let blocks = samples.div_ceil(CHAIN_BLOCK);
    let per_block: Vec<Vec<u64>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let runs = CHAIN_BLOCK.min(samples - block * CHAIN_BLOCK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let mut counts = vec![0u64; branches.len()];
            for _ in 0..runs {
                let c = draw(&c_cdf, rng.random::<f64>());
                let b = draw(&branches[c].post_cdf, rng.random::<f64>());
                if b == post_index {
                    counts[c] += 1;
                }
            }
            counts
        })
        .collect();

    let mut counts = vec![0u64; branches.len()];
    for block in &per_block {
        for (total, n) in counts.iter_mut().zip(block) {
            *total += n;
        }
    }
    let retained: u64 = counts.iter().sum();
    if retained == 0 {
        return Err(Error::NoData { requested: samples, seed });
    }
    let labels: Vec<&str> = mid.observable.labels();
    let raw: Vec<f64> = counts.iter().map(|&n| n as f64 / retained as f64).collect();
    Ok(ChainSampleReport {
        requested: samples,
        retained,
        labels: labels.iter().map(|s| s.to_string()).collect(),
        frequencies: OutcomeDistribution::from_raw(&labels, &raw)?,
        counts,
        seed,
    })
}

/// Cumulative sums normalized so the last entry is exactly 1.
fn cumulative(probabilities: &[f64]) -> Vec<f64> {
    let total: f64 = probabilities.iter().sum();
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probabilities
        .iter()
        .map(|p| {
            acc += p / total;
            acc
        })
        .collect();
    if let Some(last) = probabilities.iter().rposition(|&p| p > 0.0) {
        cdf[last..].fill(1.0);
    }
    cdf
}

/// Smallest index whose cumulative weight exceeds `u`, skipping zero-weight entries.
fn draw(cdf: &[f64], u: f64) -> usize {
    let mut prev = 0.0;
    for (k, &c) in cdf.iter().enumerate() {
        if u < c && c > prev {
            return k;
        }
        prev = c;
    }
    cdf.len() - 1
}
