use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::haar::{block_rng, cosine, SubspaceFrame, BLOCK};
use crate::error::{Error, Result};
use crate::spectral::GrassmannSignature;

/// Running mean and co-moment matrix of a vector-valued sample, merged with
/// the pairwise update so that block results combine exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct CovAccumulator {
    count: usize,
    mean: Vec<f64>,
    comoment: Vec<f64>,
}

impl CovAccumulator {
    pub fn new(width: usize) -> Self {
        CovAccumulator { count: 0, mean: vec![0.0; width], comoment: vec![0.0; width * width] }
    }

    pub fn width(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn push(&mut self, x: &[f64]) {
        let w = self.width();
        self.count += 1;
        let k = self.count as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, d) in self.mean.iter_mut().zip(&delta) {
            *m += d / k;
        }
        for a in 0..w {
            let after = x[a] - self.mean[a];
            for b in 0..w {
                self.comoment[a * w + b] += delta[b] * after;
            }
        }
    }

    pub fn merge(&mut self, other: &CovAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let w = self.width();
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        for a in 0..w {
            for b in 0..w {
                self.comoment[a * w + b] += other.comoment[a * w + b] + delta[a] * delta[b] * na * nb / n;
            }
        }
        for (m, d) in self.mean.iter_mut().zip(&delta) {
            *m += d * nb / n;
        }
        self.count += other.count;
    }

    pub fn mean(&self, a: usize) -> f64 {
        self.mean[a]
    }

    pub fn means(&self) -> &[f64] {
        &self.mean
    }

    /// Sample covariance.
    pub fn cov(&self, a: usize, b: usize) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        self.comoment[a * self.width() + b] / (self.count - 1) as f64
    }

    /// Standard error of `Σ_a g_a · mean_a`.
    pub fn stderr_linear(&self, g: &[f64]) -> f64 {
        let w = self.width();
        let mut var = 0.0;
        for a in 0..w {
            for b in 0..w {
                var += g[a] * g[b] * self.cov(a, b);
            }
        }
        (var.max(0.0) / self.count as f64).sqrt()
    }

    pub fn stderr(&self, a: usize) -> f64 {
        (self.cov(a, a).max(0.0) / self.count as f64).sqrt()
    }

    /// Ratio `mean_a / mean_b` with its delta-method standard error.
    pub fn ratio(&self, a: usize, b: usize) -> (f64, f64) {
        let (ma, mb) = (self.mean[a], self.mean[b]);
        let mut g = vec![0.0; self.width()];
        g[a] += 1.0 / mb;
        g[b] -= ma / (mb * mb);
        (ma / mb, self.stderr_linear(&g))
    }
}

/// Runs `samples` draws in blocks of [`BLOCK`], each block on its own
/// generator stream. `draw` writes `width` values per sample.
pub fn monte_carlo<F>(samples: usize, seed: u64, width: usize, draw: F) -> Result<CovAccumulator>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    if samples < 2 {
        return Err(Error::invalid("Monte-Carlo estimates need at least 2 samples"));
    }
    let blocks = samples.div_ceil(BLOCK);
    let parts: Vec<CovAccumulator> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let mut acc = CovAccumulator::new(width);
            let mut buf = vec![0.0; width];
            for _ in 0..BLOCK.min(samples - b * BLOCK) {
                draw(&mut rng, &mut buf);
                acc.push(&buf);
            }
            acc
        })
        .collect();
    let mut total = CovAccumulator::new(width);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

/// Monte-Carlo estimate with its standard error and the seed that reproduces it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl TransformEstimate {
    pub fn from_acc(acc: &CovAccumulator, a: usize, seed: u64) -> Self {
        TransformEstimate { value: acc.mean(a), stderr: acc.stderr(a), samples: acc.count(), seed }
    }
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= -1.0 {
        return Err(Error::Domain(format!(
            "the cosine integral diverges for alpha={alpha} <= -1; reach it through the chain factorization"
        )));
    }
    Ok(())
}

/// `(T_α f)(E) = ∫ |cos(E,F)|^α f(F) dF` at each eval point, sharing the
/// Haar samples across points.
pub fn mc_cosine_transform(
    sig: &GrassmannSignature,
    alpha: f64,
    f: &(dyn Fn(&SubspaceFrame) -> f64 + Sync),
    eval_points: &[SubspaceFrame],
    samples: usize,
    seed: u64,
) -> Result<Vec<TransformEstimate>> {
    check_alpha(alpha)?;
    for e in eval_points {
        if e.n() != sig.n() || e.dim() != sig.i() {
            return Err(Error::invalid("eval point does not lie in the Grassmannian"));
        }
    }
    let acc = monte_carlo(samples, seed, eval_points.len(), |rng, out| {
        let fr = SubspaceFrame::random(sig.n(), sig.i(), rng);
        let fv = f(&fr);
        for (slot, e) in out.iter_mut().zip(eval_points) {
            *slot = cosine(e, &fr).expect("shapes checked").powf(alpha) * fv;
        }
    })?;
    Ok((0..eval_points.len()).map(|a| TransformEstimate::from_acc(&acc, a, seed)).collect())
}
