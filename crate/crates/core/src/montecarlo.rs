//! Phase-space Monte Carlo estimate of added noise.
//!
//! Each trial draws one Wigner-function sample for every input mode and a
//! verifier phase, evaluates the teleported quadrature `X_T` numerically, and
//! accumulates its power sums. No Gaussian moment formula from the engine is
//! used; the estimate is a plain sample variance.
//!
//! Trials are split into fixed-size shards. Shard `k` draws from ChaCha8
//! seeded with the user seed on stream `k`, so the result does not depend on
//! how shards are scheduled across threads.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{ModeRegistry, ModeSpec};
use crate::protocols::{check_mean_transport, ProtocolError, Teleporter};

/// Generator used for every stream, recorded in reports.
pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.9), seed_from_u64(seed), stream = shard index";

/// Trials per deterministic shard.
pub const SHARD_TRIALS: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("at least two trials are needed for a variance estimate, got {0}")]
    TooFewTrials(u64),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PhaseSampling {
    /// Fresh uniform phase on `[0, 2π)` every trial.
    Uniform,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub phase: PhaseSampling,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            phase: PhaseSampling::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub n_add_hat: f64,
    pub std_error: f64,
    pub trials_used: u64,
}

impl McEstimate {
    /// Distance from `reference` in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.n_add_hat - reference) / self.std_error
    }

    pub fn agrees_with(&self, reference: f64, sigmas: f64) -> bool {
        (self.n_add_hat - reference).abs() < sigmas * self.std_error
    }
}

/// Lower-triangular factor of a mode's 2×2 covariance.
#[derive(Debug, Clone, Copy)]
struct Sampler {
    mean: (f64, f64),
    l11: f64,
    l21: f64,
    l22: f64,
}

impl Sampler {
    fn new(spec: &ModeSpec) -> Self {
        let l11 = spec.var_x.sqrt();
        let l21 = spec.cov_xy / l11;
        let l22 = (spec.var_y - l21 * l21).max(0.0).sqrt();
        Sampler {
            mean: (spec.mean_x, spec.mean_y),
            l11,
            l21,
            l22,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        (
            self.mean.0 + self.l11 * z1,
            self.mean.1 + self.l21 * z1 + self.l22 * z2,
        )
    }
}

/// One draw `(x, y)` from the Gaussian Wigner function of `spec`.
pub fn sample_mode<R: Rng + ?Sized>(spec: &ModeSpec, rng: &mut R) -> (f64, f64) {
    Sampler::new(spec).draw(rng)
}

/// The teleporter's output quadratures at zero phase, flattened into
/// coefficient arrays indexed like the registry.
struct LinearModel {
    samplers: Vec<Sampler>,
    input: usize,
    const_x: f64,
    const_y: f64,
    out_x: Vec<(f64, f64)>,
    out_y: Vec<(f64, f64)>,
}

impl LinearModel {
    fn build<T: Teleporter + ?Sized>(
        protocol: &T,
        input: &ModeSpec,
    ) -> Result<Self, ProtocolError> {
        let mut registry = ModeRegistry::new();
        let (input_mode, beam) = registry.allocate_labeled("0", *input)?;
        let out = protocol.teleport(&mut registry, beam)?;
        let modes: Vec<_> = registry.modes().map(|(id, _, spec)| (id, *spec)).collect();
        Ok(LinearModel {
            samplers: modes.iter().map(|(_, s)| Sampler::new(s)).collect(),
            input: input_mode.index(),
            const_x: out.x().constant_term(),
            const_y: out.y().constant_term(),
            out_x: modes.iter().map(|(id, _)| out.x().coeff(*id)).collect(),
            out_y: modes.iter().map(|(id, _)| out.y().coeff(*id)).collect(),
        })
    }

    /// `X_T` for one phase-space sample. The input sample is rotated by `φ`
    /// before entering the (linear) protocol and the output by `−φ` after.
    fn evaluate(&self, samples: &[(f64, f64)], phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let mut ox = self.const_x;
        let mut oy = self.const_y;
        for (k, &(x, y)) in samples.iter().enumerate() {
            let (x, y) = if k == self.input {
                (x * c - y * s, x * s + y * c)
            } else {
                (x, y)
            };
            ox += self.out_x[k].0 * x + self.out_x[k].1 * y;
            oy += self.out_y[k].0 * x + self.out_y[k].1 * y;
        }
        ox * c + oy * s
    }
}

/// Power sums of `X_T − shift`.
#[derive(Debug, Clone, Copy, Default)]
struct PowerSums {
    n: u64,
    s1: f64,
    s2: f64,
    s3: f64,
    s4: f64,
}

impl PowerSums {
    fn push(&mut self, d: f64) {
        let d2 = d * d;
        self.n += 1;
        self.s1 += d;
        self.s2 += d2;
        self.s3 += d2 * d;
        self.s4 += d2 * d2;
    }

    fn merge(mut self, o: PowerSums) -> Self {
        self.n += o.n;
        self.s1 += o.s1;
        self.s2 += o.s2;
        self.s3 += o.s3;
        self.s4 += o.s4;
        self
    }

    /// Unbiased sample variance and the standard error of that estimate.
    ///
    /// `X_T` under a random phase is a Gaussian mixture, so the error uses the
    /// empirical fourth central moment rather than the Gaussian `2σ⁴/(n−1)`.
    fn variance_and_error(&self) -> (f64, f64) {
        let n = self.n as f64;
        let m = self.s1 / n;
        let r2 = self.s2 / n;
        let r3 = self.s3 / n;
        let r4 = self.s4 / n;
        let m2 = r2 - m * m;
        let m4 = r4 - 4.0 * m * r3 + 6.0 * m * m * r2 - 3.0 * m.powi(4);
        let var = m2 * n / (n - 1.0);
        let var_of_var = (m4 - (n - 3.0) / (n - 1.0) * m2 * m2) / n;
        (var, var_of_var.max(0.0).sqrt())
    }
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Monte Carlo estimate of `Var(X_T) − Var(X_0)` with `Var(X_0)` taken from
/// the input spec.
pub fn estimate_added_noise<T: Teleporter + Sync + ?Sized>(
    protocol: &T,
    input: &ModeSpec,
    cfg: &McConfig,
) -> Result<McEstimate, McError> {
    if cfg.trials < 2 {
        return Err(McError::TooFewTrials(cfg.trials));
    }
    check_mean_transport(protocol, input)?;
    let model = LinearModel::build(protocol, input)?;
    let shards = cfg.trials.div_ceil(SHARD_TRIALS);
    let shift = input.mean_x;

    let partial: Vec<PowerSums> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let start = shard * SHARD_TRIALS;
            let count = SHARD_TRIALS.min(cfg.trials - start);
            let mut rng = shard_rng(cfg.seed, shard);
            let mut samples = vec![(0.0, 0.0); model.samplers.len()];
            let mut sums = PowerSums::default();
            for _ in 0..count {
                let phi = match cfg.phase {
                    PhaseSampling::Uniform => rng.random::<f64>() * TAU,
                    PhaseSampling::Fixed(phi) => phi,
                };
                for (slot, sampler) in samples.iter_mut().zip(&model.samplers) {
                    *slot = sampler.draw(&mut rng);
                }
                sums.push(model.evaluate(&samples, phi) - shift);
            }
            sums
        })
        .collect();

    let total = partial
        .into_iter()
        .fold(PowerSums::default(), PowerSums::merge);
    let (var, std_error) = total.variance_and_error();
    Ok(McEstimate {
        n_add_hat: var - input.var_x,
        std_error,
        trials_used: total.n,
    })
}
