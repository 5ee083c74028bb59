//! BPSK over AWGN, Monte-Carlo BLER estimation and the ML / hard-decision baselines.
//!
//! Each trial owns a ChaCha8 stream seeded from `(seed, point, trial)`, so two
//! decoders run with the same seed see the same messages and the same noise.
//! Gaussians come from `rand_distr::StandardNormal` (Ziggurat).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::pod::{PodConfig, SingleTransformDecoder};

/// Largest `k` accepted by [`ml_decode`].
pub const ML_MAX_K: usize = 20;

/// Trials evaluated per parallel batch in [`run_bler`].
const BATCH: usize = 256;

/// One SNR operating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelPoint {
    pub eb_n0_db: f64,
    pub rate: f64,
    pub sigma2: f64,
}

impl ChannelPoint {
    pub fn new(eb_n0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) || !eb_n0_db.is_finite() {
            return Err(Error::Validation(format!("bad channel point: {eb_n0_db} dB, rate {rate}")));
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(eb_n0_db / 10.0));
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(sigma2 > 0.0) || !(2.0 / sigma2).is_finite() {
            return Err(Error::Validation(format!("noise variance {sigma2} out of range at {eb_n0_db} dB")));
        }
        Ok(ChannelPoint { eb_n0_db, rate, sigma2 })
    }

    pub fn for_code(code: &CodeSpec, eb_n0_db: f64) -> Result<Self> {
        Self::new(eb_n0_db, code.k as f64 / code.n as f64)
    }
}

/// BPSK-modulates `c`, adds noise and returns the channel LLRs `2y/σ²`.
pub fn transmit<R: Rng + ?Sized>(c: &[u8], point: &ChannelPoint, rng: &mut R) -> Vec<f64> {
    let sigma = point.sigma2.sqrt();
    let scale = 2.0 / point.sigma2;
    c.iter()
        .map(|&b| {
            let x = 1.0 - 2.0 * b as f64;
            let z: f64 = rng.sample(StandardNormal);
            scale * (x + sigma * z)
        })
        .collect()
}

/// `Σ (1 - 2c_j) · llr_j`.
pub fn correlation(c: &[u8], llr: &[f64]) -> f64 {
    crate::pod::correlation(c, llr)
}

/// Soft-decision ML: the message whose codeword maximizes the correlation
/// with `llr`. Messages are visited in Gray order, one generator row per step.
/// Ties keep the first message visited.
pub fn ml_decode_message(code: &CodeSpec, llr: &[f64]) -> Result<Vec<u8>> {
    if code.k > ML_MAX_K {
        return Err(Error::Capacity(format!("ML over 2^{} codewords exceeds 2^{ML_MAX_K}", code.k)));
    }
    if llr.len() != code.n {
        return Err(Error::Shape(format!("llr length {} != n = {}", llr.len(), code.n)));
    }
    let supports: Vec<Vec<usize>> =
        (0..code.k).map(|r| (0..code.n).filter(|&c| code.g.get(r, c)).collect()).collect();
    // sign[j] = 1 - 2c_j for the current codeword
    let mut sign = vec![1.0f64; code.n];
    let mut corr: f64 = llr.iter().sum();
    let (mut best, mut best_mask) = (corr, 0u32);
    let mut mask = 0u32;
    for step in 1u32..(1u32 << code.k) {
        let r = step.trailing_zeros() as usize;
        mask ^= 1 << r;
        for &j in &supports[r] {
            corr -= 2.0 * sign[j] * llr[j];
            sign[j] = -sign[j];
        }
        if corr > best {
            best = corr;
            best_mask = mask;
        }
    }
    Ok((0..code.k).map(|i| ((best_mask >> i) & 1) as u8).collect())
}

/// Codeword form of [`ml_decode_message`].
pub fn ml_decode(code: &CodeSpec, llr: &[f64]) -> Result<Vec<u8>> {
    let m = ml_decode_message(code, llr)?;
    code.g.vec_mul(&m)
}

/// Gaussian tail `Q(x) = erfc(x / √2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Block error probability of a bounded-distance decoder correcting `t`
/// errors on the hard-decision BSC induced by BPSK at `eb_n0_db`.
pub fn hd_theoretical_bler(n: usize, k: usize, t: usize, eb_n0_db: f64) -> f64 {
    let rate = k as f64 / n as f64;
    let p = q_function((2.0 * rate * 10f64.powf(eb_n0_db / 10.0)).sqrt());
    if t >= n {
        return 0.0;
    }
    // Σ_{i=0}^{t} C(n,i) p^i (1-p)^(n-i), with the binomial built incrementally
    let mut ok = 0.0;
    let mut binom = 1.0f64;
    for i in 0..=t {
        if i > 0 {
            binom *= (n - i + 1) as f64 / i as f64;
        }
        ok += binom * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
    }
    (1.0 - ok).max(0.0)
}

/// Wilson score interval for a binomial proportion at `z` standard deviations.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// 95% Wilson interval.
pub fn wilson95(errors: u64, trials: u64) -> (f64, f64) {
    wilson_interval(errors, trials, 1.959_963_984_540_054)
}

/// Simulation result for one decoder at one SNR point.
#[derive(Clone, Debug, PartialEq)]
pub struct BlerRecord {
    pub decoder: String,
    pub eb_n0_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    /// Seconds spent on this point; not deterministic.
    pub wall_time: f64,
}

impl BlerRecord {
    pub fn ci95(&self) -> (f64, f64) {
        wilson95(self.block_errors, self.trials)
    }

    /// Equality ignoring `wall_time`.
    pub fn same_counts(&self, other: &BlerRecord) -> bool {
        self.decoder == other.decoder
            && self.eb_n0_db == other.eb_n0_db
            && self.trials == other.trials
            && self.block_errors == other.block_errors
            && self.bler == other.bler
    }
}

/// Decoders the simulator can drive.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum SimDecoder {
    /// SC or SCL on a single transform.
    Single(SingleTransformDecoder),
    /// Orbit decoding over several branches.
    Pod(Box<PodConfig>),
    Ml,
}

impl SimDecoder {
    /// Message estimate for one block.
    pub fn decode(&self, code: &CodeSpec, llr: &[f64]) -> Result<Vec<u8>> {
        match self {
            SimDecoder::Single(d) => d.decode(llr),
            SimDecoder::Pod(cfg) => Ok(cfg.decode(llr)?.0),
            SimDecoder::Ml => ml_decode_message(code, llr),
        }
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for one trial.
pub fn trial_seed(seed: u64, point: usize, trial: u64) -> u64 {
    mix(mix(mix(seed) ^ point as u64) ^ trial)
}

/// Message and channel LLRs of one trial. Identical for every decoder.
pub fn trial_sample(
    code: &CodeSpec,
    point: &ChannelPoint,
    seed: u64,
    point_index: usize,
    trial: u64,
) -> Result<(Vec<u8>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, point_index, trial));
    let m: Vec<u8> = (0..code.k).map(|_| rng.random_range(0..2u8)).collect();
    let c = code.g.vec_mul(&m)?;
    Ok((m, transmit(&c, point, &mut rng)))
}

/// Whether `decoder` fails on the given trial.
pub fn trial_error(
    code: &CodeSpec,
    decoder: &SimDecoder,
    point: &ChannelPoint,
    seed: u64,
    point_index: usize,
    trial: u64,
) -> Result<bool> {
    let (m, llr) = trial_sample(code, point, seed, point_index, trial)?;
    Ok(decoder.decode(code, &llr)? != m)
}

/// Simulates each point until `min_errors` block errors or `max_trials`.
///
/// Trials run in parallel batches but the count stops exactly at the
/// `min_errors`-th error in trial order, so the result does not depend on
/// thread count or batch size.
pub fn run_bler(
    code: &CodeSpec,
    decoder: &SimDecoder,
    label: &str,
    points: &[ChannelPoint],
    min_errors: u64,
    max_trials: u64,
    seed: u64,
) -> Result<Vec<BlerRecord>> {
    if min_errors == 0 || max_trials == 0 {
        return Err(Error::Validation("min_errors and max_trials must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(points.len());
    for (pi, point) in points.iter().enumerate() {
        let start = Instant::now();
        let (mut trials, mut errors) = (0u64, 0u64);
        while trials < max_trials && errors < min_errors {
            let end = (trials + BATCH as u64).min(max_trials);
            let outcomes = (trials..end)
                .into_par_iter()
                .map(|t| trial_error(code, decoder, point, seed, pi, t))
                .collect::<Result<Vec<bool>>>()?;
            for e in outcomes {
                trials += 1;
                errors += e as u64;
                if errors == min_errors {
                    break;
                }
            }
        }
        out.push(BlerRecord {
            decoder: label.to_string(),
            eb_n0_db: point.eb_n0_db,
            trials,
            block_errors: errors,
            bler: errors as f64 / trials as f64,
            wall_time: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

/// Record for the theoretical hard-decision curve; no trials are run.
pub fn hd_record(code: &CodeSpec, t: usize, eb_n0_db: f64, label: &str) -> BlerRecord {
    BlerRecord {
        decoder: label.to_string(),
        eb_n0_db,
        trials: 0,
        block_errors: 0,
        bler: hd_theoretical_bler(code.n, code.k, t, eb_n0_db),
        wall_time: 0.0,
    }
}
