//! Empirical checks of the analytic model against the real encryption pipeline.
//!
//! Every trial draws its key seed, coin and message from its own XOF stream
//! keyed by `(seed, trial index)`, so results do not depend on how trials are
//! spread over threads.

use std::thread;

use ringlab_core::ate::ate_decode;
use ringlab_core::codec::CompressionRates;
use ringlab_core::ecc::SECRET_BITS;
use ringlab_core::kem::{decrypt_poly, encrypt_poly, keygen, noise_tap, KemConfig};
use ringlab_core::{ModPoly, ParamSet, Xof};

use crate::bigprob::BigProb;
use crate::channel::{crossover_probability, dfr_scheme};
use crate::error::{AnalyzerError, Result};
use crate::noise::Analyzer;
use crate::pmf::Pmf;

const DOMAIN_MONTECARLO: u8 = 0x4d;

struct TrialRng(Xof);

impl TrialRng {
    fn new(seed: u64, trial: u64) -> Self {
        let mut key = [0u8; 16];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..].copy_from_slice(&trial.to_le_bytes());
        TrialRng(Xof::with_domain(&key, DOMAIN_MONTECARLO))
    }

    fn seed32(&mut self) -> [u8; 32] {
        let mut out = [0u8; 32];
        self.0.fill(&mut out);
        out
    }

    fn bits(&mut self, count: usize) -> Vec<bool> {
        (0..count).map(|_| self.0.next_bits(1) == 1).collect()
    }
}

/// Runs `trials` independent trials on all available cores and merges the
/// per-thread accumulators in trial order.
fn parallel<A, F, M>(trials: u64, init: A, run: F, merge: M) -> Result<A>
where
    A: Clone + Send,
    F: Fn(u64, &mut A) -> Result<()> + Sync,
    M: Fn(&mut A, A),
{
    let workers = thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let chunk = trials.div_ceil(workers.max(1)).max(1);
    let parts: Vec<Result<A>> = thread::scope(|s| {
        let handles: Vec<_> = (0..trials)
            .step_by(chunk as usize)
            .map(|start| {
                let mut acc = init.clone();
                let run = &run;
                s.spawn(move || {
                    for t in start..(start + chunk).min(trials) {
                        run(t, &mut acc)?;
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total = init;
    for part in parts {
        merge(&mut total, part?);
    }
    Ok(total)
}

/// Empirical distribution of the centered per-coefficient total noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseHistogram {
    pub q: u32,
    /// Counts indexed by `value + (q − 1)/2`.
    pub counts: Vec<u64>,
    pub samples: u64,
}

impl NoiseHistogram {
    fn empty(q: u32) -> Self {
        NoiseHistogram { q, counts: vec![0; q as usize], samples: 0 }
    }

    pub fn offset(&self) -> i64 {
        -((self.q as i64 - 1) / 2)
    }

    pub fn count(&self, value: i64) -> u64 {
        let idx = value - self.offset();
        if idx < 0 || idx >= self.counts.len() as i64 {
            0
        } else {
            self.counts[idx as usize]
        }
    }
}

/// Taps the total noise of `ceil(coefficients / n)` encryptions, each under a
/// fresh key pair and a random pole pattern for `v`.
pub fn sample_noise(params: &ParamSet, rates: CompressionRates, coefficients: u64, seed: u64) -> Result<NoiseHistogram> {
    rates.validate(params)?;
    let n = params.n() as u64;
    let half = params.half_q();
    let offset = (params.q() as i64 - 1) / 2;
    let run = |t: u64, acc: &mut NoiseHistogram| -> Result<()> {
        let mut rng = TrialRng::new(seed, t);
        let kp = keygen(&rng.seed32(), params)?;
        let coin = rng.seed32();
        let poles = rng.bits(params.n()).into_iter().map(|b| if b { half } else { 0 }).collect();
        let v = ModPoly::from_coeffs(params, poles)?;
        let ct = encrypt_poly(&kp.pk, &v, &coin, params, rates)?;
        for x in noise_tap(&kp.sk, &ct, &v, params, rates)? {
            acc.counts[(x + offset) as usize] += 1;
        }
        acc.samples += n;
        Ok(())
    };
    let merge = |total: &mut NoiseHistogram, part: NoiseHistogram| {
        total.counts.iter_mut().zip(part.counts).for_each(|(a, b)| *a += b);
        total.samples += part.samples;
    };
    parallel(coefficients.div_ceil(n), NoiseHistogram::empty(params.q()), run, merge)
}

/// One histogram bin against the model.
#[derive(Debug, Clone, PartialEq)]
pub struct BinComparison {
    pub value: i64,
    pub count: u64,
    pub empirical: f64,
    pub predicted: BigProb,
    /// `(count − N·p) / sqrt(N·p·(1 − p))`; infinite when a degenerate
    /// bin (`p` of 0 or 1) is missed.
    pub z: f64,
}

/// Compares every residue of `Z_q` between a histogram and a folded model.
pub fn compare(hist: &NoiseHistogram, model: &Pmf) -> Result<Vec<BinComparison>> {
    if model.modulus() != Some(hist.q) {
        return Err(AnalyzerError::Domain(format!("model is not folded mod {}", hist.q)));
    }
    let total = hist.samples as f64;
    Ok((0..hist.q as i64)
        .map(|i| {
            let value = hist.offset() + i;
            let count = hist.counts[i as usize];
            let predicted = model.weight(value);
            let p = predicted.to_f64();
            let (expect, var) = (total * p, total * p * (1.0 - p));
            let z = if var > 0.0 {
                (count as f64 - expect) / var.sqrt()
            } else if count as f64 == expect {
                0.0
            } else {
                f64::INFINITY
            };
            BinComparison { value, count, empirical: count as f64 / total, predicted, z }
        })
        .collect())
}

/// Total-variation distance `½ Σ |empirical − predicted|`.
pub fn tv_distance(rows: &[BinComparison]) -> f64 {
    rows.iter().map(|r| (r.empirical - r.predicted.to_f64()).abs()).sum::<f64>() / 2.0
}

pub fn max_abs_z(rows: &[BinComparison]) -> f64 {
    rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max)
}

/// Outcome counts of full encrypt/decrypt roundtrips.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundtripStats {
    pub trials: u64,
    /// Roundtrips whose recovered secret differs or whose decoding failed.
    pub block_failures: u64,
    /// Wrong threshold decisions on channel bits.
    pub bit_errors: u64,
    pub channel_bits: u64,
}

impl RoundtripStats {
    pub fn bit_error_rate(&self) -> f64 {
        self.bit_errors as f64 / self.channel_bits as f64
    }

    pub fn block_failure_rate(&self) -> f64 {
        self.block_failures as f64 / self.trials as f64
    }
}

/// Encrypts a random secret under a fresh key pair per trial and records
/// channel-bit errors and end-to-end failures.
pub fn roundtrips(config: &KemConfig, trials: u64, seed: u64) -> Result<RoundtripStats> {
    let (params, rates, scheme) = (&config.params, config.rates, &config.scheme);
    let ate = scheme.ate_params();
    let run = |t: u64, acc: &mut RoundtripStats| -> Result<()> {
        let mut rng = TrialRng::new(seed, t);
        let kp = keygen(&rng.seed32(), params)?;
        let coin = rng.seed32();
        let secret = rng.bits(SECRET_BITS);
        let channel = scheme.encode_bits(&secret)?;
        let v = scheme.encode(&secret, params)?;
        let ct = encrypt_poly(&kp.pk, &v, &coin, params, rates)?;
        let received = decrypt_poly(&kp.sk, &ct, params, rates)?;
        let decided = ate_decode(&received, ate)?;
        acc.bit_errors += decided.iter().zip(&channel).filter(|(a, b)| a != b).count() as u64;
        acc.channel_bits += channel.len() as u64;
        if scheme.decode(&received).ok().as_deref() != Some(&secret[..]) {
            acc.block_failures += 1;
        }
        acc.trials += 1;
        Ok(())
    };
    let merge = |total: &mut RoundtripStats, part: RoundtripStats| {
        total.trials += part.trials;
        total.block_failures += part.block_failures;
        total.bit_errors += part.bit_errors;
        total.channel_bits += part.channel_bits;
    };
    parallel(trials, RoundtripStats::default(), run, merge)
}

/// Analytic per-bit and per-block failure probabilities of a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub bit_error: BigProb,
    pub block_failure: BigProb,
}

pub fn predict(analyzer: &mut Analyzer, config: &KemConfig) -> Result<Prediction> {
    let total = analyzer.total_noise(&config.params, config.rates)?;
    let channel = crossover_probability(&total, config.scheme.repetitions())?;
    let block_failure = dfr_scheme(&channel, &config.scheme)?;
    Ok(Prediction { bit_error: channel.p, block_failure })
}

/// Standard score of `observed` successes in `trials` Bernoulli(`p`) draws.
pub fn binomial_z(observed: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    (observed as f64 - n * p) / (n * p * (1.0 - p)).sqrt()
}
