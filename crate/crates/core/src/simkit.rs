//! Monte Carlo BER estimation, noise-threshold search and net coding gain.
//!
//! Frame `f` of a run draws everything (payload, noise, erasure fills) from
//! stream `f` of a ChaCha8 generator keyed by the master seed, so results
//! do not depend on how frames are spread over workers. The payload and the
//! standard normal samples come first in each stream, which means runs at
//! different Eb/N0 values or with different decoders see the same payloads
//! and the same noise shapes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::channel::{quantize, transmit_with_std, ChannelConfig};
use crate::decoders::{
    decode_drsd, decode_genie_eaed, decode_ibdd, decode_iter_eaed, DecodeReport, DecoderConfig, DecoderVariant,
};
use crate::error::{Error, Result};
use crate::product::{BitMatrix, ProductCode};
use crate::scalar::Real;

pub const DEFAULT_MIN_FRAME_ERRORS: u64 = 50;
pub const DEFAULT_MAX_FRAMES: u64 = 1_000_000;
pub const DEFAULT_RESOLUTION_DB: f64 = 0.02;

/// When to stop drawing frames for one Eb/N0 point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StoppingRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
    /// Optional early decision for threshold probes: stop once enough frames
    /// have run that a BER equal to this target would have produced
    /// `min_frame_errors` frame errors. Bursts are assumed to carry at least
    /// `(t+1)^2` bit errors, or the observed average if larger.
    pub target_ber: Option<f64>,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            min_frame_errors: DEFAULT_MIN_FRAME_ERRORS,
            max_frames: DEFAULT_MAX_FRAMES,
            target_ber: None,
        }
    }
}

impl StoppingRule {
    pub fn with_target(self, target_ber: f64) -> Self {
        Self {
            target_ber: Some(target_ber),
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_frames == 0 {
            return Err(Error::ConfigMismatch("max_frames must be positive".into()));
        }
        if let Some(t) = self.target_ber {
            if !(t > 0.0 && t < 0.5) {
                return Err(Error::DomainError(format!("target BER {t} outside (0, 0.5)")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    FrameErrors,
    MaxFrames,
    TargetResolved,
}

/// One measured point of a BER curve. Bits are systematic payload bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub payload_bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub stop_reason: StopReason,
}

impl BerPoint {
    /// Two-sided 95% Wilson interval for the BER, treating payload bits as
    /// independent trials.
    pub fn confidence_95(&self) -> (f64, f64) {
        wilson_interval(self.bit_errors, self.payload_bits, 1.959_963_984_540_054)
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub target_ber: f64,
    /// Final bracket: BER above target at `.0`, at or below at `.1`.
    pub bracket: (f64, f64),
    pub estimate_db: f64,
    pub resolution_db: f64,
    pub probes: Vec<BerPoint>,
    /// Probe pairs whose BER ordering contradicts their Eb/N0 ordering.
    pub warnings: Vec<String>,
}

/// Outcome of one simulated frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub iterations: usize,
}

/// Monte Carlo driver owning a worker pool.
pub struct MonteCarlo {
    pub stop: StoppingRule,
    pool: ThreadPool,
    batch: usize,
}

impl MonteCarlo {
    /// `workers = 0` picks the number of available cores.
    pub fn new(stop: StoppingRule, workers: usize) -> Result<Self> {
        stop.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::ConfigMismatch(format!("worker pool: {e}")))?;
        let batch = 16 * pool.current_num_threads().max(1);
        Ok(Self { stop, pool, batch })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn run_ber_point<F: Real>(&self, pc: &ProductCode, dec: &DecoderConfig<F>, chan: &ChannelConfig<F>) -> Result<BerPoint> {
        check_configs(pc, dec, chan)?;
        let sigma = chan.noise_std();
        let stop = &self.stop;
        let k2 = pc.payload_bits() as u64;
        let burst_floor = ((pc.component().t() + 1) * (pc.component().t() + 1)) as f64;

        let mut frames = 0u64;
        let mut bit_errors = 0u64;
        let mut frame_errors = 0u64;
        let mut next = 0u64;
        loop {
            let count = (self.batch as u64).min(stop.max_frames - next);
            let outcomes: Vec<FrameOutcome> = self.pool.install(|| {
                (next..next + count)
                    .into_par_iter()
                    .map(|f| simulate_frame(pc, dec, sigma, chan.seed, f))
                    .collect()
            });
            next += count;
            for o in outcomes {
                frames += 1;
                bit_errors += o.bit_errors;
                frame_errors += (o.bit_errors > 0) as u64;
                let reason = if frame_errors >= stop.min_frame_errors {
                    Some(StopReason::FrameErrors)
                } else if frames >= stop.max_frames {
                    Some(StopReason::MaxFrames)
                } else if let Some(target) = stop.target_ber {
                    let burst = if frame_errors > 0 {
                        (bit_errors as f64 / frame_errors as f64).max(burst_floor)
                    } else {
                        burst_floor
                    };
                    let expected_at_target = frames as f64 * k2 as f64 * target / burst;
                    (expected_at_target >= stop.min_frame_errors as f64).then_some(StopReason::TargetResolved)
                } else {
                    None
                };
                if let Some(stop_reason) = reason {
                    let payload_bits = frames * k2;
                    return Ok(BerPoint {
                        ebn0_db: chan.ebn0_db.as_f64(),
                        frames,
                        payload_bits,
                        bit_errors,
                        frame_errors,
                        ber: bit_errors as f64 / payload_bits as f64,
                        stop_reason,
                    });
                }
            }
        }
    }

    /// One point per grid value, all sharing `chan`'s seed and threshold.
    pub fn ber_curve<F: Real>(
        &self,
        pc: &ProductCode,
        dec: &DecoderConfig<F>,
        chan: &ChannelConfig<F>,
        grid_db: &[f64],
    ) -> Result<Vec<BerPoint>> {
        grid_db
            .iter()
            .map(|&db| {
                let c = ChannelConfig {
                    ebn0_db: F::of(db),
                    ..*chan
                };
                self.run_ber_point(pc, dec, &c)
            })
            .collect()
    }

    /// Bisection on Eb/N0 for the point where the BER crosses `target_ber`.
    /// `chan.ebn0_db` is ignored. Probes use the driver's stopping rule with
    /// `target_ber` as its early-decision target.
    pub fn threshold_search<F: Real>(
        &self,
        pc: &ProductCode,
        dec: &DecoderConfig<F>,
        chan: &ChannelConfig<F>,
        target_ber: f64,
        bracket: (f64, f64),
        resolution_db: f64,
    ) -> Result<ThresholdResult> {
        if !(target_ber > 0.0 && target_ber < 0.5) {
            return Err(Error::DomainError(format!("target BER {target_ber} outside (0, 0.5)")));
        }
        if !(resolution_db > 0.0) {
            return Err(Error::ConfigMismatch("resolution must be positive".into()));
        }
        let (mut lo, mut hi) = bracket;
        if !(lo < hi) {
            return Err(Error::BracketError {
                lo_db: lo,
                hi_db: hi,
                target: target_ber,
                reason: "lower end must be below upper end".into(),
            });
        }
        let probe_driver = MonteCarlo {
            stop: self.stop.with_target(target_ber),
            pool: rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers())
                .build()
                .map_err(|e| Error::ConfigMismatch(format!("worker pool: {e}")))?,
            batch: self.batch,
        };
        let probe = |db: f64| {
            let c = ChannelConfig {
                ebn0_db: F::of(db),
                ..*chan
            };
            probe_driver.run_ber_point(pc, dec, &c)
        };
        let mut probes = Vec::new();
        let p_lo = probe(lo)?;
        let lo_ber = p_lo.ber;
        probes.push(p_lo);
        if lo_ber <= target_ber {
            return Err(Error::BracketError {
                lo_db: lo,
                hi_db: hi,
                target: target_ber,
                reason: format!("BER {lo_ber:.3e} at the lower end is not above target"),
            });
        }
        let p_hi = probe(hi)?;
        let hi_ber = p_hi.ber;
        probes.push(p_hi);
        if hi_ber > target_ber {
            return Err(Error::BracketError {
                lo_db: lo,
                hi_db: hi,
                target: target_ber,
                reason: format!("BER {hi_ber:.3e} at the upper end is above target"),
            });
        }
        while hi - lo > resolution_db {
            let mid = 0.5 * (lo + hi);
            let p = probe(mid)?;
            if p.ber > target_ber {
                lo = mid;
            } else {
                hi = mid;
            }
            probes.push(p);
        }
        let warnings = monotonicity_warnings(&probes);
        Ok(ThresholdResult {
            target_ber,
            bracket: (lo, hi),
            estimate_db: 0.5 * (lo + hi),
            resolution_db,
            probes,
            warnings,
        })
    }
}

fn check_configs<F: Real>(pc: &ProductCode, dec: &DecoderConfig<F>, chan: &ChannelConfig<F>) -> Result<()> {
    dec.validate()?;
    if (chan.rate.as_f64() - pc.rate()).abs() > 1e-6 {
        return Err(Error::ConfigMismatch(format!(
            "channel rate {} differs from code rate {}",
            chan.rate,
            pc.rate()
        )));
    }
    if dec.variant != DecoderVariant::Ibdd && chan.erasure_threshold != dec.erasure_threshold {
        return Err(Error::ConfigMismatch(format!(
            "erasure threshold {} in channel, {} in decoder",
            chan.erasure_threshold, dec.erasure_threshold
        )));
    }
    Ok(())
}

/// Probe pairs (sorted by Eb/N0) where the BER rises with Eb/N0 beyond
/// their 95% intervals.
pub fn monotonicity_warnings(points: &[BerPoint]) -> Vec<String> {
    let mut sorted: Vec<&BerPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
    sorted
        .windows(2)
        .filter(|w| w[1].confidence_95().0 > w[0].confidence_95().1)
        .map(|w| {
            format!(
                "non-monotone: BER {:.3e} at {:.3} dB exceeds {:.3e} at {:.3} dB",
                w[1].ber, w[1].ebn0_db, w[0].ber, w[0].ebn0_db
            )
        })
        .collect()
}

/// The generator for frame `frame` of a run keyed by `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Draws a payload, encodes, transmits, decodes and counts payload errors.
/// Residual erasures count as errors.
pub fn simulate_frame<F: Real>(pc: &ProductCode, dec: &DecoderConfig<F>, sigma: F, seed: u64, frame: u64) -> FrameOutcome {
    let mut rng = frame_rng(seed, frame);
    let k2 = pc.payload_bits();
    let mut message = Vec::with_capacity(k2);
    while message.len() < k2 {
        let word: u64 = rng.random();
        let take = (k2 - message.len()).min(64);
        message.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    let tx = pc.encode_flat(&message).expect("payload length matches");
    let soft = transmit_with_std(&tx, sigma, &mut rng);
    let report = decode_frame(pc, dec, &soft, &tx, &mut rng).expect("configuration validated");
    let decided = pc.payload(&report.frame);
    let bit_errors = decided
        .iter()
        .zip(&message)
        .filter(|(d, &m)| d.bit() != Some(m))
        .count() as u64;
    FrameOutcome {
        bit_errors,
        iterations: report.iterations_used,
    }
}

/// Runs the configured decoder on one received frame. `truth` is only read
/// by the genie decoder.
pub fn decode_frame<F: Real, R: Rng + ?Sized>(
    pc: &ProductCode,
    dec: &DecoderConfig<F>,
    soft: &crate::channel::SoftFrame<F>,
    truth: &BitMatrix,
    rng: &mut R,
) -> Result<DecodeReport> {
    let code = pc.component();
    match dec.variant {
        DecoderVariant::Ibdd => {
            let hard = soft.map(|y| (y < F::zero()) as u8);
            decode_ibdd(&hard, code, dec.total_iterations)
        }
        DecoderVariant::IterEaed => decode_iter_eaed(&quantize(soft, dec.erasure_threshold), code, dec.total_iterations, rng),
        DecoderVariant::GenieEaed => decode_genie_eaed(
            &quantize(soft, dec.erasure_threshold),
            truth,
            code,
            dec.total_iterations,
            rng,
        ),
        DecoderVariant::Drsd => decode_drsd(soft, code, dec, rng),
    }
}

/// Eb/N0 in dB that uncoded BPSK needs for a bit error rate of
/// `target_ber`, solving `Q(sqrt(2 Eb/N0)) = target_ber`.
pub fn uncoded_requirement_db(target_ber: f64) -> Result<f64> {
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(Error::DomainError(format!("target BER {target_ber} outside (0, 0.5)")));
    }
    // Q(x) = erfc(x / sqrt 2) / 2, so Eb/N0 = x^2 / 2 = erfc_inv(2 p)^2
    let u = statrs::function::erf::erfc_inv(2.0 * target_ber);
    Ok(10.0 * (u * u).log10())
}

/// Net coding gain: the uncoded requirement at `target_ber` minus the coded
/// threshold, both in dB of Eb/N0.
pub fn ncg_db(threshold_ebn0_db: f64, target_ber: f64) -> Result<f64> {
    Ok(uncoded_requirement_db(target_ber)? - threshold_ebn0_db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::component::ComponentCode;

    fn pc127() -> ProductCode {
        ProductCode::new(ComponentCode::bch(7, 2, true).unwrap())
    }

    fn chan(pc: &ProductCode, ebn0_db: f64, t: f64, seed: u64) -> ChannelConfig<f64> {
        ChannelConfig {
            ebn0_db,
            rate: pc.rate(),
            erasure_threshold: t,
            seed,
        }
    }

    /// Q(x) by Simpson integration of the normal density on [x, x + 12].
    fn q_oracle(x: f64) -> f64 {
        let steps = 20_000;
        let h = 12.0 / steps as f64;
        let f = |u: f64| (-(u * u) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = f(x) + f(x + 12.0);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(x + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn uncoded_requirement_matches_tail_integral() {
        for target in [1e-4, 1e-15] {
            let db = uncoded_requirement_db(target).unwrap();
            let x = (2.0 * 10f64.powf(db / 10.0)).sqrt();
            let q = q_oracle(x);
            assert!((q / target - 1.0).abs() < 1e-6, "target {target}: Q = {q}");
        }
        let q15 = (2.0 * 10f64.powf(uncoded_requirement_db(1e-15).unwrap() / 10.0)).sqrt();
        assert!((q15 - 7.941).abs() < 1e-3);
        assert!((uncoded_requirement_db(1e-15).unwrap() - 14.99).abs() < 0.01);
    }

    #[test]
    fn ncg_examples() {
        assert!(ncg_db(14.99, 1e-15).unwrap().abs() < 0.01);
        assert!((ncg_db(4.11, 1e-15).unwrap() - 10.88).abs() < 0.05);
        assert!(ncg_db(5.0, 1e-4).unwrap() > ncg_db(5.1, 1e-4).unwrap());
        assert!(matches!(ncg_db(4.0, 0.5), Err(Error::DomainError(_))));
        assert!(ncg_db(4.0, 0.0).is_err());
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 10_000, 1.96);
        assert!(lo < 0.003 && 0.003 < hi);
        assert_eq!(wilson_interval(0, 100, 1.96).0, 0.0);
    }

    #[test]
    fn noiseless_regime_has_no_errors() {
        let pc = ProductCode::new(ComponentCode::bch(5, 2, false).unwrap());
        let mc = MonteCarlo::new(
            StoppingRule {
                max_frames: 100,
                ..Default::default()
            },
            1,
        )
        .unwrap();
        for dec in [
            DecoderConfig::ibdd(10),
            DecoderConfig::iter_eaed(10, 0.1),
            DecoderConfig::drsd_preset(10, 9, 0.1),
            DecoderConfig::genie_eaed(10, 0.1),
        ] {
            let p = mc.run_ber_point(&pc, &dec, &chan(&pc, 20.0, dec.erasure_threshold, 3)).unwrap();
            assert_eq!(p.bit_errors, 0);
            assert_eq!(p.frames, 100);
            assert_eq!(p.payload_bits, 100 * pc.payload_bits() as u64);
            assert_eq!(p.stop_reason, StopReason::MaxFrames);
        }
    }

    #[test]
    fn frame_error_stop_is_exact() {
        let pc = ProductCode::new(ComponentCode::bch(5, 2, false).unwrap());
        let mc = MonteCarlo::new(
            StoppingRule {
                min_frame_errors: 7,
                max_frames: 10_000,
                target_ber: None,
            },
            1,
        )
        .unwrap();
        let p = mc.run_ber_point(&pc, &DecoderConfig::ibdd(4), &chan(&pc, 1.0, 0.0, 1)).unwrap();
        assert_eq!(p.frame_errors, 7);
        assert_eq!(p.stop_reason, StopReason::FrameErrors);
        assert!(p.ber > 0.0 && p.ber <= 1.0);
    }

    #[test]
    fn config_mismatches_are_rejected() {
        let pc = pc127();
        let mc = MonteCarlo::new(StoppingRule::default(), 1).unwrap();
        let mut c = chan(&pc, 4.0, 0.2, 0);
        c.rate = 0.5;
        assert!(mc.run_ber_point(&pc, &DecoderConfig::ibdd(2), &c).is_err());
        let c = chan(&pc, 4.0, 0.3, 0);
        assert!(mc.run_ber_point(&pc, &DecoderConfig::iter_eaed(2, 0.2), &c).is_err());
        assert!(MonteCarlo::new(
            StoppingRule {
                max_frames: 0,
                ..Default::default()
            },
            1
        )
        .is_err());
    }

    #[test]
    fn frame_streams_are_distinct_and_stable() {
        let a: u64 = frame_rng(5, 0).random();
        let b: u64 = frame_rng(5, 1).random();
        let c: u64 = frame_rng(5, 0).random();
        let d: u64 = frame_rng(6, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn bracket_errors() {
        let pc = ProductCode::new(ComponentCode::bch(5, 2, false).unwrap());
        let mc = MonteCarlo::new(
            StoppingRule {
                min_frame_errors: 10,
                max_frames: 2_000,
                target_ber: None,
            },
            1,
        )
        .unwrap();
        let dec = DecoderConfig::ibdd(4);
        let c = chan(&pc, 0.0, 0.0, 2);
        // BER at 9 dB is far below 0.4
        assert!(matches!(
            mc.threshold_search(&pc, &dec, &c, 0.4, (9.0, 10.0), 0.1),
            Err(Error::BracketError { .. })
        ));
        // upper end too noisy for a tiny target
        assert!(matches!(
            mc.threshold_search(&pc, &dec, &c, 1e-3, (0.0, 1.0), 0.1),
            Err(Error::BracketError { .. })
        ));
        assert!(mc.threshold_search(&pc, &dec, &c, 1e-3, (3.0, 2.0), 0.1).is_err());
    }

    #[test]
    fn bisection_contract_on_small_code() {
        let pc = ProductCode::new(ComponentCode::bch(5, 2, false).unwrap());
        let mc = MonteCarlo::new(
            StoppingRule {
                min_frame_errors: 20,
                max_frames: 20_000,
                target_ber: None,
            },
            1,
        )
        .unwrap();
        let r = mc
            .threshold_search(&pc, &DecoderConfig::ibdd(6), &chan(&pc, 0.0, 0.0, 4), 1e-3, (2.0, 8.0), 0.02)
            .unwrap();
        assert!(r.bracket.1 - r.bracket.0 <= 0.02);
        assert!(r.bracket.0 <= r.estimate_db && r.estimate_db <= r.bracket.1);
        let at = |db: f64| r.probes.iter().find(|p| p.ebn0_db == db).unwrap().ber;
        assert!(at(r.bracket.0) > 1e-3);
        assert!(at(r.bracket.1) <= 1e-3);
    }
}
