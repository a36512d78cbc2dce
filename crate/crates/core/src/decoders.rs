//! Iterative product-code decoders.
//!
//! One iteration decodes every row, then every column, writing accepted
//! decisions straight back into the frame so later words see them. Four
//! variants share that loop and differ in how a component decision is
//! vetted:
//!
//! * [`decode_ibdd`]: plain bounded-distance decoding, every success accepted.
//! * [`decode_iter_eaed`]: error-and-erasure decoding, every success accepted.
//! * [`decode_drsd`]: error-and-erasure decoding vetted by reliability
//!   scores; decisions that would flip an anchor bit are discarded. A number
//!   of plain EaED iterations that ignore the scores follow the scored ones.
//! * [`decode_genie_eaed`]: error-and-erasure decoding where any decision that
//!   disagrees with the transmitted word is discarded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{init_drs, quantize, SoftFrame};
use crate::component::ComponentCode;
use crate::drs::{default_anchor_threshold, DrsRegister};
use crate::eaed::{erasure_count, EaedDecoder, EaedOutcome, Trit};
use crate::error::{Error, Result};
use crate::product::{BitMatrix, Line, TernaryFrame};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderVariant {
    Ibdd,
    IterEaed,
    Drsd,
    GenieEaed,
}

impl DecoderVariant {
    pub fn name(self) -> &'static str {
        match self {
            DecoderVariant::Ibdd => "ibdd",
            DecoderVariant::IterEaed => "iter-eaed",
            DecoderVariant::Drsd => "drsd",
            DecoderVariant::GenieEaed => "genie-eaed",
        }
    }
}

impl std::str::FromStr for DecoderVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ibdd" => Ok(DecoderVariant::Ibdd),
            "iter-eaed" | "eaed" => Ok(DecoderVariant::IterEaed),
            "drsd" => Ok(DecoderVariant::Drsd),
            "genie-eaed" | "genie" | "ideal-eaed" => Ok(DecoderVariant::GenieEaed),
            other => Err(Error::ConfigMismatch(format!("unknown decoder variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for DecoderVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig<F> {
    pub variant: DecoderVariant,
    pub total_iterations: usize,
    /// Leading iterations that use the score register (DRSD only).
    pub drsd_iterations: usize,
    pub initial_anchor_threshold: u8,
    /// Erasure threshold `T`; iBDD always quantizes with `T = 0`.
    pub erasure_threshold: F,
}

impl<F: Real> DecoderConfig<F> {
    pub fn ibdd(iterations: usize) -> Self {
        Self {
            variant: DecoderVariant::Ibdd,
            total_iterations: iterations,
            drsd_iterations: 0,
            initial_anchor_threshold: 0,
            erasure_threshold: F::zero(),
        }
    }

    pub fn iter_eaed(iterations: usize, erasure_threshold: F) -> Self {
        Self {
            variant: DecoderVariant::IterEaed,
            erasure_threshold,
            ..Self::ibdd(iterations)
        }
    }

    pub fn genie_eaed(iterations: usize, erasure_threshold: F) -> Self {
        Self {
            variant: DecoderVariant::GenieEaed,
            erasure_threshold,
            ..Self::ibdd(iterations)
        }
    }

    pub fn drsd(total_iterations: usize, drsd_iterations: usize, initial_anchor_threshold: u8, erasure_threshold: F) -> Self {
        Self {
            variant: DecoderVariant::Drsd,
            total_iterations,
            drsd_iterations,
            initial_anchor_threshold,
            erasure_threshold,
        }
    }

    /// The standard split: the last fifth of the iterations are plain EaED
    /// (10 = 8 + 2, 20 = 16 + 4).
    pub fn drsd_preset(total_iterations: usize, initial_anchor_threshold: u8, erasure_threshold: F) -> Self {
        let trailing = total_iterations / 5;
        Self::drsd(
            total_iterations,
            total_iterations - trailing,
            initial_anchor_threshold,
            erasure_threshold,
        )
    }

    /// A configuration of `variant` with the usual defaults for `code`.
    pub fn for_variant(variant: DecoderVariant, total_iterations: usize, code: &ComponentCode, erasure_threshold: F) -> Self {
        match variant {
            DecoderVariant::Ibdd => Self::ibdd(total_iterations),
            DecoderVariant::IterEaed => Self::iter_eaed(total_iterations, erasure_threshold),
            DecoderVariant::GenieEaed => Self::genie_eaed(total_iterations, erasure_threshold),
            DecoderVariant::Drsd => Self::drsd_preset(
                total_iterations,
                default_anchor_threshold(code.n(), code.t()),
                erasure_threshold,
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.drsd_iterations > self.total_iterations {
            return Err(Error::ConfigMismatch(format!(
                "{} scored iterations exceed {} total",
                self.drsd_iterations, self.total_iterations
            )));
        }
        if self.variant != DecoderVariant::Drsd && self.drsd_iterations != 0 {
            return Err(Error::ConfigMismatch(format!(
                "scored iterations only apply to drsd, not {}",
                self.variant
            )));
        }
        if !(self.erasure_threshold >= F::zero()) {
            return Err(Error::ConfigMismatch("erasure threshold must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Per-iteration tally of component-word outcomes; sums to `2n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationStats {
    /// Decisions written into the frame.
    pub accepted: usize,
    /// DRSD decisions discarded for flipping an anchor.
    pub rejected: usize,
    /// Decoding failures, including words with too many erasures and
    /// decisions discarded by the genie.
    pub failed: usize,
    /// Words that were already codewords.
    pub clean: usize,
}

impl IterationStats {
    pub fn total(&self) -> usize {
        self.accepted + self.rejected + self.failed + self.clean
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeReport {
    /// Final frame; residual erasures count as errors downstream.
    pub frame: TernaryFrame,
    pub iterations_used: usize,
    /// How many of `iterations_used` were scored DRSD iterations.
    pub scored_iterations_used: usize,
    pub stats: Vec<IterationStats>,
    /// The last iteration found every row and column already a codeword.
    pub converged: bool,
}

impl DecodeReport {
    pub fn hard_frame(&self) -> BitMatrix {
        self.frame.hard_decision()
    }
}

/// Iterative bounded-distance decoding of a hard-decision frame.
pub fn decode_ibdd(frame: &BitMatrix, code: &ComponentCode, iterations: usize) -> Result<DecodeReport> {
    check_size(frame.size(), code)?;
    let mut engine = Engine::new(code, TernaryFrame::from_bits(frame));
    // no erasures, so the stream is never drawn from
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    engine.run_plain(iterations, &mut Vetting::Accept, &mut rng);
    Ok(engine.finish())
}

/// Iterative error-and-erasure decoding of a ternary frame.
pub fn decode_iter_eaed<R: Rng + ?Sized>(frame: &TernaryFrame, code: &ComponentCode, iterations: usize, rng: &mut R) -> Result<DecodeReport> {
    check_size(frame.size(), code)?;
    let mut engine = Engine::new(code, frame.clone());
    engine.run_plain(iterations, &mut Vetting::Accept, rng);
    Ok(engine.finish())
}

/// Iterative EaED where decisions that disagree with `truth` are discarded.
pub fn decode_genie_eaed<R: Rng + ?Sized>(
    frame: &TernaryFrame,
    truth: &BitMatrix,
    code: &ComponentCode,
    iterations: usize,
    rng: &mut R,
) -> Result<DecodeReport> {
    check_size(frame.size(), code)?;
    check_size(truth.size(), code)?;
    let mut engine = Engine::new(code, frame.clone());
    engine.run_plain(iterations, &mut Vetting::Genie(truth), rng);
    Ok(engine.finish())
}

/// Dynamic reliability score decoding of a soft frame.
pub fn decode_drsd<F: Real, R: Rng + ?Sized>(
    soft: &SoftFrame<F>,
    code: &ComponentCode,
    cfg: &DecoderConfig<F>,
    rng: &mut R,
) -> Result<DecodeReport> {
    if cfg.variant != DecoderVariant::Drsd {
        return Err(Error::ConfigMismatch(format!("decode_drsd called with {}", cfg.variant)));
    }
    cfg.validate()?;
    check_size(soft.size(), code)?;
    let mut register = DrsRegister::new(init_drs(soft), cfg.initial_anchor_threshold);
    let mut engine = Engine::new(code, quantize(soft, cfg.erasure_threshold));
    let mut settled = false;
    for it in 1..=cfg.drsd_iterations {
        let stats = engine.iteration(&mut Vetting::Scored(&mut register), rng);
        engine.scored_iterations += 1;
        if stats.clean == 2 * code.n() {
            settled = true;
            break;
        }
        register.bump_threshold(it);
    }
    if !settled {
        engine.run_plain(cfg.total_iterations - cfg.drsd_iterations, &mut Vetting::Accept, rng);
    }
    Ok(engine.finish())
}

fn check_size(size: usize, code: &ComponentCode) -> Result<()> {
    if size != code.n() {
        return Err(Error::DimensionMismatch {
            expected_rows: code.n(),
            expected_cols: code.n(),
            rows: size,
            cols: size,
        });
    }
    Ok(())
}

enum Vetting<'a> {
    Accept,
    Genie(&'a BitMatrix),
    Scored(&'a mut DrsRegister),
}

/// What is known about a line whose contents have not changed since it was
/// last decoded. Only states whose outcome is deterministic are cached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LineState {
    Unknown,
    /// Erasure-free codeword.
    Clean,
    /// Erasure-free and the last decision was a no-op (failure, or discarded
    /// by the genie).
    Stuck,
}

struct Engine<'c> {
    code: &'c ComponentCode,
    frame: TernaryFrame,
    n: usize,
    y: Vec<Trit>,
    truth_line: Vec<u8>,
    flips: Vec<usize>,
    decoder: EaedDecoder,
    // rows at 0..n, columns at n..2n
    state: Vec<LineState>,
    stats: Vec<IterationStats>,
    scored_iterations: usize,
}

impl<'c> Engine<'c> {
    fn new(code: &'c ComponentCode, frame: TernaryFrame) -> Self {
        let n = code.n();
        Self {
            code,
            frame,
            n,
            y: vec![Trit::Zero; n],
            truth_line: vec![0; n],
            flips: Vec::with_capacity(n),
            decoder: EaedDecoder::new(n),
            state: vec![LineState::Unknown; 2 * n],
            stats: Vec::new(),
            scored_iterations: 0,
        }
    }

    fn finish(self) -> DecodeReport {
        let converged = self
            .stats
            .last()
            .is_some_and(|s| s.clean == 2 * self.n);
        DecodeReport {
            frame: self.frame,
            iterations_used: self.stats.len(),
            scored_iterations_used: self.scored_iterations,
            stats: self.stats,
            converged,
        }
    }

    /// Unscored iterations, stopping once an iteration changes nothing on a
    /// frame without erasures (every later iteration would repeat it).
    fn run_plain<R: Rng + ?Sized>(&mut self, iterations: usize, vetting: &mut Vetting<'_>, rng: &mut R) {
        for _ in 0..iterations {
            let stats = self.iteration(vetting, rng);
            if stats.accepted == 0 && self.frame.erasure_count() == 0 {
                break;
            }
        }
    }

    fn iteration<R: Rng + ?Sized>(&mut self, vetting: &mut Vetting<'_>, rng: &mut R) -> IterationStats {
        let mut stats = IterationStats::default();
        for i in 0..self.n {
            self.decode_line(Line::Row(i), vetting, rng, &mut stats);
        }
        for j in 0..self.n {
            self.decode_line(Line::Col(j), vetting, rng, &mut stats);
        }
        debug_assert_eq!(stats.total(), 2 * self.n);
        self.stats.push(stats);
        stats
    }

    fn line_id(&self, line: Line) -> usize {
        match line {
            Line::Row(i) => i,
            Line::Col(j) => self.n + j,
        }
    }

    fn decode_line<R: Rng + ?Sized>(&mut self, line: Line, vetting: &mut Vetting<'_>, rng: &mut R, stats: &mut IterationStats) {
        let n = self.n;
        let id = self.line_id(line);
        match self.state[id] {
            LineState::Clean => {
                stats.clean += 1;
                if let Vetting::Scored(reg) = vetting {
                    (0..n).for_each(|idx| reg.increment(line.position(n, idx)));
                }
                return;
            }
            LineState::Stuck => {
                stats.failed += 1;
                return;
            }
            LineState::Unknown => {}
        }

        self.frame.read_line(line, &mut self.y);
        let erasures = erasure_count(&self.y);
        match self.decoder.decode(self.code, &self.y, rng) {
            EaedOutcome::NoDecode | EaedOutcome::BothFailed => {
                stats.failed += 1;
                if erasures == 0 {
                    self.state[id] = LineState::Stuck;
                }
                return;
            }
            EaedOutcome::Decoded => {}
        }
        let candidate = self.decoder.candidate();
        self.flips.clear();
        for (idx, (&s, &c)) in self.y.iter().zip(candidate).enumerate() {
            if s.bit().is_some_and(|b| b != c) {
                self.flips.push(idx);
            }
        }
        if erasures == 0 && self.flips.is_empty() {
            stats.clean += 1;
            self.state[id] = LineState::Clean;
            if let Vetting::Scored(reg) = vetting {
                (0..n).for_each(|idx| reg.increment(line.position(n, idx)));
            }
            return;
        }
        match vetting {
            Vetting::Accept => {}
            Vetting::Genie(truth) => {
                truth.read_line(line, &mut self.truth_line);
                if self.truth_line.as_slice() != candidate {
                    stats.failed += 1;
                    if erasures == 0 {
                        self.state[id] = LineState::Stuck;
                    }
                    return;
                }
            }
            Vetting::Scored(reg) => {
                let mut conflict = false;
                for &idx in &self.flips {
                    let pos = line.position(n, idx);
                    if reg.is_anchor(pos) {
                        reg.decrement(pos);
                        conflict = true;
                    }
                }
                if conflict {
                    stats.rejected += 1;
                    return;
                }
                for &idx in &self.flips {
                    let pos = line.position(n, idx);
                    debug_assert!(!reg.is_anchor(pos), "accepted decision flips an anchor");
                    reg.decrement(pos);
                }
            }
        }
        stats.accepted += 1;
        self.write_candidate(line);
    }

    fn write_candidate(&mut self, line: Line) {
        let n = self.n;
        let candidate = self.decoder.candidate();
        let data = self.frame.as_mut_slice();
        for (idx, (&old, &c)) in self.y.iter().zip(candidate).enumerate() {
            let new = Trit::from_bit(c);
            if old != new {
                data[line.position(n, idx)] = new;
                // the crossing line at this position changed too
                let crossing = match line {
                    Line::Row(_) => n + idx,
                    Line::Col(_) => idx,
                };
                self.state[crossing] = LineState::Unknown;
            }
        }
        // the decoded line is now an erasure-free codeword
        let id = self.line_id(line);
        self.state[id] = LineState::Clean;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::transmit_with_std;
    use crate::product::ProductCode;

    fn pc127() -> ProductCode {
        ProductCode::new(ComponentCode::bch(7, 2, true).unwrap())
    }

    fn random_frame(pc: &ProductCode, rng: &mut impl Rng) -> BitMatrix {
        let msg: Vec<u8> = (0..pc.payload_bits()).map(|_| rng.random_range(0..2)).collect();
        pc.encode_flat(&msg).unwrap()
    }

    fn errors(a: &BitMatrix, b: &BitMatrix) -> usize {
        a.as_slice().iter().zip(b.as_slice()).filter(|(x, y)| x != y).count()
    }

    #[test]
    fn ibdd_error_free_converges_immediately() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let frame = random_frame(&pc, &mut rng);
        let report = decode_ibdd(&frame, pc.component(), 10).unwrap();
        assert_eq!(report.iterations_used, 1);
        assert!(report.converged);
        assert_eq!(report.stats[0].clean, 254);
        assert_eq!(report.hard_frame(), frame);
    }

    #[test]
    fn ibdd_single_error_fixed_in_row_pass() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let frame = random_frame(&pc, &mut rng);
        let mut noisy = frame.clone();
        noisy.set(40, 77, noisy.get(40, 77) ^ 1);
        let report = decode_ibdd(&noisy, pc.component(), 10).unwrap();
        assert_eq!(report.stats[0].accepted, 1);
        assert_eq!(report.hard_frame(), frame);
        assert!(report.converged);
    }

    #[test]
    fn ibdd_stall_pattern_survives() {
        // (t+1) x (t+1) grid of errors: every affected row and column sees
        // t+1 errors. Pick positions so no component decoder miscorrects.
        let pc = ProductCode::new(ComponentCode::bch(7, 2, false).unwrap());
        let code = pc.component();
        let frame = BitMatrix::filled(127, 0);
        let zero = vec![0u8; 127];
        let mut found = None;
        'outer: for a in 0..127 {
            for b in a + 1..127 {
                for c in b + 1..127 {
                    let mut w = zero.clone();
                    w[a] = 1;
                    w[b] = 1;
                    w[c] = 1;
                    if !code.bdd(&w).is_success() {
                        found = Some([a, b, c]);
                        break 'outer;
                    }
                }
            }
        }
        let idx = found.expect("weight-3 word outside every decoding sphere");
        let mut noisy = frame.clone();
        for &r in &idx {
            for &c in &idx {
                noisy.set(r, c, 1);
            }
        }
        let report = decode_ibdd(&noisy, code, 20).unwrap();
        assert_eq!(report.hard_frame(), noisy);
        assert_eq!(errors(&report.hard_frame(), &frame), 9);
        assert!(!report.converged);
        assert_eq!(report.stats.last().unwrap().failed, 6);
    }

    #[test]
    fn eaed_resolves_pure_erasures_in_one_row_pass() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let frame = random_frame(&pc, &mut rng);
        let mut ternary = TernaryFrame::from_bits(&frame);
        for i in 0..127 {
            for j in 0..5 {
                ternary.set(i, (i + 7 * j) % 127, Trit::Erased);
            }
        }
        let report = decode_iter_eaed(&ternary, pc.component(), 4, &mut rng).unwrap();
        assert_eq!(report.stats[0].accepted, 127);
        assert_eq!(report.frame, TernaryFrame::from_bits(&frame));
    }

    #[test]
    fn eaed_with_hard_input_matches_ibdd() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sigma = crate::channel::noise_variance(4.5f64, pc.rate()).sqrt();
        for _ in 0..5 {
            let frame = random_frame(&pc, &mut rng);
            let soft = transmit_with_std(&frame, sigma, &mut rng);
            let hard = quantize(&soft, 0.0);
            let a = decode_ibdd(&hard.hard_decision(), pc.component(), 10).unwrap();
            let b = decode_iter_eaed(&hard, pc.component(), 10, &mut rng).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let pc = pc127();
        let mut src = ChaCha8Rng::seed_from_u64(5);
        let frame = random_frame(&pc, &mut src);
        let sigma = crate::channel::noise_variance(4.0f64, pc.rate()).sqrt();
        let soft = transmit_with_std(&frame, sigma, &mut src);
        let q = quantize(&soft, 0.25);
        let cfg = DecoderConfig::drsd_preset(10, 9, 0.25);
        for _ in 0..2 {
            let a = decode_iter_eaed(&q, pc.component(), 10, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
            let b = decode_iter_eaed(&q, pc.component(), 10, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
            assert_eq!(a, b);
            let c = decode_drsd(&soft, pc.component(), &cfg, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
            let d = decode_drsd(&soft, pc.component(), &cfg, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
            assert_eq!(c, d);
        }
    }

    #[test]
    fn stats_sum_to_two_n() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let frame = random_frame(&pc, &mut rng);
        let sigma = crate::channel::noise_variance(3.8f64, pc.rate()).sqrt();
        let soft = transmit_with_std(&frame, sigma, &mut rng);
        let cfg = DecoderConfig::drsd_preset(20, 9, 0.3);
        let report = decode_drsd(&soft, pc.component(), &cfg, &mut rng).unwrap();
        assert!(report.stats.iter().all(|s| s.total() == 254));
        assert!(report.scored_iterations_used <= 16);
    }

    #[test]
    fn drsd_on_clean_frame_only_raises_scores() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let frame = random_frame(&pc, &mut rng);
        let soft = transmit_with_std(&frame, 0.0f64, &mut rng);
        let cfg = DecoderConfig::drsd_preset(10, 9, 0.3);
        let report = decode_drsd(&soft, pc.component(), &cfg, &mut rng).unwrap();
        assert_eq!(report.iterations_used, 1);
        assert_eq!(report.stats[0].clean, 254);
        assert_eq!(report.hard_frame(), frame);
    }

    #[test]
    fn drsd_rejects_flip_of_anchor() {
        // The last row carries 3 errors placed so that BDD miscorrects by
        // flipping two more bits. Errors are weak, everything else has equal
        // magnitude, so by position order the last row holds the top scores
        // and the miscorrection targets are anchors.
        let code = ComponentCode::bch(7, 2, false).unwrap();
        let n = 127;
        let zero = vec![0u8; n];
        let mut picked = None;
        'outer: for b in 1..n {
            for c in b + 1..n {
                let mut w = zero.clone();
                w[0] = 1;
                w[b] = 1;
                w[c] = 1;
                if let crate::component::BddResult::Success { flips, .. } = code.bdd(&w) {
                    if flips.len() == 2 && flips.iter().all(|f| ![0, b, c].contains(f)) {
                        picked = Some(([0, b, c], flips));
                        break 'outer;
                    }
                }
            }
        }
        let (errs, flips) = picked.expect("a weight-3 miscorrection with 2 flips");
        let last = (n - 1) * n;
        let mut values = vec![1.0f64; n * n];
        for &e in &errs {
            values[last + e] = -0.1;
        }
        let soft = SoftFrame::from_vec(n, values).unwrap();
        let scores = init_drs(&soft);
        assert!(flips.iter().all(|&f| scores.as_slice()[last + f] == 24));
        assert!(errs.iter().all(|&e| scores.as_slice()[last + e] == 9));

        let cfg = DecoderConfig::drsd(1, 1, 9, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let report = decode_drsd(&soft, &code, &cfg, &mut rng).unwrap();
        assert_eq!(report.stats[0].rejected, 1);
        // the columns each hold a single error and clear them
        assert_eq!(report.stats[0].accepted, 3);
        assert_eq!(report.hard_frame(), BitMatrix::filled(n, 0));
        assert_eq!(report.frame.erasure_count(), 0);

        // plain EaED accepts the miscorrection, leaving five single-error
        // columns to repair
        let q = quantize(&soft, 0.0);
        let plain = decode_iter_eaed(&q, &code, 1, &mut rng).unwrap();
        assert_eq!(plain.stats[0].rejected, 0);
        assert_eq!(plain.stats[0].accepted, 6);
    }

    #[test]
    fn drsd_config_checks() {
        let pc = pc127();
        let soft = SoftFrame::filled(127, 1.0f64);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bad = DecoderConfig::iter_eaed(10, 0.2);
        assert!(matches!(
            decode_drsd(&soft, pc.component(), &bad, &mut rng),
            Err(Error::ConfigMismatch(_))
        ));
        let too_many = DecoderConfig::drsd(4, 5, 9, 0.2);
        assert!(decode_drsd(&soft, pc.component(), &too_many, &mut rng).is_err());
        assert_eq!(DecoderConfig::drsd_preset(10, 9, 0.2).drsd_iterations, 8);
        assert_eq!(DecoderConfig::drsd_preset(20, 9, 0.2).drsd_iterations, 16);
    }

    #[test]
    fn genie_accepts_only_true_lines() {
        let pc = pc127();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sigma = crate::channel::noise_variance(3.6f64, pc.rate()).sqrt();
        for _ in 0..3 {
            let frame = random_frame(&pc, &mut rng);
            let soft = transmit_with_std(&frame, sigma, &mut rng);
            let q = quantize(&soft, 0.3);
            let report = decode_genie_eaed(&q, &frame, pc.component(), 16, &mut rng).unwrap();
            // every written bit agrees with the truth
            for (got, (&rx, &tx)) in report
                .frame
                .as_slice()
                .iter()
                .zip(q.as_slice().iter().zip(frame.as_slice()))
            {
                if got != &rx {
                    assert_eq!(got.bit(), Some(tx));
                }
            }
        }
        let frame = random_frame(&pc, &mut rng);
        let clean = TernaryFrame::from_bits(&frame);
        let g = decode_genie_eaed(&clean, &frame, pc.component(), 16, &mut rng).unwrap();
        let p = decode_iter_eaed(&clean, pc.component(), 16, &mut rng).unwrap();
        assert_eq!(g, p);
    }
}
