//! BI-AWGN transmission, ternary quantization and reliability-score
//! initialization from soft channel values.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::drs::{INIT_GROUPS, INIT_MIN_SCORE};
use crate::eaed::Trit;
use crate::product::{BitMatrix, Matrix, TernaryFrame};
use crate::scalar::Real;

/// Real-valued channel outputs for one frame.
pub type SoftFrame<F> = Matrix<F>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig<F> {
    pub ebn0_db: F,
    /// Code rate `r` used to convert Eb/N0 into a noise variance.
    pub rate: F,
    /// Outputs with `|y| <= erasure_threshold` are erased.
    pub erasure_threshold: F,
    pub seed: u64,
}

impl<F: Real> ChannelConfig<F> {
    /// `sigma^2 = (2 r Eb/N0)^-1` with Eb/N0 in linear units.
    pub fn noise_variance(&self) -> F {
        noise_variance(self.ebn0_db, self.rate)
    }

    pub fn noise_std(&self) -> F {
        self.noise_variance().sqrt()
    }
}

pub fn noise_variance<F: Real>(ebn0_db: F, rate: F) -> F {
    let ebn0 = F::of(10.0).powf(ebn0_db / F::of(10.0));
    (F::of(2.0) * rate * ebn0).recip()
}

/// BPSK over AWGN: bit 0 maps to +1, bit 1 to -1, plus `N(0, sigma^2)`.
pub fn transmit<F: Real, R: Rng + ?Sized>(frame: &BitMatrix, cfg: &ChannelConfig<F>, rng: &mut R) -> SoftFrame<F> {
    transmit_with_std(frame, cfg.noise_std(), rng)
}

pub fn transmit_with_std<F: Real, R: Rng + ?Sized>(frame: &BitMatrix, sigma: F, rng: &mut R) -> SoftFrame<F> {
    frame.map(|b| {
        let z: f64 = rng.sample(StandardNormal);
        let x = if b & 1 == 0 { F::one() } else { -F::one() };
        x + sigma * F::of(z)
    })
}

/// Ternary quantization: `|y| <= threshold` is erased, otherwise the usual
/// hard decision (positive to 0, negative to 1).
pub fn quantize<F: Real>(soft: &SoftFrame<F>, threshold: F) -> TernaryFrame {
    soft.map(|y| quantize_value(y, threshold))
}

#[inline]
pub fn quantize_value<F: Real>(y: F, threshold: F) -> Trit {
    if y > threshold {
        Trit::Zero
    } else if y < -threshold {
        Trit::One
    } else {
        Trit::Erased
    }
}

/// Initial reliability scores: rank all `|y|` ascending (ties by position),
/// split the ranking into 16 groups of `ceil(n^2 / 16)` (the last group may
/// be smaller) and give group `g` the score `9 + g`.
pub fn init_drs<F: Real>(soft: &SoftFrame<F>) -> Matrix<u8> {
    let values = soft.as_slice();
    let total = values.len();
    // nonnegative IEEE doubles order like their bit patterns
    let mut keyed: Vec<(u64, u32)> = values
        .iter()
        .enumerate()
        .map(|(i, y)| (y.abs().as_f64().to_bits(), i as u32))
        .collect();
    keyed.sort_unstable();
    let group = total.div_ceil(INIT_GROUPS).max(1);
    let mut scores = vec![0u8; total];
    for (rank, &(_, idx)) in keyed.iter().enumerate() {
        scores[idx as usize] = INIT_MIN_SCORE + (rank / group) as u8;
    }
    Matrix::from_vec(soft.size(), scores).expect("square input")
}
