//! Bundled per-code defaults.
//!
//! Erasure thresholds come from an offline sweep (`prodcode sweep-T`) of the
//! DRSD noise threshold at BER 1e-4 with 20 iterations (16 scored + 4 plain)
//! and the default initial anchor threshold. The minimizing `T` of that sweep
//! is stored here.

pub use crate::drs::default_anchor_threshold;

/// One swept code: field degree `nu` (`n = 2^nu - 1`), `t`, even-weight flag
/// and the best erasure threshold found.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdEntry {
    pub nu: u32,
    pub t: usize,
    pub even_weight: bool,
    pub erasure_threshold: f64,
}

const fn entry(nu: u32, t: usize, even_weight: bool, erasure_threshold: f64) -> ThresholdEntry {
    ThresholdEntry {
        nu,
        t,
        even_weight,
        erasure_threshold,
    }
}

pub const ERASURE_THRESHOLDS: &[ThresholdEntry] = &[
    entry(7, 2, false, 0.11),
    entry(7, 2, true, 0.13),
    entry(7, 3, true, 0.14),
];

/// Tuned erasure threshold for a code, if it was part of the sweep.
pub fn default_erasure_threshold(nu: u32, t: usize, even_weight: bool) -> Option<f64> {
    ERASURE_THRESHOLDS
        .iter()
        .find(|e| e.nu == nu && e.t == t && e.even_weight == even_weight)
        .map(|e| e.erasure_threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_unique_and_plausible() {
        for (i, a) in ERASURE_THRESHOLDS.iter().enumerate() {
            assert!(a.erasure_threshold > 0.0 && a.erasure_threshold < 1.0);
            for b in &ERASURE_THRESHOLDS[i + 1..] {
                assert!((a.nu, a.t, a.even_weight) != (b.nu, b.t, b.even_weight));
            }
        }
        assert!(default_erasure_threshold(7, 2, true).is_some());
        assert!(default_erasure_threshold(4, 2, true).is_none());
    }
}
