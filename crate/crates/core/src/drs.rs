//! Dynamic reliability scores.
//!
//! Every bit of the frame carries a 5-bit score. Bits scoring above the
//! anchor threshold are anchors: a component decision that would flip one is
//! treated as a miscorrection. Scores move by one per decoding event and
//! saturate at the ends of the 5-bit range.

use crate::product::Matrix;

pub const MAX_SCORE: u8 = 31;
/// Number of equal-size groups the initial magnitudes are split into.
pub const INIT_GROUPS: usize = 16;
/// Score of the least reliable initial group; the most reliable gets
/// `INIT_MIN_SCORE + INIT_GROUPS - 1`.
pub const INIT_MIN_SCORE: u8 = 9;
/// The anchor threshold grows by one after this many scored iterations.
pub const THRESHOLD_BUMP_PERIOD: usize = 5;

/// Default initial anchor threshold for a component code of length `n`
/// correcting `t` errors.
pub fn default_anchor_threshold(n: usize, t: usize) -> u8 {
    match (n, t) {
        (127, 4) => 14,
        (_, 0..=2) => 9,
        (_, 3) => 10,
        _ => 12,
    }
}

/// A decoding event reported back to the register. Positions are flat
/// row-major frame indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DrsEvent {
    /// The decision would have flipped these anchors and was discarded.
    Rejected(Vec<usize>),
    /// The decision was accepted and flipped these bits.
    Accepted(Vec<usize>),
    /// The word was already a codeword; all of its positions.
    AlreadyCodeword(Vec<usize>),
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrsRegister {
    scores: Matrix<u8>,
    anchor_threshold: u8,
}

impl DrsRegister {
    pub fn new(scores: Matrix<u8>, anchor_threshold: u8) -> Self {
        let mut scores = scores;
        for s in scores.as_mut_slice() {
            *s = (*s).min(MAX_SCORE);
        }
        Self {
            scores,
            anchor_threshold,
        }
    }

    pub fn scores(&self) -> &Matrix<u8> {
        &self.scores
    }

    pub fn score(&self, pos: usize) -> u8 {
        self.scores.as_slice()[pos]
    }

    pub fn anchor_threshold(&self) -> u8 {
        self.anchor_threshold
    }

    #[inline]
    pub fn is_anchor(&self, pos: usize) -> bool {
        self.scores.as_slice()[pos] > self.anchor_threshold
    }

    #[inline]
    pub fn increment(&mut self, pos: usize) {
        let s = &mut self.scores.as_mut_slice()[pos];
        *s = (*s + 1).min(MAX_SCORE);
    }

    #[inline]
    pub fn decrement(&mut self, pos: usize) {
        let s = &mut self.scores.as_mut_slice()[pos];
        *s = s.saturating_sub(1);
    }

    pub fn apply(&mut self, event: &DrsEvent) {
        match event {
            DrsEvent::Rejected(positions) | DrsEvent::Accepted(positions) => {
                positions.iter().for_each(|&p| self.decrement(p));
            }
            DrsEvent::AlreadyCodeword(positions) => {
                positions.iter().for_each(|&p| self.increment(p));
            }
            DrsEvent::Failure => {}
        }
    }

    /// Called after the `completed`-th scored iteration (1-based); raises the
    /// anchor threshold every fifth one.
    pub fn bump_threshold(&mut self, completed: usize) {
        if completed > 0 && completed.is_multiple_of(THRESHOLD_BUMP_PERIOD) {
            self.anchor_threshold = self.anchor_threshold.saturating_add(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reg(scores: Vec<u8>, t_a: u8) -> DrsRegister {
        let n = (scores.len() as f64).sqrt() as usize;
        DrsRegister::new(Matrix::from_vec(n, scores).unwrap(), t_a)
    }

    #[test]
    fn anchor_predicate_is_strict() {
        let mut r = reg(vec![25, 9, 10, 0], 9);
        assert!(r.is_anchor(0));
        assert!(!r.is_anchor(1));
        assert!(r.is_anchor(2));
        r.bump_threshold(5);
        assert_eq!(r.anchor_threshold(), 10);
        assert!(!r.is_anchor(2));
    }

    #[test]
    fn feedback_arms() {
        let mut r = reg(vec![12, 25, 31, 0], 9);
        r.apply(&DrsEvent::Rejected(vec![0, 1]));
        assert_eq!((r.score(0), r.score(1)), (11, 24));
        r.apply(&DrsEvent::AlreadyCodeword(vec![2]));
        assert_eq!(r.score(2), 31);
        r.apply(&DrsEvent::Accepted(vec![3]));
        assert_eq!(r.score(3), 0);
        let before = r.clone();
        r.apply(&DrsEvent::Failure);
        assert_eq!(r, before);
    }

    #[test]
    fn threshold_schedule() {
        let mut r = reg(vec![0], 9);
        for it in 1..=4 {
            r.bump_threshold(it);
            assert_eq!(r.anchor_threshold(), 9);
        }
        r.bump_threshold(5);
        assert_eq!(r.anchor_threshold(), 10);
        for it in 6..=10 {
            r.bump_threshold(it);
        }
        assert_eq!(r.anchor_threshold(), 11);
    }

    #[test]
    fn default_thresholds() {
        assert_eq!(default_anchor_threshold(127, 2), 9);
        assert_eq!(default_anchor_threshold(255, 3), 10);
        assert_eq!(default_anchor_threshold(511, 4), 12);
        assert_eq!(default_anchor_threshold(127, 4), 14);
    }

    #[test]
    fn new_clamps_scores() {
        let r = reg(vec![40, 3, 31, 32], 9);
        assert_eq!(r.score(0), 31);
        assert_eq!(r.score(3), 31);
    }

    #[test]
    fn random_events_stay_in_range_with_unit_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 8;
        let init: Vec<u8> = (0..n * n).map(|_| rng.random_range(0..=MAX_SCORE)).collect();
        let mut r = reg(init, 9);
        for _ in 0..100_000 {
            let count = rng.random_range(0..n);
            let positions: Vec<usize> = (0..count).map(|_| rng.random_range(0..n * n)).collect();
            let event = match rng.random_range(0..4) {
                0 => DrsEvent::Rejected(positions),
                1 => DrsEvent::Accepted(positions),
                2 => DrsEvent::AlreadyCodeword(positions),
                _ => DrsEvent::Failure,
            };
            let before = r.clone();
            r.apply(&event);
            for p in 0..n * n {
                let (a, b) = (before.score(p) as i32, r.score(p) as i32);
                assert!(b <= MAX_SCORE as i32);
                if matches!(event, DrsEvent::Failure) {
                    assert_eq!(a, b);
                }
                let hits = match &event {
                    DrsEvent::Rejected(ps) | DrsEvent::Accepted(ps) | DrsEvent::AlreadyCodeword(ps) => {
                        ps.iter().filter(|&&q| q == p).count() as i32
                    }
                    DrsEvent::Failure => 0,
                };
                assert!((a - b).abs() <= hits);
            }
        }
    }
}
