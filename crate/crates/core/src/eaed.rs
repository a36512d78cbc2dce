//! Error-and-erasure decoding of a single component word.
//!
//! The erased positions are filled with a random vector and, separately,
//! with its complement. Both filled words go through bounded-distance
//! decoding and the two candidates are arbitrated by validity, then by their
//! Hamming distance to the received word on the unerased positions, with a
//! random tie-break.

use rand::Rng;

use crate::component::ComponentCode;
use crate::error::{Error, Result};

/// A ternary channel symbol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Trit {
    #[default]
    Zero = 0,
    One = 1,
    Erased = 2,
}

impl Trit {
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 1 {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    /// The bit value, `None` for an erasure.
    pub fn bit(self) -> Option<u8> {
        match self {
            Trit::Zero => Some(0),
            Trit::One => Some(1),
            Trit::Erased => None,
        }
    }

    pub fn is_erased(self) -> bool {
        self == Trit::Erased
    }
}

/// A word over `{0, ?, 1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TernaryWord(pub Vec<Trit>);

impl TernaryWord {
    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| Trit::from_bit(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn erasure_count(&self) -> usize {
        erasure_count(&self.0)
    }

    /// Bit values, or `None` if any position is erased.
    pub fn to_bits(&self) -> Option<Vec<u8>> {
        self.0.iter().map(|t| t.bit()).collect()
    }

    pub fn as_slice(&self) -> &[Trit] {
        &self.0
    }
}

impl From<Vec<Trit>> for TernaryWord {
    fn from(v: Vec<Trit>) -> Self {
        Self(v)
    }
}

pub fn erasure_count(y: &[Trit]) -> usize {
    y.iter().filter(|t| t.is_erased()).count()
}

/// What the decoder concluded about a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EaedOutcome {
    /// A codeword was selected.
    Decoded,
    /// Too many erasures (`E(y) >= d_des`); decoding was not attempted.
    NoDecode,
    /// Every bounded-distance decoding attempt failed.
    BothFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EaedResult {
    /// The selected codeword on `Decoded`, otherwise the input word.
    pub word: TernaryWord,
    pub changed: bool,
    pub outcome: EaedOutcome,
}

/// Fills the erasures of `y` with a uniform random vector (first word) and
/// its complement (second word).
pub fn fill_erasures<R: Rng + ?Sized>(y: &[Trit], rng: &mut R) -> Result<(Vec<u8>, Vec<u8>)> {
    let erasures = erasure_count(y);
    if erasures == 0 {
        return Err(Error::NoErasures);
    }
    let mut y1 = vec![0; y.len()];
    let mut y2 = vec![0; y.len()];
    fill_into(y, rng, &mut y1, &mut y2);
    Ok((y1, y2))
}

fn fill_into<R: Rng + ?Sized>(y: &[Trit], rng: &mut R, y1: &mut [u8], y2: &mut [u8]) {
    let mut pool = 0u64;
    let mut left = 0u32;
    for (i, &s) in y.iter().enumerate() {
        match s.bit() {
            Some(b) => {
                y1[i] = b;
                y2[i] = b;
            }
            None => {
                if left == 0 {
                    pool = rng.random();
                    left = 64;
                }
                let b = (pool & 1) as u8;
                pool >>= 1;
                left -= 1;
                y1[i] = b;
                y2[i] = b ^ 1;
            }
        }
    }
}

/// Hamming distance between `y` and `c` over the unerased positions of `y`.
pub fn dh_unerased(y: &[Trit], c: &[u8]) -> Result<usize> {
    if y.len() != c.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            actual: c.len(),
        });
    }
    Ok(y
        .iter()
        .zip(c)
        .filter(|(s, &b)| s.bit().is_some_and(|v| v != b))
        .count())
}

/// Decodes one ternary word.
pub fn eaed_decode<R: Rng + ?Sized>(code: &ComponentCode, y: &[Trit], rng: &mut R) -> EaedResult {
    let mut dec = EaedDecoder::new(code.n());
    let outcome = dec.decode(code, y, rng);
    match outcome {
        EaedOutcome::Decoded => {
            let word = TernaryWord::from_bits(dec.candidate());
            let changed = word.0 != y;
            EaedResult {
                word,
                changed,
                outcome,
            }
        }
        _ => EaedResult {
            word: TernaryWord(y.to_vec()),
            changed: false,
            outcome,
        },
    }
}

/// Reusable scratch state for decoding many words of the same length.
#[derive(Clone, Debug)]
pub struct EaedDecoder {
    y1: Vec<u8>,
    y2: Vec<u8>,
    errs1: Vec<usize>,
    errs2: Vec<usize>,
    chosen_first: bool,
}

impl EaedDecoder {
    pub fn new(n: usize) -> Self {
        Self {
            y1: vec![0; n],
            y2: vec![0; n],
            errs1: Vec::new(),
            errs2: Vec::new(),
            chosen_first: true,
        }
    }

    /// Runs the decoder. After `Decoded`, [`candidate`](Self::candidate)
    /// holds the selected codeword.
    ///
    /// A word without erasures takes a single bounded-distance decoding
    /// pass; both filled words would be identical and so would the result.
    /// Random bits are drawn only when erasures are present or for the
    /// tie-break, always from `rng`.
    pub fn decode<R: Rng + ?Sized>(&mut self, code: &ComponentCode, y: &[Trit], rng: &mut R) -> EaedOutcome {
        assert_eq!(y.len(), code.n(), "word length");
        let erasures = erasure_count(y);
        if erasures >= code.design_distance() {
            return EaedOutcome::NoDecode;
        }
        if erasures == 0 {
            for (dst, s) in self.y1.iter_mut().zip(y) {
                *dst = *s as u8;
            }
            if !code.locate_errors(&self.y1, &mut self.errs1) {
                return EaedOutcome::BothFailed;
            }
            apply(&mut self.y1, &self.errs1);
            self.chosen_first = true;
            return EaedOutcome::Decoded;
        }
        fill_into(y, rng, &mut self.y1, &mut self.y2);
        let ok1 = code.locate_errors(&self.y1, &mut self.errs1);
        let ok2 = code.locate_errors(&self.y2, &mut self.errs2);
        // a corrected position disagrees with y on the unerased part exactly
        // when it is unerased, so d_i counts those positions
        let unerased = |errs: &[usize]| errs.iter().filter(|&&p| !y[p].is_erased()).count();
        self.chosen_first = match (ok1, ok2) {
            (false, false) => return EaedOutcome::BothFailed,
            (true, false) => true,
            (false, true) => false,
            (true, true) => {
                let (d1, d2) = (unerased(&self.errs1), unerased(&self.errs2));
                match d1.cmp(&d2) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => rng.random_bool(0.5),
                }
            }
        };
        if self.chosen_first {
            apply(&mut self.y1, &self.errs1);
        } else {
            apply(&mut self.y2, &self.errs2);
        }
        EaedOutcome::Decoded
    }

    /// The codeword selected by the last successful [`decode`](Self::decode).
    pub fn candidate(&self) -> &[u8] {
        if self.chosen_first {
            &self.y1
        } else {
            &self.y2
        }
    }
}

fn apply(word: &mut [u8], errs: &[usize]) {
    for &p in errs {
        word[p] ^= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::index::sample, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use Trit::{Erased as E, One as I, Zero as O};

    fn bch15(even: bool) -> ComponentCode {
        ComponentCode::bch(4, 2, even).unwrap()
    }

    fn random_codeword(code: &ComponentCode, rng: &mut impl Rng) -> Vec<u8> {
        let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
        code.encode(&msg).unwrap()
    }

    /// Codeword with `errors` flipped and `erasures` erased positions, all
    /// distinct.
    fn corrupt(cw: &[u8], errors: usize, erasures: usize, rng: &mut impl Rng) -> Vec<Trit> {
        let mut y: Vec<Trit> = cw.iter().map(|&b| Trit::from_bit(b)).collect();
        let picks = sample(rng, cw.len(), errors + erasures).into_vec();
        for &p in &picks[..errors] {
            y[p] = Trit::from_bit(cw[p] ^ 1);
        }
        for &p in &picks[errors..] {
            y[p] = Trit::Erased;
        }
        y
    }

    #[test]
    fn fill_is_complementary_on_erasures() {
        struct Fixed(u64);
        impl rand::RngCore for Fixed {
            fn next_u32(&mut self) -> u32 {
                self.0 as u32
            }
            fn next_u64(&mut self) -> u64 {
                self.0
            }
            fn fill_bytes(&mut self, dst: &mut [u8]) {
                rand::rand_core::impls::fill_bytes_via_next(self, dst)
            }
        }
        let (y1, y2) = fill_erasures(&[O, E, I], &mut Fixed(0)).unwrap();
        assert_eq!(y1, vec![0, 0, 1]);
        assert_eq!(y2, vec![0, 1, 1]);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let y = [E, O, E, I, E];
        let (a, b) = fill_erasures(&y, &mut rng).unwrap();
        assert_eq!(a.iter().zip(&b).filter(|(x, y)| x != y).count(), 3);
        let again = fill_erasures(&y, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!((a, b), again);

        assert_eq!(fill_erasures(&[O, I], &mut rng), Err(Error::NoErasures));
    }

    #[test]
    fn dh_unerased_examples() {
        assert_eq!(dh_unerased(&[E, E, E], &[1, 0, 1]).unwrap(), 0);
        assert_eq!(dh_unerased(&[O, I, O], &[0, 1, 0]).unwrap(), 0);
        assert_eq!(dh_unerased(&[O, E, I, O], &[1, 1, 1, 1]).unwrap(), 2);
        assert!(dh_unerased(&[O], &[0, 1]).is_err());
    }

    #[test]
    fn too_many_erasures_is_not_decoded() {
        let code = bch15(false);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cw = random_codeword(&code, &mut rng);
        let y = corrupt(&cw, 0, 5, &mut rng);
        let r = eaed_decode(&code, &y, &mut rng);
        assert_eq!(r.outcome, EaedOutcome::NoDecode);
        assert_eq!(r.word.0, y);
        assert!(!r.changed);
    }

    #[test]
    fn clean_codeword_is_unchanged() {
        let code = bch15(false);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cw = random_codeword(&code, &mut rng);
        let y = TernaryWord::from_bits(&cw);
        let r = eaed_decode(&code, &y.0, &mut rng);
        assert_eq!(r.outcome, EaedOutcome::Decoded);
        assert_eq!(r.word, y);
        assert!(!r.changed);
    }

    #[test]
    fn one_error_two_erasures_always_corrected() {
        let code = bch15(false);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let cw = random_codeword(&code, &mut rng);
            let y = corrupt(&cw, 1, 2, &mut rng);
            let r = eaed_decode(&code, &y, &mut rng);
            assert_eq!(r.outcome, EaedOutcome::Decoded);
            assert_eq!(r.word.to_bits().unwrap(), cw);
        }
    }

    #[test]
    fn outside_sphere_is_sometimes_lucky() {
        let code = bch15(false);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trials = 10_000;
        let mut correct = 0;
        for _ in 0..trials {
            let cw = random_codeword(&code, &mut rng);
            let y = corrupt(&cw, 2, 1, &mut rng);
            let r = eaed_decode(&code, &y, &mut rng);
            if r.outcome == EaedOutcome::Decoded && r.word.to_bits().unwrap() == cw {
                correct += 1;
            }
        }
        assert!(correct > 0 && correct < trials, "correct = {correct}");
    }

    #[test]
    fn no_erasure_shortcut_matches_bdd() {
        let code = bch15(true);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2_000 {
            let cw = random_codeword(&code, &mut rng);
            let e = rng.random_range(0..4);
            let y = corrupt(&cw, e, 0, &mut rng);
            let bits: Vec<u8> = y.iter().map(|t| t.bit().unwrap()).collect();
            let r = eaed_decode(&code, &y, &mut rng);
            match code.bdd(&bits) {
                crate::component::BddResult::Success { codeword, .. } => {
                    assert_eq!(r.outcome, EaedOutcome::Decoded);
                    assert_eq!(r.word.to_bits().unwrap(), codeword);
                }
                crate::component::BddResult::Failure => {
                    assert_eq!(r.outcome, EaedOutcome::BothFailed);
                    assert_eq!(r.word.0, y);
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let code = bch15(false);
        let mut src = ChaCha8Rng::seed_from_u64(12);
        let words: Vec<Vec<Trit>> = (0..500)
            .map(|_| {
                let cw = random_codeword(&code, &mut src);
                let e = src.random_range(0..3);
                let er = src.random_range(0..4);
                corrupt(&cw, e, er, &mut src)
            })
            .collect();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            words
                .iter()
                .map(|y| eaed_decode(&code, y, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(99), run(99));
    }
}
