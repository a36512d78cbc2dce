//! Binary BCH component codes and their even-weight subcodes.
//!
//! Codewords are stored as one byte per bit (0 or 1); bit `i` is the
//! coefficient of `x^i` in the codeword polynomial. Encoding is systematic
//! with the `n - k` parity bits in positions `0..n-k` and the message in
//! positions `n-k..n`.
//!
//! Bounded-distance decoding runs Berlekamp-Massey on the `2t` syndromes and
//! locates errors with a Chien search. For the even-weight subcode the plain
//! BCH decoder runs first and its output is rejected if it has odd weight;
//! this parity acceptance step also catches a share of BCH miscorrections.

use crate::error::{Error, Result};
use crate::galois::{Element, GaloisField, Gf2Poly};

/// Largest correction radius the decoder's fixed-size buffers support.
pub const MAX_T: usize = 8;
const LOCATOR_LEN: usize = 2 * MAX_T + 2;

/// Outcome of bounded-distance decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BddResult {
    /// `codeword` is the unique codeword within distance `t`; `flips` lists
    /// the positions where it differs from the input, ascending.
    Success { codeword: Vec<u8>, flips: Vec<usize> },
    Failure,
}

impl BddResult {
    pub fn is_success(&self) -> bool {
        matches!(self, BddResult::Success { .. })
    }
}

/// Syndromes `S_1..S_2t` of a received word, plus the overall parity when
/// the code is an even-weight subcode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndromes {
    pub values: Vec<Element>,
    pub parity: Option<u8>,
}

impl Syndromes {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&s| s == 0) && self.parity.unwrap_or(0) == 0
    }
}

/// An `(n, k, t)` binary BCH code of length `2^nu - 1`, or its even-weight
/// subcode.
#[derive(Clone, Debug)]
pub struct ComponentCode {
    field: GaloisField,
    n: usize,
    k: usize,
    t: usize,
    d_des: usize,
    even_weight: bool,
    generator: Gf2Poly,
    // generator without its leading term, for the LFSR encoder
    gen_low: u64,
    // odd_pow[l * n + i] = alpha^(i * (2l + 1))
    odd_pow: Vec<Element>,
}

impl ComponentCode {
    /// Builds the narrow-sense BCH code correcting `t` errors over `field`,
    /// optionally restricted to its even-weight subcode.
    pub fn new(field: GaloisField, t: usize, even_weight: bool) -> Result<Self> {
        let n = field.order();
        if t == 0 || t > MAX_T || 2 * t >= n {
            return Err(Error::UnsupportedParameters(format!(
                "t = {t} for length {n} (supported 1..={MAX_T})"
            )));
        }
        let mut generator = Gf2Poly::one();
        let mut covered = vec![false; n];
        for j in (1..2 * t).step_by(2) {
            if covered[j] {
                continue;
            }
            for c in field.cyclotomic_coset(j) {
                covered[c] = true;
            }
            generator = generator.mul(&field.minimal_poly(j));
        }
        if even_weight {
            generator = generator.mul(&Gf2Poly::from_mask(0b11));
        }
        let parity_len = generator.degree().expect("nonzero generator");
        if parity_len >= n || parity_len > 64 {
            return Err(Error::UnsupportedParameters(format!(
                "design distance {} needs {parity_len} parity bits at length {n}",
                2 * t + 1 + usize::from(even_weight)
            )));
        }
        let gen_low = generator.low_mask() & low_mask(parity_len);
        let mut odd_pow = vec![0; t * n];
        for l in 0..t {
            for i in 0..n {
                odd_pow[l * n + i] = field.antilog((i * (2 * l + 1)) as i64);
            }
        }
        Ok(Self {
            n,
            k: n - parity_len,
            t,
            d_des: 2 * t + 1 + usize::from(even_weight),
            even_weight,
            generator,
            gen_low,
            odd_pow,
            field,
        })
    }

    /// Convenience constructor over GF(2^nu) with the default primitive
    /// polynomial.
    pub fn bch(nu: u32, t: usize, even_weight: bool) -> Result<Self> {
        Self::new(GaloisField::with_default_poly(nu)?, t, even_weight)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn design_distance(&self) -> usize {
        self.d_des
    }
    pub fn is_even_weight(&self) -> bool {
        self.even_weight
    }
    pub fn generator(&self) -> &Gf2Poly {
        &self.generator
    }
    pub fn parity_len(&self) -> usize {
        self.n - self.k
    }

    /// Flips one low-order generator coefficient. Only for fault-injection
    /// in self tests: the result no longer encodes into the code.
    #[doc(hidden)]
    pub fn corrupt_generator(&mut self) {
        self.generator.flip(1);
        self.gen_low ^= 0b10;
    }

    /// Systematic encoding of a `k`-bit message.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        let mut out = vec![0; self.n];
        self.encode_into(message, &mut out)?;
        Ok(out)
    }

    /// Systematic encoding into a caller-provided `n`-bit buffer.
    pub fn encode_into(&self, message: &[u8], out: &mut [u8]) -> Result<()> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        if out.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: out.len(),
            });
        }
        let pl = self.parity_len();
        let mask = low_mask(pl);
        let mut reg = 0u64;
        for &bit in message.iter().rev() {
            let feedback = u64::from(bit & 1) ^ ((reg >> (pl - 1)) & 1);
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= self.gen_low;
            }
        }
        for (p, slot) in out[..pl].iter_mut().enumerate() {
            *slot = ((reg >> p) & 1) as u8;
        }
        out[pl..].copy_from_slice(message);
        Ok(())
    }

    /// The message bits of a codeword.
    pub fn message_of<'a>(&self, codeword: &'a [u8]) -> &'a [u8] {
        &codeword[self.parity_len()..]
    }

    fn odd_syndromes(&self, word: &[u8], out: &mut [Element; MAX_T]) -> u8 {
        assert_eq!(word.len(), self.n, "word length");
        out.fill(0);
        let mut parity = 0u8;
        for (i, &b) in word.iter().enumerate() {
            if b & 1 == 1 {
                parity ^= 1;
                for (l, s) in out.iter_mut().take(self.t).enumerate() {
                    *s ^= self.odd_pow[l * self.n + i];
                }
            }
        }
        parity
    }

    /// Syndromes `S_j = word(alpha^j)` for `j = 1..=2t`, and the parity bit
    /// for even-weight codes.
    pub fn syndromes(&self, word: &[u8]) -> Syndromes {
        let mut odd = [0; MAX_T];
        let parity = self.odd_syndromes(word, &mut odd);
        let values = self.full_syndromes(&odd);
        Syndromes {
            values: values[..2 * self.t].to_vec(),
            parity: self.even_weight.then_some(parity),
        }
    }

    fn full_syndromes(&self, odd: &[Element; MAX_T]) -> [Element; 2 * MAX_T] {
        let mut s = [0; 2 * MAX_T];
        for j in 1..=2 * self.t {
            s[j - 1] = if j % 2 == 1 {
                odd[j / 2]
            } else {
                let h = s[j / 2 - 1];
                self.field.mul(h, h)
            };
        }
        s
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        let mut odd = [0; MAX_T];
        let parity = self.odd_syndromes(word, &mut odd);
        odd.iter().all(|&s| s == 0) && (!self.even_weight || parity == 0)
    }

    /// Bounded-distance decoding.
    pub fn bdd(&self, word: &[u8]) -> BddResult {
        let mut flips = Vec::with_capacity(self.t);
        if !self.locate_errors(word, &mut flips) {
            return BddResult::Failure;
        }
        let mut codeword = word.to_vec();
        for &p in &flips {
            codeword[p] ^= 1;
        }
        BddResult::Success { codeword, flips }
    }

    /// Core of [`bdd`](Self::bdd): on success fills `errs` with the error
    /// positions (ascending) and returns `true`.
    pub fn locate_errors(&self, word: &[u8], errs: &mut Vec<usize>) -> bool {
        errs.clear();
        let mut odd = [0; MAX_T];
        let parity = self.odd_syndromes(word, &mut odd);
        if odd[..self.t].iter().all(|&s| s == 0) {
            return !self.even_weight || parity == 0;
        }
        let s = self.full_syndromes(&odd);
        let Some((locator, degree)) = self.berlekamp_massey(&s) else {
            return false;
        };
        if self.even_weight && (parity ^ (degree & 1) as u8) != 0 {
            return false;
        }
        self.chien_search(&locator, degree, errs)
    }

    /// Error-locator polynomial `Lambda(x)` and its degree, if at most `t`.
    fn berlekamp_massey(&self, s: &[Element; 2 * MAX_T]) -> Option<([Element; LOCATOR_LEN], usize)> {
        let f = &self.field;
        let mut c = [0 as Element; LOCATOR_LEN];
        let mut b = [0 as Element; LOCATOR_LEN];
        c[0] = 1;
        b[0] = 1;
        let mut len = 0usize;
        let mut shift = 1usize;
        let mut last_d: Element = 1;
        for r in 0..2 * self.t {
            let mut d = s[r];
            for i in 1..=len {
                d ^= f.mul(c[i], s[r - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, last_d).expect("last discrepancy is nonzero");
            let prev = c;
            for i in 0..LOCATOR_LEN - shift {
                c[i + shift] ^= f.mul(coef, b[i]);
            }
            if 2 * len <= r {
                len = r + 1 - len;
                b = prev;
                last_d = d;
                shift = 1;
            } else {
                shift += 1;
            }
        }
        let degree = c.iter().rposition(|&x| x != 0).unwrap_or(0);
        (len <= self.t && degree == len).then_some((c, degree))
    }

    fn chien_search(&self, locator: &[Element; LOCATOR_LEN], degree: usize, errs: &mut Vec<usize>) -> bool {
        let f = &self.field;
        let n = self.n;
        if degree == 1 {
            // 1 + L1 x vanishes at x = L1^-1 = alpha^-i, i.e. alpha^i = L1
            errs.push(f.log(locator[1]).expect("leading coefficient is nonzero"));
            return true;
        }
        // terms[j] tracks log(L_j) - i*j mod n while i sweeps the positions
        let mut terms = [0usize; LOCATOR_LEN];
        let mut active = [0usize; LOCATOR_LEN];
        let mut count = 0;
        for j in 1..=degree {
            if let Some(l) = f.log(locator[j]) {
                terms[count] = l;
                active[count] = j % n;
                count += 1;
            }
        }
        for i in 0..n {
            let mut sum: Element = 1;
            for (term, &j) in terms[..count].iter_mut().zip(&active[..count]) {
                sum ^= f.exp_at(*term);
                *term = if *term >= j { *term - j } else { *term + n - j };
            }
            if sum == 0 {
                errs.push(i);
                if errs.len() == degree {
                    return true;
                }
            }
        }
        false
    }
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}
