//! Arithmetic over GF(2^m) and polynomials over GF(2).
//!
//! Field elements use the polynomial basis: bit `i` of an [`Element`] is the
//! coefficient of `alpha^i`, so addition is XOR. Multiplication goes through
//! log/antilog tables built once per field.

use crate::error::{Error, Result};

/// A field element in polynomial basis.
pub type Element = u16;

pub const MIN_DEGREE: u32 = 3;
pub const MAX_DEGREE: u32 = 10;

/// Pinned primitive polynomial for each supported extension degree, as a
/// bitmask including the leading term.
pub fn default_primitive_poly(nu: u32) -> Option<u32> {
    Some(match nu {
        3 => 0b1011,          // x^3 + x + 1
        4 => 0b1_0011,        // x^4 + x + 1
        5 => 0b10_0101,       // x^5 + x^2 + 1
        6 => 0b100_0011,      // x^6 + x + 1
        7 => 0b1000_1001,     // x^7 + x^3 + 1
        8 => 0b1_0001_1101,   // x^8 + x^4 + x^3 + x^2 + 1
        9 => 0b10_0001_0001,  // x^9 + x^4 + 1
        10 => 0b100_0000_1001, // x^10 + x^3 + 1
        _ => return None,
    })
}

/// GF(2^nu) with precomputed discrete log and antilog tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    nu: u32,
    prim_poly: u32,
    order: usize,
    log: Vec<u16>,
    // Two periods long so that exp[log a + log b] never needs a reduction.
    exp: Vec<Element>,
}

impl GaloisField {
    /// Builds the field from a primitive polynomial given as a bitmask.
    pub fn new(nu: u32, prim_poly: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&nu) {
            return Err(Error::UnsupportedParameters(format!(
                "extension degree {nu} outside {MIN_DEGREE}..={MAX_DEGREE}"
            )));
        }
        let not_primitive = Error::NonPrimitivePolynomial {
            poly: prim_poly,
            degree: nu,
        };
        if prim_poly >> nu != 1 {
            return Err(not_primitive);
        }
        let size = 1usize << nu;
        let order = size - 1;
        let mut log = vec![0u16; size];
        let mut exp = vec![0 as Element; 2 * order + 1];
        let mut seen = vec![false; size];
        let mut x: u32 = 1;
        for i in 0..order {
            if x == 0 || seen[x as usize] {
                return Err(not_primitive);
            }
            seen[x as usize] = true;
            exp[i] = x as Element;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << nu) != 0 {
                x ^= prim_poly;
            }
        }
        if x != 1 {
            return Err(not_primitive);
        }
        for i in order..exp.len() {
            exp[i] = exp[i - order];
        }
        Ok(Self {
            nu,
            prim_poly,
            order,
            log,
            exp,
        })
    }

    /// Builds the field using the pinned default primitive polynomial.
    pub fn with_default_poly(nu: u32) -> Result<Self> {
        let poly = default_primitive_poly(nu).ok_or_else(|| {
            Error::UnsupportedParameters(format!("no default primitive polynomial for degree {nu}"))
        })?;
        Self::new(nu, poly)
    }

    pub fn degree(&self) -> u32 {
        self.nu
    }

    pub fn primitive_poly(&self) -> u32 {
        self.prim_poly
    }

    /// Multiplicative order of alpha, `2^nu - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of field elements, `2^nu`.
    pub fn size(&self) -> usize {
        self.order + 1
    }

    /// `alpha^i` for any integer exponent.
    pub fn antilog(&self, i: i64) -> Element {
        self.exp[i.rem_euclid(self.order as i64) as usize]
    }

    /// `alpha^i` for `0 <= i < 2 * order`, without reduction.
    #[inline]
    pub fn exp_at(&self, i: usize) -> Element {
        self.exp[i]
    }

    /// Discrete logarithm of a nonzero element, `None` for zero.
    pub fn log(&self, a: Element) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: Element) -> Result<Element> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.exp[(self.order - self.log[a as usize] as usize) % self.order])
    }

    pub fn div(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents require a nonzero base.
    pub fn pow(&self, a: Element, e: i64) -> Result<Element> {
        if a == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
                std::cmp::Ordering::Equal => Ok(1),
                std::cmp::Ordering::Greater => Ok(0),
            };
        }
        Ok(self.antilog(self.log[a as usize] as i64 * e))
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...` at `x`.
    pub fn poly_eval(&self, coeffs: &[Element], x: Element) -> Element {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    /// Product of two polynomials with coefficients in this field.
    pub fn poly_mul(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= self.mul(x, y);
            }
        }
        out
    }

    /// Cyclotomic coset of `j` modulo the field order.
    pub fn cyclotomic_coset(&self, j: usize) -> Vec<usize> {
        let start = j % self.order;
        let mut coset = vec![start];
        let mut c = (start * 2) % self.order;
        while c != start {
            coset.push(c);
            c = (c * 2) % self.order;
        }
        coset
    }

    /// Minimal polynomial of `alpha^j` over GF(2).
    pub fn minimal_poly(&self, j: usize) -> Gf2Poly {
        let mut acc: Vec<Element> = vec![1];
        for c in self.cyclotomic_coset(j) {
            acc = self.poly_mul(&acc, &[self.antilog(c as i64), 1]);
        }
        debug_assert!(acc.iter().all(|&c| c <= 1));
        Gf2Poly::from_coeffs(acc.iter().map(|&c| c as u8))
    }
}

/// Polynomial over GF(2), bit-packed little-endian (bit `i` is the
/// coefficient of `x^i`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_mask(1)
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut p = Self { words: vec![mask] };
        p.normalize();
        p
    }

    pub fn from_coeffs<I: IntoIterator<Item = u8>>(coeffs: I) -> Self {
        let mut words = Vec::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            if i / 64 >= words.len() {
                words.push(0);
            }
            if c & 1 == 1 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let mut p = Self { words };
        p.normalize();
        p
    }

    /// Polynomial `x^e`.
    pub fn monomial(e: usize) -> Self {
        let mut p = Self {
            words: vec![0; e / 64 + 1],
        };
        p.words[e / 64] = 1 << (e % 64);
        p
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some(64 * (self.words.len() - 1) + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> u8 {
        self.words
            .get(i / 64)
            .map_or(0, |w| ((w >> (i % 64)) & 1) as u8)
    }

    pub fn flip(&mut self, i: usize) {
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.normalize();
    }

    /// Coefficients `0..=degree` as 0/1 bytes.
    pub fn coeffs(&self) -> Vec<u8> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i)).collect(),
        }
    }

    /// Low 64 coefficients as a bitmask.
    pub fn low_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        let Some(deg) = other.degree() else { return };
        let need = (deg + shift) / 64 + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        let (ws, bs) = (shift / 64, shift % 64);
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 && i + ws + 1 < self.words.len() {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_shifted(other, 0);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.coeff(i) == 1 {
                    out.xor_shifted(other, i);
                }
            }
        }
        out
    }

    /// Remainder of division by `divisor`; its degree is below the divisor's.
    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            r.xor_shifted(divisor, rd - dd);
        }
        Ok(r)
    }
}
