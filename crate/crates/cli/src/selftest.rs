//! Fast invariant suite: field axioms, exhaustive BDD on a short code, the
//! error-and-erasure sphere guarantee, score-register fuzzing and product
//! encoding.

use std::io::Write;

use prodcode::drs::{DrsEvent, DrsRegister, MAX_SCORE};
use prodcode::{eaed_decode, BddResult, ComponentCode, EaedOutcome, GaloisField, Matrix, ProductCode, Trit};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Faults that can be injected to check that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip one coefficient of the component generator polynomial.
    Generator,
}

impl std::str::FromStr for Fault {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "generator" => Ok(Fault::Generator),
            other => Err(CliError::Config(format!("unknown fault `{other}`"))),
        }
    }
}

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

/// Runs every check and returns them in a fixed order.
pub fn checks(seed: u64, fault: Option<Fault>) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code = |nu, t, even| {
        let mut c = ComponentCode::bch(nu, t, even).expect("supported code");
        if fault == Some(Fault::Generator) {
            c.corrupt_generator();
        }
        c
    };
    vec![
        check("gf-axioms", gf_axioms(&mut rng)),
        check("bdd-exhaustive-15-7", bdd_exhaustive(&code(4, 2, false))),
        check("eaed-sphere-15-7", eaed_sphere(&code(4, 2, false), &mut rng)),
        check("eaed-sphere-15-6-even", eaed_sphere(&code(4, 2, true), &mut rng)),
        check("drs-fuzz", drs_fuzz(&mut rng)),
        check("product-encode", product_encode(&code(5, 2, false), &mut rng)),
    ]
}

pub fn run(seed: u64, fault: Option<Fault>, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Runtime(e.to_string());
    writeln!(out, "selftest seed {seed}").map_err(io)?;
    let results = checks(seed, fault);
    let mut failed = Vec::new();
    for c in &results {
        writeln!(out, "{} {:<22} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).map_err(io)?;
        if !c.passed {
            failed.push(c.name);
        }
    }
    writeln!(out, "{} of {} checks passed", results.len() - failed.len(), results.len()).map_err(io)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Selftest(failed.join(", ")))
    }
}

fn gf_axioms(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut count = 0usize;
    for nu in 3..=10 {
        let f = GaloisField::with_default_poly(nu).map_err(|e| e.to_string())?;
        let size = f.size() as u16;
        for a in 1..size {
            let inv = f.inv(a).map_err(|e| e.to_string())?;
            if f.mul(a, inv) != 1 {
                return Err(format!("GF(2^{nu}): {a} * {a}^-1 != 1"));
            }
            if f.antilog(f.log(a).unwrap() as i64) != a {
                return Err(format!("GF(2^{nu}): log/antilog round trip fails at {a}"));
            }
        }
        for _ in 0..2_000 {
            let (a, b, c) = (
                rng.random_range(0..size),
                rng.random_range(0..size),
                rng.random_range(0..size),
            );
            let assoc = f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
            let comm = f.mul(a, b) == f.mul(b, a);
            let dist = f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
            if !(assoc && comm && dist) {
                return Err(format!("GF(2^{nu}): axiom violated at ({a}, {b}, {c})"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} random triples over GF(2^3)..GF(2^10)"))
}

fn bdd_exhaustive(code: &ComponentCode) -> Result<String, String> {
    let (n, k) = (code.n(), code.k());
    let mut patterns = 0usize;
    for m in 0..1u32 << k {
        let msg: Vec<u8> = (0..k).map(|i| ((m >> i) & 1) as u8).collect();
        let cw = code.encode(&msg).map_err(|e| e.to_string())?;
        let decode = |word: &[u8]| match code.bdd(word) {
            BddResult::Success { codeword, .. } if codeword == cw => Ok(()),
            _ => Err(format!("message {m:#x}: pattern not corrected")),
        };
        decode(&cw)?;
        for i in 0..n {
            let mut w = cw.clone();
            w[i] ^= 1;
            decode(&w)?;
            for j in i + 1..n {
                let mut w2 = w.clone();
                w2[j] ^= 1;
                decode(&w2)?;
                patterns += 1;
            }
            patterns += 1;
        }
    }
    Ok(format!("{} codewords, {patterns} error patterns", 1u32 << k))
}

fn eaed_sphere(code: &ComponentCode, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let (n, k, d) = (code.n(), code.k(), code.design_distance());
    let mut trials = 0usize;
    for e in 0..=d / 2 {
        for erasures in 0..d {
            if 2 * e + erasures >= d {
                continue;
            }
            for _ in 0..500 {
                let msg: Vec<u8> = (0..k).map(|_| rng.random_range(0..2)).collect();
                let cw = code.encode(&msg).map_err(|e| e.to_string())?;
                let mut y: Vec<Trit> = cw.iter().map(|&b| Trit::from_bit(b)).collect();
                let picks = sample(rng, n, e + erasures).into_vec();
                for &p in &picks[..e] {
                    y[p] = Trit::from_bit(cw[p] ^ 1);
                }
                for &p in &picks[e..] {
                    y[p] = Trit::Erased;
                }
                let r = eaed_decode(code, &y, rng);
                if r.outcome != EaedOutcome::Decoded || r.word.to_bits().as_deref() != Some(&cw[..]) {
                    return Err(format!("{e} errors + {erasures} erasures not corrected"));
                }
                trials += 1;
            }
        }
    }
    Ok(format!("{trials} trials inside the sphere"))
}

fn drs_fuzz(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 8;
    let init: Vec<u8> = (0..n * n).map(|_| rng.random_range(0..=MAX_SCORE)).collect();
    let mut reg = DrsRegister::new(Matrix::from_vec(n, init).map_err(|e| e.to_string())?, 9);
    let events = 10_000;
    for _ in 0..events {
        let count = rng.random_range(0..n);
        let positions: Vec<usize> = (0..count).map(|_| rng.random_range(0..n * n)).collect();
        let event = match rng.random_range(0..4) {
            0 => DrsEvent::Rejected(positions),
            1 => DrsEvent::Accepted(positions),
            2 => DrsEvent::AlreadyCodeword(positions),
            _ => DrsEvent::Failure,
        };
        let before = reg.clone();
        reg.apply(&event);
        if event == DrsEvent::Failure && reg != before {
            return Err("failure event changed the register".into());
        }
        if reg.scores().as_slice().iter().any(|&s| s > MAX_SCORE) {
            return Err("score left the 5-bit range".into());
        }
    }
    for it in 1..=15 {
        reg.bump_threshold(it);
    }
    if reg.anchor_threshold() != 12 {
        return Err(format!("anchor threshold {} after 15 iterations", reg.anchor_threshold()));
    }
    Ok(format!("{events} events"))
}

fn product_encode(code: &ComponentCode, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let pc = ProductCode::new(code.clone());
    let frames = 20;
    for _ in 0..frames {
        let msg: Vec<u8> = (0..pc.payload_bits()).map(|_| rng.random_range(0..2)).collect();
        let frame = pc.encode_flat(&msg).map_err(|e| e.to_string())?;
        // syndromes are computed from the field, independently of the
        // generator used by the encoder
        if !pc.is_codeword(&frame) || pc.payload(&frame) != msg {
            return Err("encoded frame is not a product codeword".into());
        }
    }
    Ok(format!("{frames} frames of ({}, {})^2", pc.n(), pc.k()))
}
