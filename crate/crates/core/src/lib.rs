//! Product codes with soft-aided error-and-erasure decoding.
//!
//! The crate covers the whole chain of a hard-decision product-code link
//! with a small amount of soft information: GF(2^nu) arithmetic, binary BCH
//! component codes with bounded-distance and error-and-erasure decoding,
//! product encoding, a BI-AWGN channel with ternary quantization, and four
//! iterative decoders. [`decoders::decode_drsd`] tracks a 5-bit reliability
//! score per bit and refuses component decisions that would flip bits it
//! considers reliable. [`simkit`] estimates BER curves, noise thresholds and
//! net coding gains by Monte Carlo simulation.
//!
//! Soft values are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the common choices.
//!
//! ```
//! use prodcode::{ChannelConfig64, ComponentCode, DecoderConfig64, MonteCarlo, ProductCode, StoppingRule};
//!
//! let pc = ProductCode::new(ComponentCode::bch(5, 2, false)?);
//! let dec = DecoderConfig64::drsd_preset(10, 9, 0.1);
//! let chan = ChannelConfig64 { ebn0_db: 8.0, rate: pc.rate(), erasure_threshold: 0.1, seed: 7 };
//! let mc = MonteCarlo::new(StoppingRule { max_frames: 20, ..Default::default() }, 1)?;
//! let point = mc.run_ber_point(&pc, &dec, &chan)?;
//! assert_eq!(point.frames, 20);
//! # Ok::<(), prodcode::Error>(())
//! ```

pub mod channel;
pub mod component;
pub mod decoders;
pub mod defaults;
pub mod drs;
pub mod eaed;
pub mod error;
pub mod galois;
pub mod product;
pub mod scalar;
pub mod simkit;

pub use channel::{init_drs, quantize, transmit, ChannelConfig, SoftFrame};
pub use component::{BddResult, ComponentCode};
pub use decoders::{
    decode_drsd, decode_genie_eaed, decode_ibdd, decode_iter_eaed, DecodeReport, DecoderConfig, DecoderVariant,
    IterationStats,
};
pub use drs::{DrsEvent, DrsRegister};
pub use eaed::{eaed_decode, EaedOutcome, TernaryWord, Trit};
pub use error::{Error, Result};
pub use galois::{GaloisField, Gf2Poly};
pub use product::{BitMatrix, Line, Matrix, ProductCode, TernaryFrame};
pub use scalar::Real;
pub use simkit::{ncg_db, BerPoint, MonteCarlo, StopReason, StoppingRule, ThresholdResult};

pub type SoftFrame64 = SoftFrame<f64>;
pub type SoftFrame32 = SoftFrame<f32>;
pub type ChannelConfig64 = ChannelConfig<f64>;
pub type ChannelConfig32 = ChannelConfig<f32>;
pub type DecoderConfig64 = DecoderConfig<f64>;
pub type DecoderConfig32 = DecoderConfig<f32>;
