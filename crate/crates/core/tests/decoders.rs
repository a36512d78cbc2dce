use prodcode::channel::{quantize, transmit_with_std};
use prodcode::simkit::frame_rng;
use prodcode::{
    decode_drsd, decode_ibdd, decode_iter_eaed, ChannelConfig64, ComponentCode, DecoderConfig64, MonteCarlo,
    ProductCode, SoftFrame64, StopReason, StoppingRule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn soft_frame(pc: &ProductCode, sigma: f64, seed: u64) -> (prodcode::BitMatrix, SoftFrame64) {
    let mut rng = frame_rng(seed, 0);
    let msg: Vec<u8> = (0..pc.payload_bits()).map(|_| rng.random_range(0..2)).collect();
    let tx = pc.encode_flat(&msg).unwrap();
    let soft = transmit_with_std(&tx, sigma, &mut rng);
    (tx, soft)
}

#[test]
fn every_decoder_is_error_free_at_high_snr() {
    let pc = ProductCode::new(ComponentCode::bch(7, 2, true).unwrap());
    let mc = MonteCarlo::new(
        StoppingRule {
            min_frame_errors: 1,
            max_frames: 1_000,
            target_ber: None,
        },
        0,
    )
    .unwrap();
    for dec in [
        DecoderConfig64::ibdd(20),
        DecoderConfig64::iter_eaed(20, 0.12),
        DecoderConfig64::drsd_preset(20, 9, 0.12),
        DecoderConfig64::genie_eaed(20, 0.12),
    ] {
        let chan = ChannelConfig64 {
            ebn0_db: 6.0,
            rate: pc.rate(),
            erasure_threshold: dec.erasure_threshold,
            seed: 11,
        };
        let p = mc.run_ber_point(&pc, &dec, &chan).unwrap();
        assert_eq!(p.bit_errors, 0, "{}", dec.variant);
        assert_eq!(p.frames, 1_000);
        assert_eq!(p.stop_reason, StopReason::MaxFrames);
    }
}

#[test]
fn drsd_without_erasures_or_trailing_phase_matches_ibdd() {
    let pc = ProductCode::new(ComponentCode::bch(5, 2, false).unwrap());
    let cfg = DecoderConfig64::drsd(10, 10, 9, 0.0);
    for seed in 0..200 {
        let (_, soft) = soft_frame(&pc, 0.55, seed);
        let hard = quantize(&soft, 0.0).hard_decision();
        let ibdd = decode_ibdd(&hard, pc.component(), 10).unwrap();
        let drsd = decode_drsd(&soft, pc.component(), &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(drsd.frame, ibdd.frame, "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decoders_only_return_binary_frames_when_converged(seed in any::<u64>(), t in 0.0f64..0.3) {
        let pc = ProductCode::new(ComponentCode::bch(4, 2, true).unwrap());
        let (_, soft) = soft_frame(&pc, 0.6, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drsd = decode_drsd(&soft, pc.component(), &DecoderConfig64::drsd_preset(10, 9, t), &mut rng).unwrap();
        let plain = decode_iter_eaed(&quantize(&soft, t), pc.component(), 10, &mut rng).unwrap();
        for r in [&drsd, &plain] {
            if r.converged {
                prop_assert!(pc.is_codeword(&r.hard_frame()));
            }
            prop_assert!(r.iterations_used <= 10);
            prop_assert_eq!(r.stats.len(), r.iterations_used);
            prop_assert!(r.stats.iter().all(|s| s.total() == 2 * pc.n()));
        }
    }
}
