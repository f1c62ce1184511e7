//! Cross-detector integration behavior on composite fixtures.

mod common;

use landmark_core::landmark::{
    detect_b, detect_f_v, detect_g, detect_p, detect_s, extract_landmarks, pair_g, prepare_tracks,
    DetectorConfig, LandmarkSequence,
};
use landmark_core::synth;

#[test]
fn extract_is_the_sorted_union_of_the_detectors() {
    // Tone (voiced segment) followed by an unvoiced burst.
    let tone_part = common::tone_fixture();
    let bed = common::noise_bed(1.0, 77);
    let burst = synth::bandlimited_noise(800.0, 7900.0, common::RATE, 0.2, 0.15, 78);
    let burst_part = synth::mix_at(&bed, &burst, 0.4);
    let audio = synth::concat(&[&tone_part, &burst_part]);

    let cfg = DetectorConfig::default();
    let seq = extract_landmarks(&audio, &cfg).unwrap();

    let tracks = prepare_tracks(&audio, &cfg).unwrap();
    let (paired, segments) = pair_g(&detect_g(&tracks, &cfg));
    let mut manual = paired;
    manual.extend(detect_b(&tracks, &segments, &cfg));
    manual.extend(detect_s(&tracks, &segments, &cfg));
    manual.extend(detect_f_v(&tracks, &segments, &cfg));
    manual.extend(detect_p(&audio, &cfg).unwrap());
    let manual_seq = LandmarkSequence::new(manual, "", (0.0, audio.duration_s()));

    assert_eq!(seq.landmarks, manual_seq.landmarks);
    assert!(!seq.is_empty());
}

#[test]
fn gating_respects_the_voicing_segments_in_use() {
    let audio = synth::concat(&[&common::tone_fixture(), &common::burst_fixture()]);
    let cfg = DetectorConfig::default();
    let tracks = prepare_tracks(&audio, &cfg).unwrap();
    let (_, segments) = pair_g(&detect_g(&tracks, &cfg));

    for lm in detect_b(&tracks, &segments, &cfg) {
        assert!(!segments.is_voiced(lm.time_s), "b inside voiced at {}", lm.time_s);
    }
    for lm in detect_s(&tracks, &segments, &cfg) {
        assert!(segments.is_voiced(lm.time_s), "s outside voiced at {}", lm.time_s);
    }
    for lm in detect_f_v(&tracks, &segments, &cfg) {
        use landmark_core::landmark::LandmarkKind;
        match lm.kind {
            LandmarkKind::F => assert!(!segments.is_voiced(lm.time_s)),
            LandmarkKind::V => assert!(segments.is_voiced(lm.time_s)),
            other => panic!("unexpected kind {other:?}"),
        }
    }
}

#[test]
fn silence_yields_an_empty_sequence() {
    let audio = synth::silence(common::RATE, 1.0);
    let seq = extract_landmarks(&audio, &DetectorConfig::default()).unwrap();
    assert!(seq.is_empty());
    assert_eq!(seq.span, (0.0, 1.0));
}

#[test]
fn two_tone_bursts_give_two_ordered_p_pairs() {
    let lead = synth::white_noise(common::RATE, 0.4, 0.02, 61);
    let tone1 = synth::sine(180.0, common::RATE, 0.5, 0.5);
    let gap = synth::white_noise(common::RATE, 0.5, 0.02, 62);
    let tone2 = synth::sine(140.0, common::RATE, 0.5, 0.5);
    let tail = synth::white_noise(common::RATE, 0.4, 0.02, 63);
    let audio = synth::concat(&[&lead, &tone1, &gap, &tone2, &tail]);

    let out = detect_p(&audio, &DetectorConfig::default()).unwrap();
    assert_eq!(out.len(), 4, "{out:?}");
    let expected_edges = [0.4, 0.9, 1.4, 1.9];
    for (lm, &edge) in out.iter().zip(&expected_edges) {
        assert!(
            (lm.time_s - edge).abs() <= 0.05,
            "landmark {} at {} vs edge {}",
            lm.label(),
            lm.time_s,
            edge
        );
    }
}
