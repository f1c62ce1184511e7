//! Independent spectral and differentiation oracles for the band module.

mod common;

use landmark_core::audio::AudioBuffer;
use landmark_core::band::{
    compute_band_energies, differentiate, smooth, FrameConfig, Pass, SmoothedTrack, BAND_EDGES,
    SILENCE_EPS,
};
use landmark_core::synth;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct DFT band energies for one frame, computed without the library's
/// FFT path: Hann window, explicit correlation sums per bin, bins assigned
/// to every band whose range contains their center frequency.
fn direct_frame_band_energies(samples: &[f32], rate: u32, frame_len: usize) -> [f64; 6] {
    let window: Vec<f64> = (0..frame_len)
        .map(|i| {
            let phase = 2.0 * std::f64::consts::PI * i as f64 / frame_len as f64;
            0.5 * (1.0 - phase.cos())
        })
        .collect();
    let mut energy = [0.0f64; 6];
    for k in 0..=frame_len / 2 {
        let f = k as f64 * rate as f64 / frame_len as f64;
        let bands: Vec<usize> = BAND_EDGES
            .iter()
            .enumerate()
            .filter(|(_, (lo, hi))| f >= *lo && f <= *hi)
            .map(|(b, _)| b)
            .collect();
        if bands.is_empty() {
            continue;
        }
        let w = 2.0 * std::f64::consts::PI * k as f64 / frame_len as f64;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for i in 0..frame_len {
            let x = samples[i] as f64 * window[i];
            re += x * (w * i as f64).cos();
            im -= x * (w * i as f64).sin();
        }
        for b in bands {
            energy[b] += re * re + im * im;
        }
    }
    std::array::from_fn(|b| 10.0 * energy[b].max(SILENCE_EPS).log10())
}

#[test]
fn band_energies_match_direct_dft() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples: Vec<f32> = (0..4096).map(|_| rng.random_range(-0.5..0.5)).collect();
    let audio = AudioBuffer::new(samples.clone(), 16_000);
    let cfg = FrameConfig::default();
    let track = compute_band_energies(&audio, cfg).unwrap();

    for frame in [0usize, 7, 41, 100, track.n_frames() - 1] {
        let start = frame * cfg.hop;
        let direct = direct_frame_band_energies(&samples[start..start + cfg.frame_len], 16_000, 256);
        for b in 0..6 {
            assert!(
                (track.bands[b][frame] - direct[b]).abs() < 1e-6,
                "frame {frame} band {b}: {} vs {}",
                track.bands[b][frame],
                direct[b]
            );
        }
    }
}

#[test]
fn low_tone_dominates_band_1_by_20_db() {
    let audio = synth::sine(200.0, 16_000, 1.0, 0.5);
    let track = compute_band_energies(&audio, FrameConfig::default()).unwrap();
    for frame in (100..600).step_by(50) {
        for b in 1..6 {
            assert!(track.bands[0][frame] - track.bands[b][frame] >= 20.0);
        }
    }
}

#[test]
fn high_tone_dominates_band_6_by_20_db() {
    let audio = synth::sine(6000.0, 16_000, 1.0, 0.5);
    let track = compute_band_energies(&audio, FrameConfig::default()).unwrap();
    for frame in (100..600).step_by(50) {
        for b in 0..5 {
            assert!(
                track.bands[5][frame] - track.bands[b][frame] >= 20.0,
                "frame {frame} band {b}"
            );
        }
    }
}

#[test]
fn band_value_is_pure_function_of_frame() {
    // Appending unrelated audio must not change earlier frames.
    let head = synth::sine(300.0, 16_000, 0.5, 0.4);
    let tail = synth::white_noise(16_000, 0.5, 0.3, 5);
    let extended = synth::concat(&[&head, &tail]);

    let cfg = FrameConfig::default();
    let short_track = compute_band_energies(&head, cfg).unwrap();
    let long_track = compute_band_energies(&extended, cfg).unwrap();
    for b in 0..6 {
        for n in 0..short_track.n_frames() {
            assert_eq!(short_track.bands[b][n], long_track.bands[b][n]);
        }
    }
}

#[test]
fn differentiation_matches_both_printed_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let values: Vec<f64> = (0..120).map(|_| rng.random_range(-40.0..-10.0)).collect();

    for dt in [1usize, 2, 4, 7, 26, 50] {
        let track = SmoothedTrack {
            values: values.clone(),
            pass: Pass::Fine,
            window: 1,
        };
        let result = differentiate(&track, dt);

        // Route two: evaluate the forward difference, then apply the
        // centering shift as its own indexing step.
        let len = values.len();
        let mut unshifted = vec![0.0f64; len];
        for n in 0..len {
            if n + dt < len {
                unshifted[n] = values[n + dt] - values[n];
            }
        }
        for n in 0..len {
            let expected = if n >= dt / 2 { unshifted[n - dt / 2] } else { 0.0 };
            assert_eq!(result.values[n], expected, "dt {dt} frame {n}");
        }
    }
}

#[test]
fn step_response_is_centered_on_the_change() {
    // +10 dB step at frame k: after the centering shift, the response
    // plateau straddles k instead of sitting entirely before it.
    let k = 60usize;
    let values: Vec<f64> = (0..120).map(|n| if n >= k { -20.0 } else { -30.0 }).collect();
    let track = SmoothedTrack {
        values,
        pass: Pass::Coarse,
        window: 1,
    };
    let dt = 4usize;
    let d = differentiate(&track, dt);

    let max = d.values.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(max, 10.0);
    let plateau: Vec<usize> = (0..d.values.len()).filter(|&n| d.values[n] == 10.0).collect();
    assert_eq!(plateau, vec![k - 4 + dt / 2, k - 3 + dt / 2, k - 2 + dt / 2, k - 1 + dt / 2]);
    assert!(plateau.contains(&(k - 1)) || plateau.contains(&k));
}

#[test]
fn smooth_then_differentiate_constant_is_zero() {
    let constant = vec![-42.0; 200];
    for (window, dt) in [(21usize, 50usize), (11, 26)] {
        let s = smooth(&constant, window, Pass::Coarse);
        let d = differentiate(&s, dt);
        assert!(d.values.iter().all(|&v| v.abs() < 1e-9));
    }
}
