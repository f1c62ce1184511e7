//! Shared fixtures and independent reference implementations.
//!
//! Everything here is deliberately written from the definitions rather
//! than reusing library code, so tests compare two independent routes.

#![allow(dead_code)]

use landmark_core::audio::AudioBuffer;
use landmark_core::landmark::{Landmark, LandmarkKind, Polarity};
use landmark_core::peaks::Peak;
use landmark_core::synth;

pub const RATE: u32 = 16_000;

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// Low white-noise bed. Masks window leakage between bands so that a rise
/// in one band does not drag silence-floor bands up with it.
pub fn noise_bed(dur_s: f64, seed: u64) -> AudioBuffer {
    synth::white_noise(RATE, dur_s, 0.05, seed)
}

/// 150 Hz tone with 10 ms raised-cosine ramps over a noise bed.
/// True edges: onset 0.5 s, offset 1.0 s.
pub fn tone_fixture() -> AudioBuffer {
    let bed = noise_bed(1.5, 101);
    let tone = synth::ramped_tone(150.0, RATE, 0.5, 0.6, 0.01);
    synth::mix_at(&bed, &tone, 0.5)
}

/// Full-band (0.8-7.9 kHz) noise burst over a bed.
/// True edges: onset 1.0 s, offset 1.2 s.
pub fn burst_fixture() -> AudioBuffer {
    let bed = noise_bed(2.2, 102);
    let burst = synth::bandlimited_noise(800.0, 7900.0, RATE, 0.2, 0.15, 21);
    synth::mix_at(&bed, &burst, 1.0)
}

/// Burst confined to band 6: only one of the five b/s bands rises.
pub fn band6_burst_fixture() -> AudioBuffer {
    let bed = noise_bed(2.2, 103);
    let burst = synth::bandlimited_noise(5100.0, 7900.0, RATE, 0.2, 0.15, 22);
    synth::mix_at(&bed, &burst, 1.0)
}

/// Burst spanning bands 2-3 only: two of five bands rise.
pub fn band23_burst_fixture() -> AudioBuffer {
    let bed = noise_bed(2.2, 104);
    let burst = synth::bandlimited_noise(850.0, 1900.0, RATE, 0.15, 0.15, 23);
    synth::mix_at(&bed, &burst, 1.0)
}

/// Low-band noise (bands 2-3) switched off exactly when high-band noise
/// (bands 4-6) switches on at 1.0 s; high noise ends at 1.7 s. Edges are
/// faded over 10 ms so switch splatter does not pollute other bands.
pub fn frication_fixture() -> AudioBuffer {
    let bed = noise_bed(2.0, 105);
    let low = synth::fade_edges(&synth::bandlimited_noise(850.0, 1900.0, RATE, 0.7, 0.12, 31), 0.01);
    let high = synth::fade_edges(&synth::bandlimited_noise(2100.0, 7900.0, RATE, 0.7, 0.12, 32), 0.01);
    synth::mix_at(&synth::mix_at(&bed, &low, 0.3), &high, 1.0)
}

/// High-band noise over a bed, with nothing happening in bands 2-3: the
/// low-band-decrease clause of f+ must keep f from firing.
pub fn high_only_fixture() -> AudioBuffer {
    let bed = noise_bed(2.0, 106);
    let high = synth::fade_edges(&synth::bandlimited_noise(2100.0, 7900.0, RATE, 0.7, 0.12, 33), 0.01);
    synth::mix_at(&bed, &high, 1.0)
}

/// Band-1 comb whose amplitude steps up by `step_db` over [0.75, 1.25] s
/// with 10 ms ramps. A uniform gain step moves the band energy by exactly
/// `step_db`, independent of windowing, so threshold calibration is exact.
pub fn gain_step_fixture(step_db: f64) -> AudioBuffer {
    let freqs = [62.5, 125.0, 187.5, 250.0, 312.5, 375.0];
    let comb = synth::comb(&freqs, RATE, 2.0, 0.05);
    let gain = 10f64.powf(step_db / 20.0);
    let ramp = (0.01 * RATE as f64) as usize;
    let t1 = (0.75 * RATE as f64) as usize;
    let t2 = (1.25 * RATE as f64) as usize;
    let samples = comb
        .samples
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let g = if i < t1 || i >= t2 + ramp {
                1.0
            } else if i < t1 + ramp {
                let u = (i - t1) as f64 / ramp as f64;
                1.0 + (gain - 1.0) * 0.5 * (1.0 - (std::f64::consts::PI * u).cos())
            } else if i >= t2 {
                let u = (i - t2) as f64 / ramp as f64;
                gain + (1.0 - gain) * 0.5 * (1.0 - (std::f64::consts::PI * u).cos())
            } else {
                gain
            };
            (s as f64 * g) as f32
        })
        .collect();
    AudioBuffer::new(samples, RATE)
}

/// 1 s 150 Hz tone flanked by 0.5 s of low-level white noise.
/// True edges: onset 0.5 s, offset 1.5 s.
pub fn periodicity_fixture() -> AudioBuffer {
    let lead = synth::white_noise(RATE, 0.5, 0.02, 11);
    let tone = synth::sine(150.0, RATE, 1.0, 0.5);
    let tail = synth::white_noise(RATE, 0.5, 0.02, 12);
    synth::concat(&[&lead, &tone, &tail])
}

// ---------------------------------------------------------------------------
// Peak-detection reference
// ---------------------------------------------------------------------------

/// Clause-by-clause reference for peak detection, checked literally against
/// the definitions: local maximum, strict height, strict prominence against
/// the lowest contour line, and pairwise separation with the taller (then
/// earlier) peak surviving.
pub fn brute_force_peaks(
    signal: &[f64],
    min_height: f64,
    min_prominence: f64,
    min_distance: usize,
) -> Vec<usize> {
    let n = signal.len();
    if n < 3 {
        return Vec::new();
    }

    // Clause 1 + 2.
    let mut candidates: Vec<usize> = Vec::new();
    for i in 1..n - 1 {
        if signal[i] > signal[i - 1] && signal[i] > signal[i + 1] && signal[i] > min_height {
            candidates.push(i);
        }
    }

    // Clause 3: prominence from the definition, one side at a time.
    candidates.retain(|&i| {
        let mut v_l = signal[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            if signal[j] > signal[i] {
                break;
            }
            if signal[j] < v_l {
                v_l = signal[j];
            }
        }
        let mut v_r = signal[i];
        let mut j = i;
        while j + 1 < n {
            j += 1;
            if signal[j] > signal[i] {
                break;
            }
            if signal[j] < v_r {
                v_r = signal[j];
            }
        }
        signal[i] - v_l.max(v_r) > min_prominence
    });

    // Clause 4: repeatedly let the tallest unresolved candidate suppress
    // everything within min_distance of it.
    if min_distance == 0 {
        return candidates;
    }
    let mut alive: Vec<usize> = candidates.clone();
    let mut kept: Vec<usize> = Vec::new();
    while !alive.is_empty() {
        let &winner = alive
            .iter()
            .max_by(|&&a, &&b| signal[a].total_cmp(&signal[b]).then(b.cmp(&a)))
            .unwrap();
        kept.push(winner);
        alive.retain(|&i| i != winner && i.abs_diff(winner) > min_distance);
    }
    kept.sort_unstable();
    kept
}

/// Assert that a peak list satisfies every definition clause on `signal`.
pub fn assert_peaks_satisfy_clauses(
    signal: &[f64],
    peaks: &[Peak],
    min_height: f64,
    min_prominence: f64,
    min_distance: usize,
) {
    for w in peaks.windows(2) {
        assert!(w[0].index < w[1].index, "peaks must be sorted");
        assert!(
            w[1].index - w[0].index > min_distance,
            "peaks {} and {} violate min distance {}",
            w[0].index,
            w[1].index,
            min_distance
        );
    }
    for p in peaks {
        assert!(p.index >= 1 && p.index + 1 < signal.len());
        assert!(signal[p.index] > signal[p.index - 1]);
        assert!(signal[p.index] > signal[p.index + 1]);
        assert!(p.height > min_height);
        assert_eq!(p.height, signal[p.index]);
        assert!(p.prominence > min_prominence);
        assert!(p.prominence >= 0.0);
    }
    // All pairs, not just neighbours.
    for (i, a) in peaks.iter().enumerate() {
        for b in peaks.iter().skip(i + 1) {
            assert!(a.index.abs_diff(b.index) > min_distance);
        }
    }
}

// ---------------------------------------------------------------------------
// g-pairing reference
// ---------------------------------------------------------------------------

/// Exhaustive search over all alternating +/- subsequences starting with +
/// and ending with -, maximizing (pairs, total strength) and resolving
/// remaining ties toward the lexicographically smallest index set.
/// Returns the selected indices into `candidates`.
pub fn exhaustive_pair_g(candidates: &[Landmark]) -> Vec<usize> {
    let n = candidates.len();
    assert!(n <= 20, "exhaustive search only for small inputs");
    let mut best: (usize, f64, Vec<usize>) = (0, 0.0, Vec::new());
    for mask in 1u32..(1 << n) {
        let indices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if !indices.len().is_multiple_of(2) {
            continue;
        }
        let alternates = indices.iter().enumerate().all(|(pos, &i)| {
            let expected = if pos % 2 == 0 { Polarity::Plus } else { Polarity::Minus };
            candidates[i].polarity == expected
        });
        if !alternates {
            continue;
        }
        let pairs = indices.len() / 2;
        let strength: f64 = indices.iter().map(|&i| candidates[i].strength).sum();
        let (bp, bs, bi) = &best;
        if pairs > *bp
            || (pairs == *bp && strength > *bs)
            || (pairs == *bp && strength == *bs && indices < *bi)
        {
            best = (pairs, strength, indices);
        }
    }
    best.2
}

/// Deterministic landmark list generator for pairing tests. Strengths are
/// small integers so objective sums are exact and tie-breaking is
/// well defined in both routes.
pub fn random_g_candidates(rng: &mut impl rand::Rng, len: usize) -> Vec<Landmark> {
    (0..len)
        .map(|i| {
            let polarity = if rng.random_bool(0.5) {
                Polarity::Plus
            } else {
                Polarity::Minus
            };
            let strength = rng.random_range(1..=12) as f64;
            Landmark::new(LandmarkKind::G, polarity, i as f64 * 0.1, strength)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Autocorrelation reference
// ---------------------------------------------------------------------------

/// Direct evaluation of the biased-normalized autocorrelation and the
/// periodicity energy of one frame, straight from the formulas.
pub fn direct_periodicity_energy(frame: &[f64]) -> f64 {
    let n = frame.len();
    let mut e_f = 0.0f64;
    for k in 0..n {
        let mut acc = 0.0f64;
        for i in 0..n - k {
            acc += frame[i] * frame[i + k];
        }
        let r = acc / (n - k) as f64;
        e_f += r * r;
    }
    e_f / n as f64
}

// ---------------------------------------------------------------------------
// Statistics helpers
// ---------------------------------------------------------------------------

/// Two-sample chi-square statistic over shared bins. Bins where both
/// samples are empty are skipped.
pub fn chi_square_two_sample(counts_a: &[u64], counts_b: &[u64]) -> (f64, usize) {
    assert_eq!(counts_a.len(), counts_b.len());
    let total_a: u64 = counts_a.iter().sum();
    let total_b: u64 = counts_b.iter().sum();
    let ka = (total_b as f64 / total_a as f64).sqrt();
    let kb = (total_a as f64 / total_b as f64).sqrt();
    let mut stat = 0.0f64;
    let mut dof = 0usize;
    for (&a, &b) in counts_a.iter().zip(counts_b) {
        if a + b == 0 {
            continue;
        }
        let d = ka * a as f64 - kb * b as f64;
        stat += d * d / (a + b) as f64;
        dof += 1;
    }
    (stat, dof.saturating_sub(1))
}

/// Generous chi-square critical value at p ~ 0.001 for the given degrees
/// of freedom (Wilson-Hilferty approximation).
pub fn chi_square_critical(dof: usize) -> f64 {
    let k = dof as f64;
    // z for p = 0.001
    let z = 3.09;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}
