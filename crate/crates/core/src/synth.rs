//! Deterministic signal synthesis for fixtures and calibration.
//!
//! Detection tests need audio with known ground truth: tones with controlled
//! onsets, band-limited noise bursts, and steady backgrounds whose band
//! energies can be computed analytically. Everything here is seeded or
//! phase-fixed, so two runs produce bit-identical buffers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::AudioBuffer;

/// Pure sine tone.
pub fn sine(freq_hz: f64, rate: u32, dur_s: f64, amp: f64) -> AudioBuffer {
    let n = (dur_s * rate as f64).round() as usize;
    let w = 2.0 * std::f64::consts::PI * freq_hz / rate as f64;
    let samples = (0..n).map(|i| (amp * (w * i as f64).sin()) as f32).collect();
    AudioBuffer::new(samples, rate)
}

/// All-zero buffer.
pub fn silence(rate: u32, dur_s: f64) -> AudioBuffer {
    let n = (dur_s * rate as f64).round() as usize;
    AudioBuffer::new(vec![0.0; n], rate)
}

/// Sine tone with raised-cosine onset and offset ramps of `ramp_s` seconds.
pub fn ramped_tone(freq_hz: f64, rate: u32, dur_s: f64, amp: f64, ramp_s: f64) -> AudioBuffer {
    let mut buf = sine(freq_hz, rate, dur_s, amp);
    let ramp = ((ramp_s * rate as f64).round() as usize).min(buf.len() / 2);
    let n = buf.len();
    for i in 0..ramp {
        let g = 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / ramp as f64).cos());
        buf.samples[i] *= g as f32;
        buf.samples[n - 1 - i] *= g as f32;
    }
    buf
}

/// Sum of equal-amplitude sinusoids with golden-angle phase stagger.
///
/// Unlike random noise the frame energy of a comb is essentially constant,
/// which makes it the right background for threshold-calibration fixtures.
pub fn comb(freqs_hz: &[f64], rate: u32, dur_s: f64, amp_each: f64) -> AudioBuffer {
    let n = (dur_s * rate as f64).round() as usize;
    let mut samples = vec![0.0f32; n];
    for (j, &f) in freqs_hz.iter().enumerate() {
        let w = 2.0 * std::f64::consts::PI * f / rate as f64;
        let phase = j as f64 * 2.399_963; // golden angle, keeps the crest low
        for (i, s) in samples.iter_mut().enumerate() {
            *s += (amp_each * (w * i as f64 + phase).sin()) as f32;
        }
    }
    AudioBuffer::new(samples, rate)
}

/// Seeded uniform white noise in [-amp, amp].
pub fn white_noise(rate: u32, dur_s: f64, amp: f64, seed: u64) -> AudioBuffer {
    let n = (dur_s * rate as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| (rng.random_range(-amp..amp)) as f32)
        .collect();
    AudioBuffer::new(samples, rate)
}

/// Seeded noise confined to `[lo_hz, hi_hz]`, scaled to the requested RMS.
///
/// White noise is filtered in the frequency domain over the whole buffer,
/// so out-of-band leakage is limited to the resolution of one FFT bin.
pub fn bandlimited_noise(
    lo_hz: f64,
    hi_hz: f64,
    rate: u32,
    dur_s: f64,
    rms: f64,
    seed: u64,
) -> AudioBuffer {
    let white = white_noise(rate, dur_s, 1.0, seed);
    let n = white.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut buf: Vec<Complex<f64>> = white
        .samples
        .iter()
        .map(|&s| Complex::new(s as f64, 0.0))
        .collect();
    fft.process(&mut buf);

    let bin_hz = rate as f64 / n as f64;
    for (k, v) in buf.iter_mut().enumerate() {
        let f = if k <= n / 2 {
            k as f64 * bin_hz
        } else {
            (n - k) as f64 * bin_hz
        };
        if f < lo_hz || f > hi_hz {
            *v = Complex::new(0.0, 0.0);
        }
    }
    ifft.process(&mut buf);

    let raw: Vec<f64> = buf.iter().map(|c| c.re / n as f64).collect();
    let current_rms = (raw.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    let gain = if current_rms > 0.0 { rms / current_rms } else { 0.0 };
    AudioBuffer::new(raw.iter().map(|&v| (v * gain) as f32).collect(), rate)
}

/// Raised-cosine fade-in and fade-out over `ramp_s` seconds at each end.
/// Tames the broadband splatter an abrupt on/off edge would smear across
/// every band.
pub fn fade_edges(buffer: &AudioBuffer, ramp_s: f64) -> AudioBuffer {
    let mut out = buffer.clone();
    let ramp = ((ramp_s * buffer.sample_rate as f64).round() as usize).min(out.len() / 2);
    let n = out.len();
    for i in 0..ramp {
        let g = 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / ramp as f64).cos());
        out.samples[i] *= g as f32;
        out.samples[n - 1 - i] *= g as f32;
    }
    out
}

/// Concatenate buffers end to end. All must share one sample rate.
pub fn concat(parts: &[&AudioBuffer]) -> AudioBuffer {
    let rate = parts.first().map(|b| b.sample_rate).unwrap_or(16_000);
    let mut samples = Vec::new();
    for part in parts {
        assert_eq!(part.sample_rate, rate, "sample rate mismatch in concat");
        samples.extend_from_slice(&part.samples);
    }
    AudioBuffer::new(samples, rate)
}

/// Add `overlay` into `base` starting at `at_s`, truncating whatever runs
/// past the end of `base`. Panics if the mix clips.
pub fn mix_at(base: &AudioBuffer, overlay: &AudioBuffer, at_s: f64) -> AudioBuffer {
    assert_eq!(base.sample_rate, overlay.sample_rate);
    let offset = (at_s * base.sample_rate as f64).round() as usize;
    let mut samples = base.samples.clone();
    for (i, &v) in overlay.samples.iter().enumerate() {
        if offset + i >= samples.len() {
            break;
        }
        samples[offset + i] += v;
        assert!(
            samples[offset + i].abs() <= 1.0,
            "mix clipped at sample {}",
            offset + i
        );
    }
    AudioBuffer::new(samples, base.sample_rate)
}
