//! Periodicity (p) landmark detection via framewise autocorrelation.
//!
//! Per frame of length `N` hopped by `p_hop`, the biased-normalized
//! autocorrelation is
//!
//! ```text
//! R_xx(k) = 1/(N-k) * sum_{n=0}^{N-k-1} x(n) x(n+k)
//! ```
//!
//! and the frame's periodicity energy is `E_f = 1/N * sum_k R_xx(k)^2`
//! over lags `0..N-1`. `E_f` is sample-and-hold upsampled to signal
//! length, smoothed by a centered moving average, and binarized at a
//! threshold relative to the file maximum. Rising edges of the binary
//! signal are `p+` landmarks, falling edges `p-`.
//!
//! The raw lag products are evaluated with an FFT (exact up to float
//! rounding); the `1/(N-k)` normalization is applied verbatim, including
//! its variance blow-up at large lags.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::AudioBuffer;
use crate::band::BandError;

use super::{DetectorConfig, Landmark, LandmarkError, LandmarkKind, Polarity};

/// Detect periodicity landmarks. `p+` and `p-` always come in
/// interleaved pairs; a signal that is periodic up to its last sample
/// closes its final segment at the buffer end.
pub fn detect_p(audio: &AudioBuffer, cfg: &DetectorConfig) -> Result<Vec<Landmark>, LandmarkError> {
    let n = audio.samples.len();
    let frame_len = cfg.p_frame_len;
    if n < frame_len {
        return Err(BandError::AudioTooShort {
            got: n,
            need: frame_len,
        }
        .into());
    }

    let energy = periodicity_energy(&audio.samples, frame_len, cfg.p_hop);

    // Sample-and-hold up to signal length.
    let n_frames = energy.len();
    let mut upsampled = vec![0.0f64; n];
    for (s, v) in upsampled.iter_mut().enumerate() {
        *v = energy[(s / cfg.p_hop).min(n_frames - 1)];
    }

    let window = {
        let w = (cfg.p_smooth_ms / 1000.0 * audio.sample_rate as f64).round() as usize;
        (w | 1).max(1)
    };
    let smoothed = moving_average(&upsampled, window);

    let max = smoothed.iter().cloned().fold(0.0f64, f64::max);
    if max <= 1e-20 {
        return Ok(Vec::new());
    }
    let theta = cfg.p_binarize_theta * max;

    let rate = audio.sample_rate as f64;
    let mut out = Vec::new();
    let mut run_start: Option<usize> = None;
    for s in 0..=n {
        let bit = s < n && smoothed[s] > theta;
        match (run_start, bit) {
            (None, true) => run_start = Some(s),
            (Some(start), false) => {
                let peak = smoothed[start..s].iter().cloned().fold(0.0f64, f64::max) / max;
                out.push(Landmark::new(
                    LandmarkKind::P,
                    Polarity::Plus,
                    start as f64 / rate,
                    peak,
                ));
                out.push(Landmark::new(
                    LandmarkKind::P,
                    Polarity::Minus,
                    s as f64 / rate,
                    peak,
                ));
                run_start = None;
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Per-frame `E_f` values.
fn periodicity_energy(samples: &[f32], frame_len: usize, hop: usize) -> Vec<f64> {
    let n_frames = (samples.len() - frame_len) / hop + 1;
    let fft_len = (2 * frame_len).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(fft_len);
    let ifft = planner.plan_fft_inverse(fft_len);

    let mut energies = Vec::with_capacity(n_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); fft_len];
    for i in 0..n_frames {
        let start = i * hop;
        for slot in buf.iter_mut() {
            *slot = Complex::new(0.0, 0.0);
        }
        for (j, slot) in buf.iter_mut().take(frame_len).enumerate() {
            *slot = Complex::new(samples[start + j] as f64, 0.0);
        }
        fft.process(&mut buf);
        for v in buf.iter_mut() {
            *v = Complex::new(v.norm_sqr(), 0.0);
        }
        ifft.process(&mut buf);

        // buf[k].re / fft_len is the raw lag-k product sum.
        let mut e_f = 0.0f64;
        for k in 0..frame_len {
            let r = buf[k].re / fft_len as f64 / (frame_len - k) as f64;
            e_f += r * r;
        }
        energies.push(e_f / frame_len as f64);
    }
    energies
}

/// Centered moving average with truncated edges, linear domain.
fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    debug_assert!(window % 2 == 1);
    let half = window / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0f64);
    for &v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(values.len() - 1);
            (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1) as f64
        })
        .collect()
}
