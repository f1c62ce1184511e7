//! Six-band log-energy tracks and their smoothed/differentiated versions.
//!
//! The spectrogram is split into six fixed frequency bands. Per frame, a
//! band's energy is the sum of power-spectrum bins whose center frequency
//! falls inside the band, floored at a silence epsilon before conversion
//! to dB. Each band track is then processed twice — a coarse pass and a
//! fine pass — by a centered moving average in the linear-power domain:
//!
//! ```text
//! L_b[n] = 10 * log10( mean(E_b[n-N ..= n+N]) )
//! ```
//!
//! followed by a forward difference re-centered on the change:
//!
//! ```text
//! D_b[n] = L_b[n+dt] - L_b[n],   then   D_b[n] <- D_b[n - floor(dt/2)]
//! ```
//!
//! Landmark detectors consume the derivative tracks; a positive peak is an
//! abrupt energy rise in that band at that scale.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::audio::AudioBuffer;

/// Band edges in Hz. Bands 2 and 3 overlap; the table is used as printed.
pub const BAND_EDGES: [(f64, f64); 6] = [
    (0.0, 400.0),
    (800.0, 1500.0),
    (1200.0, 2000.0),
    (2000.0, 3500.0),
    (3500.0, 5000.0),
    (5000.0, 8000.0),
];

/// Linear-power floor applied before taking logs, i.e. -100 dB.
pub const SILENCE_EPS: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum BandError {
    #[error("audio too short: {got} samples, need at least {need} for one frame")]
    AudioTooShort { got: usize, need: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Hann,
    Rect,
}

/// Analysis frame geometry. Defaults to 16 ms frames hopped every 1 ms at
/// 16 kHz so landmark times resolve to the millisecond.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameConfig {
    pub frame_len: usize,
    pub hop: usize,
    pub window: WindowKind,
}

impl FrameConfig {
    pub fn new(frame_len: usize, hop: usize, window: WindowKind) -> Self {
        assert!(hop > 0 && hop <= frame_len, "need 0 < hop <= frame_len");
        Self {
            frame_len,
            hop,
            window,
        }
    }
}

impl Default for FrameConfig {
    fn default() -> Self {
        // 16 ms / 1 ms at the 16 kHz canonical rate.
        Self::new(256, 16, WindowKind::Hann)
    }
}

/// Coarse or fine processing pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pass {
    Coarse,
    Fine,
}

/// Per-frame log energies (dB) in the six bands.
#[derive(Debug, Clone, PartialEq)]
pub struct BandEnergyTrack {
    pub bands: [Vec<f64>; 6],
    pub band_edges: [(f64, f64); 6],
    pub sample_rate: u32,
    pub frame_len: usize,
    pub hop: usize,
}

impl BandEnergyTrack {
    pub fn n_frames(&self) -> usize {
        self.bands[0].len()
    }

    /// Frames per second.
    pub fn frame_rate(&self) -> f64 {
        self.sample_rate as f64 / self.hop as f64
    }

    /// Time of a frame's center.
    pub fn frame_time_s(&self, frame: usize) -> f64 {
        (frame * self.hop + self.frame_len / 2) as f64 / self.sample_rate as f64
    }

    /// Convert a duration in milliseconds to a whole number of frames,
    /// at least one.
    pub fn ms_to_frames(&self, ms: f64) -> usize {
        ((ms / 1000.0 * self.frame_rate()).round() as usize).max(1)
    }
}

/// A band track after one smoothing pass.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedTrack {
    pub values: Vec<f64>,
    pub pass: Pass,
    pub window: usize,
}

/// A smoothed track after centered differentiation.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTrack {
    pub values: Vec<f64>,
    pub dt: usize,
    pub pass: Pass,
}

/// Compute the six-band dB energy track of a mono buffer.
///
/// Frames shorter than the buffer are an error; every returned band has
/// `(len - frame_len) / hop + 1` frames.
pub fn compute_band_energies(
    audio: &AudioBuffer,
    cfg: FrameConfig,
) -> Result<BandEnergyTrack, BandError> {
    let n = audio.samples.len();
    if n < cfg.frame_len {
        return Err(BandError::AudioTooShort {
            got: n,
            need: cfg.frame_len,
        });
    }
    let n_frames = (n - cfg.frame_len) / cfg.hop + 1;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(cfg.frame_len);

    let window: Vec<f64> = match cfg.window {
        WindowKind::Rect => vec![1.0; cfg.frame_len],
        WindowKind::Hann => (0..cfg.frame_len)
            .map(|i| {
                let phase = 2.0 * std::f64::consts::PI * i as f64 / cfg.frame_len as f64;
                0.5 * (1.0 - phase.cos())
            })
            .collect(),
    };

    // Map each one-sided bin to the band containing its center frequency.
    let bin_hz = audio.sample_rate as f64 / cfg.frame_len as f64;
    let n_bins = cfg.frame_len / 2 + 1;
    let bin_bands: Vec<Vec<usize>> = (0..n_bins)
        .map(|k| {
            let f = k as f64 * bin_hz;
            BAND_EDGES
                .iter()
                .enumerate()
                .filter(|(_, (lo, hi))| f >= *lo && f <= *hi)
                .map(|(b, _)| b)
                .collect()
        })
        .collect();

    let mut bands: [Vec<f64>; 6] = std::array::from_fn(|_| vec![0.0f64; n_frames]);
    let mut buf = vec![Complex::new(0.0, 0.0); cfg.frame_len];

    for frame in 0..n_frames {
        let start = frame * cfg.hop;
        for (i, slot) in buf.iter_mut().enumerate() {
            *slot = Complex::new(audio.samples[start + i] as f64 * window[i], 0.0);
        }
        fft.process(&mut buf);

        let mut energy = [0.0f64; 6];
        for (k, bs) in bin_bands.iter().enumerate() {
            if bs.is_empty() {
                continue;
            }
            let power = buf[k].norm_sqr();
            for &b in bs {
                energy[b] += power;
            }
        }
        for b in 0..6 {
            bands[b][frame] = 10.0 * energy[b].max(SILENCE_EPS).log10();
        }
    }

    Ok(BandEnergyTrack {
        bands,
        band_edges: BAND_EDGES,
        sample_rate: audio.sample_rate,
        frame_len: cfg.frame_len,
        hop: cfg.hop,
    })
}

/// Centered moving average in the linear-power domain.
///
/// `window` must be odd; edge frames average over the truncated window.
/// Input and output are dB: each value is converted to linear power, the
/// window mean is taken, and the mean goes back through `10 * log10`.
pub fn smooth(track: &[f64], window: usize, pass: Pass) -> SmoothedTrack {
    assert!(window % 2 == 1 && window >= 1, "window must be odd and >= 1");
    let half = window / 2;
    let linear: Vec<f64> = track.iter().map(|&db| 10f64.powf(db / 10.0)).collect();

    let values = (0..track.len())
        .map(|n| {
            let lo = n.saturating_sub(half);
            let hi = (n + half).min(track.len().saturating_sub(1));
            let mean = linear[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64;
            10.0 * mean.log10()
        })
        .collect();

    SmoothedTrack {
        values,
        pass,
        window,
    }
}

/// Forward difference at lag `dt`, re-centered by `floor(dt/2)` so the
/// response sits on the change. Positions without a defined value are zero.
pub fn differentiate(track: &SmoothedTrack, dt: usize) -> DerivativeTrack {
    assert!(dt >= 1, "dt must be at least 1");
    let len = track.values.len();
    let mut raw = vec![0.0f64; len];
    for n in 0..len.saturating_sub(dt) {
        raw[n] = track.values[n + dt] - track.values[n];
    }

    let shift = dt / 2;
    let mut values = vec![0.0f64; len];
    values[shift..len].copy_from_slice(&raw[..len - shift]);

    DerivativeTrack {
        values,
        dt,
        pass: track.pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn silence_pins_every_band_at_floor() {
        let audio = AudioBuffer::new(vec![0.0; 16_000], 16_000);
        let track = compute_band_energies(&audio, FrameConfig::default()).unwrap();
        let floor = 10.0 * SILENCE_EPS.log10();
        for band in &track.bands {
            assert!(band.iter().all(|&v| v == floor), "band not at {floor} dB");
        }
    }

    #[test]
    fn too_short_audio_is_an_error() {
        let audio = AudioBuffer::new(vec![0.0; 100], 16_000);
        assert!(matches!(
            compute_band_energies(&audio, FrameConfig::default()),
            Err(BandError::AudioTooShort { .. })
        ));
    }

    #[test]
    fn frame_count_and_times() {
        let audio = AudioBuffer::new(vec![0.0; 16_000], 16_000);
        let track = compute_band_energies(&audio, FrameConfig::default()).unwrap();
        assert_eq!(track.n_frames(), (16_000 - 256) / 16 + 1);
        assert!((track.frame_time_s(0) - 0.008).abs() < 1e-12);
        assert!((track.frame_rate() - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_constant_is_identity() {
        let track = vec![-37.5; 64];
        for window in [1, 5, 21] {
            let s = smooth(&track, window, Pass::Coarse);
            for v in &s.values {
                assert!((v - -37.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn smooth_window_one_is_identity() {
        let track: Vec<f64> = (0..32).map(|i| (i as f64).sin() * 20.0 - 50.0).collect();
        let s = smooth(&track, 1, Pass::Fine);
        for (a, b) in s.values.iter().zip(&track) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn smooth_impulse_spreads_to_fifth() {
        // Unit linear power at one frame, floor elsewhere: the window-5 mean
        // is (1 + 4 eps) / 5 across the five covering frames.
        let floor = 10.0 * SILENCE_EPS.log10();
        let mut track = vec![floor; 21];
        track[10] = 0.0; // 1.0 in linear power
        let s = smooth(&track, 5, Pass::Fine);
        for n in 8..=12 {
            let linear = 10f64.powf(s.values[n] / 10.0);
            assert!(
                (linear - (1.0 + 4.0 * SILENCE_EPS) / 5.0).abs() < 1e-12,
                "frame {n}: {linear}"
            );
        }
        let outside = 10f64.powf(s.values[7] / 10.0);
        assert!((outside - SILENCE_EPS).abs() < 1e-15);
    }

    #[test]
    fn differentiate_constant_is_zero() {
        let s = smooth(&vec![-20.0; 50], 5, Pass::Coarse);
        let d = differentiate(&s, 8);
        assert!(d.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn differentiate_ramp_is_slope_times_dt() {
        let slope = 0.75;
        let track: Vec<f64> = (0..60).map(|n| slope * n as f64).collect();
        let s = SmoothedTrack {
            values: track,
            pass: Pass::Fine,
            window: 1,
        };
        let dt = 6;
        let d = differentiate(&s, dt);
        // Interior frames: shift consumes dt/2 at the head, the forward
        // difference dt at the tail.
        for n in dt / 2..60 - dt + dt / 2 {
            assert!(
                (d.values[n] - slope * dt as f64).abs() < 1e-9,
                "frame {n}: {}",
                d.values[n]
            );
        }
        assert_eq!(d.values[0], 0.0);
        assert_eq!(d.values[59], 0.0);
    }

    #[test]
    fn tone_dominates_its_band() {
        let audio = synth::sine(200.0, 16_000, 1.0, 0.5);
        let track = compute_band_energies(&audio, FrameConfig::default()).unwrap();
        // Steady-state frames away from edges.
        for frame in 200..800 {
            let b1 = track.bands[0][frame];
            for b in 1..6 {
                assert!(
                    b1 - track.bands[b][frame] >= 20.0,
                    "frame {frame}, band {b}: {} vs {}",
                    b1,
                    track.bands[b][frame]
                );
            }
        }
    }
}
