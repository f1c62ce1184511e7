//! Acoustic landmark detection.
//!
//! Six landmark kinds are detected from band-energy changes, each signed
//! with a `+` (onset) or `-` (offset) polarity:
//!
//! | kind | event |
//! |------|-------|
//! | `g`  | vocal-fold vibration starts / ends |
//! | `b`  | turbulent-noise onset / offset in obstruent (unvoiced) regions |
//! | `s`  | nasal release / closure in voiced regions |
//! | `v`  | voiced frication onset / offset |
//! | `p`  | sustained periodicity starts / ends |
//! | `f`  | frication onset / offset |
//!
//! `g`, `b`, and `s` fire when the coarse and fine derivative tracks agree
//! on a band-energy jump; `f`/`v` require high-band rises paired with
//! low-band falls; `p` comes from framewise autocorrelation energy. After
//! detection, `g` candidates are paired by dynamic programming so voiced
//! segments are well formed, and `b`/`s`/`f`/`v` are gated by voicing.

mod detect;
mod periodicity;

pub use detect::{detect_b, detect_f_v, detect_g, detect_s, pair_g, prepare_tracks, DetectionTracks};
pub use periodicity::detect_p;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audio::AudioBuffer;
use crate::band::{BandError, FrameConfig};

#[derive(Debug, Error)]
pub enum LandmarkError {
    #[error(transparent)]
    Band(#[from] BandError),
}

/// The six landmark kinds, in canonical tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LandmarkKind {
    G,
    B,
    S,
    V,
    P,
    F,
}

impl LandmarkKind {
    pub const ALL: [LandmarkKind; 6] = [
        LandmarkKind::G,
        LandmarkKind::B,
        LandmarkKind::S,
        LandmarkKind::V,
        LandmarkKind::P,
        LandmarkKind::F,
    ];

    pub fn symbol(self) -> char {
        match self {
            LandmarkKind::G => 'g',
            LandmarkKind::B => 'b',
            LandmarkKind::S => 's',
            LandmarkKind::V => 'v',
            LandmarkKind::P => 'p',
            LandmarkKind::F => 'f',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'g' => Some(LandmarkKind::G),
            'b' => Some(LandmarkKind::B),
            's' => Some(LandmarkKind::S),
            'v' => Some(LandmarkKind::V),
            'p' => Some(LandmarkKind::P),
            'f' => Some(LandmarkKind::F),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Polarity {
    pub fn sign(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

/// One time-stamped landmark event.
///
/// `strength` records what triggered the event: the fine-pass derivative
/// peak height in dB for `g`, the mean supporting-band peak height for
/// `b`/`s`/`f`/`v`, and the segment's relative periodicity energy (0..1]
/// for `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Landmark {
    pub kind: LandmarkKind,
    pub polarity: Polarity,
    pub time_s: f64,
    pub strength: f64,
}

impl Landmark {
    pub fn new(kind: LandmarkKind, polarity: Polarity, time_s: f64, strength: f64) -> Self {
        Self {
            kind,
            polarity,
            time_s,
            strength,
        }
    }

    /// Two-character label, e.g. `g+`.
    pub fn label(&self) -> String {
        format!("{}{}", self.kind.symbol(), self.polarity.sign())
    }

    /// Parse a two-character label like `p-`.
    pub fn parse_label(s: &str) -> Option<(LandmarkKind, Polarity)> {
        let mut chars = s.chars();
        let kind = LandmarkKind::from_symbol(chars.next()?)?;
        let polarity = match chars.next()? {
            '+' => Polarity::Plus,
            '-' => Polarity::Minus,
            _ => return None,
        };
        if chars.next().is_some() {
            return None;
        }
        Some((kind, polarity))
    }

    fn sort_key(&self) -> (f64, u8, u8) {
        let kind_rank = LandmarkKind::ALL.iter().position(|&k| k == self.kind).unwrap() as u8;
        let pol_rank = match self.polarity {
            Polarity::Plus => 0,
            Polarity::Minus => 1,
        };
        (self.time_s, kind_rank, pol_rank)
    }
}

/// Landmarks of one source, in temporal order (ties broken by kind order
/// g, b, s, v, p, f, then polarity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkSequence {
    pub landmarks: Vec<Landmark>,
    pub source_id: String,
    pub span: (f64, f64),
}

impl LandmarkSequence {
    pub fn new(mut landmarks: Vec<Landmark>, source_id: impl Into<String>, span: (f64, f64)) -> Self {
        landmarks.sort_by(|a, b| {
            let (ta, ka, pa) = a.sort_key();
            let (tb, kb, pb) = b.sort_key();
            ta.total_cmp(&tb).then(ka.cmp(&kb)).then(pa.cmp(&pb))
        });
        Self {
            landmarks,
            source_id: source_id.into(),
            span,
        }
    }

    pub fn len(&self) -> usize {
        self.landmarks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.landmarks.is_empty()
    }

    /// Space-separated label string, e.g. `g+ p- s+`.
    pub fn token_string(&self) -> String {
        self.landmarks
            .iter()
            .map(|lm| lm.label())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Voiced intervals, built from paired `g` landmarks: `g+` opens a segment,
/// the matching `g-` closes it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VoicingSegments {
    segments: Vec<(f64, f64)>,
}

impl VoicingSegments {
    /// Build from explicit intervals; they are sorted and must be disjoint.
    pub fn from_intervals(mut segments: Vec<(f64, f64)>) -> Self {
        segments.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in segments.windows(2) {
            assert!(pair[0].1 <= pair[1].0, "voiced segments must be disjoint");
        }
        Self { segments }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn is_voiced(&self, t: f64) -> bool {
        self.segments.iter().any(|&(a, b)| t >= a && t <= b)
    }
}

/// All knobs of the detection pipeline.
///
/// The coarse/fine thresholds apply to `g` (band 1); the multiband
/// threshold applies to `b`/`s` and the high-band side of `f`/`v` in both
/// passes. The low-band side of `f`/`v` accepts any decrease deeper than
/// `low_band_decrease_db` (0 = any decrease at all).
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub frame: FrameConfig,
    /// Coarse-pass moving-average length in frames; forced odd.
    pub coarse_smooth_frames: usize,
    /// Fine-pass moving-average length in frames; forced odd.
    pub fine_smooth_frames: usize,
    /// Coarse differentiation offset in milliseconds.
    pub coarse_dt_ms: f64,
    /// Fine differentiation offset in milliseconds.
    pub fine_dt_ms: f64,
    /// Coarse-pass g threshold in dB.
    pub coarse_threshold_db: f64,
    /// Fine-pass g threshold in dB.
    pub fine_threshold_db: f64,
    /// Per-band jump threshold for b/s/f/v in dB, both passes.
    pub multiband_threshold_db: f64,
    /// Minimum low-band decrease for f/v in dB. Setting 0 accepts any
    /// decrease at all, but band-energy ripple makes that vacuous on real
    /// audio; the default stays below the multiband threshold so the low
    /// side is the laxer clause.
    pub low_band_decrease_db: f64,
    /// How close two events must be to count as simultaneous.
    pub coincidence_window_ms: f64,
    /// Minimum separation between peaks fed to the landmark rules.
    pub peak_min_distance_ms: f64,
    /// Prominence floor for derivative peaks in dB.
    pub peak_min_prominence_db: f64,
    /// Autocorrelation frame length in samples.
    pub p_frame_len: usize,
    /// Autocorrelation frame shift in samples.
    pub p_hop: usize,
    /// Moving-average length applied to the upsampled periodicity energy.
    pub p_smooth_ms: f64,
    /// Binarization threshold as a fraction of the maximum smoothed
    /// periodicity energy.
    pub p_binarize_theta: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            frame: FrameConfig::default(),
            coarse_smooth_frames: 21,
            fine_smooth_frames: 11,
            coarse_dt_ms: 50.0,
            fine_dt_ms: 26.0,
            coarse_threshold_db: 8.0,
            fine_threshold_db: 5.0,
            multiband_threshold_db: 6.0,
            low_band_decrease_db: 3.0,
            coincidence_window_ms: 20.0,
            peak_min_distance_ms: 30.0,
            peak_min_prominence_db: 0.0,
            p_frame_len: 480,
            p_hop: 160,
            p_smooth_ms: 10.0,
            p_binarize_theta: 0.1,
        }
    }
}

impl DetectorConfig {
    /// Panics if a threshold or window is out of range.
    pub fn validate(&self) {
        assert!(self.coarse_threshold_db > 0.0);
        assert!(self.fine_threshold_db > 0.0);
        assert!(self.multiband_threshold_db > 0.0);
        assert!(self.low_band_decrease_db >= 0.0);
        assert!(self.coincidence_window_ms > 0.0);
        assert!(self.p_binarize_theta > 0.0 && self.p_binarize_theta < 1.0);
        assert!(self.p_hop > 0 && self.p_hop <= self.p_frame_len);
    }
}

/// Run the full detection pipeline on one buffer.
///
/// Band energies are computed once; `g` candidates are paired into voiced
/// segments; the remaining detectors run against those segments; and all
/// landmarks merge into one sorted [`LandmarkSequence`]. Deterministic for
/// a fixed configuration.
pub fn extract_landmarks(
    audio: &AudioBuffer,
    cfg: &DetectorConfig,
) -> Result<LandmarkSequence, LandmarkError> {
    extract_landmarks_with_id(audio, cfg, "")
}

/// [`extract_landmarks`] with an explicit source id attached to the output.
pub fn extract_landmarks_with_id(
    audio: &AudioBuffer,
    cfg: &DetectorConfig,
    source_id: &str,
) -> Result<LandmarkSequence, LandmarkError> {
    cfg.validate();
    let tracks = prepare_tracks(audio, cfg)?;
    let candidates = detect_g(&tracks, cfg);
    let (paired, segments) = pair_g(&candidates);

    let mut all = paired;
    all.extend(detect_b(&tracks, &segments, cfg));
    all.extend(detect_s(&tracks, &segments, cfg));
    all.extend(detect_f_v(&tracks, &segments, cfg));
    all.extend(detect_p(audio, cfg)?);

    Ok(LandmarkSequence::new(
        all,
        source_id,
        (0.0, audio.duration_s()),
    ))
}
