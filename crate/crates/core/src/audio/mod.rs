//! Audio and transcript ingestion.
//!
//! Everything downstream consumes the canonical in-memory forms defined
//! here: [`AudioBuffer`] for signals and [`Dialogue`] for transcripts.

mod resample;
mod transcript;
mod wav;

pub use resample::resample;
pub use transcript::{read_labels, read_transcript, ParseWarning};
pub use wav::{read_wav, write_wav};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("audio stream contains no samples")]
    EmptyAudio,
    #[error("audio too short: {got} samples, need at least {need}")]
    AudioTooShort { got: usize, need: usize },
    #[error("missing column `{0}` in transcript header")]
    MissingColumn(String),
    #[error("unparseable timestamp in row {row}: {reason}")]
    UnparseableTimestamp { row: usize, reason: String },
    #[error("dialogue `{0}` has no label entry")]
    UnknownLabel(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Mono PCM signal with its sample rate. Samples are normalized to [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f32>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Self {
        assert!(sample_rate > 0, "sample rate must be positive");
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Slice out the samples covering `[start_s, end_s)`, clamped to the
    /// buffer. Used to isolate one utterance before detection.
    pub fn slice_seconds(&self, start_s: f64, end_s: f64) -> AudioBuffer {
        let rate = self.sample_rate as f64;
        let a = ((start_s * rate).round().max(0.0) as usize).min(self.samples.len());
        let b = ((end_s * rate).round().max(0.0) as usize).min(self.samples.len());
        AudioBuffer {
            samples: self.samples[a..b.max(a)].to_vec(),
            sample_rate: self.sample_rate,
        }
    }
}

/// Who produced an utterance in a clinical interview.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Speaker {
    Participant,
    Interviewer,
}

/// Document-level diagnosis label. One per dialogue; utterances are never
/// labeled individually.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Depressed,
    Healthy,
    Unlabeled,
}

/// One transcribed turn: speaker, text, and its time span in the session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker: Speaker,
    pub text: String,
    pub start_s: f64,
    pub end_s: f64,
}

impl Utterance {
    pub fn new(speaker: Speaker, text: impl Into<String>, start_s: f64, end_s: f64) -> Self {
        assert!(end_s > start_s, "utterance must have positive duration");
        Self {
            speaker,
            text: text.into(),
            start_s,
            end_s,
        }
    }

    /// Non-verbal events (coughs, sighs) come through as empty text or
    /// bracketed markers like `<laughter>`.
    pub fn is_non_verbal(&self) -> bool {
        let t = self.text.trim();
        t.is_empty() || (t.starts_with('<') && t.ends_with('>'))
    }
}

/// A full interview session: ordered utterances plus one document label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dialogue {
    pub id: String,
    pub utterances: Vec<Utterance>,
    pub label: Label,
}

impl Dialogue {
    /// Build a dialogue, sorting utterances by start time.
    pub fn new(id: impl Into<String>, mut utterances: Vec<Utterance>, label: Label) -> Self {
        utterances.sort_by(|a, b| a.start_s.total_cmp(&b.start_s));
        Self {
            id: id.into(),
            utterances,
            label,
        }
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }
}
