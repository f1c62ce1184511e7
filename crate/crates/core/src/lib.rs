//! Speech discretization via acoustic landmarks, plus the corpus tooling
//! that turns landmark streams into training data for language models.
//!
//! The pipeline has three legs:
//!
//! 1. **Detection** — [`audio`] ingests WAV files and transcripts, [`band`]
//!    turns audio into six-band log-energy tracks with coarse/fine smoothing
//!    and differentiation, [`peaks`] finds significant maxima, and
//!    [`landmark`] applies the per-landmark decision rules to emit a
//!    time-ordered [`landmark::LandmarkSequence`].
//! 2. **Tokenization** — [`token`] merges consecutive landmarks into bigram
//!    tokens and maintains the vocabulary they induce.
//! 3. **Corpus construction & analysis** — [`corpus`] balances and augments
//!    labeled dialogues by sub-dialogue shuffling, [`prompt`] renders the
//!    instruction-tuning record templates, and [`eval`] scores adapter-matrix
//!    contributions, majority-vote ensembles, and F1.
//!
//! Everything is deterministic: detection is a pure function of audio and
//! configuration, and all sampling flows from an explicit seed.

pub mod audio;
pub mod band;
pub mod corpus;
pub mod eval;
pub mod landmark;
pub mod peaks;
pub mod prompt;
pub mod synth;
pub mod token;

/// Canonical processing rate in Hz. Band 6 extends to 8 kHz, so detection
/// needs at least a 16 kHz Nyquist-compliant signal.
pub const CANONICAL_RATE: u32 = 16_000;
