pub mod analyze;
pub mod augment;
pub mod emit;
pub mod extract;
pub mod score;
pub mod tokenize;

use serde::{Deserialize, Serialize};

/// One landmark event on the wire: time in seconds and a label like `g+`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LandmarkJson {
    pub t: f64,
    pub lm: String,
}

/// Landmark stream of one utterance, by utterance index in the transcript.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UtteranceLandmarks {
    pub index: usize,
    pub start_s: f64,
    pub end_s: f64,
    pub token_string: String,
}

/// One `extract` output line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractRecord {
    pub id: String,
    pub landmarks: Vec<LandmarkJson>,
    pub token_string: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utterances: Option<Vec<UtteranceLandmarks>>,
}

/// One `tokenize` output line.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TokensRecord {
    pub id: String,
    pub tokens: Vec<String>,
    pub token_string: String,
}
