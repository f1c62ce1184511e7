//! Instruction-tuning record templates.
//!
//! Two template families exist. *Hint* records teach a model what acoustic
//! landmarks are: they state the speaker's diagnosis up front and ask the
//! model to predict the landmark string from the transcript. *Detect*
//! records pose the classification question in one of three modes (text
//! only, landmarks only, or both).
//!
//! Rendering is byte-exact: the template constants below are the contract,
//! and substitution touches nothing outside the `{...}` slots.

use serde::{Deserialize, Serialize};

use crate::audio::Label;
use crate::corpus::CorpusError;

pub const HINT_DEPRESSED_TEMPLATE: &str = "Below are the speech transcripts from a person with depression.\nPlease try to predict the concatenated acoustic landmarks\ncorresponding to these transcripts.\n\n### Transcript:\n{transcript}\n\n### Acoustic Landmark:\n{landmark}";

pub const HINT_HEALTHY_TEMPLATE: &str = "Below are the speech transcripts from a healthy person.\nPlease try to predict the concatenated acoustic landmarks\ncorresponding to these transcripts.\n\n### Transcript:\n{transcript}\n\n### Acoustic Landmark:\n{landmark}";

pub const DETECT_TEXT_TEMPLATE: &str = "Categorize these dialogues as either depression or healthy based on its transcripts.\n\n### transcript:{transcript}\n\n### Response:";

pub const DETECT_LANDMARK_TEMPLATE: &str = "Categorize these dialogues as either depression or healthy based on its acoustic landmarks.\n\n### acoustic landmarks:{landmarks}\n\n### Response:";

pub const DETECT_MULTIMODAL_TEMPLATE: &str = "Categorize these dialogues as either depression or healthy based on its transcripts and acoustic landmarks.\n\n### Transcript:{transcript}\n\n### Acoustic Landmark:{landmarks}\n\n### Response:\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    HintDepressed,
    HintHealthy,
    DetectText,
    DetectLandmark,
    DetectMultimodal,
}

/// Input modality of a detect record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectMode {
    Text,
    Landmark,
    Multimodal,
}

/// One rendered training or evaluation example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub template_kind: TemplateKind,
    pub transcript: String,
    pub landmarks: String,
    pub rendered: String,
}

/// Render a hint record for a labeled sub-dialogue.
pub fn emit_hint_record(
    label: Label,
    transcript: &str,
    landmarks: &str,
) -> Result<PromptRecord, CorpusError> {
    let (template, template_kind) = match label {
        Label::Depressed => (HINT_DEPRESSED_TEMPLATE, TemplateKind::HintDepressed),
        Label::Healthy => (HINT_HEALTHY_TEMPLATE, TemplateKind::HintHealthy),
        Label::Unlabeled => return Err(CorpusError::UnlabeledDialogue(String::new())),
    };
    Ok(PromptRecord {
        template_kind,
        transcript: transcript.to_string(),
        landmarks: landmarks.to_string(),
        rendered: render(
            template,
            &[("{transcript}", transcript), ("{landmark}", landmarks)],
        ),
    })
}

/// Render a detect record. The rendered text ends at the response marker;
/// the expected answer (for training records) lives in a separate field,
/// see [`training_response`].
pub fn emit_detect_record(transcript: &str, landmarks: &str, mode: DetectMode) -> PromptRecord {
    let (template, template_kind, subs): (_, _, Vec<(&str, &str)>) = match mode {
        DetectMode::Text => (
            DETECT_TEXT_TEMPLATE,
            TemplateKind::DetectText,
            vec![("{transcript}", transcript)],
        ),
        DetectMode::Landmark => (
            DETECT_LANDMARK_TEMPLATE,
            TemplateKind::DetectLandmark,
            vec![("{landmarks}", landmarks)],
        ),
        DetectMode::Multimodal => (
            DETECT_MULTIMODAL_TEMPLATE,
            TemplateKind::DetectMultimodal,
            vec![("{transcript}", transcript), ("{landmarks}", landmarks)],
        ),
    };
    PromptRecord {
        template_kind,
        transcript: transcript.to_string(),
        landmarks: landmarks.to_string(),
        rendered: render(template, &subs),
    }
}

/// Response text for a detect training record: the template's own
/// vocabulary, `depression` or `healthy`.
pub fn training_response(label: Label) -> Result<&'static str, CorpusError> {
    match label {
        Label::Depressed => Ok("depression"),
        Label::Healthy => Ok("healthy"),
        Label::Unlabeled => Err(CorpusError::UnlabeledDialogue(String::new())),
    }
}

/// Wire format of one prompt record as written to JSONL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptLine {
    pub id: String,
    pub kind: TemplateKind,
    pub prompt: String,
    pub response: String,
    pub label: Label,
}

/// Single left-to-right pass: each placeholder is substituted where the
/// template has it, so substituted content is never rescanned.
fn render(template: &str, substitutions: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    for (placeholder, value) in substitutions {
        match rest.find(placeholder) {
            Some(ix) => {
                out.push_str(&rest[..ix]);
                out.push_str(value);
                rest = &rest[ix + placeholder.len()..];
            }
            None => debug_assert!(false, "template missing {placeholder}"),
        }
    }
    out.push_str(rest);
    out
}
