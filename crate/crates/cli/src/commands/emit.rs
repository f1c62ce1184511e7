use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use landmark_core::audio::{read_transcript, Dialogue, Speaker};
use landmark_core::corpus::SubDialogueRecord;
use landmark_core::prompt::{
    emit_detect_record, emit_hint_record, training_response, DetectMode, PromptLine,
};
use landmark_core::token::render_token_string;

use super::{ExtractRecord, UtteranceLandmarks};
use crate::commands::tokenize::merge_label_stream;
use crate::config::Settings;
use crate::error::CliError;

#[derive(Args)]
pub struct EmitArgs {
    /// Sub-dialogue JSONL from `augment`.
    #[arg(long)]
    pub subdialogues: PathBuf,

    /// Transcript directory (same ids as the sub-dialogues' parents).
    #[arg(long)]
    pub transcripts: PathBuf,

    /// `extract --transcripts` output carrying per-utterance landmark
    /// streams. Without it, landmark fields render empty.
    #[arg(long)]
    pub landmarks: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub template: TemplateArg,

    /// Input modality for detect records; ignored for hint records.
    #[arg(long, value_enum, default_value_t = ModeArg::Multimodal)]
    pub mode: ModeArg,

    /// Leave the response field empty instead of filling the label word.
    #[arg(long)]
    pub inference: bool,

    /// Which turns the transcript field carries.
    #[arg(long, value_enum, default_value_t = SpeakersArg::Participant)]
    pub speakers: SpeakersArg,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TemplateArg {
    Hint,
    Detect,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Text,
    Landmark,
    Multimodal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpeakersArg {
    Participant,
    All,
}

pub fn run(args: EmitArgs, _settings: &Settings) -> Result<(), CliError> {
    let subs = load_subdialogues(&args.subdialogues)?;
    let landmark_map = match &args.landmarks {
        Some(path) => load_landmark_map(path)?,
        None => HashMap::new(),
    };

    let mut transcripts: HashMap<String, Dialogue> = HashMap::new();
    let mut out = std::io::BufWriter::new(std::fs::File::create(&args.out)?);

    for sub in &subs {
        if !transcripts.contains_key(&sub.parent_id) {
            let dialogue = load_transcript(&args.transcripts, &sub.parent_id)?;
            transcripts.insert(sub.parent_id.clone(), dialogue);
        }
        let parent = &transcripts[&sub.parent_id];
        if sub.end_idx >= parent.len() {
            return Err(CliError::data(format!(
                "sub-dialogue {} spans utterances {}..{} but `{}` has {}",
                sub.id,
                sub.start_idx,
                sub.end_idx,
                sub.parent_id,
                parent.len()
            )));
        }

        let transcript = render_transcript(parent, sub, args.speakers);
        let landmarks = render_landmarks(&landmark_map, sub)?;

        let (kind, prompt, response) = match args.template {
            TemplateArg::Hint => {
                let record = emit_hint_record(sub.label, &transcript, &landmarks)
                    .map_err(|_| CliError::data(format!("sub-dialogue {} is unlabeled", sub.id)))?;
                (record.template_kind, record.rendered, String::new())
            }
            TemplateArg::Detect => {
                let mode = match args.mode {
                    ModeArg::Text => DetectMode::Text,
                    ModeArg::Landmark => DetectMode::Landmark,
                    ModeArg::Multimodal => DetectMode::Multimodal,
                };
                let record = emit_detect_record(&transcript, &landmarks, mode);
                let response = if args.inference {
                    String::new()
                } else {
                    training_response(sub.label)
                        .map_err(|_| CliError::data(format!("sub-dialogue {} is unlabeled", sub.id)))?
                        .to_string()
                };
                (record.template_kind, record.rendered, response)
            }
        };

        let line = PromptLine {
            id: sub.id.clone(),
            kind,
            prompt,
            response,
            label: sub.label,
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn load_subdialogues(path: &Path) -> Result<Vec<SubDialogueRecord>, CliError> {
    let raw = std::fs::read_to_string(path)?;
    raw.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(lineno, line)| {
            serde_json::from_str(line)
                .map_err(|e| CliError::data(format!("{} line {}: {e}", path.display(), lineno + 1)))
        })
        .collect()
}

fn load_landmark_map(path: &Path) -> Result<HashMap<String, Vec<UtteranceLandmarks>>, CliError> {
    let raw = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ExtractRecord = serde_json::from_str(line)
            .map_err(|e| CliError::data(format!("{} line {}: {e}", path.display(), lineno + 1)))?;
        let utterances = record.utterances.ok_or_else(|| {
            CliError::data(format!(
                "{} line {}: record `{}` has no per-utterance landmarks (rerun extract with --transcripts)",
                path.display(),
                lineno + 1,
                record.id
            ))
        })?;
        map.insert(record.id, utterances);
    }
    Ok(map)
}

fn load_transcript(dir: &Path, id: &str) -> Result<Dialogue, CliError> {
    let path = ["csv", "tsv"]
        .iter()
        .map(|ext| dir.join(format!("{id}.{ext}")))
        .find(|p| p.exists())
        .ok_or_else(|| {
            CliError::usage(format!("no transcript {id}.csv or {id}.tsv in {}", dir.display()))
        })?;
    let (dialogue, _warnings) = read_transcript(&path)?;
    Ok(dialogue)
}

fn render_transcript(parent: &Dialogue, sub: &SubDialogueRecord, speakers: SpeakersArg) -> String {
    parent.utterances[sub.start_idx..=sub.end_idx]
        .iter()
        .filter(|u| speakers == SpeakersArg::All || u.speaker == Speaker::Participant)
        .map(|u| match speakers {
            SpeakersArg::Participant => u.text.clone(),
            SpeakersArg::All => {
                let who = match u.speaker {
                    Speaker::Participant => "Participant",
                    Speaker::Interviewer => "Interviewer",
                };
                format!("{who}: {}", u.text)
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Concatenate the sub-dialogue's per-utterance landmark streams and merge
/// them into bigram tokens.
fn render_landmarks(
    map: &HashMap<String, Vec<UtteranceLandmarks>>,
    sub: &SubDialogueRecord,
) -> Result<String, CliError> {
    let Some(utterances) = map.get(&sub.parent_id) else {
        return Ok(String::new());
    };
    let stream = utterances
        .iter()
        .filter(|u| u.index >= sub.start_idx && u.index <= sub.end_idx)
        .map(|u| u.token_string.as_str())
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    let tokens = merge_label_stream(&stream)
        .map_err(|msg| CliError::data(format!("sub-dialogue {}: {msg}", sub.id)))?;
    Ok(render_token_string(&tokens))
}
