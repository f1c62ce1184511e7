use std::collections::HashMap;
use std::path::Path;

use super::{AudioError, Dialogue, Label, Speaker, Utterance};

/// Non-fatal issue found while parsing a transcript. Overlapping utterances
/// are common in interview corpora and are reported rather than rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseWarning {
    Overlap { row: usize, prev_end: f64, start: f64 },
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseWarning::Overlap { row, prev_end, start } => write!(
                f,
                "row {row}: utterance starts at {start}s before previous ends at {prev_end}s"
            ),
        }
    }
}

/// Parse an interview transcript (CSV or TSV) into a [`Dialogue`].
///
/// Expects header columns `start_time`, `stop_time`, `speaker`, `value`
/// in any order; the delimiter is sniffed from the header line. The label
/// is left `Unlabeled` — labels ship in a separate file, see [`read_labels`].
pub fn read_transcript(
    path: impl AsRef<Path>,
) -> Result<(Dialogue, Vec<ParseWarning>), AudioError> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path)?;
    let delimiter = sniff_delimiter(&raw);

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(raw.as_bytes());

    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize, AudioError> {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| AudioError::MissingColumn(name.to_string()))
    };
    let c_start = col("start_time")?;
    let c_stop = col("stop_time")?;
    let c_speaker = col("speaker")?;
    let c_value = col("value")?;

    let mut utterances = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2; // 1-based, counting the header line
        let start_s = parse_time(record.get(c_start), row)?;
        let end_s = parse_time(record.get(c_stop), row)?;
        if end_s <= start_s {
            return Err(AudioError::UnparseableTimestamp {
                row,
                reason: format!("stop_time {end_s} is not after start_time {start_s}"),
            });
        }
        let speaker = match record.get(c_speaker).unwrap_or("") {
            s if s.eq_ignore_ascii_case("participant") => Speaker::Participant,
            _ => Speaker::Interviewer,
        };
        let text = record.get(c_value).unwrap_or("").to_string();
        utterances.push(Utterance {
            speaker,
            text,
            start_s,
            end_s,
        });
    }

    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let dialogue = Dialogue::new(id, utterances, Label::Unlabeled);

    let mut warnings = Vec::new();
    for (i, pair) in dialogue.utterances.windows(2).enumerate() {
        if pair[1].start_s < pair[0].end_s {
            warnings.push(ParseWarning::Overlap {
                row: i + 2,
                prev_end: pair[0].end_s,
                start: pair[1].start_s,
            });
        }
    }

    Ok((dialogue, warnings))
}

/// Read the two-column label file (`id,label` with label 0 = healthy,
/// 1 = depressed). A header row is skipped if present.
pub fn read_labels(path: impl AsRef<Path>) -> Result<HashMap<String, Label>, AudioError> {
    let raw = std::fs::read_to_string(path.as_ref())?;
    let delimiter = sniff_delimiter(&raw);
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .has_headers(false)
        .from_reader(raw.as_bytes());

    let mut labels = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let id = record.get(0).unwrap_or("").to_string();
        let value = record.get(1).unwrap_or("");
        if i == 0 && value.parse::<u8>().is_err() {
            continue; // header row
        }
        let label = match value {
            "0" => Label::Healthy,
            "1" => Label::Depressed,
            other => {
                return Err(AudioError::UnparseableTimestamp {
                    row: i + 1,
                    reason: format!("label must be 0 or 1, got `{other}`"),
                })
            }
        };
        labels.insert(id, label);
    }
    Ok(labels)
}

fn sniff_delimiter(raw: &str) -> u8 {
    let first_line = raw.lines().next().unwrap_or("");
    if first_line.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

fn parse_time(field: Option<&str>, row: usize) -> Result<f64, AudioError> {
    let s = field.unwrap_or("");
    let v: f64 = s.parse().map_err(|_| AudioError::UnparseableTimestamp {
        row,
        reason: format!("`{s}` is not a number"),
    })?;
    if !v.is_finite() || v < 0.0 {
        return Err(AudioError::UnparseableTimestamp {
            row,
            reason: format!("time {v} out of range"),
        });
    }
    Ok(v)
}
