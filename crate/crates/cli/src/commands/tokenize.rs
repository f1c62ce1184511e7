use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use landmark_core::landmark::{Landmark, LandmarkSequence};
use landmark_core::token::{build_vocabulary, merge_bigrams, render_token_string, BigramToken};

use super::{ExtractRecord, TokensRecord};
use crate::config::Settings;
use crate::error::CliError;

#[derive(Args)]
pub struct TokenizeArgs {
    /// Landmark JSONL produced by `extract`.
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Output JSONL of merged bigram tokens, one record per input line.
    #[arg(long)]
    pub out: PathBuf,

    /// Vocabulary file: `surface<TAB>count`, first-appearance order.
    #[arg(long)]
    pub vocab: PathBuf,
}

pub fn run(args: TokenizeArgs, _settings: &Settings) -> Result<(), CliError> {
    let raw = std::fs::read_to_string(&args.input)?;
    let mut corpus: Vec<Vec<BigramToken>> = Vec::new();
    let mut out = std::io::BufWriter::new(std::fs::File::create(&args.out)?);

    for (lineno, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ExtractRecord = serde_json::from_str(line).map_err(|e| {
            CliError::data(format!("{} line {}: {e}", args.input.display(), lineno + 1))
        })?;
        let tokens = merge_label_stream(&record.token_string).map_err(|msg| {
            CliError::data(format!("{} line {}: {msg}", args.input.display(), lineno + 1))
        })?;
        let rendered = TokensRecord {
            id: record.id,
            tokens: tokens.iter().map(|t| t.surface()).collect(),
            token_string: render_token_string(&tokens),
        };
        serde_json::to_writer(&mut out, &rendered)?;
        out.write_all(b"\n")?;
        corpus.push(tokens);
    }
    out.flush()?;

    let vocab = build_vocabulary(&corpus);
    std::fs::write(&args.vocab, vocab.to_file_string())?;
    Ok(())
}

/// Parse a space-separated landmark label stream (`g+ p- ...`) and merge
/// it into bigram tokens.
pub fn merge_label_stream(stream: &str) -> Result<Vec<BigramToken>, String> {
    let landmarks: Vec<Landmark> = stream
        .split_whitespace()
        .enumerate()
        .map(|(i, label)| {
            Landmark::parse_label(label)
                .map(|(kind, polarity)| Landmark::new(kind, polarity, i as f64, 0.0))
                .ok_or_else(|| format!("unknown landmark label `{label}`"))
        })
        .collect::<Result<_, _>>()?;
    let count = landmarks.len() as f64;
    let seq = LandmarkSequence::new(landmarks, "", (0.0, count));
    Ok(merge_bigrams(&seq))
}
