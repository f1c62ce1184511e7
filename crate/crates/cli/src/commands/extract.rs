use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use landmark_core::audio::{read_transcript, read_wav, resample, AudioBuffer, Speaker};
use landmark_core::band::compute_band_energies;
use landmark_core::landmark::extract_landmarks_with_id;
use landmark_core::CANONICAL_RATE;

use super::{ExtractRecord, LandmarkJson, UtteranceLandmarks};
use crate::config::Settings;
use crate::error::CliError;
use crate::jobs;

#[derive(Args)]
pub struct ExtractArgs {
    /// WAV file or directory of WAV files.
    #[arg(long)]
    pub audio: PathBuf,

    /// Output JSONL, one record per input file.
    #[arg(long)]
    pub out: PathBuf,

    /// Transcript directory; when given, landmarks are also extracted per
    /// participant utterance and attached to each record.
    #[arg(long)]
    pub transcripts: Option<PathBuf>,

    /// Write per-file band-energy CSVs (frame_index,b1..b6) here.
    #[arg(long)]
    pub dump_bands: Option<PathBuf>,

    /// Report per-file failures on stderr and keep processing.
    #[arg(long)]
    pub keep_going: bool,
}

pub fn run(args: ExtractArgs, settings: &Settings) -> Result<(), CliError> {
    let files = collect_wavs(&args.audio)?;
    if files.is_empty() {
        eprintln!("warning: no .wav files under {}", args.audio.display());
        std::fs::write(&args.out, "")?;
        return Ok(());
    }
    if let Some(dir) = &args.dump_bands {
        std::fs::create_dir_all(dir)?;
    }

    let results = jobs::run_ordered(files, settings.jobs, |path| {
        (path.clone(), process_file(path, &args, settings))
    });

    let mut out = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
    let mut failures = 0usize;
    for (path, result) in results {
        match result {
            Ok(record) => {
                serde_json::to_writer(&mut out, &record)?;
                out.write_all(b"\n")?;
                if settings.verbose {
                    eprintln!("extracted {} ({} landmarks)", record.id, record.landmarks.len());
                }
            }
            Err(err) if args.keep_going => {
                failures += 1;
                eprintln!("warning: skipping {}: {err}", path.display());
            }
            Err(err) => return Err(err),
        }
    }
    out.flush()?;
    if failures > 0 {
        eprintln!("warning: skipped {failures} file(s)");
    }
    Ok(())
}

fn collect_wavs(root: &Path) -> Result<Vec<PathBuf>, CliError> {
    if root.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    if !root.is_dir() {
        return Err(CliError::usage(format!("{} does not exist", root.display())));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(root)?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| {
            p.extension()
                .map(|e| e.eq_ignore_ascii_case("wav"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    Ok(files)
}

fn file_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn process_file(
    path: &Path,
    args: &ExtractArgs,
    settings: &Settings,
) -> Result<ExtractRecord, CliError> {
    let id = file_id(path);
    let raw = read_wav(path)?;
    let audio = resample(&raw, CANONICAL_RATE);

    if let Some(dir) = &args.dump_bands {
        dump_band_csv(&audio, settings, &dir.join(format!("{id}.bands.csv")))?;
    }

    let seq = extract_landmarks_with_id(&audio, &settings.detector, &id)?;
    let landmarks = seq
        .landmarks
        .iter()
        .map(|lm| LandmarkJson {
            t: lm.time_s,
            lm: lm.label(),
        })
        .collect();

    let utterances = match &args.transcripts {
        Some(dir) => Some(per_utterance_landmarks(&audio, &id, dir, settings)?),
        None => None,
    };

    Ok(ExtractRecord {
        id,
        landmarks,
        token_string: seq.token_string(),
        utterances,
    })
}

fn per_utterance_landmarks(
    audio: &AudioBuffer,
    id: &str,
    transcript_dir: &Path,
    settings: &Settings,
) -> Result<Vec<UtteranceLandmarks>, CliError> {
    let path = ["csv", "tsv"]
        .iter()
        .map(|ext| transcript_dir.join(format!("{id}.{ext}")))
        .find(|p| p.exists())
        .ok_or_else(|| {
            CliError::usage(format!(
                "no transcript {id}.csv or {id}.tsv in {}",
                transcript_dir.display()
            ))
        })?;
    let (dialogue, warnings) = read_transcript(&path)?;
    for warning in warnings {
        eprintln!("warning: {}: {warning}", path.display());
    }

    let mut out = Vec::new();
    for (index, utterance) in dialogue.utterances.iter().enumerate() {
        if utterance.speaker != Speaker::Participant {
            continue;
        }
        let span = audio.slice_seconds(utterance.start_s, utterance.end_s);
        // Spans shorter than one analysis frame carry no landmarks.
        let token_string = match extract_landmarks_with_id(&span, &settings.detector, id) {
            Ok(seq) => seq.token_string(),
            Err(_) => String::new(),
        };
        out.push(UtteranceLandmarks {
            index,
            start_s: utterance.start_s,
            end_s: utterance.end_s,
            token_string,
        });
    }
    Ok(out)
}

fn dump_band_csv(audio: &AudioBuffer, settings: &Settings, path: &Path) -> Result<(), CliError> {
    let track = compute_band_energies(audio, settings.detector.frame)
        .map_err(|e| CliError::data(e.to_string()))?;
    let mut out = String::from("frame_index,b1,b2,b3,b4,b5,b6\n");
    for n in 0..track.n_frames() {
        out.push_str(&n.to_string());
        for band in &track.bands {
            out.push(',');
            out.push_str(&format!("{:.6}", band[n]));
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
