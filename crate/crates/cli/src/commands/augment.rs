use std::path::PathBuf;

use clap::Args;
use landmark_core::audio::{read_labels, read_transcript, Dialogue};
use landmark_core::corpus::{
    compute_m_minus, records_to_jsonl, shuffle_subdialogues, to_records, AugmentConfig,
};
use serde::Serialize;

use crate::config::Settings;
use crate::error::CliError;

#[derive(Args)]
pub struct AugmentArgs {
    /// Directory of transcript CSV/TSV files; the file stem is the
    /// dialogue id.
    #[arg(long)]
    pub dialogues: PathBuf,

    /// Two-column label file (`id,label` with 1 = depressed).
    #[arg(long)]
    pub labels: PathBuf,

    /// Sub-dialogues per positive dialogue.
    #[arg(long)]
    pub m_plus: Option<usize>,

    #[arg(long)]
    pub eps_low: Option<f64>,

    #[arg(long)]
    pub eps_high: Option<f64>,

    /// Output JSONL; a `<out>.manifest.json` sidecar records the full
    /// configuration.
    #[arg(long)]
    pub out: PathBuf,
}

/// Reproducibility sidecar written next to the output corpus.
#[derive(Serialize)]
struct Manifest {
    m_plus: usize,
    m_minus: usize,
    eps_low: f64,
    eps_high: f64,
    seed: u64,
    n_plus: usize,
    n_minus: usize,
    total_subdialogues: usize,
}

pub fn run(args: AugmentArgs, settings: &Settings) -> Result<(), CliError> {
    let dialogues = load_labeled_dialogues(&args, settings)?;

    let cfg = AugmentConfig {
        m_plus: args.m_plus.or(settings.m_plus).unwrap_or(1000),
        eps_low: args.eps_low.or(settings.eps_low).unwrap_or(0.5),
        eps_high: args.eps_high.or(settings.eps_high).unwrap_or(1.0),
        rng_seed: settings.seed,
    };
    let subs = shuffle_subdialogues(&dialogues, &cfg)?;
    let records = to_records(&subs);
    std::fs::write(&args.out, records_to_jsonl(&records))?;

    let n_plus = dialogues
        .iter()
        .filter(|d| d.label == landmark_core::audio::Label::Depressed)
        .count();
    let n_minus = dialogues.len() - n_plus;
    let manifest = Manifest {
        m_plus: cfg.m_plus,
        m_minus: compute_m_minus(n_plus, n_minus, cfg.m_plus)?,
        eps_low: cfg.eps_low,
        eps_high: cfg.eps_high,
        seed: cfg.rng_seed,
        n_plus,
        n_minus,
        total_subdialogues: records.len(),
    };
    let manifest_path = sidecar_path(&args.out);
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    if settings.verbose {
        eprintln!(
            "augmented {} dialogues into {} sub-dialogues (manifest: {})",
            dialogues.len(),
            records.len(),
            manifest_path.display()
        );
    }
    Ok(())
}

fn sidecar_path(out: &std::path::Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn load_labeled_dialogues(
    args: &AugmentArgs,
    _settings: &Settings,
) -> Result<Vec<Dialogue>, CliError> {
    let labels = read_labels(&args.labels)?;
    if !args.dialogues.is_dir() {
        return Err(CliError::usage(format!(
            "{} is not a directory",
            args.dialogues.display()
        )));
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&args.dialogues)?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| {
            p.extension()
                .map(|e| e.eq_ignore_ascii_case("csv") || e.eq_ignore_ascii_case("tsv"))
                .unwrap_or(false)
        })
        .collect();
    paths.sort();

    let mut dialogues = Vec::new();
    for path in paths {
        let (mut dialogue, warnings) = read_transcript(&path)?;
        for warning in warnings {
            eprintln!("warning: {}: {warning}", path.display());
        }
        dialogue.label = *labels
            .get(&dialogue.id)
            .ok_or_else(|| CliError::data(format!("dialogue `{}` has no label entry", dialogue.id)))?;
        dialogues.push(dialogue);
    }
    Ok(dialogues)
}
