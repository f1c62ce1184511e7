use std::path::{Path, PathBuf};

use clap::Args;
use landmark_core::eval::{f1_score, majority_vote, PredictionSet};

use crate::config::Settings;
use crate::error::CliError;

#[derive(Args)]
pub struct ScoreArgs {
    /// Predictions CSV: header `id,<model>,...`, binary cells.
    #[arg(long)]
    pub pred: PathBuf,

    /// Truth CSV: `id,label` with binary labels.
    #[arg(long)]
    pub truth: Option<PathBuf>,

    /// Add a majority-vote column across the model columns.
    #[arg(long)]
    pub ensemble: bool,

    /// Write predictions (+ vote column) back out as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: ScoreArgs, _settings: &Settings) -> Result<(), CliError> {
    let (model_names, predictions) = read_predictions(&args.pred)?;

    let vote = if args.ensemble {
        Some(majority_vote(&predictions)?)
    } else {
        None
    };

    if let Some(truth_path) = &args.truth {
        let truth = read_truth(truth_path, &predictions.ids)?;
        for (m, name) in model_names.iter().enumerate() {
            let f1 = f1_score(&predictions.votes[m], &truth)?;
            println!("{name} F1 {f1:.4}");
        }
        if let Some(vote) = &vote {
            let f1 = f1_score(vote, &truth)?;
            println!("ensemble F1 {f1:.4}");
        }
    }

    if let Some(out) = &args.out {
        let mut csv = String::from("id");
        for name in &model_names {
            csv.push(',');
            csv.push_str(name);
        }
        if vote.is_some() {
            csv.push_str(",vote");
        }
        csv.push('\n');
        for (i, id) in predictions.ids.iter().enumerate() {
            csv.push_str(id);
            for votes in &predictions.votes {
                csv.push(',');
                csv.push_str(&votes[i].to_string());
            }
            if let Some(vote) = &vote {
                csv.push(',');
                csv.push_str(&vote[i].to_string());
            }
            csv.push('\n');
        }
        std::fs::write(out, csv)?;
    }
    Ok(())
}

fn parse_bit(cell: &str, path: &Path, lineno: usize) -> Result<u8, CliError> {
    match cell.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(CliError::data(format!(
            "{} line {}: expected 0 or 1, got `{other}`",
            path.display(),
            lineno
        ))),
    }
}

fn read_predictions(path: &Path) -> Result<(Vec<String>, PredictionSet), CliError> {
    let raw = std::fs::read_to_string(path)?;
    let mut lines = raw.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::data(format!("{} is empty", path.display())))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns.len() < 2 || !columns[0].eq_ignore_ascii_case("id") {
        return Err(CliError::data(format!(
            "{}: header must be `id,<model>,...`",
            path.display()
        )));
    }
    let model_names: Vec<String> = columns[1..].iter().map(|s| s.to_string()).collect();

    let mut ids = Vec::new();
    let mut votes: Vec<Vec<u8>> = vec![Vec::new(); model_names.len()];
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(CliError::data(format!(
                "{} line {}: expected {} cells, got {}",
                path.display(),
                lineno + 1,
                columns.len(),
                cells.len()
            )));
        }
        ids.push(cells[0].trim().to_string());
        for (m, cell) in cells[1..].iter().enumerate() {
            votes[m].push(parse_bit(cell, path, lineno + 1)?);
        }
    }

    let predictions = PredictionSet {
        ids,
        votes,
        truth: None,
    };
    predictions.validate()?;
    Ok((model_names, predictions))
}

fn read_truth(path: &Path, ids: &[String]) -> Result<Vec<u8>, CliError> {
    let raw = std::fs::read_to_string(path)?;
    let mut map = std::collections::HashMap::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (id, label) = line
            .split_once(',')
            .ok_or_else(|| CliError::data(format!("{} line {}: not id,label", path.display(), lineno + 1)))?;
        if lineno == 0 && label.trim().parse::<u8>().is_err() {
            continue; // header row
        }
        map.insert(id.trim().to_string(), parse_bit(label, path, lineno + 1)?);
    }
    ids.iter()
        .map(|id| {
            map.get(id)
                .copied()
                .ok_or_else(|| CliError::data(format!("{}: no truth label for `{id}`", path.display())))
        })
        .collect()
}
