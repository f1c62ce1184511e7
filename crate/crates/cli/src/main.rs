//! `landmark` — batch pipeline from WAV files to instruction-tuning corpora.
//!
//! Subcommands compose the full chain: `extract` (audio to landmark
//! streams), `tokenize` (bigram merge + vocabulary), `augment`
//! (sub-dialogue shuffling), `emit` (prompt records), `analyze` (adapter
//! matrix contributions), and `score` (majority vote + F1).
//!
//! Exit codes: 0 success, 1 usage/config/I-O error, 2 data error.

mod commands;
mod config;
mod error;
mod jobs;

use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "landmark", version, about = "Acoustic landmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// key=value config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for all randomness (only `augment` consumes any).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for file-level parallelism. Output bytes are
    /// identical regardless of this value.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Print progress details to stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Detect landmarks in WAV files and write one JSONL record per file.
    Extract(commands::extract::ExtractArgs),
    /// Merge landmark streams into bigram tokens and build the vocabulary.
    Tokenize(commands::tokenize::TokenizeArgs),
    /// Sample balanced sub-dialogues from labeled transcripts.
    Augment(commands::augment::AugmentArgs),
    /// Render instruction-tuning prompt records.
    Emit(commands::emit::EmitArgs),
    /// Rank adapter matrices by contribution score.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Ensemble predictions by majority vote and report F1.
    Score(commands::score::ScoreArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            exit(code);
        }
    };

    let settings = match config::Settings::load(cli.config.as_deref(), cli.seed, cli.jobs, cli.verbose)
    {
        Ok(s) => s,
        Err(err) => {
            eprintln!("error: {err}");
            exit(err.exit_code());
        }
    };

    let result = match cli.command {
        Command::Extract(args) => commands::extract::run(args, &settings),
        Command::Tokenize(args) => commands::tokenize::run(args, &settings),
        Command::Augment(args) => commands::augment::run(args, &settings),
        Command::Emit(args) => commands::emit::run(args, &settings),
        Command::Analyze(args) => commands::analyze::run(args, &settings),
        Command::Score(args) => commands::score::run(args, &settings),
    };

    if let Err(err) = result {
        eprintln!("error: {err}");
        exit(err.exit_code());
    }
}
