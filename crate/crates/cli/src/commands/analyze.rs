use std::path::PathBuf;

use clap::Args;
use landmark_core::eval::{contributions_csv, rank_contributions, read_matrix_dumps};

use crate::config::Settings;
use crate::error::CliError;

#[derive(Args)]
pub struct AnalyzeArgs {
    /// JSON manifest locating the matrix dump.
    #[arg(long)]
    pub matrices: PathBuf,

    #[arg(long, default_value_t = 10)]
    pub top: usize,

    #[arg(long, default_value_t = 10)]
    pub bottom: usize,

    /// Write the full ranking as `contributions.csv` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: AnalyzeArgs, _settings: &Settings) -> Result<(), CliError> {
    let dumps = read_matrix_dumps(&args.matrices)?;
    if dumps.is_empty() {
        return Err(CliError::data("manifest lists no matrices".to_string()));
    }
    let ranking = rank_contributions(&dumps, args.top, args.bottom);

    println!("top {} contributions:", ranking.top.len());
    for (rank, (name, score)) in ranking.top.iter().enumerate() {
        println!("  {:>3}  {name}  {score:.6e}", rank + 1);
    }
    println!("bottom {} contributions:", ranking.bottom.len());
    for (rank, (name, score)) in ranking.bottom.iter().enumerate() {
        println!("  {:>3}  {name}  {score:.6e}", rank + 1);
    }

    if let Some(path) = &args.out {
        std::fs::write(path, contributions_csv(&ranking))?;
    }
    Ok(())
}
