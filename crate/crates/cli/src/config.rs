//! Global settings: a key=value config file merged under command-line
//! flags. Every key maps onto a detector or augmentation knob; unknown
//! keys are a usage error so typos fail fast.

use std::collections::HashMap;
use std::path::Path;

use landmark_core::band::{FrameConfig, WindowKind};
use landmark_core::landmark::DetectorConfig;

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Settings {
    pub detector: DetectorConfig,
    pub seed: u64,
    pub jobs: usize,
    pub verbose: bool,
    /// m_plus / eps_low / eps_high defaults from the config file; the
    /// augment subcommand's flags take precedence.
    pub m_plus: Option<usize>,
    pub eps_low: Option<f64>,
    pub eps_high: Option<f64>,
}

impl Settings {
    pub fn load(
        config_path: Option<&Path>,
        seed_flag: Option<u64>,
        jobs: usize,
        verbose: bool,
    ) -> Result<Self, CliError> {
        let mut settings = Settings {
            detector: DetectorConfig::default(),
            seed: 0,
            jobs: jobs.max(1),
            verbose,
            m_plus: None,
            eps_low: None,
            eps_high: None,
        };
        if let Some(path) = config_path {
            let pairs = parse_key_values(path)?;
            settings.apply(&pairs)?;
        }
        if let Some(seed) = seed_flag {
            settings.seed = seed;
        }
        Ok(settings)
    }

    fn apply(&mut self, pairs: &HashMap<String, String>) -> Result<(), CliError> {
        for (key, value) in pairs {
            let bad = |what: &str| {
                CliError::usage(format!("config key `{key}`: `{value}` is not a valid {what}"))
            };
            let as_f64 = || value.parse::<f64>().map_err(|_| bad("number"));
            let as_usize = || value.parse::<usize>().map_err(|_| bad("integer"));
            let d = &mut self.detector;
            match key.as_str() {
                "frame_len" => d.frame = FrameConfig::new(as_usize()?, d.frame.hop, d.frame.window),
                "hop" => d.frame = FrameConfig::new(d.frame.frame_len, as_usize()?, d.frame.window),
                "window" => {
                    let kind = match value.as_str() {
                        "hann" => WindowKind::Hann,
                        "rect" => WindowKind::Rect,
                        _ => return Err(bad("window (hann|rect)")),
                    };
                    d.frame = FrameConfig::new(d.frame.frame_len, d.frame.hop, kind);
                }
                "coarse_smooth_frames" => d.coarse_smooth_frames = as_usize()?,
                "fine_smooth_frames" => d.fine_smooth_frames = as_usize()?,
                "coarse_dt_ms" => d.coarse_dt_ms = as_f64()?,
                "fine_dt_ms" => d.fine_dt_ms = as_f64()?,
                "coarse_threshold_db" => d.coarse_threshold_db = as_f64()?,
                "fine_threshold_db" => d.fine_threshold_db = as_f64()?,
                "multiband_threshold_db" => d.multiband_threshold_db = as_f64()?,
                "low_band_decrease_db" => d.low_band_decrease_db = as_f64()?,
                "coincidence_window_ms" => d.coincidence_window_ms = as_f64()?,
                "peak_min_distance_ms" => d.peak_min_distance_ms = as_f64()?,
                "peak_min_prominence_db" => d.peak_min_prominence_db = as_f64()?,
                "p_frame_len" => d.p_frame_len = as_usize()?,
                "p_hop" => d.p_hop = as_usize()?,
                "p_smooth_ms" => d.p_smooth_ms = as_f64()?,
                "p_binarize_theta" => d.p_binarize_theta = as_f64()?,
                "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
                "m_plus" => self.m_plus = Some(as_usize()?),
                "eps_low" => self.eps_low = Some(as_f64()?),
                "eps_high" => self.eps_high = Some(as_f64()?),
                _ => return Err(CliError::usage(format!("unknown config key `{key}`"))),
            }
        }
        Ok(())
    }
}

fn parse_key_values(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut pairs = HashMap::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!(
                "config line {} is not key=value: `{line}`",
                lineno + 1
            ))
        })?;
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(pairs)
}
