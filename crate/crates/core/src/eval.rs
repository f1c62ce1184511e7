//! Analysis arithmetic: adapter-matrix contribution scores, contribution
//! ranking, majority-vote ensembling, and F1.
//!
//! A matrix's contribution is the mean absolute value of its entries,
//!
//! ```text
//! C_i = 1/(a*b) * sum_{j,k} |L_i(j,k)|
//! ```
//!
//! which treats the magnitude of adapter weights as a proxy for how much
//! that layer changed during fine-tuning. Matrices come from any training
//! framework via a flat little-endian binary file plus a JSON manifest
//! mapping layer names to shapes and byte offsets.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("prediction/truth length mismatch: {pred} vs {truth}")]
    LengthMismatch { pred: usize, truth: usize },
    #[error("majority vote needs an odd number of models, got {0}")]
    EvenEnsemble(usize),
    #[error("vote vector for model {model} has {got} entries, expected {expected}")]
    RaggedVotes {
        model: usize,
        got: usize,
        expected: usize,
    },
    #[error("matrix `{name}`: {reason}")]
    BadMatrix { name: String, reason: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest error: {0}")]
    Manifest(#[from] serde_json::Error),
}

/// A dumped weight matrix with its layer name.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDump {
    pub layer_name: String,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries, `rows * cols` values.
    pub entries: Vec<f64>,
}

impl MatrixDump {
    pub fn new(layer_name: impl Into<String>, rows: usize, cols: usize, entries: Vec<f64>) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        assert!(entries.iter().all(|v| v.is_finite()), "entries must be finite");
        Self {
            layer_name: layer_name.into(),
            rows,
            cols,
            entries,
        }
    }
}

/// Mean absolute value of the matrix entries.
pub fn contribution_score(m: &MatrixDump) -> f64 {
    m.entries.iter().map(|v| v.abs()).sum::<f64>() / (m.rows * m.cols) as f64
}

/// Contribution ranking: `top` holds the `top_k` highest-scoring layers in
/// descending order, `bottom` the `bottom_k` lowest in ascending order.
/// Score ties break on layer name so the ranking is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionRanking {
    /// All layers as `(layer_name, score)`, descending.
    pub scored: Vec<(String, f64)>,
    pub top: Vec<(String, f64)>,
    pub bottom: Vec<(String, f64)>,
}

pub fn rank_contributions(
    matrices: &[MatrixDump],
    top_k: usize,
    bottom_k: usize,
) -> ContributionRanking {
    let mut scored: Vec<(String, f64)> = matrices
        .iter()
        .map(|m| (m.layer_name.clone(), contribution_score(m)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let top = scored.iter().take(top_k.min(scored.len())).cloned().collect();
    let bottom = {
        let mut ascending: Vec<(String, f64)> = scored.iter().rev().cloned().collect();
        ascending.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        ascending.into_iter().take(bottom_k.min(matrices.len())).collect()
    };

    ContributionRanking { scored, top, bottom }
}

/// Per-model binary predictions over a shared id list.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub ids: Vec<String>,
    /// One vote vector per model, each parallel to `ids`.
    pub votes: Vec<Vec<u8>>,
    pub truth: Option<Vec<u8>>,
}

impl PredictionSet {
    pub fn validate(&self) -> Result<(), EvalError> {
        for (model, v) in self.votes.iter().enumerate() {
            if v.len() != self.ids.len() {
                return Err(EvalError::RaggedVotes {
                    model,
                    got: v.len(),
                    expected: self.ids.len(),
                });
            }
        }
        if let Some(t) = &self.truth {
            if t.len() != self.ids.len() {
                return Err(EvalError::LengthMismatch {
                    pred: self.ids.len(),
                    truth: t.len(),
                });
            }
        }
        Ok(())
    }
}

/// Majority vote across an odd number of models. Even ensembles are
/// rejected rather than inventing a tie-break.
pub fn majority_vote(predictions: &PredictionSet) -> Result<Vec<u8>, EvalError> {
    predictions.validate()?;
    let k = predictions.votes.len();
    if k == 0 || k.is_multiple_of(2) {
        return Err(EvalError::EvenEnsemble(k));
    }
    Ok((0..predictions.ids.len())
        .map(|i| {
            let ones: usize = predictions.votes.iter().map(|v| v[i] as usize).sum();
            u8::from(ones * 2 > k)
        })
        .collect())
}

/// F1 on the positive class: `2*TP / (2*TP + FP + FN)`, algebraically the
/// harmonic mean of precision and recall. Returns 0 when there are no true
/// positives (the zero-division convention).
pub fn f1_score(pred: &[u8], truth: &[u8]) -> Result<f64, EvalError> {
    if pred.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            pred: pred.len(),
            truth: truth.len(),
        });
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut fn_ = 0u64;
    for (&p, &t) in pred.iter().zip(truth) {
        match (p != 0, t != 0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    if tp == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * tp as f64 / (2.0 * tp as f64 + fp as f64 + fn_ as f64))
}

/// Precision and recall on the positive class, both 0 when undefined.
pub fn precision_recall(pred: &[u8], truth: &[u8]) -> Result<(f64, f64), EvalError> {
    if pred.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            pred: pred.len(),
            truth: truth.len(),
        });
    }
    let tp = pred.iter().zip(truth).filter(|(&p, &t)| p != 0 && t != 0).count() as f64;
    let pred_pos = pred.iter().filter(|&&p| p != 0).count() as f64;
    let truth_pos = truth.iter().filter(|&&t| t != 0).count() as f64;
    let precision = if pred_pos > 0.0 { tp / pred_pos } else { 0.0 };
    let recall = if truth_pos > 0.0 { tp / truth_pos } else { 0.0 };
    Ok((precision, recall))
}

/// Manifest entry locating one matrix inside the data file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestLayer {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    /// Byte offset of the first entry in the data file.
    pub offset: u64,
}

/// JSON manifest describing a matrix dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixManifest {
    /// Data file path, relative to the manifest's directory.
    pub data_file: String,
    /// `f32` or `f64`, little-endian, row-major.
    pub dtype: String,
    pub layers: Vec<ManifestLayer>,
}

/// Load every matrix listed in a manifest.
pub fn read_matrix_dumps(manifest_path: impl AsRef<Path>) -> Result<Vec<MatrixDump>, EvalError> {
    let manifest_path = manifest_path.as_ref();
    let manifest: MatrixManifest =
        serde_json::from_str(&std::fs::read_to_string(manifest_path)?)?;
    let data_path = manifest_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&manifest.data_file);
    let data = std::fs::read(&data_path)?;

    let elem_size = match manifest.dtype.as_str() {
        "f32" => 4,
        "f64" => 8,
        other => {
            return Err(EvalError::BadMatrix {
                name: String::new(),
                reason: format!("unsupported dtype `{other}`"),
            })
        }
    };

    manifest
        .layers
        .iter()
        .map(|layer| {
            let count = layer.rows * layer.cols;
            let start = layer.offset as usize;
            let end = start + count * elem_size;
            if end > data.len() {
                return Err(EvalError::BadMatrix {
                    name: layer.name.clone(),
                    reason: format!("extends to byte {end} but file has {}", data.len()),
                });
            }
            let bytes = &data[start..end];
            let entries: Vec<f64> = match elem_size {
                4 => bytes
                    .chunks_exact(4)
                    .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
                    .collect(),
                _ => bytes
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            };
            if entries.iter().any(|v| !v.is_finite()) {
                return Err(EvalError::BadMatrix {
                    name: layer.name.clone(),
                    reason: "non-finite entry".into(),
                });
            }
            Ok(MatrixDump::new(
                layer.name.clone(),
                layer.rows,
                layer.cols,
                entries,
            ))
        })
        .collect()
}

/// Render `contributions.csv`: layer_name, score, rank (1 = highest).
pub fn contributions_csv(ranking: &ContributionRanking) -> String {
    let mut out = String::from("layer_name,score,rank\n");
    for (rank, (name, score)) in ranking.scored.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", name, score, rank + 1));
    }
    out
}
