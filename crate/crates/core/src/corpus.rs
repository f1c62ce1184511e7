//! Sub-dialogue shuffling augmentation.
//!
//! Clinical interviews carry one label per session, so the usable sample
//! count is tiny and imbalanced. Augmentation samples `M` random contiguous
//! utterance spans from every dialogue: `M+` per positive (depressed)
//! dialogue, and `M-` per negative, where `M-` is derived from the class
//! counts so the two classes come out balanced.
//!
//! For each sub-dialogue, a span fraction `e` is drawn uniformly from
//! `(eps_low, eps_high)`, the span length is `d = round(e*T - 1)` clamped
//! to `[1, T-1]`, and the start index is uniform over `[0, T-d-1]`; the
//! slice keeps utterances `s ..= s+d`.
//!
//! Sampling is reproducible: each dialogue gets its own ChaCha8 stream
//! keyed by `SHA-256(seed || dialogue_id)`, so corpora are byte-identical
//! across runs and platforms regardless of per-dialogue parallelism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::audio::{Dialogue, Label, Utterance};

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("both classes must be non-empty (positives: {positives}, negatives: {negatives})")]
    ZeroClass { positives: usize, negatives: usize },
    #[error("dialogue `{0}` is unlabeled")]
    UnlabeledDialogue(String),
    #[error("dialogue `{id}` has {len} utterances, need at least 2")]
    DialogueTooShort { id: String, len: usize },
}

/// Augmentation parameters. `eps_low`/`eps_high` bound the sampled span
/// fraction; the defaults skew long because landmark tokens keep even full
/// dialogues short enough to train on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentConfig {
    /// Sub-dialogues per positive (depressed) dialogue.
    pub m_plus: usize,
    pub eps_low: f64,
    pub eps_high: f64,
    pub rng_seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            m_plus: 1000,
            eps_low: 0.5,
            eps_high: 1.0,
            rng_seed: 0,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) {
        assert!(
            0.0 < self.eps_low && self.eps_low < self.eps_high && self.eps_high <= 1.0,
            "need 0 < eps_low < eps_high <= 1"
        );
        assert!(self.m_plus > 0, "m_plus must be positive");
    }
}

/// One contiguous utterance slice of a parent dialogue, label inherited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubDialogue {
    pub parent_id: String,
    /// First utterance index, inclusive.
    pub start_idx: usize,
    /// Last utterance index, inclusive.
    pub end_idx: usize,
    pub label: Label,
}

impl SubDialogue {
    pub fn len(&self) -> usize {
        self.end_idx - self.start_idx + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The slice of parent utterances this sub-dialogue covers.
    pub fn utterances<'a>(&self, parent: &'a Dialogue) -> &'a [Utterance] {
        &parent.utterances[self.start_idx..=self.end_idx]
    }
}

/// Per-negative-dialogue sample count that balances the corpus:
/// `round(m_plus * n_plus / n_minus)`, so that
/// `n_plus * m_plus ~= n_minus * m_minus`.
pub fn compute_m_minus(
    n_plus: usize,
    n_minus: usize,
    m_plus: usize,
) -> Result<usize, CorpusError> {
    if n_plus == 0 || n_minus == 0 {
        return Err(CorpusError::ZeroClass {
            positives: n_plus,
            negatives: n_minus,
        });
    }
    Ok((m_plus as f64 * n_plus as f64 / n_minus as f64).round() as usize)
}

/// Run sub-dialogue shuffling over a labeled corpus.
///
/// Every dialogue must be labeled and at least two utterances long.
/// Positive dialogues produce exactly `m_plus` sub-dialogues each,
/// negatives exactly `m_minus` each, in dialogue order.
pub fn shuffle_subdialogues(
    dialogues: &[Dialogue],
    cfg: &AugmentConfig,
) -> Result<Vec<SubDialogue>, CorpusError> {
    cfg.validate();

    let mut n_plus = 0usize;
    let mut n_minus = 0usize;
    for d in dialogues {
        match d.label {
            Label::Depressed => n_plus += 1,
            Label::Healthy => n_minus += 1,
            Label::Unlabeled => return Err(CorpusError::UnlabeledDialogue(d.id.clone())),
        }
        if d.len() < 2 {
            return Err(CorpusError::DialogueTooShort {
                id: d.id.clone(),
                len: d.len(),
            });
        }
    }
    let m_minus = compute_m_minus(n_plus, n_minus, cfg.m_plus)?;

    let mut out = Vec::new();
    for dialogue in dialogues {
        let m = match dialogue.label {
            Label::Depressed => cfg.m_plus,
            _ => m_minus,
        };
        let t = dialogue.len();
        let mut rng = dialogue_rng(cfg.rng_seed, &dialogue.id);
        for _ in 0..m {
            let eps: f64 = rng.random_range(cfg.eps_low..cfg.eps_high);
            let d = ((eps * t as f64 - 1.0).round() as i64).clamp(1, t as i64 - 1) as usize;
            let s = rng.random_range(0..t - d);
            out.push(SubDialogue {
                parent_id: dialogue.id.clone(),
                start_idx: s,
                end_idx: s + d,
                label: dialogue.label,
            });
        }
    }
    Ok(out)
}

/// Independent, portable random stream for one dialogue.
fn dialogue_rng(seed: u64, dialogue_id: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(dialogue_id.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Wire format for one augmented sample, as written to JSONL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubDialogueRecord {
    pub id: String,
    pub parent_id: String,
    pub start_idx: usize,
    pub end_idx: usize,
    pub label: Label,
}

/// Assign stable per-parent sequence ids (`<parent>:<k>`).
pub fn to_records(subs: &[SubDialogue]) -> Vec<SubDialogueRecord> {
    let mut counters: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    subs.iter()
        .map(|sub| {
            let k = counters.entry(sub.parent_id.as_str()).or_insert(0);
            let id = format!("{}:{}", sub.parent_id, *k);
            *k += 1;
            SubDialogueRecord {
                id,
                parent_id: sub.parent_id.clone(),
                start_idx: sub.start_idx,
                end_idx: sub.end_idx,
                label: sub.label,
            }
        })
        .collect()
}

/// Serialize records as JSONL, one record per line.
pub fn records_to_jsonl(records: &[SubDialogueRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}
