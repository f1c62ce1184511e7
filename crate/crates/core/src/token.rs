//! Bigram landmark tokens and the vocabulary they induce.
//!
//! Landmark patterns carry more signal than single landmarks, so every two
//! consecutive landmarks are fused into one unit: `g+ p- s+ p+` becomes
//! `(g+p-) (s+p+)`. Pairing is non-overlapping with stride 2, which halves
//! sequence length; an odd tail survives as a unigram token like `(g+)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::landmark::{Landmark, LandmarkKind, LandmarkSequence, Polarity};

#[derive(Debug, Error, PartialEq)]
pub enum TokenError {
    #[error("unknown token `{0}`")]
    UnknownToken(String),
}

/// One merged token: two consecutive landmark symbols, or a dangling
/// unigram for an odd-length tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BigramToken {
    pub first: (LandmarkKind, Polarity),
    pub second: Option<(LandmarkKind, Polarity)>,
}

impl BigramToken {
    /// Deterministic surface form: `(g+p-)` or `(g+)`.
    pub fn surface(&self) -> String {
        let sym = |(k, p): (LandmarkKind, Polarity)| format!("{}{}", k.symbol(), p.sign());
        match self.second {
            Some(second) => format!("({}{})", sym(self.first), sym(second)),
            None => format!("({})", sym(self.first)),
        }
    }

    /// Parse a surface form back into a token.
    pub fn parse(surface: &str) -> Result<Self, TokenError> {
        let inner = surface
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| TokenError::UnknownToken(surface.to_string()))?;
        let bad = || TokenError::UnknownToken(surface.to_string());
        match inner.len() {
            2 => Ok(Self {
                first: Landmark::parse_label(inner).ok_or_else(bad)?,
                second: None,
            }),
            4 => Ok(Self {
                first: Landmark::parse_label(&inner[..2]).ok_or_else(bad)?,
                second: Some(Landmark::parse_label(&inner[2..]).ok_or_else(bad)?),
            }),
            _ => Err(bad()),
        }
    }
}

/// Merge a landmark sequence into non-overlapping bigram tokens.
/// Output length is always `ceil(n / 2)`.
pub fn merge_bigrams(seq: &LandmarkSequence) -> Vec<BigramToken> {
    let symbols: Vec<(LandmarkKind, Polarity)> = seq
        .landmarks
        .iter()
        .map(|lm| (lm.kind, lm.polarity))
        .collect();
    symbols
        .chunks(2)
        .map(|pair| BigramToken {
            first: pair[0],
            second: pair.get(1).copied(),
        })
        .collect()
}

/// Token vocabulary with occurrence counts, iterated in first-appearance
/// order. At most 12 unigram + 144 bigram surfaces can ever exist.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    order: Vec<String>,
    counts: HashMap<String, u64>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, surface: &str) {
        match self.counts.get_mut(surface) {
            Some(c) => *c += 1,
            None => {
                self.order.push(surface.to_string());
                self.counts.insert(surface.to_string(), 1);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn count(&self, surface: &str) -> u64 {
        self.counts.get(surface).copied().unwrap_or(0)
    }

    /// `(surface, count)` pairs in first-appearance order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.order.iter().map(|s| (s.as_str(), self.counts[s]))
    }

    /// One `surface<TAB>count` line per token, first-appearance order.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (surface, count) in self.iter() {
            out.push_str(surface);
            out.push('\t');
            out.push_str(&count.to_string());
            out.push('\n');
        }
        out
    }
}

/// Build the vocabulary of a token corpus. Counts sum across lists;
/// appearance order follows list order then position.
pub fn build_vocabulary(corpus: &[Vec<BigramToken>]) -> Vocabulary {
    let mut vocab = Vocabulary::new();
    for tokens in corpus {
        for token in tokens {
            vocab.add(&token.surface());
        }
    }
    vocab
}

/// Space-join token surfaces.
pub fn render_token_string(tokens: &[BigramToken]) -> String {
    tokens
        .iter()
        .map(BigramToken::surface)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Inverse of [`render_token_string`].
pub fn parse_token_string(s: &str) -> Result<Vec<BigramToken>, TokenError> {
    s.split_whitespace().map(BigramToken::parse).collect()
}
