//! Labeled corpus generation for regular languages.
//!
//! Strings are drawn from a pattern's syntax tree; negatives come either from
//! uniform sampling at matched lengths (`random`) or from small edits of
//! positives (`perturb`). Every label is validated against the ground-truth
//! DFA at generation time, splits are balanced, and generation is a pure
//! function of the seed.

mod config;
mod dataset;
mod io;
mod sample;

pub use config::{DedupPolicy, GenConfig, NegativeMethod};
pub use dataset::{generate_dataset, Dataset, LabeledString, Origin};
pub use io::{load_dataset, read_corpus_file, save_dataset, write_corpus_file, CorpusHeader};
pub use sample::{sample_negative_perturb, sample_negative_random, sample_positive};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error(transparent)]
    Automata(#[from] rgi_automata::AutomataError),

    #[error("resampling budget exhausted while drawing a positive (max_len {max_len} too small?)")]
    PositiveBudget { max_len: usize },

    #[error("rejection budget exhausted drawing a negative of length {length}")]
    NegativeBudget { length: usize },

    #[error("perturbation budget exhausted; input resists rejection-producing edits")]
    PerturbBudget,

    #[error("deduplication budget exhausted; language too small for {split} split")]
    DedupBudget { split: String },

    #[error("the language (or its complement) is empty; nothing to sample")]
    DegenerateLanguage,

    #[error("generated string failed the ground-truth check (internal error)")]
    LabelMismatch,

    #[error("{path}: malformed corpus at line {line}: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid generation config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{path}: bad metadata: {message}")]
    Metadata { path: String, message: String },
}

/// Stable per-split seed derivation: FNV-1a over the label folded into the
/// master seed through a splitmix64 finalizer.
pub(crate) fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for byte in label.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut z = master ^ h;
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
