//! From a trained network to a finite automaton.
//!
//! The pipeline: feed strings to the network and collect the hidden state
//! after every symbol; quantize the state cloud with k-means; replay each
//! string over the clusters, recording transition and accept votes; resolve
//! votes by majority into a partial DFA; search for the smallest K whose DFA
//! classifies like the network; complete and minimize the winner.
//!
//! The initial state is kept as its own automaton state and never joins a
//! cluster. Vote conflicts are counted and reported rather than silently
//! overwritten.

mod build;
mod collect;
mod kmeans;
mod report;
mod select;

pub use build::{build_dfa, fidelity, Disagreement, ExtractedDfa, FidelityReport};
pub use collect::{collect_states, PointProvenance, StateCollection};
pub use kmeans::{kmeans, Clustering};
pub use report::ExtractionReport;
pub use select::{extract, select_k, Extraction, ExtractionOptions, Selection};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error(transparent)]
    Rnn(#[from] rgi_rnn::RnnError),

    #[error(transparent)]
    Automata(#[from] rgi_automata::AutomataError),

    #[error("cannot cluster an empty state collection")]
    EmptyCollection,

    #[error("K={k} exceeds the {distinct} distinct points available")]
    KTooLarge { k: usize, distinct: usize },

    #[error("clustering does not cover this state collection")]
    CollectionMismatch,

    #[error(
        "no K up to {k_max} reached fidelity {threshold}; best was {best_fidelity:.4} at K={best_k}"
    )]
    ThresholdNotReached {
        threshold: f64,
        k_max: usize,
        best_k: usize,
        best_fidelity: f64,
        curve: Vec<(usize, f64)>,
    },
}

/// Stable sub-seed derivation for restarts and K candidates.
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
