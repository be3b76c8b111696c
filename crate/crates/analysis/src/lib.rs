//! What did the network actually learn?
//!
//! Tools for inspecting a trained classifier and its extracted automaton:
//! detection of revisited hidden states (cycles in the continuous dynamics),
//! PCA projection of the state cloud for plotting, exact error mining against
//! the ground-truth automaton via the symmetric-difference product, and
//! pumping-lemma expansion of a misclassified string into an augmentation
//! set.

mod cycles;
mod errors;
mod pca;
mod pump;
mod svg;

pub use cycles::{detect_cycles, CyclePair, CycleReport, StringCycles};
pub use errors::{mine_errors, ErrorReport};
pub use pca::{pca_project, Pca};
pub use pump::{pump_errors, AugmentationSet};
pub use svg::render_pca_svg;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Automata(#[from] rgi_automata::AutomataError),

    #[error("PCA needs at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("cannot project {requested} dimensions out of {available}")]
    TooManyComponents { requested: usize, available: usize },

    #[error("the base string is not misclassified (extracted and truth agree)")]
    NotMisclassified,

    #[error("no repeated state in the run; string is too short to pump")]
    NotPumpable,

    #[error("operation requires a complete DFA")]
    IncompleteDfa,
}
