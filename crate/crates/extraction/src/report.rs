use serde::{Deserialize, Serialize};

use crate::select::{Extraction, Selection};
use crate::ExtractionError;

/// The JSON extraction report written next to the DFA artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractionReport {
    /// None when the K search failed; the curve is still present.
    pub selected_k: Option<usize>,
    pub fidelity_curve: Vec<(usize, f64)>,
    pub transition_conflict_rate: Option<f64>,
    pub accept_conflict_rate: Option<f64>,
    pub raw_state_count: Option<usize>,
    pub minimized_state_count: Option<usize>,
    /// clusters (not counting the initial state) marked accepting
    pub accepting_clusters: Option<usize>,
    /// which string set fidelity was measured on
    pub fidelity_evaluated_on: String,
    /// accuracy of the minimized DFA against test labels; filled by the caller
    pub dfa_test_accuracy: Option<f64>,
}

impl ExtractionReport {
    pub fn from_extraction(extraction: &Extraction) -> Self {
        ExtractionReport {
            selected_k: Some(extraction.k),
            fidelity_curve: extraction.curve.clone(),
            transition_conflict_rate: Some(extraction.raw.transition_conflict_rate),
            accept_conflict_rate: Some(extraction.raw.accept_conflict_rate),
            raw_state_count: Some(extraction.raw.dfa.state_count()),
            minimized_state_count: Some(extraction.minimized.state_count()),
            accepting_clusters: Some(extraction.raw.accepting_cluster_count()),
            fidelity_evaluated_on: "validation".to_string(),
            dfa_test_accuracy: None,
        }
    }

    pub fn from_selection(selection: &Selection) -> Self {
        ExtractionReport {
            selected_k: Some(selection.k),
            fidelity_curve: selection.curve.clone(),
            transition_conflict_rate: Some(selection.extracted.transition_conflict_rate),
            accept_conflict_rate: Some(selection.extracted.accept_conflict_rate),
            raw_state_count: Some(selection.extracted.dfa.state_count()),
            minimized_state_count: None,
            accepting_clusters: Some(selection.extracted.accepting_cluster_count()),
            fidelity_evaluated_on: "validation".to_string(),
            dfa_test_accuracy: None,
        }
    }

    /// Report for a failed search: no automaton, but the curve survives.
    pub fn from_failure(error: &ExtractionError) -> Option<Self> {
        match error {
            ExtractionError::ThresholdNotReached { curve, .. } => Some(ExtractionReport {
                selected_k: None,
                fidelity_curve: curve.clone(),
                transition_conflict_rate: None,
                accept_conflict_rate: None,
                raw_state_count: None,
                minimized_state_count: None,
                accepting_clusters: None,
                fidelity_evaluated_on: "validation".to_string(),
                dfa_test_accuracy: None,
            }),
            _ => None,
        }
    }
}
