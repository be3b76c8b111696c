use rgi_automata::Alphabet;
use rgi_rnn::{forward, RnnParams};

use crate::ExtractionError;

/// Where a collected state vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointProvenance {
    /// index into the source string list
    pub string: usize,
    /// position in the string, starting at 1 (the initial state is excluded)
    pub position: usize,
    /// the token that produced this state
    pub token: usize,
}

/// Every hidden state the network visited while reading a string set, with
/// provenance, plus the per-string predictions.
#[derive(Debug, Clone)]
pub struct StateCollection {
    pub alphabet: Alphabet,
    pub points: Vec<Vec<f64>>,
    pub provenance: Vec<PointProvenance>,
    pub strings: Vec<Vec<usize>>,
    pub predictions: Vec<f64>,
}

impl StateCollection {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of bitwise-distinct points (bounds the usable K).
    pub fn distinct_points(&self) -> usize {
        let mut sorted: Vec<&Vec<f64>> = self.points.iter().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite states"));
        sorted.dedup();
        sorted.len()
    }

    pub fn network_accepts(&self, string_idx: usize) -> bool {
        self.predictions[string_idx] >= 0.5
    }
}

/// Run the network over each string, keeping s_1..s_n per string (s_0 is the
/// shared initial state and stays out of the cloud) and the final prediction.
pub fn collect_states(
    params: &RnnParams,
    strings: &[Vec<usize>],
) -> Result<StateCollection, ExtractionError> {
    let mut points = Vec::new();
    let mut provenance = Vec::new();
    let mut predictions = Vec::with_capacity(strings.len());
    for (string_idx, tokens) in strings.iter().enumerate() {
        let trace = forward(params, tokens)?;
        predictions.push(trace.prediction);
        for (offset, state) in trace.states.into_iter().skip(1).enumerate() {
            points.push(state);
            provenance.push(PointProvenance {
                string: string_idx,
                position: offset + 1,
                token: tokens[offset],
            });
        }
    }
    Ok(StateCollection {
        alphabet: params.alphabet.clone(),
        points,
        provenance,
        strings: strings.to_vec(),
        predictions,
    })
}
