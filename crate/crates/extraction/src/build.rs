use std::collections::BTreeMap;

use rgi_automata::Dfa;

use crate::collect::StateCollection;
use crate::kmeans::Clustering;
use crate::ExtractionError;

/// The quantized automaton before minimization. State 0 is the distinguished
/// initial state (the network's s_0, never clustered); state c+1 is cluster c.
#[derive(Debug, Clone)]
pub struct ExtractedDfa {
    /// partial DFA: unvisited (state, token) pairs have no edge
    pub dfa: Dfa,
    /// (state, token) -> target state -> observed traversals
    pub transition_votes: BTreeMap<(usize, usize), BTreeMap<usize, usize>>,
    /// per state: (accepting final visits, rejecting final visits)
    pub accept_votes: Vec<(usize, usize)>,
    /// traversals disagreeing with the majority edge, over all traversals
    pub transition_conflict_rate: f64,
    /// minority final-visit votes, over all final visits
    pub accept_conflict_rate: f64,
}

impl ExtractedDfa {
    /// Number of cluster states (excluding the initial state) marked
    /// accepting.
    pub fn accepting_cluster_count(&self) -> usize {
        (1..self.dfa.state_count())
            .filter(|&s| self.dfa.is_accepting(s))
            .count()
    }
}

/// Replay every string over its cluster sequence and resolve the recorded
/// votes into a partial DFA.
///
/// Each step contributes one transition vote (previous state, token) ->
/// cluster state; the state where a string ends receives an accept vote with
/// the sign of the network's thresholded prediction. Edges and accept flags
/// are majority votes, ties to the lowest state id (rejecting on accept-vote
/// ties); conflict mass is reported, not hidden.
pub fn build_dfa(
    collection: &StateCollection,
    clustering: &Clustering,
) -> Result<ExtractedDfa, ExtractionError> {
    if clustering.assignment.len() != collection.len() {
        return Err(ExtractionError::CollectionMismatch);
    }
    let state_count = clustering.k + 1;
    let mut transition_votes: BTreeMap<(usize, usize), BTreeMap<usize, usize>> = BTreeMap::new();
    let mut accept_votes = vec![(0usize, 0usize); state_count];

    let mut point = 0usize;
    for (string_idx, tokens) in collection.strings.iter().enumerate() {
        let mut state = 0usize;
        for &token in tokens {
            let target = clustering.assignment[point] + 1;
            point += 1;
            *transition_votes
                .entry((state, token))
                .or_default()
                .entry(target)
                .or_insert(0) += 1;
            state = target;
        }
        if collection.network_accepts(string_idx) {
            accept_votes[state].0 += 1;
        } else {
            accept_votes[state].1 += 1;
        }
    }
    debug_assert_eq!(point, collection.len());

    let mut transitions = vec![vec![None; collection.alphabet.len()]; state_count];
    let mut total_traversals = 0usize;
    let mut conflicting_traversals = 0usize;
    for (&(state, token), tally) in &transition_votes {
        // majority target; BTreeMap order makes ties fall to the lowest id
        let (&winner, &winner_count) = tally
            .iter()
            .max_by_key(|&(target, count)| (*count, std::cmp::Reverse(*target)))
            .unwrap();
        let votes: usize = tally.values().sum();
        total_traversals += votes;
        conflicting_traversals += votes - winner_count;
        transitions[state][token] = Some(winner);
    }

    let accepting: Vec<bool> = accept_votes.iter().map(|&(yes, no)| yes > no).collect();
    let total_finals: usize = accept_votes.iter().map(|&(yes, no)| yes + no).sum();
    let minority_finals: usize = accept_votes.iter().map(|&(yes, no)| yes.min(no)).sum();

    let dfa = Dfa::from_parts(collection.alphabet.clone(), 0, accepting, transitions)?;
    Ok(ExtractedDfa {
        dfa,
        transition_votes,
        accept_votes,
        transition_conflict_rate: if total_traversals == 0 {
            0.0
        } else {
            conflicting_traversals as f64 / total_traversals as f64
        },
        accept_conflict_rate: if total_finals == 0 {
            0.0
        } else {
            minority_finals as f64 / total_finals as f64
        },
    })
}

/// One string the automaton and the network classify differently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disagreement {
    pub string: usize,
    pub dfa_accepts: bool,
    pub network_accepts: bool,
}

/// How often the automaton's accept/reject matches the network's over the
/// collection's strings (missing edges reject).
#[derive(Debug, Clone)]
pub struct FidelityReport {
    pub k: usize,
    pub match_rate: f64,
    pub disagreements: Vec<Disagreement>,
}

pub fn fidelity(extracted: &ExtractedDfa, collection: &StateCollection) -> FidelityReport {
    let mut disagreements = Vec::new();
    for (string_idx, tokens) in collection.strings.iter().enumerate() {
        let dfa_accepts = extracted.dfa.accepts_indices(tokens);
        let network_accepts = collection.network_accepts(string_idx);
        if dfa_accepts != network_accepts {
            disagreements.push(Disagreement {
                string: string_idx,
                dfa_accepts,
                network_accepts,
            });
        }
    }
    let total = collection.strings.len();
    FidelityReport {
        k: extracted.dfa.state_count() - 1,
        match_rate: (total - disagreements.len()) as f64 / total as f64,
        disagreements,
    }
}
