use std::collections::VecDeque;

use serde::Serialize;

use rgi_automata::Dfa;
use rgi_datagen::LabeledString;

use crate::AnalysisError;

/// Where the extracted automaton disagrees with the ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    /// extracted-DFA accuracy against the labeled test set
    pub test_accuracy: f64,
    /// accepted by extracted, rejected by truth; shortest first
    pub false_accepts: Vec<Vec<String>>,
    /// rejected by extracted, accepted by truth; shortest first
    pub false_rejects: Vec<Vec<String>>,
    /// reachable product states of the symmetric difference
    pub difference_state_count: usize,
    pub difference_empty: bool,
    /// enumeration bounds used
    pub max_enumerate_len: usize,
    pub max_per_class: usize,
}

/// Product automaton of two complete DFAs over one alphabet.
struct Product {
    /// transition table, [state][symbol]
    transitions: Vec<Vec<usize>>,
    /// per state: (extracted accepts, truth accepts)
    verdicts: Vec<(bool, bool)>,
}

fn product(extracted: &Dfa, truth: &Dfa) -> Product {
    let num_symbols = extracted.alphabet().len();
    let mut index = std::collections::HashMap::new();
    let mut pairs = vec![(extracted.start(), truth.start())];
    index.insert(pairs[0], 0usize);
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut cursor = 0;
    while cursor < pairs.len() {
        let (a, b) = pairs[cursor];
        let mut row = Vec::with_capacity(num_symbols);
        for sym in 0..num_symbols {
            let next = (
                extracted.transition(a, sym).expect("complete"),
                truth.transition(b, sym).expect("complete"),
            );
            let id = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            row.push(id);
        }
        transitions.push(row);
        cursor += 1;
    }
    let verdicts = pairs
        .iter()
        .map(|&(a, b)| (extracted.is_accepting(a), truth.is_accepting(b)))
        .collect();
    Product {
        transitions,
        verdicts,
    }
}

/// Shortest distance from every product state to a state satisfying `accept`
/// (reverse BFS); usize::MAX where unreachable.
fn distances_to(product: &Product, accept: impl Fn(&(bool, bool)) -> bool) -> Vec<usize> {
    let n = product.transitions.len();
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (state, row) in product.transitions.iter().enumerate() {
        for &target in row {
            predecessors[target].push(state);
        }
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (state, verdict) in product.verdicts.iter().enumerate() {
        if accept(verdict) {
            dist[state] = 0;
            queue.push_back(state);
        }
    }
    while let Some(state) = queue.pop_front() {
        for &prev in &predecessors[state] {
            if dist[prev] == usize::MAX {
                dist[prev] = dist[state] + 1;
                queue.push_back(prev);
            }
        }
    }
    dist
}

/// Enumerate, shortest-first then lexicographic, up to `cap` strings whose
/// product run ends in a state satisfying `accept`. Prefixes that cannot
/// reach such a state within the length budget are pruned.
fn enumerate_class(
    product: &Product,
    num_symbols: usize,
    accept: impl Fn(&(bool, bool)) -> bool + Copy,
    max_len: usize,
    cap: usize,
) -> Vec<Vec<usize>> {
    let dist = distances_to(product, accept);
    let mut out = Vec::new();
    if dist[0] == usize::MAX {
        return out;
    }
    let mut queue: VecDeque<(usize, Vec<usize>)> = VecDeque::from([(0usize, Vec::new())]);
    while let Some((state, prefix)) = queue.pop_front() {
        if accept(&product.verdicts[state]) {
            out.push(prefix.clone());
            if out.len() >= cap {
                return out;
            }
        }
        if prefix.len() >= max_len {
            continue;
        }
        for sym in 0..num_symbols {
            let next = product.transitions[state][sym];
            if dist[next] != usize::MAX && prefix.len() + 1 + dist[next] <= max_len {
                let mut extended = prefix.clone();
                extended.push(sym);
                queue.push_back((next, extended));
            }
        }
    }
    out
}

/// Compare the extracted automaton with ground truth: test-set accuracy, the
/// symmetric-difference product, and the shortest disagreeing strings per
/// class. Both DFAs must be complete and share the alphabet.
pub fn mine_errors(
    extracted: &Dfa,
    truth: &Dfa,
    test_set: &[LabeledString],
    max_enumerate_len: usize,
    max_per_class: usize,
) -> Result<ErrorReport, AnalysisError> {
    if extracted.alphabet() != truth.alphabet() {
        return Err(rgi_automata::AutomataError::AlphabetMismatch.into());
    }
    if !extracted.is_complete() || !truth.is_complete() {
        return Err(AnalysisError::IncompleteDfa);
    }

    let correct = test_set
        .iter()
        .filter(|item| extracted.accepts_indices(&item.tokens) == item.label)
        .count();
    let test_accuracy = if test_set.is_empty() {
        1.0
    } else {
        correct as f64 / test_set.len() as f64
    };

    let prod = product(extracted, truth);
    let num_symbols = extracted.alphabet().len();
    // every product state is reachable by construction
    let difference_empty = prod.verdicts.iter().all(|&(a, b)| a == b);

    let decode = |strings: Vec<Vec<usize>>| -> Vec<Vec<String>> {
        strings
            .into_iter()
            .map(|s| {
                s.iter()
                    .map(|&t| extracted.alphabet().token(t).to_string())
                    .collect()
            })
            .collect()
    };
    let false_accepts = decode(enumerate_class(
        &prod,
        num_symbols,
        |&(a, b)| a && !b,
        max_enumerate_len,
        max_per_class,
    ));
    let false_rejects = decode(enumerate_class(
        &prod,
        num_symbols,
        |&(a, b)| !a && b,
        max_enumerate_len,
        max_per_class,
    ));

    Ok(ErrorReport {
        test_accuracy,
        false_accepts,
        false_rejects,
        difference_state_count: prod.transitions.len(),
        difference_empty,
        max_enumerate_len,
        max_per_class,
    })
}
