use std::collections::VecDeque;

use crate::alphabet::Alphabet;
use crate::error::AutomataError;

/// Maximum length accepted by [`Dfa::enumerate_strings`].
pub const MAX_ENUMERATION_LEN: usize = 16;

/// Deterministic finite automaton. States are contiguous indices; transitions
/// may be partial (a missing edge rejects). `complete` makes them total.
#[derive(Debug, Clone, PartialEq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    /// transitions[state][symbol]
    transitions: Vec<Vec<Option<usize>>>,
}

impl Dfa {
    /// Build a DFA, validating indices and row shapes.
    pub fn from_parts(
        alphabet: Alphabet,
        start: usize,
        accepting: Vec<bool>,
        transitions: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, AutomataError> {
        let n = transitions.len();
        if n == 0 {
            return Err(AutomataError::InvalidAutomaton("no states".into()));
        }
        if accepting.len() != n {
            return Err(AutomataError::InvalidAutomaton(format!(
                "{} accept flags for {} states",
                accepting.len(),
                n
            )));
        }
        if start >= n {
            return Err(AutomataError::InvalidAutomaton(format!(
                "start state {start} out of range"
            )));
        }
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AutomataError::InvalidAutomaton(format!(
                    "state {s} has {} transition slots for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            for target in row.iter().flatten() {
                if *target >= n {
                    return Err(AutomataError::InvalidAutomaton(format!(
                        "state {s} targets out-of-range state {target}"
                    )));
                }
            }
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting,
            transitions,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(s, _)| s)
    }

    pub fn transition(&self, state: usize, symbol: usize) -> Option<usize> {
        self.transitions[state][symbol]
    }

    pub fn is_complete(&self) -> bool {
        self.transitions
            .iter()
            .all(|row| row.iter().all(Option::is_some))
    }

    /// Run on token indices; a missing transition rejects.
    pub fn accepts_indices(&self, tokens: &[usize]) -> bool {
        let mut state = self.start;
        for &tok in tokens {
            debug_assert!(tok < self.alphabet.len());
            match self.transitions[state][tok] {
                Some(next) => state = next,
                None => return false,
            }
        }
        self.accepting[state]
    }

    /// Run on written tokens; unknown tokens are an error.
    pub fn accepts<S: AsRef<str>>(&self, tokens: &[S]) -> Result<bool, AutomataError> {
        Ok(self.accepts_indices(&self.alphabet.encode(tokens)?))
    }

    /// The state sequence visited while reading `tokens`, starting with the
    /// start state. Requires a complete DFA.
    pub fn run_states(&self, tokens: &[usize]) -> Result<Vec<usize>, AutomataError> {
        let mut states = Vec::with_capacity(tokens.len() + 1);
        let mut state = self.start;
        states.push(state);
        for &tok in tokens {
            state = self.transitions[state][tok].ok_or(AutomataError::IncompleteDfa)?;
            states.push(state);
        }
        Ok(states)
    }

    /// Total version of this DFA: missing transitions are routed to a fresh
    /// rejecting sink, appended as the last state only when needed. The
    /// language is unchanged.
    pub fn complete(&self) -> Dfa {
        if self.is_complete() {
            return self.clone();
        }
        let sink = self.state_count();
        let mut transitions = self.transitions.clone();
        for row in &mut transitions {
            for entry in row.iter_mut() {
                if entry.is_none() {
                    *entry = Some(sink);
                }
            }
        }
        transitions.push(vec![Some(sink); self.alphabet.len()]);
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        Dfa {
            alphabet: self.alphabet.clone(),
            start: self.start,
            accepting,
            transitions,
        }
    }

    /// Drop states unreachable from the start, renumbering the rest in
    /// breadth-first discovery order (symbols in alphabet order).
    pub(crate) fn prune_unreachable(&self) -> Dfa {
        let mut order = Vec::new();
        let mut new_id = vec![usize::MAX; self.state_count()];
        let mut queue = VecDeque::from([self.start]);
        new_id[self.start] = 0;
        order.push(self.start);
        while let Some(s) = queue.pop_front() {
            for sym in 0..self.alphabet.len() {
                if let Some(t) = self.transitions[s][sym] {
                    if new_id[t] == usize::MAX {
                        new_id[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let transitions = order
            .iter()
            .map(|&old| {
                self.transitions[old]
                    .iter()
                    .map(|t| t.map(|x| new_id[x]))
                    .collect()
            })
            .collect();
        let accepting = order.iter().map(|&old| self.accepting[old]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            transitions,
        }
    }

    /// All strings up to `max_len`, in length-then-lexicographic order
    /// (lexicographic by alphabet order), each with its membership flag.
    pub fn enumerate_strings(
        &self,
        max_len: usize,
    ) -> Result<Vec<(Vec<usize>, bool)>, AutomataError> {
        if max_len > MAX_ENUMERATION_LEN {
            return Err(AutomataError::EnumerationGuard {
                max: MAX_ENUMERATION_LEN,
                requested: max_len,
            });
        }
        let k = self.alphabet.len();
        let mut out = Vec::new();
        out.push((Vec::new(), self.accepting[self.start]));
        for len in 1..=max_len {
            let mut string = vec![0usize; len];
            loop {
                out.push((string.clone(), self.accepts_indices(&string)));
                // odometer increment in alphabet order
                let mut pos = len;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    string[pos] += 1;
                    if string[pos] < k {
                        break;
                    }
                    string[pos] = 0;
                }
                if string.iter().all(|&t| t == 0) {
                    break;
                }
            }
        }
        Ok(out)
    }
}
