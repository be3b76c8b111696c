use std::collections::HashMap;

use crate::dfa::Dfa;
use crate::error::AutomataError;

impl Dfa {
    /// Check language equality by breadth-first search over the product
    /// automaton.
    ///
    /// Returns `None` when the languages agree, otherwise the shortest string
    /// accepted by exactly one of the two (ties broken lexicographically by
    /// alphabet order). Both DFAs must be complete and share one alphabet.
    pub fn equivalent(&self, other: &Dfa) -> Result<Option<Vec<usize>>, AutomataError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomataError::AlphabetMismatch);
        }
        if !self.is_complete() || !other.is_complete() {
            return Err(AutomataError::IncompleteDfa);
        }
        let num_symbols = self.alphabet().len();

        // Nodes are discovered product states; each remembers how it was
        // first reached so the counterexample can be reconstructed.
        let mut nodes: Vec<(usize, usize)> = vec![(self.start(), other.start())];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut seen: HashMap<(usize, usize), usize> = HashMap::from([(nodes[0], 0)]);

        let mut cursor = 0;
        while cursor < nodes.len() {
            let (a, b) = nodes[cursor];
            if self.is_accepting(a) != other.is_accepting(b) {
                let mut tokens = Vec::new();
                let mut at = cursor;
                while let Some((prev, sym)) = parent[at] {
                    tokens.push(sym);
                    at = prev;
                }
                tokens.reverse();
                return Ok(Some(tokens));
            }
            for sym in 0..num_symbols {
                let next = (
                    self.transition(a, sym).expect("complete"),
                    other.transition(b, sym).expect("complete"),
                );
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(next) {
                    slot.insert(nodes.len());
                    nodes.push(next);
                    parent.push(Some((cursor, sym)));
                }
            }
            cursor += 1;
        }
        Ok(None)
    }
}
