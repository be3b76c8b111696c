use std::collections::{BTreeSet, VecDeque};

use crate::dfa::Dfa;
use crate::error::AutomataError;

impl Dfa {
    /// Minimal equivalent DFA via Hopcroft's partition refinement.
    ///
    /// Requires a complete DFA (run [`Dfa::complete`] first). Unreachable
    /// states are pruned, then blocks of language-equivalent states are
    /// merged. The result is renumbered in breadth-first order from the start
    /// state, so two equivalent minimal inputs produce identical outputs.
    pub fn minimize(&self) -> Result<Dfa, AutomataError> {
        if !self.is_complete() {
            return Err(AutomataError::IncompleteDfa);
        }
        let dfa = self.prune_unreachable();
        let n = dfa.state_count();
        let num_symbols = dfa.alphabet().len();

        // Predecessor lists per symbol.
        let mut preimage: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; num_symbols];
        for s in 0..n {
            for (sym, lists) in preimage.iter_mut().enumerate() {
                let t = dfa.transition(s, sym).expect("complete");
                lists[t].push(s);
            }
        }

        let accepting: BTreeSet<usize> = (0..n).filter(|&s| dfa.is_accepting(s)).collect();
        let rejecting: BTreeSet<usize> = (0..n).filter(|&s| !dfa.is_accepting(s)).collect();

        let mut partition: Vec<BTreeSet<usize>> = Vec::new();
        let mut worklist: VecDeque<BTreeSet<usize>> = VecDeque::new();
        for block in [rejecting, accepting] {
            if !block.is_empty() {
                partition.push(block.clone());
                worklist.push_back(block);
            }
        }

        while let Some(splitter) = worklist.pop_front() {
            for lists in &preimage {
                let moved: BTreeSet<usize> = splitter
                    .iter()
                    .flat_map(|&t| lists[t].iter().copied())
                    .collect();
                if moved.is_empty() {
                    continue;
                }
                let mut refined = Vec::with_capacity(partition.len());
                for block in partition {
                    let inside: BTreeSet<usize> = block.intersection(&moved).copied().collect();
                    if inside.is_empty() || inside.len() == block.len() {
                        refined.push(block);
                        continue;
                    }
                    let outside: BTreeSet<usize> = block.difference(&moved).copied().collect();
                    // Keep the worklist consistent: a pending copy of the
                    // block is replaced by both halves, otherwise the smaller
                    // half suffices.
                    if let Some(pos) = worklist.iter().position(|w| *w == block) {
                        worklist.remove(pos);
                        worklist.push_back(inside.clone());
                        worklist.push_back(outside.clone());
                    } else if inside.len() <= outside.len() {
                        worklist.push_back(inside.clone());
                    } else {
                        worklist.push_back(outside.clone());
                    }
                    refined.push(inside);
                    refined.push(outside);
                }
                partition = refined;
            }
        }

        // Rebuild on blocks, renumbered by BFS from the start block.
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in partition.iter().enumerate() {
            for &s in block {
                block_of[s] = b;
            }
        }
        let repr: Vec<usize> = partition
            .iter()
            .map(|b| *b.iter().next().unwrap())
            .collect();

        let start_block = block_of[0];
        let mut new_id = vec![usize::MAX; partition.len()];
        let mut order = Vec::new();
        new_id[start_block] = 0;
        order.push(start_block);
        let mut queue = VecDeque::from([start_block]);
        while let Some(b) = queue.pop_front() {
            for sym in 0..num_symbols {
                let t = block_of[dfa.transition(repr[b], sym).expect("complete")];
                if new_id[t] == usize::MAX {
                    new_id[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }

        let transitions: Vec<Vec<Option<usize>>> = order
            .iter()
            .map(|&b| {
                (0..num_symbols)
                    .map(|sym| {
                        Some(new_id[block_of[dfa.transition(repr[b], sym).expect("complete")]])
                    })
                    .collect()
            })
            .collect();
        let accepting: Vec<bool> = order.iter().map(|&b| dfa.is_accepting(repr[b])).collect();

        Dfa::from_parts(dfa.alphabet().clone(), 0, accepting, transitions)
    }
}
