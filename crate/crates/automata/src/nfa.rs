use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::error::AutomataError;
use crate::regex::{Ast, Regex};

/// Default cap on subset-construction states; exceeding it signals a
/// pathological pattern rather than a resource we want to exhaust.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

/// Nondeterministic finite automaton with epsilon moves.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Alphabet,
    /// transitions[state] = (symbol or epsilon, target)
    transitions: Vec<Vec<(Option<usize>, usize)>>,
    start: usize,
    accepts: BTreeSet<usize>,
}

impl Nfa {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepts_states(&self) -> &BTreeSet<usize> {
        &self.accepts
    }

    /// All states reachable from `states` via epsilon moves (including the
    /// states themselves). Idempotent.
    pub fn epsilon_closure(&self, states: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closure = states.clone();
        let mut stack: Vec<usize> = states.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(sym, target) in &self.transitions[s] {
                if sym.is_none() && closure.insert(target) {
                    stack.push(target);
                }
            }
        }
        closure
    }

    fn step(&self, states: &BTreeSet<usize>, symbol: usize) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &s in states {
            for &(sym, target) in &self.transitions[s] {
                if sym == Some(symbol) {
                    next.insert(target);
                }
            }
        }
        self.epsilon_closure(&next)
    }

    /// Run the NFA directly on a token sequence. This is the independent
    /// membership oracle the compiled DFA is checked against.
    pub fn simulate(&self, tokens: &[usize]) -> bool {
        let mut current = self.epsilon_closure(&BTreeSet::from([self.start]));
        for &tok in tokens {
            debug_assert!(tok < self.alphabet.len());
            current = self.step(&current, tok);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepts.contains(s))
    }

    /// Subset construction with the default state budget.
    pub fn determinize(&self) -> Result<Dfa, AutomataError> {
        self.determinize_capped(DEFAULT_STATE_BUDGET)
    }

    /// Subset construction. The result is a complete DFA; when some subset has
    /// no successor on a symbol, a rejecting sink is appended as the
    /// last-indexed state.
    pub fn determinize_capped(&self, max_states: usize) -> Result<Dfa, AutomataError> {
        let num_symbols = self.alphabet.len();
        let start_set = self.epsilon_closure(&BTreeSet::from([self.start]));

        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::new();

        ids.insert(start_set.clone(), 0);
        subsets.push(start_set);
        queue.push_back(0);

        let mut needs_sink = false;
        while let Some(id) = queue.pop_front() {
            let mut row = Vec::with_capacity(num_symbols);
            for sym in 0..num_symbols {
                let next = self.step(&subsets[id].clone(), sym);
                if next.is_empty() {
                    needs_sink = true;
                    row.push(None);
                    continue;
                }
                let next_id = match ids.get(&next) {
                    Some(&i) => i,
                    None => {
                        let i = subsets.len();
                        if i >= max_states {
                            return Err(AutomataError::StateBudget(max_states));
                        }
                        ids.insert(next.clone(), i);
                        subsets.push(next);
                        queue.push_back(i);
                        i
                    }
                };
                row.push(Some(next_id));
            }
            transitions.push(row);
        }

        let mut accepting: Vec<bool> = subsets
            .iter()
            .map(|set| set.iter().any(|s| self.accepts.contains(s)))
            .collect();
        if needs_sink {
            let sink = transitions.len();
            for row in &mut transitions {
                for entry in row.iter_mut() {
                    if entry.is_none() {
                        *entry = Some(sink);
                    }
                }
            }
            transitions.push(vec![Some(sink); num_symbols]);
            accepting.push(false);
        }

        Dfa::from_parts(self.alphabet.clone(), 0, accepting, transitions)
    }
}

/// Thompson construction: one fragment per AST node, linked with epsilon
/// moves. State count is linear in the pattern size.
pub fn compile_nfa(regex: &Regex) -> Nfa {
    let mut builder = Builder {
        transitions: Vec::new(),
    };
    let (start, accept) = builder.fragment(regex.ast());
    Nfa {
        alphabet: regex.alphabet().clone(),
        transitions: builder.transitions,
        start,
        accepts: BTreeSet::from([accept]),
    }
}

struct Builder {
    transitions: Vec<Vec<(Option<usize>, usize)>>,
}

impl Builder {
    fn state(&mut self) -> usize {
        self.transitions.push(Vec::new());
        self.transitions.len() - 1
    }

    fn edge(&mut self, from: usize, symbol: Option<usize>, to: usize) {
        self.transitions[from].push((symbol, to));
    }

    fn fragment(&mut self, ast: &Ast) -> (usize, usize) {
        match ast {
            Ast::Epsilon => {
                let s = self.state();
                let f = self.state();
                self.edge(s, None, f);
                (s, f)
            }
            Ast::Literal(tok) => {
                let s = self.state();
                let f = self.state();
                self.edge(s, Some(*tok), f);
                (s, f)
            }
            Ast::Concat(children) => {
                let parts: Vec<(usize, usize)> =
                    children.iter().map(|c| self.fragment(c)).collect();
                for pair in parts.windows(2) {
                    self.edge(pair[0].1, None, pair[1].0);
                }
                (parts.first().unwrap().0, parts.last().unwrap().1)
            }
            Ast::Alternation(children) => {
                let s = self.state();
                let f = self.state();
                for child in children {
                    let (cs, cf) = self.fragment(child);
                    self.edge(s, None, cs);
                    self.edge(cf, None, f);
                }
                (s, f)
            }
            Ast::Star(child) => {
                let s = self.state();
                let f = self.state();
                let (cs, cf) = self.fragment(child);
                self.edge(s, None, cs);
                self.edge(s, None, f);
                self.edge(cf, None, cs);
                self.edge(cf, None, f);
                (s, f)
            }
            Ast::Optional(child) => {
                let s = self.state();
                let f = self.state();
                let (cs, cf) = self.fragment(child);
                self.edge(s, None, cs);
                self.edge(s, None, f);
                self.edge(cf, None, f);
                (s, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_regex;

    fn binary() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    fn nfa_for(pattern: &str) -> Nfa {
        compile_nfa(&parse_regex(pattern, &binary()).unwrap())
    }

    #[test]
    fn star_accepts_repetitions() {
        let nfa = nfa_for("0*");
        assert!(nfa.simulate(&[]));
        assert!(nfa.simulate(&[0]));
        assert!(nfa.simulate(&[0, 0, 0]));
        assert!(!nfa.simulate(&[1]));
    }

    #[test]
    fn empty_group_accepts_only_epsilon() {
        let nfa = nfa_for("()");
        assert!(nfa.simulate(&[]));
        assert!(!nfa.simulate(&[0]));
        assert!(!nfa.simulate(&[1]));
    }

    #[test]
    fn alternation_accepts_exactly_branches() {
        let nfa = nfa_for("0|1");
        assert!(nfa.simulate(&[0]));
        assert!(nfa.simulate(&[1]));
        assert!(!nfa.simulate(&[]));
        assert!(!nfa.simulate(&[0, 1]));
    }

    #[test]
    fn epsilon_closure_is_idempotent() {
        let nfa = nfa_for("(01)*");
        let once = nfa.epsilon_closure(&BTreeSet::from([nfa.start()]));
        let twice = nfa.epsilon_closure(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn determinize_star_pair_minimizes_to_three_states() {
        let dfa = nfa_for("(01)*").determinize().unwrap().minimize().unwrap();
        // accept-start, mid, sink
        assert_eq!(dfa.state_count(), 3);
        assert!(dfa.is_complete());
    }

    #[test]
    fn determinize_epsilon_only_has_two_states() {
        let dfa = nfa_for("").determinize().unwrap();
        assert_eq!(dfa.state_count(), 2);
        assert!(dfa.accepts_indices(&[]));
        assert!(!dfa.accepts_indices(&[0]));
    }

    #[test]
    fn state_budget_is_enforced() {
        let nfa = nfa_for("(0|1)*100");
        assert!(matches!(
            nfa.determinize_capped(2),
            Err(AutomataError::StateBudget(2))
        ));
    }
}
