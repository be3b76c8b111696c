use std::fmt::Write as _;

use crate::dfa::Dfa;

impl Dfa {
    /// Render the automaton as a DOT digraph.
    ///
    /// Accept states are double circles; the start state is marked by an edge
    /// from an invisible point node. Parallel edges to one target are merged
    /// into a single comma-labeled edge. Output is deterministic: states in
    /// index order, symbols in alphabet order, LF line endings.
    ///
    /// `labels`, when given, must hold one display label per state.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        if let Some(labels) = labels {
            assert_eq!(labels.len(), self.state_count(), "one label per state");
        }
        let mut out = String::new();
        out.push_str("digraph dfa {\n");
        out.push_str("  rankdir=LR;\n");
        out.push_str("  __start [shape=point, label=\"\"];\n");
        for state in 0..self.state_count() {
            let shape = if self.is_accepting(state) {
                "doublecircle"
            } else {
                "circle"
            };
            let label = match labels {
                Some(l) => l[state].clone(),
                None => state.to_string(),
            };
            let _ = writeln!(
                out,
                "  {state} [shape={shape}, label=\"{}\"];",
                escape(&label)
            );
        }
        let _ = writeln!(out, "  __start -> {};", self.start());
        for state in 0..self.state_count() {
            // merge symbols per target, preserving alphabet order
            let mut targets: Vec<(usize, Vec<usize>)> = Vec::new();
            for sym in 0..self.alphabet().len() {
                if let Some(t) = self.transition(state, sym) {
                    match targets.iter_mut().find(|(tt, _)| *tt == t) {
                        Some((_, syms)) => syms.push(sym),
                        None => targets.push((t, vec![sym])),
                    }
                }
            }
            for (target, syms) in targets {
                let label = syms
                    .iter()
                    .map(|&s| self.alphabet().token(s))
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(out, "  {state} -> {target} [label=\"{}\"];", escape(&label));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}
