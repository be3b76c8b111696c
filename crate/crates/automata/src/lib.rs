//! Finite automata over token alphabets.
//!
//! Symbols are *tokens* (arbitrary strings), not characters, so a binary
//! alphabet `{0, 1}` and a word alphabet `{Det, Adj, Noun, Verb}` share one
//! code path. Patterns over single-character alphabets may be written without
//! separators (`(0|1)*100`); multi-character tokens are separated by
//! whitespace (`Det? Adj* Noun`).
//!
//! The crate provides the usual bridge from regular expressions to automata:
//! parsing, Thompson construction, subset determinization, completion,
//! Hopcroft minimization, equivalence checking with shortest counterexamples,
//! brute-force string enumeration, and DOT export.

mod alphabet;
mod dfa;
mod dot;
mod equiv;
mod error;
mod minimize;
mod nfa;
pub mod randgen;
mod regex;
mod table;

pub use alphabet::Alphabet;
pub use dfa::Dfa;
pub use error::AutomataError;
pub use nfa::{compile_nfa, Nfa};
pub use regex::{parse_regex, Ast, Regex};

/// Parse a pattern and compile it down to the minimal complete DFA.
///
/// This is the ground-truth construction used everywhere else: parse, Thompson
/// NFA, subset determinization, minimization.
pub fn compile_dfa(pattern: &str, alphabet: &Alphabet) -> Result<Dfa, AutomataError> {
    let regex = parse_regex(pattern, alphabet)?;
    let nfa = compile_nfa(&regex);
    nfa.determinize()?.minimize()
}
