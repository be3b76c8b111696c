use thiserror::Error;

/// Errors produced by parsing, compilation and automaton operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AutomataError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// A token that is not part of the alphabet. For pattern parsing
    /// `position` is a byte offset; for string operations it is the index of
    /// the offending token in the sequence.
    #[error("unknown token \"{token}\" at position {position}")]
    UnknownToken { token: String, position: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("subset construction exceeded the state budget of {0}")]
    StateBudget(usize),

    #[error("operation requires a complete DFA")]
    IncompleteDfa,

    #[error("automata are defined over different alphabets")]
    AlphabetMismatch,

    #[error("enumeration limited to strings of length at most {max}, got {requested}")]
    EnumerationGuard { max: usize, requested: usize },

    #[error("malformed transition table at line {line}: {message}")]
    MalformedTable { line: usize, message: String },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
}
