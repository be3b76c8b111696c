use std::collections::HashMap;

use crate::error::AutomataError;

/// An ordered set of tokens. Token order is significant: it fixes transition
/// iteration order, counterexample tie-breaking and DOT output.
#[derive(Debug, Clone)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    /// Build an alphabet from tokens in the given order.
    ///
    /// Tokens must be nonempty, free of whitespace and of the metacharacters
    /// `( ) | * ?`, and mutually distinct.
    pub fn new<I, S>(tokens: I) -> Result<Self, AutomataError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(AutomataError::InvalidAlphabet("no tokens".into()));
        }
        let mut index = HashMap::new();
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(AutomataError::InvalidAlphabet("empty token".into()));
            }
            if tok
                .chars()
                .any(|c| c.is_whitespace() || "()|*?".contains(c))
            {
                return Err(AutomataError::InvalidAlphabet(format!(
                    "token \"{tok}\" contains whitespace or a metacharacter"
                )));
            }
            if index.insert(tok.clone(), i).is_some() {
                return Err(AutomataError::InvalidAlphabet(format!(
                    "duplicate token \"{tok}\""
                )));
            }
        }
        Ok(Alphabet { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, idx: usize) -> &str {
        &self.tokens[idx]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    /// Encode a sequence of written tokens into indices.
    ///
    /// Each entry must name an alphabet token. The error reports the position
    /// of the offending entry.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Vec<usize>, AutomataError> {
        tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                self.index_of(t.as_ref())
                    .ok_or_else(|| AutomataError::UnknownToken {
                        token: t.as_ref().to_string(),
                        position: i,
                    })
            })
            .collect()
    }

    /// Encode free-form text: whitespace-separated words, where a word that is
    /// not itself a token but spells a sequence of single-character tokens is
    /// split per character (so `100` reads as `1 0 0` over `{0, 1}`).
    pub fn encode_text(&self, text: &str) -> Result<Vec<usize>, AutomataError> {
        let mut out = Vec::new();
        for (pos, word) in text.split_whitespace().enumerate() {
            if let Some(idx) = self.index_of(word) {
                out.push(idx);
            } else if word
                .chars()
                .all(|c| self.index_of(&c.to_string()).is_some())
            {
                out.extend(word.chars().map(|c| self.index_of(&c.to_string()).unwrap()));
            } else {
                return Err(AutomataError::UnknownToken {
                    token: word.to_string(),
                    position: pos,
                });
            }
        }
        Ok(out)
    }

    /// Render a token-index sequence as space-separated text.
    pub fn decode(&self, indices: &[usize]) -> String {
        indices
            .iter()
            .map(|&i| self.tokens[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
    }
}

impl Eq for Alphabet {}
