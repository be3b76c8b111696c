use crate::alphabet::Alphabet;
use crate::error::AutomataError;

/// Regular-expression syntax tree. Literals are alphabet token indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// The empty string (an empty group or empty pattern).
    Epsilon,
    Literal(usize),
    /// Two or more factors in sequence.
    Concat(Vec<Ast>),
    /// Two or more alternatives.
    Alternation(Vec<Ast>),
    Star(Box<Ast>),
    Optional(Box<Ast>),
}

/// A parsed pattern together with the alphabet it is defined over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regex {
    ast: Ast,
    alphabet: Alphabet,
}

impl Regex {
    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Lexeme {
    LParen,
    RParen,
    Pipe,
    Star,
    Question,
    Literal(usize),
}

/// Split the pattern into lexemes, each tagged with its byte offset.
///
/// A run of non-metacharacter text forms a word. A word that names an
/// alphabet token is one literal; otherwise, if each of its characters names a
/// token, it is split per character (binary patterns need no separators).
fn lex(pattern: &str, alphabet: &Alphabet) -> Result<Vec<(Lexeme, usize)>, AutomataError> {
    let mut out = Vec::new();
    let mut chars = pattern.char_indices().peekable();
    while let Some(&(offset, ch)) = chars.peek() {
        match ch {
            '(' => {
                out.push((Lexeme::LParen, offset));
                chars.next();
            }
            ')' => {
                out.push((Lexeme::RParen, offset));
                chars.next();
            }
            '|' => {
                out.push((Lexeme::Pipe, offset));
                chars.next();
            }
            '*' => {
                out.push((Lexeme::Star, offset));
                chars.next();
            }
            '?' => {
                out.push((Lexeme::Question, offset));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let start = offset;
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || "()|*?".contains(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                if let Some(idx) = alphabet.index_of(&word) {
                    out.push((Lexeme::Literal(idx), start));
                } else if !word.is_empty()
                    && word
                        .chars()
                        .all(|c| alphabet.index_of(&c.to_string()).is_some())
                {
                    let mut pos = start;
                    for c in word.chars() {
                        let idx = alphabet.index_of(&c.to_string()).unwrap();
                        out.push((Lexeme::Literal(idx), pos));
                        pos += c.len_utf8();
                    }
                } else {
                    return Err(AutomataError::UnknownToken {
                        token: word,
                        position: start,
                    });
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    lexemes: &'a [(Lexeme, usize)],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Lexeme> {
        self.lexemes.get(self.pos).map(|(l, _)| l)
    }

    /// Offset used when reporting an unexpected end of pattern: the position
    /// of the last lexeme consumed.
    fn eof_offset(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.lexemes[self.pos - 1].1
        }
    }

    fn offset(&self) -> usize {
        self.lexemes
            .get(self.pos)
            .map(|(_, o)| *o)
            .unwrap_or_else(|| self.eof_offset())
    }

    fn error(&self, message: impl Into<String>) -> AutomataError {
        AutomataError::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn parse_alternation(&mut self) -> Result<Ast, AutomataError> {
        let mut branches = vec![self.parse_concat()?];
        while self.peek() == Some(&Lexeme::Pipe) {
            self.pos += 1;
            branches.push(self.parse_concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Ast::Alternation(branches)
        })
    }

    fn parse_concat(&mut self) -> Result<Ast, AutomataError> {
        let mut factors = Vec::new();
        while matches!(self.peek(), Some(Lexeme::LParen) | Some(Lexeme::Literal(_))) {
            factors.push(self.parse_repeat()?);
        }
        Ok(match factors.len() {
            0 => Ast::Epsilon,
            1 => factors.pop().unwrap(),
            _ => Ast::Concat(factors),
        })
    }

    fn parse_repeat(&mut self) -> Result<Ast, AutomataError> {
        let mut node = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(Lexeme::Star) => {
                    self.pos += 1;
                    node = Ast::Star(Box::new(node));
                }
                Some(Lexeme::Question) => {
                    self.pos += 1;
                    node = Ast::Optional(Box::new(node));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Ast, AutomataError> {
        match self.peek() {
            Some(Lexeme::Literal(idx)) => {
                let idx = *idx;
                self.pos += 1;
                Ok(Ast::Literal(idx))
            }
            Some(Lexeme::LParen) => {
                self.pos += 1;
                let inner = self.parse_alternation()?;
                if self.peek() == Some(&Lexeme::RParen) {
                    self.pos += 1;
                    Ok(inner)
                } else if self.peek().is_none() {
                    Err(AutomataError::Syntax {
                        offset: self.eof_offset(),
                        message: "unclosed parenthesis".into(),
                    })
                } else {
                    Err(self.error("expected ')'"))
                }
            }
            Some(other) => Err(self.error(format!("unexpected {}", describe(other)))),
            None => Err(AutomataError::Syntax {
                offset: self.eof_offset(),
                message: "unexpected end of pattern".into(),
            }),
        }
    }
}

fn describe(lexeme: &Lexeme) -> &'static str {
    match lexeme {
        Lexeme::LParen => "'('",
        Lexeme::RParen => "')'",
        Lexeme::Pipe => "'|'",
        Lexeme::Star => "'*'",
        Lexeme::Question => "'?'",
        Lexeme::Literal(_) => "literal",
    }
}

/// Parse a pattern over the given alphabet.
///
/// Supported syntax: literals, juxtaposition/whitespace concatenation, `|`,
/// `*`, `?`, and parentheses. The empty pattern and empty groups denote the
/// empty string.
pub fn parse_regex(pattern: &str, alphabet: &Alphabet) -> Result<Regex, AutomataError> {
    let lexemes = lex(pattern, alphabet)?;
    let mut parser = Parser {
        lexemes: &lexemes,
        pos: 0,
    };
    let ast = parser.parse_alternation()?;
    if parser.pos != lexemes.len() {
        return Err(parser.error(format!("unexpected {}", describe(parser.peek().unwrap()))));
    }
    Ok(Regex {
        ast,
        alphabet: alphabet.clone(),
    })
}
