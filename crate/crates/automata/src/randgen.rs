//! Deterministic random automata and patterns for oracle-style testing.
//!
//! Kept in the library (rather than test code) so downstream test suites can
//! drive the same generators. Uses a small self-contained PRNG to avoid
//! dragging a dependency into the public surface.

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::regex::{Ast, Regex};

/// splitmix64; good enough for instance generation and fully reproducible.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, probability: f64) -> bool {
        (self.next_u64() >> 11) as f64 / ((1u64 << 53) as f64) < probability
    }
}

/// A random DFA over the first `symbols` tokens of `0 1 2`, with up to
/// `max_states` states. Transitions are total unless `partial` is set, in
/// which case some are dropped.
pub fn random_dfa(rng: &mut SplitMix64, max_states: usize, symbols: usize, partial: bool) -> Dfa {
    let tokens = ["0", "1", "2"];
    let alphabet = Alphabet::new(tokens[..symbols].to_vec()).unwrap();
    let n = 1 + rng.below(max_states);
    let accepting: Vec<bool> = (0..n).map(|_| rng.chance(0.5)).collect();
    let transitions: Vec<Vec<Option<usize>>> = (0..n)
        .map(|_| {
            (0..symbols)
                .map(|_| {
                    if partial && rng.chance(0.2) {
                        None
                    } else {
                        Some(rng.below(n))
                    }
                })
                .collect()
        })
        .collect();
    Dfa::from_parts(alphabet, 0, accepting, transitions).unwrap()
}

/// A random pattern over the first `symbols` tokens of `0 1 2`, returned both
/// as text and as the parsed [`Regex`]. The text form exercises the parser:
/// it is rendered from a random syntax tree and parsed back.
pub fn random_regex(rng: &mut SplitMix64, symbols: usize, depth: usize) -> (String, Regex) {
    let tokens = ["0", "1", "2"];
    let alphabet = Alphabet::new(tokens[..symbols].to_vec()).unwrap();
    let ast = random_ast(rng, symbols, depth);
    let pattern = render(&ast, &alphabet);
    let regex = crate::regex::parse_regex(&pattern, &alphabet).expect("rendered pattern parses");
    (pattern, regex)
}

fn random_ast(rng: &mut SplitMix64, symbols: usize, depth: usize) -> Ast {
    if depth == 0 {
        return if rng.chance(0.05) {
            Ast::Epsilon
        } else {
            Ast::Literal(rng.below(symbols))
        };
    }
    match rng.below(100) {
        0..=29 => Ast::Literal(rng.below(symbols)),
        30..=54 => {
            let n = 2 + rng.below(2);
            Ast::Concat(
                (0..n)
                    .map(|_| random_ast(rng, symbols, depth - 1))
                    .collect(),
            )
        }
        55..=74 => {
            let n = 2 + rng.below(2);
            Ast::Alternation(
                (0..n)
                    .map(|_| random_ast(rng, symbols, depth - 1))
                    .collect(),
            )
        }
        75..=89 => Ast::Star(Box::new(random_ast(rng, symbols, depth - 1))),
        _ => Ast::Optional(Box::new(random_ast(rng, symbols, depth - 1))),
    }
}

fn render(ast: &Ast, alphabet: &Alphabet) -> String {
    match ast {
        Ast::Epsilon => "()".to_string(),
        Ast::Literal(tok) => alphabet.token(*tok).to_string(),
        Ast::Concat(children) => {
            let inner: Vec<String> = children.iter().map(|c| render(c, alphabet)).collect();
            format!("({})", inner.join(""))
        }
        Ast::Alternation(children) => {
            let inner: Vec<String> = children.iter().map(|c| render(c, alphabet)).collect();
            format!("({})", inner.join("|"))
        }
        Ast::Star(child) => format!("{}*", render_atomic(child, alphabet)),
        Ast::Optional(child) => format!("{}?", render_atomic(child, alphabet)),
    }
}

fn render_atomic(ast: &Ast, alphabet: &Alphabet) -> String {
    match ast {
        Ast::Literal(_) | Ast::Epsilon | Ast::Concat(_) | Ast::Alternation(_) => {
            let r = render(ast, alphabet);
            if r.starts_with('(') || r.len() == 1 {
                r
            } else {
                format!("({r})")
            }
        }
        // a direct postfix on a postfix needs grouping to parse back the same
        Ast::Star(_) | Ast::Optional(_) => format!("({})", render(ast, alphabet)),
    }
}
