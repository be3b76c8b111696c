use rand::seq::IndexedRandom;
use rand::{Rng, RngExt};

use rgi_automata::{Ast, Dfa, Regex};

use crate::DatagenError;

const RESAMPLE_BUDGET: usize = 1_000;

/// Draw one string from the pattern's language.
///
/// Stars expand to i repetitions with probability (1-p)·p^i, alternation
/// branches are uniform, optional parts appear with probability 1/2. Strings
/// longer than `max_len` are rejected and redrawn; exhausting the budget
/// means `max_len` cannot fit the pattern.
pub fn sample_positive<R: Rng>(
    regex: &Regex,
    rng: &mut R,
    continuation_prob: f64,
    max_len: usize,
) -> Result<Vec<usize>, DatagenError> {
    for _ in 0..RESAMPLE_BUDGET {
        let mut out = Vec::new();
        expand(regex.ast(), rng, continuation_prob, &mut out);
        if out.len() <= max_len {
            return Ok(out);
        }
    }
    Err(DatagenError::PositiveBudget { max_len })
}

fn expand<R: Rng>(ast: &Ast, rng: &mut R, p: f64, out: &mut Vec<usize>) {
    match ast {
        Ast::Epsilon => {}
        Ast::Literal(tok) => out.push(*tok),
        Ast::Concat(children) => {
            for child in children {
                expand(child, rng, p, out);
            }
        }
        Ast::Alternation(children) => {
            let idx = rng.random_range(0..children.len());
            expand(&children[idx], rng, p, out);
        }
        Ast::Star(child) => {
            while rng.random::<f64>() < p {
                expand(child, rng, p, out);
            }
        }
        Ast::Optional(child) => {
            if rng.random::<f64>() < 0.5 {
                expand(child, rng, p, out);
            }
        }
    }
}

/// Uniform token sequence of exactly `length`, rejection-sampled until the
/// ground truth rejects it. Fails when (nearly) all strings of that length
/// are in the language.
pub fn sample_negative_random<R: Rng>(
    alphabet_size: usize,
    length: usize,
    truth: &Dfa,
    rng: &mut R,
) -> Result<Vec<usize>, DatagenError> {
    for _ in 0..RESAMPLE_BUDGET {
        let candidate: Vec<usize> = (0..length)
            .map(|_| rng.random_range(0..alphabet_size))
            .collect();
        if !truth.accepts_indices(&candidate) {
            return Ok(candidate);
        }
    }
    Err(DatagenError::NegativeBudget { length })
}

/// Apply 1..=3 random edits (delete one token, insert one token, move one
/// token) to a positive string, redrawing until the result is rejected by the
/// ground truth. Length changes by at most 3.
pub fn sample_negative_perturb<R: Rng>(
    positive: &[usize],
    truth: &Dfa,
    rng: &mut R,
) -> Result<Vec<usize>, DatagenError> {
    debug_assert!(truth.accepts_indices(positive));
    let alphabet_size = truth.alphabet().len();
    for _ in 0..RESAMPLE_BUDGET {
        let mut tokens = positive.to_vec();
        let edits = rng.random_range(1..=3);
        for _ in 0..edits {
            apply_random_edit(&mut tokens, alphabet_size, rng);
        }
        if !truth.accepts_indices(&tokens) {
            return Ok(tokens);
        }
    }
    Err(DatagenError::PerturbBudget)
}

fn apply_random_edit<R: Rng>(tokens: &mut Vec<usize>, alphabet_size: usize, rng: &mut R) {
    // 0 = insert (always possible), 1 = delete, 2 = move
    let choices: &[usize] = if tokens.len() >= 2 {
        &[0, 1, 2]
    } else if tokens.len() == 1 {
        &[0, 1]
    } else {
        &[0]
    };
    match *choices.choose(rng).unwrap() {
        0 => {
            let pos = rng.random_range(0..=tokens.len());
            let tok = rng.random_range(0..alphabet_size);
            tokens.insert(pos, tok);
        }
        1 => {
            let pos = rng.random_range(0..tokens.len());
            tokens.remove(pos);
        }
        _ => {
            let from = rng.random_range(0..tokens.len());
            let to = rng.random_range(0..tokens.len());
            apply_move(tokens, from, to);
        }
    }
}

/// Move the token at `from` so it ends up at index `to`.
pub(crate) fn apply_move(tokens: &mut Vec<usize>, from: usize, to: usize) {
    let tok = tokens.remove(from);
    tokens.insert(to, tok);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rgi_automata::{compile_dfa, parse_regex, Alphabet};

    fn binary() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    #[test]
    fn positives_are_always_accepted() {
        let alphabet = binary();
        let regex = parse_regex("(01)*", &alphabet).unwrap();
        let truth = compile_dfa("(01)*", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..500 {
            let s = sample_positive(&regex, &mut rng, 0.5, 20).unwrap();
            assert!(
                truth.accepts_indices(&s),
                "sampled {s:?} outside the language"
            );
            assert!(s.len() <= 20);
        }
    }

    #[test]
    fn choiceless_pattern_is_deterministic() {
        let alphabet = Alphabet::new(["Det", "Adj", "Noun", "Verb"]).unwrap();
        let regex = parse_regex("Noun Verb", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sample_positive(&regex, &mut rng, 0.5, 10).unwrap();
        assert_eq!(s, vec![2, 3]);
    }

    #[test]
    fn star_repetitions_have_geometric_mean_one_at_half() {
        // mean of the geometric count at p = 1/2 is p/(1-p) = 1; the sampled
        // string length for `0*` equals the repetition count
        let alphabet = binary();
        let regex = parse_regex("0*", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let total: usize = (0..n)
            .map(|_| sample_positive(&regex, &mut rng, 0.5, 1_000).unwrap().len())
            .sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean repetition count {mean}");
    }

    #[test]
    fn random_negatives_avoid_the_language() {
        let alphabet = binary();
        let truth = compile_dfa("(0|1)*100", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = sample_negative_random(2, 3, &truth, &mut rng).unwrap();
            assert_eq!(s.len(), 3);
            assert!(!truth.accepts_indices(&s));
            assert_ne!(s, vec![1, 0, 0]);
        }
    }

    #[test]
    fn negative_of_length_zero_fails_when_epsilon_is_positive() {
        let alphabet = binary();
        let truth = compile_dfa("(01)*", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        match sample_negative_random(2, 0, &truth, &mut rng) {
            Err(DatagenError::NegativeBudget { length: 0 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn length_two_negatives_enumerate_correctly() {
        let alphabet = binary();
        let truth = compile_dfa("(01)*", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = sample_negative_random(2, 2, &truth, &mut rng).unwrap();
            assert!(
                [vec![0, 0], vec![1, 0], vec![1, 1]].contains(&s),
                "got {s:?}"
            );
        }
    }

    #[test]
    fn perturbed_negatives_are_rejected_and_close_in_length() {
        let alphabet = binary();
        let truth = compile_dfa("(01)*", &alphabet).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let base = vec![0, 1, 0, 1];
        for _ in 0..1_000 {
            let s = sample_negative_perturb(&base, &truth, &mut rng).unwrap();
            assert!(!truth.accepts_indices(&s));
            assert!((s.len() as isize - base.len() as isize).unsigned_abs() <= 3);
        }
    }

    #[test]
    fn moving_last_token_to_front() {
        let alphabet = Alphabet::new(["Det", "Adj", "Noun", "Verb"]).unwrap();
        let truth = compile_dfa("Det? Adj* Noun Verb (Det? Adj* Noun)?", &alphabet)
            .unwrap()
            .complete();
        // Det Noun Verb -> Verb Det Noun
        let mut tokens = vec![0, 2, 3];
        apply_move(&mut tokens, 2, 0);
        assert_eq!(tokens, vec![3, 0, 2]);
        assert!(!truth.accepts_indices(&tokens));
    }
}
