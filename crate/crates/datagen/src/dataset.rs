use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rgi_automata::{compile_nfa, parse_regex, Alphabet, Dfa};

use crate::config::{DedupPolicy, GenConfig, NegativeMethod};
use crate::sample::{sample_negative_perturb, sample_negative_random, sample_positive};
use crate::{derive_seed, DatagenError};

/// Where a string came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Positive,
    RandomNegative,
    PerturbedNegative,
}

impl Origin {
    pub(crate) fn code(self) -> char {
        match self {
            Origin::Positive => 'p',
            Origin::RandomNegative => 'r',
            Origin::PerturbedNegative => 'm',
        }
    }

    pub(crate) fn from_code(c: char) -> Option<Self> {
        match c {
            'p' => Some(Origin::Positive),
            'r' => Some(Origin::RandomNegative),
            'm' => Some(Origin::PerturbedNegative),
            _ => None,
        }
    }
}

/// A token sequence with its membership label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledString {
    pub tokens: Vec<usize>,
    pub label: bool,
    pub origin: Origin,
}

/// Train/validation/test splits plus the provenance needed to regenerate
/// them: pattern, alphabet, seed, and the full generation config.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub train: Vec<LabeledString>,
    pub validation: Vec<LabeledString>,
    pub test: Vec<LabeledString>,
    pub regex: String,
    pub alphabet: Alphabet,
    pub seed: u64,
    pub config: GenConfig,
}

impl Dataset {
    pub fn split(&self, name: &str) -> Option<&[LabeledString]> {
        match name {
            "train" => Some(&self.train),
            "validation" => Some(&self.validation),
            "test" => Some(&self.test),
            _ => None,
        }
    }

    pub fn splits(&self) -> [(&'static str, &[LabeledString]); 3] {
        [
            ("train", &self.train),
            ("validation", &self.validation),
            ("test", &self.test),
        ]
    }

    /// Re-check every label against a ground-truth DFA; returns the number of
    /// mismatches (0 for a healthy corpus).
    pub fn audit(&self, truth: &Dfa) -> usize {
        self.splits()
            .iter()
            .flat_map(|(_, items)| items.iter())
            .filter(|item| truth.accepts_indices(&item.tokens) != item.label)
            .count()
    }
}

/// Generate a balanced dataset for `pattern`. Deterministic in
/// `config.seed`; each split draws from its own derived seed.
pub fn generate_dataset(
    pattern: &str,
    alphabet: &Alphabet,
    config: &GenConfig,
) -> Result<Dataset, DatagenError> {
    config.validate()?;
    let regex = parse_regex(pattern, alphabet)?;
    let truth = compile_nfa(&regex).determinize()?.minimize()?;

    // a language with no members or no non-members cannot yield a balanced set
    let has_positive = truth.accepting_states().next().is_some();
    let has_negative = (0..truth.state_count()).any(|s| !truth.is_accepting(s));
    if !has_positive || !has_negative {
        return Err(DatagenError::DegenerateLanguage);
    }

    let mut dataset = Dataset {
        train: Vec::new(),
        validation: Vec::new(),
        test: Vec::new(),
        regex: pattern.to_string(),
        alphabet: alphabet.clone(),
        seed: config.seed,
        config: config.clone(),
    };
    for (name, size) in [
        ("train", config.train_size),
        ("validation", config.validation_size),
        ("test", config.test_size),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, name));
        let split = generate_split(&regex, &truth, config, size, name, &mut rng)?;
        match name {
            "train" => dataset.train = split,
            "validation" => dataset.validation = split,
            _ => dataset.test = split,
        }
    }
    debug_assert_eq!(dataset.audit(&truth), 0);
    Ok(dataset)
}

/// Fraction of negative lengths drawn uniformly from the short range
/// 0..=OFF_SUPPORT_LENGTH_CAP instead of resampled from the positives.
/// Patterns whose members all share one parity or a minimum length would
/// otherwise leave whole length classes out of the corpus, and the network's
/// behavior there would be unconstrained noise. Kept small so the negative
/// length distribution still tracks the positive one.
const OFF_SUPPORT_LENGTH_PROB: f64 = 0.03;
const OFF_SUPPORT_LENGTH_CAP: usize = 8;

fn generate_split(
    regex: &rgi_automata::Regex,
    truth: &Dfa,
    config: &GenConfig,
    size: usize,
    name: &str,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<LabeledString>, DatagenError> {
    let positives_wanted = size.div_ceil(2);
    let negatives_wanted = size / 2;
    let dedup = config.dedup == DedupPolicy::WithinSplit;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();

    let mut items: Vec<LabeledString> = Vec::with_capacity(size);
    let mut positive_lengths = Vec::with_capacity(positives_wanted);
    for _ in 0..positives_wanted {
        let tokens = draw_unique(dedup, &mut seen, name, || {
            sample_positive(regex, rng, config.continuation_prob, config.max_len)
        })?;
        if !truth.accepts_indices(&tokens) {
            return Err(DatagenError::LabelMismatch);
        }
        positive_lengths.push(tokens.len());
        items.push(LabeledString {
            tokens,
            label: true,
            origin: Origin::Positive,
        });
    }

    for _ in 0..negatives_wanted {
        let (tokens, origin) = match config.method {
            NegativeMethod::Random => {
                let short_cap = positive_lengths
                    .iter()
                    .copied()
                    .max()
                    .unwrap_or(0)
                    .min(OFF_SUPPORT_LENGTH_CAP);
                let tokens = draw_unique(dedup, &mut seen, name, || {
                    // resample a length from the split's positives (with a
                    // small short-length admixture) until the complement
                    // yields a string there
                    let mut last_err = None;
                    for _ in 0..50 {
                        let len = if rng.random::<f64>() < OFF_SUPPORT_LENGTH_PROB {
                            rng.random_range(0..=short_cap)
                        } else {
                            positive_lengths[rng.random_range(0..positive_lengths.len())]
                        };
                        match sample_negative_random(truth.alphabet().len(), len, truth, rng) {
                            Ok(tokens) => return Ok(tokens),
                            Err(e) => last_err = Some(e),
                        }
                    }
                    Err(last_err.unwrap_or(DatagenError::DegenerateLanguage))
                })?;
                (tokens, Origin::RandomNegative)
            }
            NegativeMethod::Perturb => {
                let tokens = draw_unique(dedup, &mut seen, name, || {
                    let base = &items[rng.random_range(0..positives_wanted)];
                    sample_negative_perturb(&base.tokens, truth, rng)
                })?;
                (tokens, Origin::PerturbedNegative)
            }
        };
        if truth.accepts_indices(&tokens) {
            return Err(DatagenError::LabelMismatch);
        }
        items.push(LabeledString {
            tokens,
            label: false,
            origin,
        });
    }

    items.shuffle(rng);
    Ok(items)
}

fn draw_unique(
    dedup: bool,
    seen: &mut HashSet<Vec<usize>>,
    split: &str,
    mut draw: impl FnMut() -> Result<Vec<usize>, DatagenError>,
) -> Result<Vec<usize>, DatagenError> {
    if !dedup {
        return draw();
    }
    for _ in 0..1_000 {
        let tokens = draw()?;
        if seen.insert(tokens.clone()) {
            return Ok(tokens);
        }
    }
    Err(DatagenError::DedupBudget {
        split: split.to_string(),
    })
}
