use rgi_automata::Dfa;
use rgi_rnn::RnnParams;

use crate::build::{build_dfa, fidelity, ExtractedDfa, FidelityReport};
use crate::collect::{collect_states, StateCollection};
use crate::kmeans::{kmeans, Clustering};
use crate::{derive_seed, ExtractionError};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionOptions {
    /// Minimum fidelity between the quantized automaton and the network.
    pub threshold: f64,
    /// Largest K tried before giving up.
    pub k_max: usize,
    /// k-means restarts per K; the run with the fewest vote conflicts wins.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        // 0.99 lets the K search stop before clusters separate the automaton
        // structure (a 10,000-string validation set tolerates 100 stray
        // disagreements); 0.999 forces K up to where votes are clean.
        ExtractionOptions {
            threshold: 0.999,
            k_max: 50,
            restarts: 10,
            seed: 0,
        }
    }
}

/// Outcome of the minimal-K search.
#[derive(Debug, Clone)]
pub struct Selection {
    pub k: usize,
    pub clustering: Clustering,
    pub extracted: ExtractedDfa,
    pub fidelity: FidelityReport,
    /// (K, fidelity) for every K tried, in order
    pub curve: Vec<(usize, f64)>,
}

/// Search K = 2, 3, ... for the smallest clustering whose automaton matches
/// the network's classifications at `threshold` or better.
pub fn select_k(
    collection: &StateCollection,
    options: &ExtractionOptions,
) -> Result<Selection, ExtractionError> {
    if collection.is_empty() {
        return Err(ExtractionError::EmptyCollection);
    }
    let mut curve = Vec::new();
    let mut best: Option<(usize, f64)> = None;

    for k in 2..=options.k_max {
        let candidate = match best_of_restarts(collection, k, options) {
            Ok(c) => c,
            // ran out of distinct points: no larger K can exist
            Err(ExtractionError::KTooLarge { .. }) => break,
            Err(e) => return Err(e),
        };
        let (clustering, extracted, report) = candidate;
        curve.push((k, report.match_rate));
        if best.is_none_or(|(_, rate)| report.match_rate > rate) {
            best = Some((k, report.match_rate));
        }
        if report.match_rate >= options.threshold {
            return Ok(Selection {
                k,
                clustering,
                extracted,
                fidelity: report,
                curve,
            });
        }
    }

    let (best_k, best_fidelity) = best.unwrap_or((0, 0.0));
    Err(ExtractionError::ThresholdNotReached {
        threshold: options.threshold,
        k_max: options.k_max,
        best_k,
        best_fidelity,
        curve,
    })
}

/// Among the restarts at one K, prefer the clustering whose automaton is the
/// most deterministic: fewest vote conflicts, then highest fidelity, then
/// lowest inertia. A low-conflict clustering is the one that actually
/// reflects the network's state structure.
fn best_of_restarts(
    collection: &StateCollection,
    k: usize,
    options: &ExtractionOptions,
) -> Result<(Clustering, ExtractedDfa, FidelityReport), ExtractionError> {
    let mut best: Option<(Clustering, ExtractedDfa, FidelityReport)> = None;
    for restart in 0..options.restarts.max(1) {
        let seed = derive_seed(options.seed, &format!("kmeans-k{k}-r{restart}"));
        let clustering = kmeans(&collection.points, k, seed)?;
        let extracted = build_dfa(collection, &clustering)?;
        let report = fidelity(&extracted, collection);
        let better = match &best {
            None => true,
            Some((current, current_extracted, current_report)) => {
                let conflicts = extracted.transition_conflict_rate + extracted.accept_conflict_rate;
                let current_conflicts = current_extracted.transition_conflict_rate
                    + current_extracted.accept_conflict_rate;
                (conflicts, -report.match_rate, clustering.inertia)
                    < (
                        current_conflicts,
                        -current_report.match_rate,
                        current.inertia,
                    )
            }
        };
        if better {
            best = Some((clustering, extracted, report));
        }
    }
    Ok(best.expect("at least one restart"))
}

/// The full extraction result.
#[derive(Debug, Clone)]
pub struct Extraction {
    /// minimal complete DFA equivalent to the completed raw automaton
    pub minimized: Dfa,
    pub raw: ExtractedDfa,
    pub clustering: Clustering,
    pub fidelity: FidelityReport,
    pub k: usize,
    pub curve: Vec<(usize, f64)>,
    pub collection: StateCollection,
}

/// collect -> select_k -> complete -> minimize.
///
/// The minimized automaton is checked equivalent to the completed raw one
/// before returning.
pub fn extract(
    params: &RnnParams,
    strings: &[Vec<usize>],
    options: &ExtractionOptions,
) -> Result<Extraction, ExtractionError> {
    let collection = collect_states(params, strings)?;
    let selection = select_k(&collection, options)?;
    let completed = selection.extracted.dfa.complete();
    let minimized = completed.minimize()?;
    assert!(
        minimized.equivalent(&completed)?.is_none(),
        "minimization must preserve the extracted language"
    );
    Ok(Extraction {
        minimized,
        raw: selection.extracted,
        clustering: selection.clustering,
        fidelity: selection.fidelity,
        k: selection.k,
        curve: selection.curve,
        collection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rgi_automata::{compile_dfa, Alphabet};
    use rgi_datagen::{generate_dataset, GenConfig};
    use rgi_rnn::{train, TrainConfig};

    fn trained_setup(pattern: &str, seed: u64) -> (RnnParams, Vec<Vec<usize>>, Dfa) {
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let gen_config = GenConfig {
            train_size: 8_000,
            validation_size: 4_000,
            test_size: 500,
            seed,
            ..GenConfig::default()
        };
        let dataset = generate_dataset(pattern, &alphabet, &gen_config).unwrap();
        let train_config = TrainConfig {
            seed,
            ..TrainConfig::default()
        };
        let (params, history) = train(&dataset, &train_config).unwrap();
        assert!(
            history.iter().any(|h| h.val_accuracy >= 0.99),
            "training must converge"
        );
        let strings: Vec<Vec<usize>> = dataset
            .validation
            .iter()
            .map(|s| s.tokens.clone())
            .collect();
        let truth = compile_dfa(pattern, &alphabet).unwrap();
        (params, strings, truth)
    }

    #[test]
    fn trained_network_recovers_the_ending_language() {
        let (params, strings, truth) = trained_setup("(0|1)*100", 1);
        let extraction = extract(&params, &strings, &ExtractionOptions::default()).unwrap();
        assert!(extraction.fidelity.match_rate >= 0.99);
        assert_eq!(extraction.minimized.equivalent(&truth).unwrap(), None);
        assert_eq!(extraction.minimized.state_count(), 4);
        assert!(
            extraction.k >= 4,
            "a faithful quantization needs at least 4 clusters"
        );
    }

    #[test]
    fn trained_network_recovers_the_alternating_language() {
        let (params, strings, truth) = trained_setup("(01)*", 2);
        let extraction = extract(&params, &strings, &ExtractionOptions::default()).unwrap();
        assert_eq!(extraction.minimized.equivalent(&truth).unwrap(), None);
    }

    #[test]
    fn zero_threshold_selects_k_two() {
        let (params, strings, _) = trained_setup("(01)*", 3);
        let options = ExtractionOptions {
            threshold: 0.0,
            ..ExtractionOptions::default()
        };
        let collection = collect_states(&params, &strings).unwrap();
        let selection = select_k(&collection, &options).unwrap();
        assert_eq!(selection.k, 2);
        assert_eq!(selection.curve.len(), 1);
    }

    #[test]
    fn curve_records_every_k_tried() {
        let (params, strings, _) = trained_setup("(0|1)*100", 4);
        let collection = collect_states(&params, &strings).unwrap();
        let selection = select_k(&collection, &ExtractionOptions::default()).unwrap();
        assert_eq!(selection.curve.len(), selection.k - 1);
        for (i, &(k, rate)) in selection.curve.iter().enumerate() {
            assert_eq!(k, i + 2);
            assert!((0.0..=1.0).contains(&rate));
        }
        assert!(selection.curve.last().unwrap().1 >= 0.99);
    }

    #[test]
    fn unreachable_threshold_reports_the_curve() {
        let (params, strings, _) = trained_setup("(01)*", 5);
        let collection = collect_states(&params, &strings).unwrap();
        let options = ExtractionOptions {
            threshold: 1.1,
            k_max: 4,
            ..ExtractionOptions::default()
        };
        match select_k(&collection, &options) {
            Err(ExtractionError::ThresholdNotReached { curve, best_k, .. }) => {
                assert_eq!(curve.len(), 3);
                assert!(best_k >= 2);
            }
            other => panic!("expected threshold error, got {other:?}"),
        }
    }

    #[test]
    fn replaying_source_strings_follows_recorded_clusters_unless_conflicted() {
        let (params, strings, _) = trained_setup("(0|1)*100", 6);
        let collection = collect_states(&params, &strings).unwrap();
        let selection = select_k(&collection, &ExtractionOptions::default()).unwrap();
        let extracted = &selection.extracted;

        let mut point = 0usize;
        for tokens in &collection.strings {
            let mut state = 0usize;
            let mut diverged = false;
            for &token in tokens {
                let recorded = selection.clustering.assignment[point] + 1;
                point += 1;
                if diverged {
                    continue;
                }
                let chosen = extracted
                    .dfa
                    .transition(state, token)
                    .expect("visited edge");
                if chosen != recorded {
                    // divergence is only legal at a conflicted vote
                    let tally = &extracted.transition_votes[&(state, token)];
                    assert!(tally.len() > 1, "clean vote diverged at ({state}, {token})");
                    diverged = true;
                } else {
                    state = chosen;
                }
            }
        }
    }
}
