use serde::Serialize;

use rgi_rnn::StateTrace;

/// Two positions in one trace whose states (nearly) coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CyclePair {
    pub t1: usize,
    pub t2: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StringCycles {
    pub string: usize,
    pub pairs: Vec<CyclePair>,
    /// pairs with bitwise-identical states
    pub exact_repeats: usize,
}

/// Revisited hidden states across a set of traces.
///
/// A pair (t1, t2) is reported when the states at those positions are within
/// `epsilon` (Euclidean); bitwise-equal repeats are counted separately, since
/// for real-valued dynamics exact coincidence is the surprising case.
#[derive(Debug, Clone, Serialize)]
pub struct CycleReport {
    pub epsilon: f64,
    pub traces: usize,
    pub strings_with_repeats: usize,
    pub total_pairs: usize,
    pub total_exact_repeats: usize,
    /// per-string detail for strings that have repeats, capped by the caller
    pub per_string: Vec<StringCycles>,
}

/// Compare every within-trace position pair. Positions index the full trace,
/// 0 being the initial state. `max_detailed` caps the per-string listing;
/// the aggregate counters always cover everything.
pub fn detect_cycles(traces: &[StateTrace], epsilon: f64, max_detailed: usize) -> CycleReport {
    assert!(epsilon >= 0.0);
    let mut report = CycleReport {
        epsilon,
        traces: traces.len(),
        strings_with_repeats: 0,
        total_pairs: 0,
        total_exact_repeats: 0,
        per_string: Vec::new(),
    };
    for (string_idx, trace) in traces.iter().enumerate() {
        let states = &trace.states;
        let mut pairs = Vec::new();
        let mut exact = 0usize;
        for t1 in 0..states.len() {
            for t2 in (t1 + 1)..states.len() {
                let distance = euclidean(&states[t1], &states[t2]);
                let bitwise = states[t1] == states[t2];
                if bitwise || distance <= epsilon {
                    pairs.push(CyclePair { t1, t2, distance });
                    if bitwise {
                        exact += 1;
                    }
                }
            }
        }
        if !pairs.is_empty() {
            report.strings_with_repeats += 1;
            report.total_pairs += pairs.len();
            report.total_exact_repeats += exact;
            if report.per_string.len() < max_detailed {
                report.per_string.push(StringCycles {
                    string: string_idx,
                    pairs,
                    exact_repeats: exact,
                });
            }
        }
    }
    report
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(states: Vec<Vec<f64>>) -> StateTrace {
        StateTrace {
            states,
            prediction: 0.5,
        }
    }

    #[test]
    fn bitwise_repeats_are_counted_exactly() {
        let t = trace(vec![
            vec![0.0, 0.0],
            vec![0.5, 0.5],
            vec![0.25, 0.1],
            vec![0.7, 0.3],
            vec![0.25, 0.1],
        ]);
        let report = detect_cycles(&[t], 0.0, 10);
        assert_eq!(report.total_pairs, 1);
        assert_eq!(report.total_exact_repeats, 1);
        assert_eq!(
            report.per_string[0].pairs[0],
            CyclePair {
                t1: 2,
                t2: 4,
                distance: 0.0
            }
        );
    }

    #[test]
    fn all_distinct_states_yield_an_empty_report() {
        let t = trace(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        let report = detect_cycles(&[t], 0.0, 10);
        assert_eq!(report.total_pairs, 0);
        assert_eq!(report.strings_with_repeats, 0);
        assert!(report.per_string.is_empty());
    }

    #[test]
    fn near_repeats_respect_the_epsilon_bound() {
        let t = trace(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0 + 1e-7, 1.0]]);
        let report = detect_cycles(&[t], 1e-6, 10);
        assert_eq!(report.total_pairs, 1);
        assert_eq!(report.total_exact_repeats, 0);
        let pair = report.per_string[0].pairs[0];
        assert_eq!((pair.t1, pair.t2), (1, 2));
        assert!(pair.distance <= 1e-6);
    }

    #[test]
    fn detail_cap_does_not_affect_aggregates() {
        let repeated = trace(vec![vec![1.0], vec![1.0]]);
        let traces: Vec<StateTrace> = (0..5).map(|_| repeated.clone()).collect();
        let report = detect_cycles(&traces, 0.0, 2);
        assert_eq!(report.strings_with_repeats, 5);
        assert_eq!(report.total_pairs, 5);
        assert_eq!(report.per_string.len(), 2);
    }
}
