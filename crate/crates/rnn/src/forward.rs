use rgi_datagen::LabeledString;

use crate::params::RnnParams;
use crate::RnnError;

/// Predictions are clamped into [EPS, 1-EPS] before logs.
pub(crate) const CLAMP_EPS: f64 = 1e-12;

/// The hidden states visited while reading one string, starting from s_0 = 0,
/// plus the head's final prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrace {
    /// length = string length + 1; entry 0 is the zero initial state
    pub states: Vec<Vec<f64>>,
    /// sigmoid output in (0, 1)
    pub prediction: f64,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn step(params: &RnnParams, state: &[f64], token: usize) -> Vec<f64> {
    let mut next = params.recur_weights.matvec(state);
    for (h, (u_col, bias)) in next.iter_mut().zip(
        (0..params.hidden_width())
            .map(|r| (params.input_weights.get(r, token), params.state_bias[r])),
    ) {
        *h = (*h + u_col + bias).tanh();
    }
    next
}

/// The head: y = sigmoid(A sigmoid(B s + c) + d). Returns (hidden head
/// activations, prediction); the activations are reused by backpropagation.
pub(crate) fn head(params: &RnnParams, state: &[f64]) -> (Vec<f64>, f64) {
    let mut hidden = params.head_weights.matvec(state);
    for (g, c) in hidden.iter_mut().zip(&params.head_bias) {
        *g = sigmoid(*g + c);
    }
    let z: f64 = params
        .output_weights
        .iter()
        .zip(&hidden)
        .map(|(a, h)| a * h)
        .sum::<f64>()
        + params.output_bias;
    (hidden, sigmoid(z))
}

fn check_tokens(params: &RnnParams, tokens: &[usize]) -> Result<(), RnnError> {
    let width = params.input_width();
    match tokens.iter().find(|&&t| t >= width) {
        Some(&token) => Err(RnnError::UnknownToken { token, width }),
        None => Ok(()),
    }
}

/// Run the network over a token sequence, recording every hidden state.
pub fn forward(params: &RnnParams, tokens: &[usize]) -> Result<StateTrace, RnnError> {
    check_tokens(params, tokens)?;
    let mut states = Vec::with_capacity(tokens.len() + 1);
    states.push(vec![0.0; params.hidden_width()]);
    for &tok in tokens {
        let next = step(params, states.last().unwrap(), tok);
        states.push(next);
    }
    let (_, prediction) = head(params, states.last().unwrap());
    Ok(StateTrace { states, prediction })
}

/// Prediction only, without storing the trace.
pub fn predict(params: &RnnParams, tokens: &[usize]) -> Result<f64, RnnError> {
    check_tokens(params, tokens)?;
    let mut state = vec![0.0; params.hidden_width()];
    for &tok in tokens {
        state = step(params, &state, tok);
    }
    Ok(head(params, &state).1)
}

/// Mean binary cross entropy over a batch of final predictions.
pub fn loss(predictions: &[f64], labels: &[bool]) -> Result<f64, RnnError> {
    if predictions.len() != labels.len() {
        return Err(RnnError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    let n = predictions.len() as f64;
    let total: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = p.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS);
            if y {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    Ok(total / n)
}

/// Fraction of strings whose thresholded prediction (>= 0.5) matches the
/// label.
pub fn evaluate(params: &RnnParams, items: &[LabeledString]) -> Result<f64, RnnError> {
    if items.is_empty() {
        return Err(RnnError::EmptyEvaluation);
    }
    let mut correct = 0usize;
    for item in items {
        let p = predict(params, &item.tokens)?;
        if (p >= 0.5) == item.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / items.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::init_params;
    use crate::train::TrainConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rgi_automata::Alphabet;
    use rgi_datagen::Origin;

    fn binary() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    fn random_params(seed: u64) -> RnnParams {
        let config = TrainConfig {
            hidden_width: 6,
            head_width: 4,
            ..TrainConfig::default()
        };
        init_params(&binary(), &config, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn zero_params() -> RnnParams {
        let mut p = random_params(0);
        for v in p.values_mut() {
            *v = 0.0;
        }
        p
    }

    #[test]
    fn zero_parameters_predict_one_half() {
        let trace = forward(&zero_params(), &[0, 1, 0]).unwrap();
        assert!(trace.states.iter().all(|s| s.iter().all(|&v| v == 0.0)));
        assert_eq!(trace.prediction, 0.5);
    }

    #[test]
    fn empty_string_trace_is_initial_state_only() {
        let p = random_params(1);
        let trace = forward(&p, &[]).unwrap();
        assert_eq!(trace.states.len(), 1);
        assert!(trace.states[0].iter().all(|&v| v == 0.0));
        assert_eq!(trace.prediction, predict(&p, &[]).unwrap());
    }

    #[test]
    fn states_stay_inside_tanh_range() {
        let p = random_params(2);
        let trace = forward(&p, &[0, 1, 1, 0, 1, 0, 0, 1]).unwrap();
        for s in &trace.states[1..] {
            assert!(s.iter().all(|&v| v.abs() < 1.0));
        }
        assert!(trace.prediction > 0.0 && trace.prediction < 1.0);
    }

    #[test]
    fn forward_rejects_out_of_range_tokens() {
        let p = random_params(3);
        assert!(matches!(
            forward(&p, &[0, 2]),
            Err(RnnError::UnknownToken { token: 2, width: 2 })
        ));
    }

    #[test]
    fn loss_closed_forms() {
        let ln2 = std::f64::consts::LN_2;
        assert!((loss(&[0.5, 0.5], &[true, false]).unwrap() - ln2).abs() < 1e-12);
        assert!(loss(&[1.0 - 1e-12, 1e-12], &[true, false]).unwrap() < 1e-9);
        assert!((loss(&[0.9], &[false]).unwrap() - (-(0.1f64).ln())).abs() < 1e-9);
        assert!(matches!(
            loss(&[0.5], &[]),
            Err(RnnError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_complements_on_flipped_labels() {
        let p = random_params(4);
        let items: Vec<LabeledString> = (0..64)
            .map(|i| LabeledString {
                tokens: (0..(i % 7)).map(|j| (i + j) % 2).collect(),
                label: i % 3 == 0,
                origin: Origin::Positive,
            })
            .collect();
        let flipped: Vec<LabeledString> = items
            .iter()
            .map(|s| LabeledString {
                label: !s.label,
                ..s.clone()
            })
            .collect();
        let acc = evaluate(&p, &items).unwrap();
        let acc_flipped = evaluate(&p, &flipped).unwrap();
        assert!((acc + acc_flipped - 1.0).abs() < 1e-12);
        assert!(matches!(evaluate(&p, &[]), Err(RnnError::EmptyEvaluation)));
    }

    #[test]
    fn untrained_params_sit_near_chance_on_a_balanced_set() {
        use rand::{RngExt, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let p = random_params(11);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let items: Vec<LabeledString> = (0..10_000)
            .map(|i| LabeledString {
                tokens: (0..rng.random_range(1..=10))
                    .map(|_| rng.random_range(0..2))
                    .collect(),
                label: i % 2 == 0,
                origin: Origin::Positive,
            })
            .collect();
        let acc = evaluate(&p, &items).unwrap();
        // labels are independent of the strings, so anything the untrained
        // network does lands near chance
        assert!((acc - 0.5).abs() < 0.03, "accuracy {acc}");
    }
}
