use crate::backward::Gradients;
use crate::params::RnnParams;
use crate::train::TrainConfig;

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    first_moment: Gradients,
    second_moment: Gradients,
    step: usize,
}

impl AdamState {
    pub fn new(params: &RnnParams) -> Self {
        AdamState {
            first_moment: Gradients::zeros_like(params),
            second_moment: Gradients::zeros_like(params),
            step: 0,
        }
    }

    pub fn step_count(&self) -> usize {
        self.step
    }
}

/// One Adam update with bias correction:
///
/// ```text
/// m <- b1 m + (1-b1) g        mhat = m / (1 - b1^t)
/// u <- b2 u + (1-b2) g^2      uhat = u / (1 - b2^t)
/// theta <- theta - lr * mhat / (sqrt(uhat) + eps)
/// ```
pub fn adam_step(
    params: &mut RnnParams,
    grads: &Gradients,
    state: &mut AdamState,
    config: &TrainConfig,
) {
    state.step += 1;
    let t = state.step as i32;
    let bias1 = 1.0 - config.beta1.powi(t);
    let bias2 = 1.0 - config.beta2.powi(t);

    for (((theta, g), m), u) in params
        .values_mut()
        .zip(grads.values())
        .zip(state.first_moment.values_mut())
        .zip(state.second_moment.values_mut())
    {
        *m = config.beta1 * *m + (1.0 - config.beta1) * g;
        *u = config.beta2 * *u + (1.0 - config.beta2) * g * g;
        let m_hat = *m / bias1;
        let u_hat = *u / bias2;
        *theta -= config.learning_rate * m_hat / (u_hat.sqrt() + config.epsilon);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::init_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rgi_automata::Alphabet;

    fn setup() -> (RnnParams, TrainConfig) {
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let config = TrainConfig {
            hidden_width: 3,
            head_width: 2,
            ..TrainConfig::default()
        };
        let params = init_params(&alphabet, &config, &mut ChaCha8Rng::seed_from_u64(5));
        (params, config)
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let (mut params, config) = setup();
        let before: Vec<f64> = params.values().collect();
        let mut grads = Gradients::zeros_like(&params);
        for g in grads.values_mut() {
            *g = 0.25;
        }
        let mut state = AdamState::new(&params);
        adam_step(&mut params, &grads, &mut state, &config);
        for (b, a) in before.iter().zip(params.values()) {
            // bias-corrected ratio is 1 on the first step, up to epsilon
            let moved = (b - a).abs();
            assert!((moved - config.learning_rate).abs() < 1e-6, "moved {moved}");
        }
    }

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let (mut params, config) = setup();
        let before = params.clone();
        let grads = Gradients::zeros_like(&params);
        let mut state = AdamState::new(&params);
        adam_step(&mut params, &grads, &mut state, &config);
        assert_eq!(params, before);
    }

    #[test]
    fn updates_are_deterministic() {
        let (params, config) = setup();
        let mut grads = Gradients::zeros_like(&params);
        for (i, g) in grads.values_mut().enumerate() {
            *g = (i as f64 * 0.37).sin();
        }
        let mut a = params.clone();
        let mut b = params.clone();
        let mut state_a = AdamState::new(&a);
        let mut state_b = AdamState::new(&b);
        for _ in 0..3 {
            adam_step(&mut a, &grads, &mut state_a, &config);
            adam_step(&mut b, &grads, &mut state_b, &config);
        }
        assert_eq!(a, b);
        assert_eq!(state_a.step_count(), 3);
    }
}
