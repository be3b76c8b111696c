use crate::forward::head;
use crate::mat::Mat;
use crate::params::RnnParams;
use crate::RnnError;

/// Gradient of the mean batch loss, one field per parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub recur_weights: Mat,
    pub input_weights: Mat,
    pub state_bias: Vec<f64>,
    pub head_weights: Mat,
    pub head_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
}

impl Gradients {
    pub fn zeros_like(params: &RnnParams) -> Self {
        let h = params.hidden_width();
        let d = params.input_width();
        let m = params.head_width();
        Gradients {
            recur_weights: Mat::zeros(h, h),
            input_weights: Mat::zeros(h, d),
            state_bias: vec![0.0; h],
            head_weights: Mat::zeros(m, h),
            head_bias: vec![0.0; m],
            output_weights: vec![0.0; m],
            output_bias: 0.0,
        }
    }

    /// Same fixed ordering as [`RnnParams::values`].
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.recur_weights
            .data()
            .iter()
            .chain(self.input_weights.data())
            .chain(self.state_bias.iter())
            .chain(self.head_weights.data())
            .chain(self.head_bias.iter())
            .chain(self.output_weights.iter())
            .copied()
            .chain(std::iter::once(self.output_bias))
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> + '_ {
        self.recur_weights
            .data_mut()
            .iter_mut()
            .chain(self.input_weights.data_mut())
            .chain(self.state_bias.iter_mut())
            .chain(self.head_weights.data_mut())
            .chain(self.head_bias.iter_mut())
            .chain(self.output_weights.iter_mut())
            .chain(std::iter::once(&mut self.output_bias))
    }

    /// Euclidean norm over all entries.
    pub fn global_norm(&self) -> f64 {
        self.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Scale every entry (used for gradient clipping).
    pub fn scale(&mut self, factor: f64) {
        for v in self.values_mut() {
            *v *= factor;
        }
    }
}

/// Exact gradients of the mean cross-entropy loss over a batch, by
/// backpropagation through time. Also returns the batch loss.
///
/// The loss sits on the final prediction only; intermediate states receive no
/// supervision. An empty string contributes head gradients but none for the
/// recurrence.
pub fn backward(
    params: &RnnParams,
    batch: &[(&[usize], bool)],
) -> Result<(Gradients, f64), RnnError> {
    let mut grads = Gradients::zeros_like(params);
    let mut total_loss = 0.0;
    let scale = 1.0 / batch.len() as f64;

    for &(tokens, label) in batch {
        // forward pass, keeping every state
        let trace = crate::forward::forward(params, tokens)?;
        let final_state = trace.states.last().unwrap();
        let (head_hidden, prediction) = head(params, final_state);

        let p = prediction.clamp(crate::forward::CLAMP_EPS, 1.0 - crate::forward::CLAMP_EPS);
        total_loss += if label { -p.ln() } else { -(1.0 - p).ln() };

        // d loss / d z for sigmoid + cross entropy
        let dz = (prediction - f64::from(u8::from(label))) * scale;

        grads.output_bias += dz;
        for (g, h) in grads.output_weights.iter_mut().zip(&head_hidden) {
            *g += dz * h;
        }

        // through the head sigmoid layer
        let dg: Vec<f64> = head_hidden
            .iter()
            .zip(&params.output_weights)
            .map(|(&h, &a)| dz * a * h * (1.0 - h))
            .collect();
        grads.head_weights.add_outer(&dg, final_state);
        for (g, d) in grads.head_bias.iter_mut().zip(&dg) {
            *g += d;
        }

        // back through time
        let mut dstate = params.head_weights.matvec_transposed(&dg);
        for t in (1..trace.states.len()).rev() {
            let state = &trace.states[t];
            let dpre: Vec<f64> = dstate
                .iter()
                .zip(state)
                .map(|(&ds, &s)| ds * (1.0 - s * s))
                .collect();
            grads.recur_weights.add_outer(&dpre, &trace.states[t - 1]);
            grads.input_weights.add_column(tokens[t - 1], &dpre);
            for (g, d) in grads.state_bias.iter_mut().zip(&dpre) {
                *g += d;
            }
            dstate = params.recur_weights.matvec_transposed(&dpre);
        }
    }

    Ok((grads, total_loss * scale))
}
