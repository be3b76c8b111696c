//! A deliberately small recurrent classifier.
//!
//! The transition is one fully-connected tanh layer,
//!
//! ```text
//! s_t = tanh(W s_{t-1} + U x_t + v)
//! ```
//!
//! and the prediction head is a two-layer sigmoid read-out of the final
//! state,
//!
//! ```text
//! y = sigmoid(A sigmoid(B s_n + c) + d)
//! ```
//!
//! with one-hot token inputs and the zero vector as the initial state.
//! Training minimizes cross entropy over final predictions with Adam;
//! gradients come from exact backpropagation through time. Everything is
//! deterministic given the seed.

mod adam;
mod backward;
mod forward;
mod mat;
mod params;
mod train;

pub use adam::{adam_step, AdamState};
pub use backward::{backward, Gradients};
pub use forward::{evaluate, forward, loss, predict, StateTrace};
pub use mat::Mat;
pub use params::{init_params, load_params, save_params, RnnParams};
pub use train::{train, EpochStats, TrainConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RnnError {
    #[error("token index {token} out of range for input width {width}")]
    UnknownToken { token: usize, width: usize },

    #[error("predictions and labels differ in length ({predictions} vs {labels})")]
    LengthMismatch { predictions: usize, labels: usize },

    #[error("cannot evaluate an empty string set")]
    EmptyEvaluation,

    #[error("invalid training config: {0}")]
    InvalidConfig(String),

    #[error("training diverged: non-finite loss in epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },

    #[error("{path}: malformed parameter file at line {line}: {message}")]
    MalformedParams {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
