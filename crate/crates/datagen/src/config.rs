use serde::{Deserialize, Serialize};

use crate::DatagenError;

/// How negatives are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeMethod {
    /// Uniform token sequences at lengths resampled from the positives,
    /// rejected until outside the language.
    Random,
    /// Small edits (delete / insert / move) applied to positives until the
    /// result falls outside the language.
    Perturb,
}

impl NegativeMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            NegativeMethod::Random => "random",
            NegativeMethod::Perturb => "perturb",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "random" => Some(NegativeMethod::Random),
            "perturb" => Some(NegativeMethod::Perturb),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupPolicy {
    /// Duplicates allowed everywhere (short languages cannot avoid them).
    None,
    /// No string appears twice within one split.
    WithinSplit,
}

/// Generation parameters. The defaults produce the standard split sizes
/// 15,000 / 10,000 / 10,000 with balanced labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub train_size: usize,
    pub validation_size: usize,
    pub test_size: usize,
    pub method: NegativeMethod,
    /// Star continuation probability: a star runs i extra repetitions with
    /// probability (1-p)·p^i.
    pub continuation_prob: f64,
    pub max_len: usize,
    pub dedup: DedupPolicy,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            train_size: 15_000,
            validation_size: 10_000,
            test_size: 10_000,
            method: NegativeMethod::Random,
            continuation_prob: 0.5,
            max_len: 30,
            dedup: DedupPolicy::None,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), DatagenError> {
        if !(self.continuation_prob > 0.0 && self.continuation_prob < 1.0) {
            return Err(DatagenError::InvalidConfig(format!(
                "continuation probability {} not in (0, 1)",
                self.continuation_prob
            )));
        }
        if self.max_len < 1 {
            return Err(DatagenError::InvalidConfig(
                "max_len must be at least 1".into(),
            ));
        }
        if self.train_size == 0 || self.validation_size == 0 || self.test_size == 0 {
            return Err(DatagenError::InvalidConfig(
                "split sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}
