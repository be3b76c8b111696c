use thiserror::Error;

/// Exit codes: 0 ok, 2 usage or input problems, 3 training failure, 4
/// extraction failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Automata(#[from] rgi_automata::AutomataError),

    #[error(transparent)]
    Datagen(#[from] rgi_datagen::DatagenError),

    #[error(transparent)]
    Rnn(#[from] rgi_rnn::RnnError),

    #[error(transparent)]
    Extraction(#[from] rgi_extraction::ExtractionError),

    #[error(transparent)]
    Analysis(#[from] rgi_analysis::AnalysisError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rnn(rgi_rnn::RnnError::NonFiniteLoss { .. }) => 3,
            CliError::Extraction(rgi_extraction::ExtractionError::ThresholdNotReached {
                ..
            }) => 4,
            _ => 2,
        }
    }
}
