//! Error type shared across the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("empty input: {0}")]
    EmptyData(&'static str),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("training diverged (non-finite loss) for model '{model_id}'")]
    TrainingDiverged { model_id: String },

    #[error("attack '{attack_id}' on model '{model_id}', sample {sample_id}: {source}")]
    Attack {
        model_id: String,
        attack_id: String,
        sample_id: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("pipeline stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
