use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    /// An internal consistency failure, e.g. a message addressed to a slot
    /// that holds no object. Signals a graph-construction bug.
    #[error("simulation fault: {0}")]
    Fault(String),

    #[error("cycle cap of {cap} cycles exceeded")]
    CycleCap { cap: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
