use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("event `{event}` has inconsistent times (rows {first_row} and {row})")]
    InconsistentTime {
        event: String,
        first_row: u64,
        row: u64,
    },

    #[error("id `{id}` is used both as an actor and as an event (row {row})")]
    IdCollision { id: String, row: u64 },

    #[error("row {row}: {message}")]
    BadRow { row: u64, message: String },

    #[error("unknown actor `{0}`")]
    UnknownActor(String),

    #[error("actors must be distinct")]
    NonDistinctActors,

    #[error("a triad census needs at least 3 actors, got {0}")]
    TooFewActors(usize),

    #[error("event `{0}` has no time")]
    MissingTime(String),

    #[error("index {index} is out of range 1..={max}")]
    IndexOutOfRange { index: u64, max: u64 },

    #[error("invalid partition {0:?}")]
    InvalidPartition([u32; 3]),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A 0/0 statistic; never reported as zero.
    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn undefined(what: impl Into<String>) -> Self {
        Error::Undefined(what.into())
    }

    /// True for statistics that are 0/0 on the given input.
    pub fn is_undefined(&self) -> bool {
        matches!(self, Error::Undefined(_))
    }
}
