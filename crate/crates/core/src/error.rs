use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("integration failed: non-finite state at t = {time} hr")]
    IntegrationFailure { time: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("observation time {time} hr outside trajectory range [{start}, {end}]")]
    OutOfRange { time: f64, start: f64, end: f64 },

    #[error("singular similarity transform: theta3 + theta0 (theta0 - lambda5) = 0")]
    SingularTransform,

    #[error("sampler initialization failed: {0}")]
    Initialization(String),

    #[error("integrated autocorrelation time undefined: {0}")]
    UndefinedIat(String),

    #[error("chain too short: {len} samples, need at least {needed}")]
    ChainTooShort { len: usize, needed: usize },

    #[error("invalid insulin score: {0}")]
    InvalidScore(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("patient {id}: {source}")]
    Patient {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn for_patient(self, id: &str) -> Self {
        Error::Patient {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}
