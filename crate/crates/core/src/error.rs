use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("output mode {0} is already occupied")]
    OccupiedOutput(usize),

    #[error("split output modes must differ (both are {0})")]
    SameOutputs(usize),

    #[error("{name} = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state has {state} modes but the layout expects {layout}")]
    ModeCountMismatch { state: usize, layout: usize },

    #[error("brute-force enumeration of {outcomes} outcomes exceeds the limit of {limit}")]
    InstanceTooLarge { outcomes: u128, limit: u128 },

    #[error("histogram cannot identify the fit: {0}")]
    Unidentifiable(&'static str),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { name, value })
    }
}
