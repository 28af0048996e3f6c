use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input is outside the domain of the formula it feeds.
    #[error("domain error: {0}")]
    Domain(String),

    /// The effective secure probability is zero, so the expected latency is
    /// infinite: no secure transmission is possible with these parameters.
    #[error("no secure transmission possible: effective secure probability is zero")]
    NoSecureTransmission,

    /// The threshold equations have no solution because `D ln 2 <= 4`.
    #[error("no threshold exists for payload of {payload_bits} bits (D ln 2 <= 4)")]
    ThresholdUndefined { payload_bits: u32 },

    /// The optimization problem has an empty feasible set.
    #[error("infeasible problem: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
