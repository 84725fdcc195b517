use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("interpolation needs at least one point")]
    EmptyPoints,
    #[error("duplicate x-coordinate in interpolation points")]
    DuplicateX,
    #[error("maximum degree must be at least 1")]
    DegreeZero,
    #[error("polynomial degree {degree} exceeds SRS maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("maximum part count {0} is below 2")]
    MaxPartsTooSmall(usize),
    #[error("payload is empty")]
    EmptyPayload,
    #[error("cannot split {len} bytes into {k} parts")]
    KTooLarge { k: usize, len: usize },
    #[error("part count {k} outside the allowed range [{min}, {max}]")]
    InvalidPartCount { k: usize, min: usize, max: usize },
    #[error("no payloads supplied")]
    NoPayloads,
    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("deposit amount must be positive")]
    ZeroAmount,
    #[error("response window must be at least one block")]
    ZeroWindow,
    #[error("builder {0} has no valid deposit")]
    BuilderNotEligible(u32),
    #[error("builder {0} was slashed and re-depositing is disabled")]
    RedepositForbidden(u32),
    #[error("account {0} cannot cover the challenge bond")]
    InsufficientBond(u32),
    #[error("unknown challenge {0}")]
    UnknownChallenge(u64),
    #[error("challenge {id} deadline {deadline} passed (now {now})")]
    PastDeadline { id: u64, deadline: u64, now: u64 },
    #[error("hidden state for batch {0} has not been recorded")]
    HiddenStateUnavailable(u64),
    #[error("malformed encoding: {0}")]
    Decode(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("relation proof backend failure: {0}")]
    Backend(String),
}
