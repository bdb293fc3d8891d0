use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("lookup failed: {0}")]
    Lookup(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degree drop: leading coefficient of degree {deg} is below tolerance")]
    DegreeDrop { deg: usize },
    #[error("membership error: {0}")]
    Membership(String),
    #[error("boundary point: {0}")]
    Boundary(String),
    #[error("profile too large: {0}")]
    ProfileTooLarge(String),
    #[error("schedule error at event {index}: {reason}")]
    Schedule { index: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::Capacity(_) => "capacity",
            Error::Precondition(_) => "precondition",
            Error::Lookup(_) => "lookup",
            Error::Domain(_) => "domain",
            Error::DegreeDrop { .. } => "degree_drop",
            Error::Membership(_) => "membership",
            Error::Boundary(_) => "boundary",
            Error::ProfileTooLarge(_) => "profile_too_large",
            Error::Schedule { .. } => "schedule",
        }
    }
}
