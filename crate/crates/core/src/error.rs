use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("input error: {0}")]
    Input(String),
    /// An exhaustive enumeration would exceed its configured cap.
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: String,
        needed: u128,
        cap: u128,
    },
    /// Fewer than d+2 affinely independent points: no Radon partition exists.
    #[error("no Radon partition: the {0} given points are affinely independent")]
    NoRadonPartition(usize),
    /// A precondition about the geometry did not hold; carries a description
    /// of the offending witness.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An internal invariant that the underlying mathematics guarantees was
    /// violated. Seeing this means a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn check_cap(what: &str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        Err(Error::Resource {
            what: what.to_string(),
            needed,
            cap,
        })
    } else {
        Ok(())
    }
}
