use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation `{op}` is not supported over {ring}")]
    UnsupportedForRing { op: &'static str, ring: String },

    #[error("operation requires a nonzero element")]
    ZeroElement,

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("elements belong to different rings: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("prime index {index} requested but {ring} has only {count} prime class(es)")]
    IndexBeyondFinitePrimes {
        index: u64,
        count: u64,
        ring: String,
    },

    #[error("every prime class of {ring} already lies in the given support")]
    NoPrimeOutside { ring: String },

    #[error("rings are not homeomorphic: {0}")]
    NotHomeomorphicPrecondition(String),

    #[error("rings are homeomorphic; no non-homeomorphism certificate exists")]
    PreconditionHomeomorphic,

    #[error("invalid ring specification `{0}`")]
    InvalidRing(String),

    #[error("invalid element literal `{literal}` for {ring}: {reason}")]
    InvalidElement {
        literal: String,
        ring: String,
        reason: String,
    },

    #[error("element is not a valid member of {ring}: {reason}")]
    NotInRing { ring: String, reason: String },
}
