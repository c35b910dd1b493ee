use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or experiment parameter violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The operation is defined only for a positive (or only for a zero)
    /// force of interest.
    #[error("force of interest: {0}")]
    ForceOfInterest(String),

    /// The Parisian window is shorter than one grid step.
    #[error("Parisian window {window} is not resolvable on a grid with step {step}")]
    UnresolvableWindow { window: f64, step: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
