use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (bad index, negative norm, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The Weierstrass model has identically vanishing discriminant.
    #[error("singular surface: discriminant is identically zero")]
    SingularSurface,

    /// No row of the fiber-type table matches the valuation data.
    #[error("classification error: {0}")]
    Classification(String),

    /// The supplied places miss a multiple root of the discriminant.
    #[error("incomplete places: {0}")]
    IncompletePlaces(String),

    /// A dataset row failed validation.
    #[error("data integrity error: {0}")]
    DataIntegrity(String),

    /// An exact identity that must hold failed (e.g. a non-integral
    /// intersection number).
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
