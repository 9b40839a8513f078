use thiserror::Error;

pub type Result<T> = core::result::Result<T, PolarError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolarError {
    /// An argument is outside the operation's domain (non-finite phase,
    /// negative SNR or inverse XPD, non-positive power).
    #[error("invalid argument `{name}`: {value}")]
    InvalidArgument { name: &'static str, value: f64 },
    /// The caller broke a structural precondition, e.g. a non-Hermitian
    /// matrix or a transmit vector that violates the power constraint.
    #[error("contract violation: {0}")]
    ContractViolation(&'static str),
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PolarError::InvalidArgument { name, value })
    }
}
