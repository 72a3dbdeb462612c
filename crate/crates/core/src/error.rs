use thiserror::Error;

/// A parameter failed validation. `field` names the offending setting.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid {field}: {reason}")]
pub struct ParamError {
    pub field: &'static str,
    pub reason: String,
}

impl ParamError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

pub(crate) fn ensure(
    cond: bool,
    field: &'static str,
    reason: impl FnOnce() -> String,
) -> Result<(), ParamError> {
    if cond {
        Ok(())
    } else {
        Err(ParamError::new(field, reason()))
    }
}
