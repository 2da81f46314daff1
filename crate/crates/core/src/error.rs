use std::fmt;

use thiserror::Error;

/// Errors from constructing domain values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinError {
    #[error("degenerate axes: {0}")]
    DegenerateAxes(&'static str),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter {field}: {msg}")]
    InvalidParam { field: String, msg: String },
}

impl KinError {
    pub(crate) fn invalid(field: &str, msg: String) -> Self {
        KinError::InvalidParam {
            field: field.to_string(),
            msg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IkFailureKind {
    /// Wrist centre too close to the base axis for the lateral offset.
    ShoulderSingularity,
    /// Tool z-axis parallel to the arm-plane normal; joint-5 axis undefined.
    WristSingularity,
    /// A half-angle discriminant is negative: the target is outside the workspace.
    OutOfReach,
    /// Every enumerated candidate failed forward-kinematics verification.
    NoConsistentBranch,
}

impl fmt::Display for IkFailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IkFailureKind::ShoulderSingularity => "shoulder singularity",
            IkFailureKind::WristSingularity => "wrist singularity",
            IkFailureKind::OutOfReach => "out of reach",
            IkFailureKind::NoConsistentBranch => "no consistent branch",
        };
        f.write_str(s)
    }
}

/// Why the analytic solver produced no angles.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}: {detail}")]
pub struct IkFailure {
    pub kind: IkFailureKind,
    pub detail: String,
}

impl IkFailure {
    pub fn new(kind: IkFailureKind, detail: impl Into<String>) -> Self {
        IkFailure {
            kind,
            detail: detail.into(),
        }
    }

    pub(crate) fn with_context(mut self, ctx: &str) -> Self {
        self.detail = format!("{ctx}: {}", self.detail);
        self
    }
}
