use std::fmt;

use thiserror::Error;

/// Theorem preconditions that a report can refuse on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    NotWeaklyConnected,
    NotStrictlyPassive,
}

impl Precondition {
    /// Stable machine-readable tag, used in CLI and JSON reports.
    pub fn tag(self) -> &'static str {
        match self {
            Precondition::NotWeaklyConnected => "not_weakly_connected",
            Precondition::NotStrictlyPassive => "not_strictly_passive",
        }
    }
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One hypothesis violation found while validating a grid element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Which element failed, e.g. `branch 3 (a -> b)` or `node c`.
    pub element: String,
    /// Machine-readable reasons such as `asymmetric` or `singular`.
    pub reasons: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.reasons.join(", "))
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is numerically singular (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },
    #[error("eliminated block is numerically singular")]
    SingularBlock,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("phase count must be at least 1")]
    InvalidPhaseCount,
    #[error("tolerance {0} outside (0, 1)")]
    InvalidTolerance(f64),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("cut set needs a proper non-empty node subset")]
    InvalidCut,
    #[error("invalid line parameters: {0}")]
    InvalidLineParameters(String),
    #[error("invalid transformer parameters: {0}")]
    InvalidTransformerParameters(String),
    #[error("invalid compensator: {0}")]
    InvalidCompensator(String),
    #[error("branch {edge} has a numerically singular impedance")]
    SingularBranch { edge: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(Precondition),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("Kron reduction infeasible at stage {stage}: zero-injection block is singular")]
    InfeasibleReduction { stage: usize },
    #[error("hybrid parameters do not exist: Y[M, M] is singular")]
    InfeasibleHybrid,
    #[error("all shunt admittances are zero; nothing to augment")]
    NothingToAugment,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("hypothesis violated: {}", format_violations(.0))]
    HypothesisViolation(Vec<Violation>),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
