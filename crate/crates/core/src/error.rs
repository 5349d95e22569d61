use thiserror::Error;

/// Failures raised while building or inspecting programs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("fuel exhausted: seed generation did not stop within {fuel} steps")]
    FuelExhausted { fuel: usize },

    #[error("state domain is not enumerable; cannot scan get continuations")]
    UnboundedStateDomain,

    #[error("ok check applied to a state with no placed elements")]
    EmptyState,

    #[error("generator must use nondeterminism only, found effects {found}")]
    EffectfulGenerator { found: String },

    #[error("seed measure did not decrease ({from} -> {to})")]
    MeasureNotDecreasing { from: usize, to: usize },
}

/// Failures raised by the law catalogue and the fuzzing machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("unknown law id `{0}`")]
    UnknownLaw(String),

    #[error("value {value} lies outside the tabulated domain")]
    DomainViolation { value: i64 },

    #[error("invalid fuzz configuration: {0}")]
    InvalidConfig(&'static str),
}
