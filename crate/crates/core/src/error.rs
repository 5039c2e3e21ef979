use thiserror::Error;

/// Errors raised by the group, character, Haar and covariant-space layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("parameter {parameter} out of range for {family}: {reason}")]
    ParameterOutOfRange {
        family: String,
        parameter: i64,
        reason: String,
    },
    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("subgroup is not normal: conjugating {element} by {by} leaves the subgroup")]
    NotNormal { element: usize, by: usize },
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("element {0} is not in the character's domain")]
    NotInDomain(usize),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("weight {name} = {value} must be positive and finite")]
    NonPositiveWeight { name: &'static str, value: f64 },
    #[error("function is not covariant: residual {residual:e} exceeds {tolerance:e}")]
    NotCovariant { residual: f64, tolerance: f64 },
    #[error("quadrature grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("unknown theorem `{0}`")]
    UnknownTheorem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
