use std::path::PathBuf;

use rigid_galois_core::graph::GraphError;
use rigid_galois_core::tower::multiquadratic::MqError;
use thiserror::Error;

/// Exit code table, also printed by `--help`.
pub const EXIT_CODES: &[(i32, &str)] = &[
    (0, "success"),
    (2, "usage error or invalid argument"),
    (3, "file could not be read or written"),
    (4, "graph file could not be parsed"),
    (5, "graph is not a Laman graph"),
    (6, "graph is Laman but not Henneberg-1 constructible"),
    (7, "labelling could not be certified generic"),
    (8, "integer too hard to factor"),
    (9, "sampler saw a real count outside the predicted spectrum"),
    (10, "internal inconsistency"),
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse graph: {0}")]
    Parse(GraphError),
    #[error("not a Laman graph ({vertices} vertices, {edges} edges)")]
    NotLaman { vertices: usize, edges: usize },
    #[error("not a type-1 graph: {0}")]
    NotType1(String),
    #[error("genericity not certified after {attempts} attempts; last: {last}")]
    Genericity { attempts: usize, last: String },
    #[error("factorization too hard: {0}")]
    FactorizationTooHard(String),
    #[error("{0} sampler trial(s) outside the predicted spectrum")]
    SamplerViolations(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidInput(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Parse(_) => 4,
            CliError::NotLaman { .. } => 5,
            CliError::NotType1(_) => 6,
            CliError::Genericity { .. } => 7,
            CliError::FactorizationTooHard(_) => 8,
            CliError::SamplerViolations(_) => 9,
            CliError::Internal(_) => 10,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NotType1(msg) => CliError::NotType1(msg),
            other => CliError::Parse(other),
        }
    }
}

impl From<MqError> for CliError {
    fn from(e: MqError) -> Self {
        match e {
            MqError::FactorizationTooHard(n) => CliError::FactorizationTooHard(n.to_string()),
            MqError::ZeroInput(i) => CliError::InvalidInput(format!("entry {} is zero", i + 1)),
            other => CliError::Internal(other.to_string()),
        }
    }
}
