use thiserror::Error;

/// Errors raised by the engine. Every variant is a domain error; none signals a panic path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty zigzag")]
    EmptyZigzag,
    #[error("not 1-standard: {0}")]
    NotOneStandard(String),
    #[error("weight arithmetic overflow")]
    Overflow,
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("no edge between nodes {0} and {1}")]
    NoSuchEdge(u32, u32),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("cannot blow down node {node}: {reason}")]
    BlowDown { node: u32, reason: String },
    #[error("not a chain")]
    NotAChain,
    #[error("node {0} is not an endpoint of the chain")]
    NotAnEndpoint(u32),
    #[error("not contractible: {0}")]
    NotContractible(String),
    #[error("link not applicable: {0}")]
    LinkNotApplicable(String),
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(i64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),
    #[error("ill-typed path: {0}")]
    IllTypedPath(String),
    #[error("relation check failed: {0}")]
    RelationFailed(String),
    #[error("uncovered combination: {0}")]
    Uncovered(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
