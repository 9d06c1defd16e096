use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..=64")]
    Order(usize),
    #[error("vertex {u} out of range for a graph on {n} vertices")]
    Vertex { u: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("adjacency is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("edge {{{0}, {1}}} already present")]
    DuplicateEdge(usize, usize),
    #[error("operation would leave no vertices")]
    EmptyResult,
    #[error("invalid family {0}")]
    InvalidFamily(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph6 parse error at byte {offset}: {reason}")]
pub struct Graph6Error {
    pub offset: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("vector has norm {0}, expected a unit vector")]
    NotUnit(f64),
    #[error("vector length {got} does not match graph order {n}")]
    Length { got: usize, n: usize },
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("no convergence: power iteration and dense eigensolve both failed")]
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("unknown pattern name {0:?}; expected e.g. K3, C5, K1_3, K2_3, T3_7, P4 or petersen")]
    UnknownName(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
}
