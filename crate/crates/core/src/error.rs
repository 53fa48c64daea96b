use std::io;

use thiserror::Error;

/// Structural problems with an instance.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance has no nodes")]
    Empty,
    #[error("{clusters} clusters cannot partition {nodes} nodes")]
    TooManyClusters { nodes: usize, clusters: usize },
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("node {node} out of range (instance has {nodes} nodes)")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("node {0} appears in more than one cluster")]
    NodeInTwoClusters(usize),
    #[error("node {0} belongs to no cluster")]
    UnclusteredNode(usize),
    #[error("distance matrix has {found} entries, expected {expected}")]
    MatrixShape { expected: usize, found: usize },
    #[error("distance matrix has a non-zero diagonal at node {0}")]
    NonZeroDiagonal(usize),
    #[error("distance matrix is asymmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("distance does not fit in 32 bits")]
    DistanceOverflow,
}

/// Errors raised by solution construction and move evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolutionError {
    #[error("at least 3 clusters are required, instance has {0}")]
    TooFewClusters(usize),
    #[error("node {node} is not a member of cluster {cluster}")]
    NotInCluster { cluster: usize, node: usize },
    #[error("cluster order must list every one of the {0} clusters exactly once")]
    BadOrder(usize),
    #[error("invalid solution: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A single broken solution invariant, as reported by
/// [`Solution::validate`](crate::Solution::validate).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("solution has {found} clusters, instance has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("successor of cluster {cluster} is out of range ({succ})")]
    SuccessorOutOfRange { cluster: usize, succ: usize },
    #[error("predecessor of cluster {cluster} is out of range ({pred})")]
    PredecessorOutOfRange { cluster: usize, pred: usize },
    #[error("prev[next[{0}]] != {0}")]
    BrokenLink(usize),
    #[error("following successors from cluster 0 returns after {0} steps, not m")]
    NotHamiltonian(usize),
    #[error("selected node {node} does not belong to cluster {cluster}")]
    ForeignSelection { cluster: usize, node: usize },
    #[error("cached cost {cached} differs from recomputed cost {actual}")]
    StaleCost { cached: i64, actual: i64 },
}

/// GTSPLIB parsing failures.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("line {line}: malformed section data: {msg}")]
    MalformedData { line: usize, msg: String },
    #[error("DIMENSION says {declared} nodes, file provides {found}")]
    NodeCountMismatch { declared: usize, found: usize },
    #[error("GTSP_SET_SECTION is not a partition of the nodes: {0}")]
    NotAPartition(InstanceError),
    #[error("unsupported edge weight type {0:?}")]
    UnknownEdgeWeightType(String),
    #[error("missing required field {0}")]
    MissingField(&'static str),
    #[error(transparent)]
    Instance(InstanceError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Errors in the configuration text format or configuration structure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown component {0:?}")]
    UnknownComponent(String),
    #[error("configuration has no components")]
    Empty,
    #[error("component {0} listed twice")]
    DuplicateComponent(String),
    #[error("start index {0} out of range")]
    BadStart(usize),
    #[error("successor index {succ} of component {from} out of range")]
    BadSuccessor { from: usize, succ: usize },
    #[error("successor probabilities of component {0} do not sum to 1")]
    BadDistribution(usize),
    #[error("component {0} is unreachable from the start component")]
    Unreachable(String),
    #[error("missing start directive")]
    MissingStart,
}

/// Exhaustive solvers refuse inputs above their size bound.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {size} exceeds the bound of {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("cluster order is not a permutation of the {0} clusters")]
    BadOrder(usize),
}

/// Generator parameter errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("need 3 <= m <= n, got n = {n}, m = {m}")]
    BadParams { n: usize, m: usize },
}
