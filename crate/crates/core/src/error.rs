use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("coordinate {0} outside [0,1]")]
    CoordinateOutOfRange(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("map is discontinuous: {0}")]
    Discontinuity(String),
    #[error("power would need {pieces} pieces (cap {cap})")]
    PieceExplosion { pieces: usize, cap: usize },
    #[error("map is not Markov for the given partition: {0}")]
    NotMarkov(String),

    #[error("continuum is empty")]
    EmptyContinuum,
    #[error("set is not connected")]
    DisconnectedContinuum,
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(String, String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("combinatorial blowup: {count} candidates exceed cap {cap}")]
    CombinatorialBlowup { count: usize, cap: usize },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
