use thiserror::Error;

/// Errors produced by model construction, fitting and search.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range 1..={p}")]
    VertexOutOfRange { vertex: usize, p: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("graph is not triangulated")]
    NotDecomposable,

    #[error("graph is not strongly decomposable (forbidden path between discrete vertices)")]
    NotStronglyDecomposable,

    #[error("edge ({0}, {1}) is not add-eligible")]
    NotEligible(usize, usize),

    #[error("missing value at row {row}, column {column:?}")]
    MissingValue { row: usize, column: String },

    #[error("discrete column {column:?} has a single level")]
    SingleLevel { column: String },

    #[error("discrete column {column:?}: level {level} is not observed")]
    UnobservedLevel { column: String, level: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("graph has {graph} vertices but the dataset has {data} columns")]
    ArityMismatch { graph: usize, data: usize },

    #[error("vertex types of the model do not match the dataset at vertex {vertex}")]
    TypeMismatch { vertex: usize },

    #[error("singular covariance in margin {margin:?}")]
    SingularCovariance { margin: Vec<usize> },

    #[error("empty cell {cell:?} in heterogeneous margin {margin:?}")]
    EmptyCell { margin: Vec<usize>, cell: Vec<usize> },

    #[error("continuous column {column} has zero variance")]
    ZeroVariance { column: usize },

    #[error("{p} variables exceeds the supported maximum of {limit}")]
    TooManyVariables { p: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
