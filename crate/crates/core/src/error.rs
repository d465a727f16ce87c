use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("unknown builtin operator '{0}'")]
    UnknownBuiltin(String),

    #[error("builtin '{name}' does not support n = {n}")]
    UnsupportedDimension { name: String, n: usize },

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },

    #[error("non-constant rank: rank varies between {min_rank} and {max_rank} (witness xi={witness:?})")]
    NonConstantRank {
        min_rank: usize,
        max_rank: usize,
        witness: Vec<f64>,
    },

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("channel mismatch: expected {expected}, found {found}")]
    ChannelMismatch { expected: usize, found: usize },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("degenerate field: |B(D)u|_L1 = {l1:e} is below the threshold {threshold:e}")]
    DegenerateField { l1: f64, threshold: f64 },

    #[error("vector is not in the intersection of the symbol images (defect {defect:e})")]
    NotInIntersection { defect: f64 },

    #[error("mollifier radius {eps} exceeds the cutoff plateau radius {plateau}")]
    MollifierTooWide { eps: f64, plateau: f64 },

    #[error("operator '{0}' is elliptic; the potential demo is vacuous")]
    EllipticOperator(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bad field snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
