use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("standard part is singular (smallest/largest singular value ratio {ratio:e})")]
    SingularStandardPart { ratio: f64 },

    #[error("dual number {0} is infinitesimal and has no inverse")]
    InfinitesimalDivisor(String),

    /// The doubly projected infinitesimal part is too large for a compact
    /// dual SVD (and hence a Moore-Penrose inverse) to exist.
    #[error("no compact dual SVD: existence residual {residual:e} exceeds threshold {threshold:e}")]
    Infeasible { residual: f64, threshold: f64 },

    #[error("singular value blocks {first} and {second} are too close to separate (gap {gap:e})")]
    DegenerateGap {
        first: usize,
        second: usize,
        gap: f64,
    },

    #[error("singular value block {block} has multiplicity {multiplicity}; gauge fixing needs simple values")]
    RepeatedSingularValue { block: usize, multiplicity: usize },

    #[error("rank {k} out of range 1..={rank}")]
    RankOutOfRange { k: usize, rank: usize },

    #[error("derivative scheme needs at least {needed} time samples, got {got}")]
    TooFewColumns { needed: usize, got: usize },

    #[error("point ({row}, {col}) lies outside the {height}x{width} grid")]
    OutsideGrid {
        row: f64,
        col: f64,
        height: usize,
        width: usize,
    },

    #[error("component pair ({0}, {1}) is not valid for a rank-{2} factorization")]
    InvalidPair(usize, usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cannot parse dual number {0:?}")]
    ParseDual(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
