use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("not unimodular")]
    NotUnimodular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate input")]
    DegenerateInput,
    #[error("degenerate")]
    Degenerate,
    #[error("unbounded")]
    Unbounded,
    #[error("codimension {codim} out of range 0..={dim}")]
    CodimOutOfRange { codim: usize, dim: usize },
    #[error("not a lattice polytope")]
    NotLattice,
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("monotone level violated")]
    MonotoneLevelViolated,
    #[error("blow-up size must be positive")]
    NonPositiveSize,
    #[error("blow-up size too large")]
    BlowUpTooLarge,
    #[error("codimension must be at least two")]
    CodimTooSmall,
    #[error("polytope is not monotone")]
    NotMonotone,
    #[error("no monotone blow-up at this face")]
    NoMonotoneBlowUp,
    #[error("canonical form requires a smooth polytope")]
    NotSmooth,
    #[error("enumeration supported only for n ≤ 3")]
    UnsupportedEnumerationDim(usize),
    #[error("{what} requires dimension in {min}..={max}, got {dim}")]
    DimensionOutOfRange {
        what: &'static str,
        dim: usize,
        min: usize,
        max: usize,
    },
    #[error("catalog incomplete")]
    CatalogIncomplete,
    #[error("inconsistent representation: {0}")]
    Inconsistent(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
