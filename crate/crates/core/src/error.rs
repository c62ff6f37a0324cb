use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("polyhedron contains a line (inequality rows have rank {rank} < {dim})")]
    NotPointed { rank: usize, dim: usize },

    #[error("empty generator list")]
    EmptyInput,

    #[error("point {point} violates constraint {row}")]
    NotMember { point: String, row: usize },

    #[error("point {point} is not a vertex")]
    NotVertex { point: String },

    #[error("the two points are identical: {point}")]
    SamePoint { point: String },

    #[error("format error on line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("row {0} is all zeros, so Ax >= 1 is infeasible")]
    InfeasibleRow(usize),

    #[error("vertex {point} is not binary")]
    NonBinaryVertex { point: String },

    #[error("generator representation is not up-monotone: {detail}")]
    NotUpMonotone { detail: String },

    #[error("adjacency methods disagree on {u} -- {v}: {detail}")]
    MethodDisagreement {
        u: String,
        v: String,
        detail: String,
    },

    #[error("row {0} does not have exactly two ones")]
    RowSumNotTwo(usize),

    #[error("instance too large: {what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error("certificate failed verification: {0}")]
    BadCertificate(String),
}
