//! Input acquisition: Matrix Market files and seeded generators.

mod gen;
mod mtx;

use thiserror::Error;

pub use gen::{gen_graph, gen_signal, gen_sparse_matrix, Generated, GeneratorKind, GeneratorSpec};
pub use mtx::{load_matrix_market, parse_matrix_market};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InputError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unsupported Matrix Market field or symmetry '{field}'")]
    Unsupported { line: usize, field: String },
    #[error("line {line}: entry ({row}, {col}) outside the declared {rows}x{cols} matrix")]
    IndexOutOfBounds {
        line: usize,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("line {line}: '{token}' is not a number")]
    NotNumeric { line: usize, token: String },
    #[error("invalid generator parameters: {0}")]
    InvalidSize(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}
