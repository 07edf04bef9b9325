//! Dense complex linear algebra and seeded randomness shared by every
//! numerical module.

mod matrix;
mod rng;

pub use matrix::{
    condition_number, determinant, numerical_rank, orthonormal_columns, singular_values,
    solve_linear, vec_norm2, vec_norm_inf, CMatrix, Lu, Qr, C64, ONE, ZERO,
};
pub use rng::{random_flag_matrix, RandomSource};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1.0e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("system with {rows} rows and {cols} columns is underdetermined")]
    Underdetermined { rows: usize, cols: usize },
    #[error("non-finite value produced")]
    NonFinite,
    #[error("no well-conditioned random matrix after {tries} tries")]
    RandomFlagExhausted { tries: usize },
}
