use core::fmt;

use alloc::string::String;
use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operand shapes do not fit together.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// An operation that needs a nonzero polynomial got the zero polynomial.
    ZeroPolynomial,
    /// det P(z) vanishes identically.
    SingularPolynomial,
    /// The compound block [P Q] loses rank for every z.
    RankDeficient,
    /// Jordan reconstruction residual above the accepted threshold.
    IllConditionedJordan {
        residual: f64,
    },
    /// A unit-circle singularity of P⁻¹Q̃ is not removable.
    NotRemovable {
        row: usize,
        col: usize,
        z0: Complex64,
    },
    AliasingNotConverged {
        nodes: usize,
    },
    /// det P has a root in the closed unit disk.
    RootInsideDisk {
        root: Complex64,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    /// Negative power of a singular Jordan block.
    SingularBlockPower,
    NotPositiveSemidefinite {
        min_eigenvalue: f64,
    },
    InvalidNoise(String),
    InvalidModel(String),
    /// A construction was requested for an equation without a stationary solution.
    NoSolution,
    /// An iterative kernel failed to converge.
    NoConvergence(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "dimension mismatch in {what}: expected {expected}, found {found}"),
            Error::NotSquare { rows, cols } => write!(f, "expected a square matrix, got {rows}x{cols}"),
            Error::ZeroPolynomial => write!(f, "polynomial is identically zero"),
            Error::SingularPolynomial => write!(f, "determinant polynomial is identically zero"),
            Error::RankDeficient => write!(f, "compound block is rank deficient for all z"),
            Error::IllConditionedJordan { residual } => {
                write!(f, "Jordan decomposition is ill-conditioned (relative residual {residual:e})")
            }
            Error::NotRemovable { row, col, z0 } => write!(
                f,
                "singularity at z0 = {}{:+}i is not removable (entry ({}, {}))",
                z0.re,
                z0.im,
                row + 1,
                col + 1
            ),
            Error::AliasingNotConverged { nodes } => {
                write!(f, "Laurent coefficients did not converge with {nodes} nodes; a root is too close to the unit circle")
            }
            Error::RootInsideDisk { root } => {
                write!(f, "det P has a root {}{:+}i in the closed unit disk", root.re, root.im)
            }
            Error::IndexOutOfRange { index, len } => write!(f, "index {index} out of range for length {len}"),
            Error::SingularBlockPower => write!(f, "negative power of a Jordan block with eigenvalue 0"),
            Error::NotPositiveSemidefinite { min_eigenvalue } => {
                write!(f, "covariance is not positive semidefinite (eigenvalue {min_eigenvalue:e})")
            }
            Error::InvalidNoise(msg) => write!(f, "invalid noise model: {msg}"),
            Error::InvalidModel(msg) => write!(f, "invalid model: {msg}"),
            Error::NoSolution => write!(f, "no strictly stationary solution exists"),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
        }
    }
}

impl core::error::Error for Error {}
