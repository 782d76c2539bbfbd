use std::fmt;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Grid size must be at least 2.
    SizeTooSmall(usize),
    /// One of the marker rows is not a permutation of 1..=n.
    NotAPermutation(&'static str),
    /// An X and an O share a cell.
    PunctureCollision { column: usize },
    /// Unparseable grid description.
    InvalidFormat(String),
    /// Two generators belong to different diagrams.
    MismatchedDiagrams,
    /// Enhanced state violates the admissibility condition.
    NotAdmissible,
    /// Winding number queried for a point lying on the path.
    PointOnPath,
    /// Differential does not square to zero.
    NotAComplex,
    /// Differential entry violates the R-filtration structure.
    FiltrationViolation(String),
    /// A component of the filtered block is not a flattened hypercube.
    NotAHypercube(String),
    /// Supplied homotopy does not satisfy hb + bh = -Id.
    BadHomotopy,
    /// Averaged homotopy requested over the integers.
    RingMismatch,
    /// State count exceeds the configured cap.
    TooLarge { states: u128, cap: u128 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SizeTooSmall(n) => write!(f, "grid size {} is too small (need n >= 2)", n),
            Error::NotAPermutation(which) => {
                write!(f, "{} rows are not a permutation of 1..=n", which)
            }
            Error::PunctureCollision { column } => {
                write!(f, "column {} carries its X and O in the same row", column)
            }
            Error::InvalidFormat(msg) => write!(f, "invalid grid description: {}", msg),
            Error::MismatchedDiagrams => write!(f, "generators come from different diagrams"),
            Error::NotAdmissible => write!(f, "enhanced state is not admissible"),
            Error::PointOnPath => write!(f, "winding number undefined for a point on the path"),
            Error::NotAComplex => write!(f, "differential does not square to zero"),
            Error::FiltrationViolation(msg) => write!(f, "filtration violation: {}", msg),
            Error::NotAHypercube(msg) => write!(f, "block component is not a hypercube: {}", msg),
            Error::BadHomotopy => write!(f, "homotopy does not satisfy hb + bh = -Id"),
            Error::RingMismatch => write!(f, "averaged homotopy needs rational coefficients"),
            Error::TooLarge { states, cap } => {
                write!(f, "state count {} exceeds cap {}", states, cap)
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
