use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Bounds with `lower >= upper`, NaN entries, or mismatched lengths.
    InvalidBounds(&'static str),
    /// A point outside the box where a feasible one is required.
    Infeasible {
        index: usize,
    },
    /// The free index set is empty; there is no face to descend in.
    NoFreeVariables,
    /// Right-hand side (gradient) is exactly zero.
    ZeroGradient,
    InvalidParameter(&'static str),
    /// An oracle or recurrence produced NaN or infinity.
    NonFinite(&'static str),
    /// Armijo backtracking ran out of trials.
    LineSearchFailed {
        trials: usize,
    },
    /// Cubic regularization weight exceeded its ceiling.
    RegularizationOverflow {
        omega: f64,
    },
    /// The cubic subproblem solver hit its iteration cap.
    SubproblemNotSolved {
        iterations: usize,
    },
    /// The cubic subproblem solver stalled at a vanishing step.
    SubproblemStalled,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidBounds(why) => write!(f, "invalid bounds: {why}"),
            Error::Infeasible { index } => write!(f, "point is outside the box at index {index}"),
            Error::NoFreeVariables => f.write_str("no free variables at this point"),
            Error::ZeroGradient => f.write_str("gradient is zero"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::LineSearchFailed { trials } => {
                write!(f, "line search failed after {trials} trials")
            }
            Error::RegularizationOverflow { omega } => {
                write!(f, "cubic regularization weight overflowed ({omega:e})")
            }
            Error::SubproblemNotSolved { iterations } => {
                write!(f, "cubic subproblem not solved in {iterations} iterations")
            }
            Error::SubproblemStalled => f.write_str("cubic subproblem solver stalled"),
        }
    }
}

impl core::error::Error for Error {}
