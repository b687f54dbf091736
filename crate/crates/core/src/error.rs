use alloc::string::String;
use core::fmt;

/// Errors raised while building systems, refining clouds or bracketing measures.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A system needs at least two maps.
    Degenerate { maps: usize },
    /// The ambient dimension is zero or the parts of a map disagree on it.
    DimensionMismatch { context: String, expected: usize, found: usize },
    /// Contraction ratio outside the open interval (0, 1).
    RatioOutOfRange { map: usize, ratio: f64 },
    /// Orthogonal part fails `QᵀQ = I` beyond the accepted defect.
    NotOrthogonal { map: usize, defect: f64 },
    /// A non-finite number was supplied.
    NonFinite { context: String },
    /// The next generation would exceed the configured point budget.
    BudgetExceeded { limit: usize, requested: usize },
    /// The measure bracket visited more nodes than allowed.
    NodeBudgetExceeded { limit: usize },
    /// `r_max^(depth+1)` is too large for the diameter bracket to be valid.
    DepthTooShallow { depth: usize, gap: f64 },
    /// The measure bracket found no mass inside the ball.
    EmptyBall,
    /// The supplied tolerance or radius is not a positive finite number.
    InvalidParameter { name: &'static str, value: f64 },
    /// Name not found in the gallery.
    UnknownSystem { name: String, catalog: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Degenerate { maps } => {
                write!(f, "degenerate system: {maps} map(s), at least 2 are required")
            }
            Error::DimensionMismatch { context, expected, found } => {
                write!(f, "{context}: expected dimension {expected}, found {found}")
            }
            Error::RatioOutOfRange { map, ratio } => {
                write!(f, "maps[{map}].ratio = {ratio} is not in (0, 1)")
            }
            Error::NotOrthogonal { map, defect } => {
                write!(f, "maps[{map}].orthogonal is not orthogonal (defect {defect:e})")
            }
            Error::NonFinite { context } => write!(f, "{context}: value is not finite"),
            Error::BudgetExceeded { limit, requested } => {
                write!(f, "point budget exceeded: next generation needs {requested} points, limit is {limit}")
            }
            Error::NodeBudgetExceeded { limit } => {
                write!(f, "measure bracket exceeded its node budget of {limit} visits")
            }
            Error::DepthTooShallow { depth, gap } => {
                write!(f, "depth {depth} too shallow: 2 * r_max^(depth+1) = {} >= 1", 2.0 * gap)
            }
            Error::EmptyBall => write!(f, "ball carries no certified measure at this resolution"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid {name}: {value}")
            }
            Error::UnknownSystem { name, catalog } => {
                write!(f, "unknown system '{name}'; available: {catalog}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Re-tags a map-level error with the index of the offending map.
    pub fn at_map(self, index: usize) -> Self {
        match self {
            Error::RatioOutOfRange { ratio, .. } => Error::RatioOutOfRange { map: index, ratio },
            Error::NotOrthogonal { defect, .. } => Error::NotOrthogonal { map: index, defect },
            other => other,
        }
    }
}
