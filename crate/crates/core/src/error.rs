//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by partition construction, poset queries and the
/// cumulant engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {element} appears in more than one block")]
    OverlappingElement { element: usize },
    #[error("element {element} is not covered by any block")]
    UncoveredElement { element: usize },
    #[error("element {element} is outside the ground set 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("blocks must be nonempty")]
    EmptyBlock,
    #[error("invalid partition text {text:?}: {reason}")]
    ParseError { text: String, reason: String },

    #[error("insertion position {r} is outside 1..={max}")]
    PositionOutOfRange { r: usize, max: usize },
    #[error("operation requires a non-crossing partition, got {partition}")]
    CrossingPartition { partition: String },
    #[error("partitions live on different ground sets ({left} vs {right})")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("ground-set size {n} exceeds the enumeration cap {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("{lower} is not below {upper} in reverse refinement")]
    NotComparable { lower: String, upper: String },
    #[error("{family} is not a lattice here: {left} and {right} have {count} minimal upper bounds")]
    NotALattice {
        family: String,
        left: String,
        right: String,
        count: usize,
    },

    #[error("weight {weight} is not invertible at order {order}")]
    NonInvertibleWeight { weight: String, order: usize },
    #[error("unknown symbol {symbol:?} (alphabet: {alphabet:?})")]
    UnknownSymbol { symbol: char, alphabet: String },
    #[error("no moment value recorded for word {word:?}")]
    MissingMoment { word: String },
    #[error("order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("alphabets of product marginals must be disjoint; {symbol:?} repeats")]
    AlphabetCollision { symbol: char },
    #[error("operation requires a commutative scalar domain")]
    NonCommutativeDomain,
    #[error("matrix dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("central limit normalization of odd order {order} needs a square sample count, got {n}")]
    NonSquareSampleCount { order: usize, n: u64 },
    #[error("boolean CLT expects a centered marginal (first moment {mean}); pass allow_non_centered to override")]
    NonCenteredMarginal { mean: String },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
