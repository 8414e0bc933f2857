use thiserror::Error;

/// Library-wide error type.  Arithmetic on mismatched charts is a caller bug
/// and panics instead; everything a well-typed caller can still get wrong is
/// reported here.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coordinate index {0} out of range for chart of dimension {1}|{2}")]
    CoordinateOutOfRange(usize, usize, usize),
    #[error("chart must have distinct nonempty coordinate names")]
    BadChartNames,
    #[error("at most 32 odd coordinates are supported, got {0}")]
    TooManyOddCoordinates(usize),
    #[error("expected {expected} coordinate images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("image of coordinate {0} has the wrong parity or is inhomogeneous")]
    ImageParity(usize),
    #[error("images must all live on one chart")]
    ImageChartMismatch,
    #[error("operand lives on the wrong chart")]
    ChartMismatch,
    #[error("operator is not a vector field (order > 1 or nonzero action on 1)")]
    NotAField,
    #[error("operator has order {0}, expected at most {1}")]
    OrderTooHigh(i64, i64),
    #[error("operation needs at least one odd coordinate")]
    NoOddCoordinates,
    #[error("chart {0}|{1} is outside the domain of this operation")]
    UnsupportedChart(usize, usize),
    #[error("expected a homogeneous (single-parity) argument")]
    Inhomogeneous,
    #[error("expected an even argument")]
    NotEven,
    #[error("one-form is not closed")]
    NotClosed,
    #[error("primitive verification failed")]
    PrimitiveFailed,
    #[error("kappa must be nonzero")]
    KappaZero,
    #[error("coefficient is not invertible in the chart algebra")]
    NotInvertible,
    #[error("section is not a volume (coefficient must be even and invertible)")]
    NotAVolume,
    #[error("expected a generalized divergence with unit leading coefficient")]
    NotADivergence,
    #[error("morphism is not of bundle type")]
    NotBundleType,
    #[error("determinant is not an invertible polynomial")]
    NonInvertibleDeterminant,
    #[error("supplied inverse does not invert the morphism")]
    BadInverse,
    #[error("probe values are inconsistent with a generalized divergence")]
    ProbesInconsistent,
    #[error("cocycle identity fails on probe pairs")]
    NotACocycle,
    #[error("classified map does not reproduce the black box on validation fields")]
    ClassifyMismatch,
    #[error("map does not invert the automorphism on probes")]
    NotAnAutomorphism,
    #[error("at most {0} odd coordinates are supported here, got {1}")]
    QTooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
