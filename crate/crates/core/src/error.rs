use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation `{0}` is not a monomial")]
    NonMonomialRelation(String),
    #[error("generator `{0}` has no pure power in the relation ideal; quotient is infinite-dimensional")]
    InfiniteDimensional(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("elements live in different test-rings")]
    RingMismatch,
    #[error("insufficient precision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("divisor vanishes modulo the maximal ideal to precision {0}")]
    OrderUndefined(usize),
    #[error("residue order is {0}, expected 1")]
    ResidueOrder(usize),
    #[error("branch does not lie on the curve: coefficient of x^{0} is nonzero")]
    BranchNotOnCurve(usize),
    #[error("partial derivative in y vanishes identically along the branch")]
    NonIsolatedContact,
    #[error("coefficient {0} is not in the maximal ideal")]
    NotNilpotent(String),
    #[error("index {0} is out of range (bound {1})")]
    IndexOutOfRange(usize, usize),
    #[error("invalid hypersurface: {0}")]
    InvalidHypersurface(String),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("flow does not converge: {0}")]
    DivergentFlow(String),
    #[error("index ({0}, {1}) is outside the chart index set")]
    UnsupportedIndex(usize, usize),
    #[error("truncation degree {n} is below the required bound {bound}")]
    TruncationTooSmall { n: usize, bound: usize },
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("invalid ring morphism: {0}")]
    InvalidMorphism(String),
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid job file: {0}")]
    Job(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
