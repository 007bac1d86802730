//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("modulus is not irreducible: {0}")]
    ReducibleModulus(String),
    #[error("unsupported field descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("operation requires a finite field")]
    InfiniteField,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("input has degree zero in the main variable")]
    DegreeZeroInput,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cycle detected at gate g{0}")]
    CycleDetected(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("degree {found} exceeds cap {cap}")]
    DegreeCapExceeded { cap: u32, found: u32 },
    #[error("expansion exceeded the term limit {0}")]
    TermLimitExceeded(usize),
    #[error("field {field} has fewer than {needed} elements")]
    FieldTooSmall { needed: usize, field: String },
    #[error("degree bound violated: {0}")]
    DegreeBoundViolated(String),
    #[error("derivative vanishes at the root")]
    SingularRoot,
    #[error("no root at the given point")]
    NoRoot,
    #[error("constant term of the normalized ratio is not a unit")]
    NonUnitConstantTerm,
    #[error("characteristic divides the multiplicity")]
    CharDividesE,
    #[error("cofactor does not equal 1 at the origin")]
    NonzeroQAtOrigin,
    #[error("no valid choice found after {0} trials")]
    TrialsExhausted(usize),
    #[error("invalid preprocessing map: {0}")]
    InvalidMap(String),
    #[error("boundary polynomial is not squarefree")]
    NotSquarefreeAtZero,
    #[error("denominator vanishes at a root")]
    HVanishesAtRoot,
    #[error("characteristic {p} too small for power sums up to {r}")]
    CharTooSmallForNewton { p: u64, r: usize },
    #[error("boundary polynomial has coefficients outside the base field")]
    BoundaryNotInBaseField,
    #[error("candidate is not a factor")]
    NotAFactor,
    #[error("generator maps t or y")]
    GeneratorTouchesTY,
    #[error("root precision too low to recombine factors")]
    PrecisionTooLow,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("characteristic {p} must be 0 or exceed degree {degree}")]
    CharacteristicTooSmall { p: u64, degree: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
