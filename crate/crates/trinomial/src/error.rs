//! Error type shared by all modules of the crate.

use std::fmt;

use crate::tower::AlgNum;
use crate::upoly::UPoly;

/// Witness produced when a zero divisor is inverted: `factor` is a monic
/// proper divisor of the defining polynomial at `level` (1-based), suitable
/// for [`crate::tower::Tower::split`].
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDivisorWitness {
    pub level: usize,
    /// Dense coefficients (constant term first) over the levels below `level`.
    pub factor: Vec<AlgNum>,
}

/// One failed dynamic-evaluation branch of the eq-(3) style construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchFailure {
    /// Rendered modulus chain identifying the branch.
    pub branch: String,
    /// The cofactor that was required to be a perfect square but is not.
    pub cofactor: UPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Inversion of zero (or division by the zero polynomial).
    DivisionByZero,
    /// A zero divisor was inverted; carries the splitting witness.
    ZeroDivisor(ZeroDivisorWitness),
    /// The squarefree part of a would-be modulus has degree <= 1.
    DegenerateModulus,
    /// `split` was given a polynomial that does not properly divide the modulus.
    NotAFactor,
    /// Exact division left a nonzero remainder.
    NotDivisible,
    /// Polynomial square root does not exist (a root of odd multiplicity).
    NotASquare,
    /// Operands live over incompatible towers.
    TowerMismatch,
    /// `positive_bezout` arguments are not coprime.
    NotCoprime,
    /// No all-positive representation in the numerical semigroup.
    NotRepresentable,
    /// A search or size cap was exceeded.
    LimitExceeded(String),
    /// An operation precondition was violated.
    Precondition(String),
    /// The combine-squares seed does not satisfy its defining identity.
    SeedInvalid,
    /// An internal self-check of a constructor failed (bug guard).
    VerificationFailed(String),
    /// Every dynamic-evaluation branch of the construction failed; carries
    /// the offending cofactors.
    ConstructionFailed(Vec<BranchFailure>),
    /// The hypersurface is not rational, so no horizontal curve exists.
    NotRational,
    /// Type 1 hypersurface with all exponents >= 2 admits no horizontal curve.
    NoHorizontalCurve,
    /// The minimal-exponent triple is not platonic, so no SH-curve exists.
    NotPlatonic,
    /// Curve coordinates do not match the spec shape.
    ShapeMismatch(String),
    /// A check requires the curve to lie on the hypersurface, and it does not.
    NotOnHypersurface,
    /// A report requires an SH-curve, and the input is not one.
    NotSh,
    /// A built-in SH database entry failed its load-time verification.
    DatabaseCorrupt(String),
    /// Text input could not be parsed; 1-based line number.
    Parse { line: usize, msg: String },
    /// Parsed input failed semantic validation.
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroDivisor(w) => {
                write!(f, "zero divisor modulo the level-{} defining polynomial", w.level)
            }
            Error::DegenerateModulus => write!(f, "degenerate modulus (squarefree part has degree <= 1)"),
            Error::NotAFactor => write!(f, "not a proper monic factor of the modulus"),
            Error::NotDivisible => write!(f, "exact division failed (nonzero remainder)"),
            Error::NotASquare => write!(f, "polynomial is not a perfect square"),
            Error::TowerMismatch => write!(f, "operands belong to incompatible towers"),
            Error::NotCoprime => write!(f, "arguments are not coprime"),
            Error::NotRepresentable => write!(f, "target is not representable with all-positive coefficients"),
            Error::LimitExceeded(m) => write!(f, "resource limit exceeded: {m}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::SeedInvalid => write!(f, "seed does not satisfy the square identity"),
            Error::VerificationFailed(m) => write!(f, "internal verification failed: {m}"),
            Error::ConstructionFailed(b) => {
                write!(f, "construction failed in all {} branch(es): no square cofactor", b.len())
            }
            Error::NotRational => write!(f, "hypersurface is not rational"),
            Error::NoHorizontalCurve => write!(f, "no horizontal polynomial curve exists (all exponents >= 2)"),
            Error::NotPlatonic => write!(f, "minimal-exponent triple is not platonic"),
            Error::ShapeMismatch(m) => write!(f, "shape mismatch: {m}"),
            Error::NotOnHypersurface => write!(f, "curve does not lie on the hypersurface"),
            Error::NotSh => write!(f, "curve is not an SH-curve"),
            Error::DatabaseCorrupt(m) => write!(f, "built-in curve database corrupt: {m}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for Error {}
