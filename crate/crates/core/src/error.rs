use thiserror::Error;

/// Why a bounded operation declined to produce a result.
///
/// Rejections are signals consumed by the guess search, not failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    NotDivisible,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{ext} exceeds the supported cap of 2^16")]
    FieldTooLarge { p: u64, ext: u32 },
    #[error("extension degree must be at least 1")]
    ZeroExtension,
    #[error("element does not belong to this field")]
    CtxMismatch,
    #[error("division by zero")]
    DivByZero,
    #[error("operands have incompatible shapes: {0}")]
    ShapeMismatch(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial does not depend on the eliminated variable")]
    ZeroDegree,
    #[error("rejected: {0:?}")]
    Reject(RejectReason),
    #[error("empty multiplicity vector")]
    EmptyVector,
    #[error("empty support")]
    EmptySupport,
    #[error("field too small: need at least {required} distinct elements, have {available}")]
    FieldTooSmall { required: u64, available: u64 },
    #[error("polynomial is not monic in the main variable")]
    NotMonic,
    #[error("both polynomials must have positive degree")]
    DegreeZero,
    #[error("lifting seeds are not coprime")]
    NotCoprime,
    #[error("guess rejected: {0}")]
    GuessInvalid(&'static str),
    #[error("no verified factorization found")]
    NoFactorizationFound,
    #[error("corner-point bound violated: t = {vertices}, |E| = {points}, exponent {exponent}")]
    BoundViolation { vertices: usize, points: usize, exponent: u64 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_field_too_small(&self) -> bool {
        matches!(self, Error::FieldTooSmall { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
