use alloc::boxed::Box;
use alloc::string::String;

/// Errors raised by the exact algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("conductor N must be at least 1")]
    ZeroConductor,
    #[error("q = {0} is not a prime power >= 2")]
    NotPrimePower(u64),
    #[error("scalars belong to different fields ({0} vs {1})")]
    MixedFields(String, String),
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("cannot parse scalar: {0}")]
    ParseScalar(String),
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("invalid Weil-Deligne representation: {0}")]
    InvalidRep(&'static str),
    #[error("inertia image has {found} elements, above the bound {bound}")]
    InertiaTooLarge { found: usize, bound: usize },
    #[error("inertia lists cannot be combined: {0}")]
    IncompatibleInertia(&'static str),
    #[error("characteristic polynomial of {0} does not split over the coefficient field; rebuild the field with a larger conductor N")]
    NonSplit(&'static str),
    #[error("eigenvalue {0} is not a q-Weil number")]
    NotWeilNumber(String),
    #[error("invalid symplectic pairing: {0}")]
    Pairing(&'static str),
    #[error("invalid Lagrangian: {0}")]
    Lagrangian(&'static str),
    #[error("representation is not pure of weight {weight}: {reason}")]
    NotPure { weight: i64, reason: String },
    #[error("determinant at -1 is {0}, expected +1 or -1")]
    SignNotUnit(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("supplied sign {supplied} contradicts computed sign {computed}")]
    ExplicitSignMismatch { supplied: i8, computed: i8 },
    #[error("block outside the symplectic classification: {0}")]
    Unclassified(String),
    #[error("no stable Lagrangian found: {0}")]
    NoStableLagrangian(&'static str),
    #[error("invalid numerology: {0}")]
    Numerology(String),
    #[error("identity {0} failed")]
    IdentityFailure(&'static str),
    #[error("place {place}: {inner}")]
    AtPlace { place: String, inner: Box<Error> },
}

impl Error {
    /// Attributes the error to a named place.
    pub fn at_place(place: &str, inner: Error) -> Error {
        Error::AtPlace {
            place: place.into(),
            inner: Box::new(inner),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
