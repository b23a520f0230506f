use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants are grouped by the layer that produces them; the CLI maps
/// them onto its exit-code contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("no irreducible polynomial of degree {degree} found over F_{p}")]
    NoIrreducibleFound { p: u64, degree: usize },
    #[error("field of order {p}^{n} is too large for word-sized arithmetic")]
    FieldTooLarge { p: u64, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("modulus is not monic")]
    NonMonicModulus,
    #[error("modulus is zero")]
    ZeroModulus,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("element does not belong to this field")]
    ContextMismatch,
    #[error("extension of size {size} exceeds the enumeration budget {budget}")]
    ExtensionTooLarge { size: u128, budget: u64 },
    #[error("enumeration of {size} items exceeds the budget {budget}")]
    BudgetExceeded { size: u128, budget: u64 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("characteristic {0} is too small (need > 3)")]
    CharacteristicTooSmall(u64),
    #[error("Hecke traces of weight {0} are not available")]
    UnsupportedWeight(u32),
    #[error("index {index} exceeds the expansion precision {precision}")]
    PrecisionExceeded { index: u64, precision: u64 },
    #[error("no stored formula for {0}")]
    NotTabulated(String),
    #[error("integer overflow while building {0}")]
    Overflow(&'static str),
    #[error("shift configuration hits a pole of the zeta factor")]
    PoleHit,
    #[error("insufficient precision: {0}")]
    PrecisionInsufficient(String),
}

pub type Result<T> = std::result::Result<T, Error>;
