use thiserror::Error;

/// Every failure the workbench reports. One enum for the whole crate keeps the
/// C ABI error-code mapping a single `match`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("characteristic 2 is not supported; an odd prime is required")]
    EvenCharacteristic,
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("no bundled Conway polynomial for p={p}, n={n}")]
    NoBundledPolynomial { p: u32, n: u32 },
    #[error("field of size {p}^{n} exceeds the supported range")]
    FieldTooLarge { p: u32, n: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element encoding {0} out of range")]
    ElementOutOfRange(u64),
    #[error("{m} does not divide {n}")]
    NonDivisorDegree { m: u32, n: u32 },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("cyclotomic integers over different primes")]
    CharacteristicMismatch,
    #[error("point does not belong to the function's domain")]
    DomainMismatch,
    #[error("enumeration of {required} units exceeds budget {budget}; raise DUALBENT_BUDGET or pass --extended")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("function is not weakly regular bent")]
    NotWeaklyRegular,
    #[error("function spec invalid: {0}")]
    SpecInvariantViolated(String),
    #[error("component index must be nonzero")]
    ZeroComponentIndex,
    #[error("Condition A violated: {0}")]
    ConditionAViolated(String),
    #[error("{0}")]
    NonDivisor(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("defining set is not a union of scalar orbits")]
    NotOrbitClosed,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("secret coordinate column g_0 is zero")]
    DegenerateG0,
    #[error("shares are inconsistent with the scheme")]
    InconsistentShares,
    #[error("unknown instance {0:?}")]
    UnknownInstance(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
