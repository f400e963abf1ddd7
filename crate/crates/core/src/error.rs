use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is even; wheel moduli must be odd")]
    EvenModulus(u64),
    #[error("modulus {0} is too small; wheel moduli must be at least 3")]
    ModulusTooSmall(u64),
    #[error("moduli {0} and {1} are not coprime (gcd {2})")]
    NotCoprime(u64, u64, u64),
    #[error("a combined game needs at least one wheel")]
    EmptyCombination,
    #[error("state space of {0} positions exceeds the supported maximum of {1}")]
    StateSpaceTooLarge(u128, u64),
    #[error("stationary distribution is not unique: {0} closed communicating classes")]
    NotUnique(usize),
    #[error("matrix row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: String },
    #[error("matrix entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("exact stationary solve did not converge after {0} primes")]
    SolveFailed(usize),
    #[error("no exact route for a {0}-state chain without doubly-stochastic structure")]
    SolveTooLarge(usize),
    #[error("qubit count {0} outside the supported range 1..=24")]
    QubitsOutOfRange(u32),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u64 },
    #[error("amplitude vector has length {0}, which is not a power of two")]
    BadLength(usize),
    #[error("amplitude vector has squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("state has {0} qubits but {1} were expected")]
    QubitMismatch(u32, u32),
    #[error("alpha = 0 is not allowed in this game")]
    ZeroAlpha,
    #[error("basis index {y} has y·alpha = 0 for alpha = {alpha}")]
    NotOnOracleSupport { y: u64, alpha: u64 },
    #[error("unflipped count {count} outside 0..={max}")]
    CountOutOfRange { count: u64, max: u64 },
    #[error("game requires at least {min} qubits, got {n}")]
    TooFewQubits { n: u32, min: u32 },
    #[error("exhaustive enumeration over {0} oracle coins is too large")]
    ExhaustiveTooLarge(u64),
    #[error("stopping target k must be at least 1")]
    InvalidTargetK,
    #[error("letter cap of {0} exceeded before the stopping condition was met")]
    LetterCapExceeded(u64),
    #[error("at least one step or trial is required")]
    NoSteps,
}
