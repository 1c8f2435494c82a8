use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("characteristic must be 0 or a prime below 2^16, got {0}")]
    InvalidCharacteristic(u32),
    #[error("cannot parse number `{0}`")]
    BadNumber(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VariableMismatch { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at offset {offset}: {msg}")]
    PolyParse { offset: usize, msg: String },
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),
    #[error("variable name `{0}` already in ambient")]
    NameCollision(String),
    #[error("generator weight must be >= 1")]
    ZeroWeight,
    #[error("zero polynomial cannot be a generator")]
    ZeroGenerator,
    #[error("center is not in the singular locus")]
    CenterNotSingular,
    #[error("transform division by {var}^{power} is not exact")]
    InexactTransform { var: String, power: u32 },
    #[error("truncated division not exact: {0}")]
    InexactSeriesDivision(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precision exhausted at step {step}; retry with precision {retry}")]
    PrecisionExhausted { step: usize, retry: u32 },
    #[error("arc center does not match the requested point")]
    CenterMismatch,
    #[error("arc does not lie on the variety: {poly} evaluates with nonzero coefficient at t^{index}")]
    ArcOffVariety { poly: String, index: u32 },
    #[error("polynomial is not monic in {0}")]
    NotMonic(String),
    #[error("factorization budget exceeded: {0}")]
    FactorBudget(String),
    #[error("declared generic rank {declared} differs from tower degree product {computed}")]
    RankMismatch { declared: u64, computed: u64 },
    #[error("multiplicity at the center is {0}; the Nash sequence needs a singular point")]
    SmoothPoint(u64),
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
