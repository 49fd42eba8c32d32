use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("cyclic modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("Prufer parameter must be prime, got {0}")]
    NotPrime(u64),
    #[error("element does not belong to group {group}: {reason}")]
    GroupMismatch { group: String, reason: String },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("window bound must be positive")]
    WindowBound,
    #[error("window has {size} elements, limit is {limit}")]
    WindowTooLarge { size: u128, limit: u128 },
    #[error("set must be nonempty")]
    EmptySet,
    #[error("shift vectors must be distinct")]
    EqualShifts,
    #[error("set is not symmetric: {0} is present but its negative is not")]
    NotSymmetric(String),
    #[error("set does not contain zero")]
    MissingZero,
    #[error("group {0} is finite")]
    FiniteGroup(String),
    #[error("group {0} is infinite")]
    InfiniteGroup(String),
    #[error("kappa must be at least 2, got {0}")]
    InvalidKappa(usize),
    #[error("no set with sharp packing index {kappa} exists in {group}")]
    ExceptionalGroup { group: String, kappa: usize },
    #[error("no carrier for kappa = {kappa} in {group}")]
    NoCarrier { group: String, kappa: usize },
    #[error("property ({property}_{kappa}) fails: {detail}")]
    PropertyFailed { property: u8, kappa: usize, detail: String },
    #[error("no admissible candidate for g = {g} after {expansions} window expansions")]
    CandidateExhausted { g: String, expansions: u32 },
    #[error("greedy construction stalled at g = {g}: F + B covers the finite group")]
    PropertyThreeViolated { g: String },
    #[error("witness invariants do not hold")]
    InvariantsNotVerified,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("group {0} is outside the family covered by this procedure")]
    NotApplicable(String),
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("set file: {0}")]
    SetFile(String),
}

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "Syntax",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::NotPrime(_) => "NotPrime",
            Error::GroupMismatch { .. } => "GroupMismatch",
            Error::Overflow(_) => "Overflow",
            Error::WindowBound => "WindowBound",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::EmptySet => "EmptySet",
            Error::EqualShifts => "EqualShifts",
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::MissingZero => "MissingZero",
            Error::FiniteGroup(_) => "FiniteGroup",
            Error::InfiniteGroup(_) => "InfiniteGroup",
            Error::InvalidKappa(_) => "InvalidKappa",
            Error::ExceptionalGroup { .. } => "ExceptionalGroup",
            Error::NoCarrier { .. } => "NoCarrier",
            Error::PropertyFailed { .. } => "PropertyFailed",
            Error::CandidateExhausted { .. } => "CandidateExhausted",
            Error::PropertyThreeViolated { .. } => "PropertyThreeViolated",
            Error::InvariantsNotVerified => "InvariantsNotVerified",
            Error::Precondition(_) => "Precondition",
            Error::NotApplicable(_) => "NotApplicable",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::SetFile(_) => "SetFile",
        }
    }

    /// Errors in user-supplied text rather than in the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::InvalidModulus(_) | Error::NotPrime(_) | Error::SetFile(_))
    }
}
