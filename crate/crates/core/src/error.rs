use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not square (row {row} has {len} entries, expected {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("lattice is not even (diagonal entry {index} is {value})")]
    NotEven { index: usize, value: i64 },
    #[error("definite lattice required")]
    NotDefinite,
    #[error("negative definite lattice required")]
    NotNegativeDefinite,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector not primitive")]
    NotPrimitive,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("degenerate or inconsistent form: {0}")]
    InconsistentForm(String),
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("resulting lattice not even")]
    ResultNotEven,
    #[error("convention inconsistency: {0}")]
    ConventionInconsistency(String),
    #[error("reduction required: {0}")]
    ReductionRequired(String),
    #[error("signature ({p},{q}) is not of the form (2, n) with n >= {min_n}")]
    WrongSignature { p: usize, q: usize, min_n: usize },
    #[error("economic subgroup not found")]
    EconomicNotFound,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no roots")]
    NoRoots,
    #[error("element is not in pi_L")]
    NotInPi,
    #[error("length condition fails: {0}")]
    LengthCondition(String),
    #[error("not a hyperbolic splitting: {0}")]
    BadSplit(String),
    #[error("config incomplete: {0}")]
    ConfigIncomplete(String),
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("missing witness")]
    MissingWitness,
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Errors caused by a search running into its configured limit.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_))
    }
}
