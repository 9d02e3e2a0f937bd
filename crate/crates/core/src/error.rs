use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars from different fields (p={left} vs p={right})")]
    FieldMismatch { left: u32, right: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` is not invertible")]
    NotInvertible(String),
    #[error("rule {rule}: {reason}")]
    BadRule { rule: String, reason: String },
    #[error("term order: {0}")]
    BadOrder(String),
    #[error("reduction exceeded its budget of {0} rule applications")]
    StepBudgetExceeded(usize),
    #[error("interior product of a degree-0 element")]
    DegreeZero,
    #[error("expected an element of degree 0, found degree {0}")]
    NotDegreeZero(usize),
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("inconsistent derivation: {0}")]
    InconsistentDerivation(String),
    #[error("2-form is not closed")]
    NotClosed,
    #[error("2-form is singular on the ansatz (kernel dimension {0})")]
    Singular(usize),
    #[error("element is not Hamiltonian relative to the ansatz ({0})")]
    NotHamiltonian(String),
    #[error("tensor element violates the kernel condition of the universal calculus")]
    KernelViolation,
    #[error("{0}")]
    OutOfRange(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
