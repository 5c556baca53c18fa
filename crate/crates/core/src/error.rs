//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// An operation that requires a homogeneous input received a mix of gradings.
    #[error("expression is not homogeneous: found gradings {0} and {1}")]
    Inhomogeneous(String, String),

    /// A jet coordinate would exceed the context's derivative-order bound.
    #[error("jet order {requested} exceeds the context bound {max}")]
    OrderOverflow { requested: u8, max: u8 },

    /// A form did not have the horizontal/vertical degree the operation requires.
    #[error("expected bidegree {expected}, found {found}")]
    Bidegree { expected: String, found: String },

    /// A vector field or gauge structure has the wrong parity/ghost assignment.
    #[error("grading violation: {0}")]
    Grading(String),

    /// A polynomial operation met a wedge generator where only coefficients are allowed.
    #[error("coefficient-only operation applied to an expression containing form generators")]
    NotCoefficient,

    /// Reference to a field, coordinate, or parameter the context does not declare.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// Index out of range for the base dimension or a component slot.
    #[error("index {index} out of range for dimension {dim}")]
    IndexRange { index: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// invert_d was asked for a preimage of a form that is not d-closed.
    #[error("input is not d-closed; no preimage can exist")]
    NotClosed,

    /// The linear system over the bounded ansatz had no solution.
    #[error("no solution within bounds ({0})")]
    NoSolution(String),

    /// The operator being inverted failed on the ansatz (e.g. order overflow).
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    /// A claimed precondition (e.g. L_X omega weakly zero) failed.
    #[error("not Hamiltonian: {0}")]
    NotHamiltonian(String),
}
