//! Symbolic calculus for local gauge systems on jet bundles.
//!
//! The crate builds up, in order: a graded-commutative polynomial ring with
//! exact coefficients, jet-bundle contexts with total derivatives and
//! evolutionary vector fields, bigraded differential forms with the
//! horizontal/vertical/BRST differentials, decision procedures for d-exactness
//! and on-shell triviality, descent machinery for presymplectic structures and
//! conserved currents, and three fully worked models (Maxwell, abelian
//! Chern-Simons, linearized gravity).
//!
//! Everything algebraic is generic over [`scalar::Scalar`]; the decision
//! procedures demand an exact field, pinned at the crate root to
//! arbitrary-precision rationals.

pub mod error;
pub mod scalar;
pub mod grading;
pub mod generator;
pub mod ring;
pub mod jets;
pub mod forms;
pub mod cohomology;
pub mod gauge;
pub mod models;
pub mod sample;

pub use cohomology::{
    equivalent_strong, equivalent_weak, invert_d, is_d_exact, is_weakly_zero, solve_delta_d,
    solve_delta_modulo_shell, Exactness, SolveBounds, WeakWitness,
};
pub use error::{AlgebraError, SolveError};
pub use gauge::{
    check_homological, ConservationLaw, CurrentDescent, DescentChain, DescentLevel, GaugeError,
    GaugeSystem, GaugeTriviality, HamiltonianPair,
};
pub use forms::{euler_lagrange, source_decompose, vol, Form, SourceForm};
pub use generator::{FieldId, Gen, MultiIndex, Names};
pub use grading::{Grading, Parity};
pub use jets::{EvolutionaryVectorField, FamilyId, FieldSpec, IndexSlot, JetContext};
pub use models::geometry::FlatGeometry;
pub use models::{Check, CheckKind, CheckOutcome, ModelBundle, ModelReport, NamedGenerator};
pub use ring::{GradedPoly, Monomial};
pub use scalar::{int, ratio, Scalar};

/// Exact rational coefficients used by the models and the CLI.
pub type Rat = num_rational::BigRational;
pub type RatPoly = GradedPoly<Rat>;
