//! Rotation-invariant operator algebra for spin-1/2 clusters and the energy
//! lower bounds built on top of it.
//!
//! The algebra works with products of Pauli scalar products `(σi·σj)` and at
//! most one mixed product `(σp·σr×σs)` per monomial. Structure tensors, Gram
//! matrices, symmetry constraints, and the Anderson and variational per-spin
//! bounds all reduce to exact rewriting in that algebra, with a dense matrix
//! oracle for independent verification.

pub mod algebra;
pub mod bounds;
pub mod oracle;
pub mod symmetry;
pub mod verify;

pub use algebra::basis::{basis_size_formula, enumerate_basis, enumerate_basis_capped, Sector};
pub use algebra::deps::{check_dependencies, check_dependencies_capped, DependencyReport};
pub use algebra::monomial::{canonicalize, AlgebraError, Monomial, Site};
pub use algebra::poly::OperatorPoly;
pub use algebra::rewrite::multiply;
pub use algebra::tensor::{build_structure_tensor, StructureTensor, TENSOR_FORMAT_VERSION};
pub use algebra::trace::trace_inner;
pub use bounds::model::{anderson_bound, ClusterModel};
pub use bounds::objective::objective;
pub use bounds::optim::{
    sandwich_check, variational_bound, BoundReport, OptimizerConfig, OptimizerDiagnostics,
    VariationalState,
};
pub use bounds::BoundsError;
pub use oracle::{
    eigenvalues, min_eigenvalue, represent, represent_monomial, spectrum_positivity, DenseOperator,
    OracleError,
};
pub use symmetry::{
    constraint_set, mirror_identification, mirror_monomial, residual_constraints, shift_monomial,
    translation_constraints, ConstraintSet,
};
pub use verify::{
    relation_table, run_verify, run_verify_with_fault, CheckResult, RelationCase, RelationFault,
    VerifyLevel,
};

/// Exact per-spin ground-state energy of the infinite chain, `1 - 4·ln 2`,
/// in units where the Hamiltonian is a sum of bare `(σi·σj)` bonds.
pub const BETHE_REFERENCE: f64 = 1.0 - 4.0 * std::f64::consts::LN_2;
