//! Symbolic algebra of rotation-invariant Pauli monomials.
//!
//! A monomial is a product of scalar products over pairwise disjoint site
//! pairs, optionally times a single mixed product `(σp·σr×σs)`. Monomials
//! with no mixed product form the time-reversal-even sector used to expand
//! density matrices; monomials with one mixed product close the algebra
//! under operator products.

pub mod basis;
pub mod deps;
pub mod monomial;
pub mod poly;
pub mod rewrite;
pub mod tensor;
pub mod trace;

/// Coefficients with magnitude below this are pruned from polynomials.
pub const PRUNE_EPS: f64 = 1e-12;
