//! Per-spin ground-state energy lower bounds for the Heisenberg chain.
//!
//! An infinite chain of N spins with N bonds splits into N/(n-1) translated
//! copies of an open n-site cluster carrying n-1 bonds, so any lower bound on
//! tr(H_cl rho_cl) over admissible cluster states, divided by n-1, bounds the
//! energy per spin. Minimizing over all density matrices gives the spectral
//! (Anderson) bound; restricting to lattice-symmetric states reachable as
//! normalized squares tightens it.

pub mod model;
pub mod objective;
pub mod optim;

use thiserror::Error;

use crate::algebra::monomial::AlgebraError;
use crate::oracle::OracleError;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cluster needs at least two sites, got {0}")]
    ClusterTooSmall(usize),
    #[error("inputs disagree on the site count: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("coefficient vector has length {got}, basis has {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("squared norm vanished; restart from a different point")]
    DegeneratePoint,
    #[error("invalid optimizer configuration: {0}")]
    Config(String),
}
