//! Open-chain cluster Hamiltonian and the spectral lower bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::algebra::monomial::{canonicalize, Site};
use crate::algebra::poly::OperatorPoly;
use crate::oracle::{min_eigenvalue, represent};

/// Nearest-neighbor cluster cut out of the infinite chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterModel {
    n: usize,
    bonds: Vec<(Site, Site)>,
    hamiltonian_coeffs: Vec<f64>,
}

impl ClusterModel {
    /// Contiguous n-site chain with the n-1 unit-weight bonds (i, i+1).
    pub fn chain(n: usize) -> Result<Self, BoundsError> {
        if n < 2 {
            return Err(BoundsError::ClusterTooSmall(n));
        }
        let bonds: Vec<(Site, Site)> = (1..n).map(|i| (i as Site, (i + 1) as Site)).collect();
        let hamiltonian_coeffs = vec![1.0; bonds.len()];
        Ok(ClusterModel {
            n,
            bonds,
            hamiltonian_coeffs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bonds(&self) -> &[(Site, Site)] {
        &self.bonds
    }

    pub fn hamiltonian_coeffs(&self) -> &[f64] {
        &self.hamiltonian_coeffs
    }

    /// Division by the bond count converts a cluster energy into a per-spin
    /// value: the infinite chain has one bond per spin.
    pub fn per_spin_factor(&self) -> f64 {
        1.0 / self.bonds.len() as f64
    }

    /// Cluster Hamiltonian as a sum of weighted scalar-product bonds.
    pub fn hamiltonian_poly(&self) -> Result<OperatorPoly, BoundsError> {
        let mut h = OperatorPoly::new(self.n);
        for (&(a, b), &w) in self.bonds.iter().zip(&self.hamiltonian_coeffs) {
            let (mono, _) = canonicalize(&[(a, b)], None)?;
            h.add_term(mono, Complex64::new(w, 0.0))?;
        }
        Ok(h)
    }
}

/// Smallest cluster eigenvalue per spin.
///
/// The infimum of tr(H_cl rho) over all density matrices is the bottom of
/// the spectrum, so this is the loosest bound in the family.
pub fn anderson_bound(model: &ClusterModel) -> Result<f64, BoundsError> {
    let dense = represent(&model.hamiltonian_poly()?)?;
    Ok(min_eigenvalue(&dense)? * model.per_spin_factor())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_contiguous_unit_bonds() {
        let model = ClusterModel::chain(4).unwrap();
        assert_eq!(model.bonds(), &[(1, 2), (2, 3), (3, 4)]);
        assert_eq!(model.hamiltonian_coeffs(), &[1.0, 1.0, 1.0]);
        assert!((model.per_spin_factor() - 1.0 / 3.0).abs() < 1e-15);
        assert!(ClusterModel::chain(1).is_err(), "a single site has no bond");
    }

    #[test]
    fn two_site_bound_is_singlet_energy() {
        let model = ClusterModel::chain(2).unwrap();
        let bound = anderson_bound(&model).unwrap();
        assert!(
            (bound + 3.0).abs() < 1e-9,
            "single bond bottoms out at the singlet, got {bound}"
        );
    }

    #[test]
    fn three_site_bound_matches_exact_spectrum() {
        // (s1 s2) + (s2 s3) on three sites has ground energy -4, two bonds.
        let model = ClusterModel::chain(3).unwrap();
        let bound = anderson_bound(&model).unwrap();
        assert!((bound + 2.0).abs() < 1e-9, "got {bound}");
    }
}
