//! Algebraic energy objective and its mirror-reduced form.
//!
//! With tau = sum_k b_k A_k, the squared-state energy is the ratio
//! 3 sum_bonds (b^T C_bond b) / (b^T C_0 b) divided by the bond count; the
//! factor 3 is the trace of a matched scalar-product pair divided by 2^n.
//! The ratio is scale-invariant, so normalization needs no constraint. The
//! optimizer works on one coefficient per mirror orbit; all quadratic forms
//! reduce through the orbit expansion matrix once at construction.

use super::model::ClusterModel;
use super::BoundsError;
use crate::algebra::monomial::canonicalize;
use crate::algebra::tensor::StructureTensor;
use crate::symmetry::{residual_constraints, ConstraintSet};

/// Squared norms below this are treated as a degenerate point.
const NORM_FLOOR: f64 = 1e-14;

/// Scalar-product trace per site pair, tr((si sj)^2) / 2^n.
const BOND_TRACE: f64 = 3.0;

/// Per-spin energy of the normalized square of tau and its gradient in the
/// full coefficient vector b.
pub fn objective(
    b: &[f64],
    tensor: &StructureTensor,
    model: &ClusterModel,
) -> Result<(f64, Vec<f64>), BoundsError> {
    if tensor.n() != model.n() {
        return Err(BoundsError::SizeMismatch(tensor.n(), model.n()));
    }
    if b.len() != tensor.basis_len() {
        return Err(BoundsError::VectorLength {
            expected: tensor.basis_len(),
            got: b.len(),
        });
    }
    let bond_indices = bond_indices(tensor, model)?;
    let norm = tensor.quad(0, b);
    if norm.abs() < NORM_FLOOR {
        return Err(BoundsError::DegeneratePoint);
    }
    let mut energy = 0.0;
    let mut h_grad = vec![0.0; b.len()];
    for &(k, w) in &bond_indices {
        energy += w * tensor.quad(k, b);
        tensor.quad_grad_accum(k, w, b, &mut h_grad);
    }
    let mut norm_grad = vec![0.0; b.len()];
    tensor.quad_grad_accum(0, 1.0, b, &mut norm_grad);
    let scale = BOND_TRACE * model.per_spin_factor();
    let ratio = energy / norm;
    let value = scale * ratio;
    let grad = h_grad
        .iter()
        .zip(&norm_grad)
        .map(|(&h, &c)| scale * (h - ratio * c) / norm)
        .collect();
    Ok((value, grad))
}

fn bond_indices(
    tensor: &StructureTensor,
    model: &ClusterModel,
) -> Result<Vec<(usize, f64)>, BoundsError> {
    model
        .bonds()
        .iter()
        .zip(model.hamiltonian_coeffs())
        .map(|(&(a, b), &w)| {
            let (mono, _) = canonicalize(&[(a, b)], None)?;
            let k = tensor
                .index_of(&mono)
                .ok_or_else(|| BoundsError::SizeMismatch(tensor.n(), model.n()))?;
            Ok((k, w))
        })
        .collect()
}

/// Dense symmetric matrix in the mirror-orbit coordinates.
#[derive(Debug, Clone)]
struct ReducedMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl ReducedMatrix {
    fn zeros(dim: usize) -> Self {
        ReducedMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    fn sub(&self, other: &ReducedMatrix) -> ReducedMatrix {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        ReducedMatrix {
            dim: self.dim,
            data,
        }
    }

    fn matvec(&self, b: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(b).map(|(m, x)| m * x).sum())
            .collect()
    }

    fn quad(&self, b: &[f64]) -> f64 {
        self.matvec(b).iter().zip(b).map(|(m, x)| m * x).sum()
    }
}

/// Objective and residual constraints over one coefficient per mirror orbit.
pub struct ReducedProblem {
    scale: f64,
    orbits: Vec<Vec<usize>>,
    full_dim: usize,
    identity_orbit: usize,
    c0: ReducedMatrix,
    ch: ReducedMatrix,
    constraints: Vec<ReducedMatrix>,
    residual_pairs: Vec<(usize, usize)>,
}

impl ReducedProblem {
    pub fn new(
        tensor: &StructureTensor,
        model: &ClusterModel,
        cs: &ConstraintSet,
    ) -> Result<Self, BoundsError> {
        if tensor.n() != model.n() {
            return Err(BoundsError::SizeMismatch(tensor.n(), model.n()));
        }
        if cs.n != tensor.n() {
            return Err(BoundsError::SizeMismatch(cs.n, tensor.n()));
        }
        let full_dim = tensor.basis_len();
        let dim = cs.b_orbits.len();
        let mut orbit_of = vec![usize::MAX; full_dim];
        for (oi, orbit) in cs.b_orbits.iter().enumerate() {
            for &k in orbit {
                orbit_of[k] = oi;
            }
        }
        if orbit_of.contains(&usize::MAX) {
            return Err(BoundsError::Config(
                "mirror orbits do not cover the basis".into(),
            ));
        }
        let reduce = |k: usize| {
            let mut m = ReducedMatrix::zeros(dim);
            for &(i, j, v) in tensor.entries(k) {
                let (oi, oj) = (orbit_of[i as usize], orbit_of[j as usize]);
                if i == j {
                    m.data[oi * dim + oi] += v;
                } else {
                    // Distinct basis slots in one orbit still carry both
                    // symmetric contributions onto the reduced diagonal.
                    m.data[oi * dim + oj] += v;
                    m.data[oj * dim + oi] += v;
                }
            }
            m
        };
        let c0 = reduce(0);
        let mut ch = ReducedMatrix::zeros(dim);
        for (k, w) in bond_indices(tensor, model)? {
            let m = reduce(k);
            for (dst, src) in ch.data.iter_mut().zip(&m.data) {
                *dst += w * src;
            }
        }
        let residual_pairs = residual_constraints(&cs.a_equalities, &cs.b_orbits);
        let constraints = residual_pairs
            .iter()
            .map(|&(k, k2)| reduce(k).sub(&reduce(k2)))
            .collect();
        Ok(ReducedProblem {
            scale: BOND_TRACE * model.per_spin_factor(),
            orbits: cs.b_orbits.clone(),
            full_dim,
            identity_orbit: orbit_of[cs.normalization],
            c0,
            ch,
            constraints,
            residual_pairs,
        })
    }

    pub fn dim(&self) -> usize {
        self.c0.dim
    }

    pub fn identity_orbit(&self) -> usize {
        self.identity_orbit
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn residual_pairs(&self) -> &[(usize, usize)] {
        &self.residual_pairs
    }

    /// Full-basis coefficient vector with b constant on each orbit.
    pub fn expand(&self, b: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.full_dim];
        for (orbit, &value) in self.orbits.iter().zip(b) {
            for &k in orbit {
                full[k] = value;
            }
        }
        full
    }

    /// Per-spin energy value and gradient in orbit coordinates.
    pub fn value_grad(&self, b: &[f64]) -> Result<(f64, Vec<f64>), BoundsError> {
        let norm = self.c0.quad(b);
        if norm.abs() < NORM_FLOOR {
            return Err(BoundsError::DegeneratePoint);
        }
        let hb = self.ch.matvec(b);
        let energy: f64 = hb.iter().zip(b).map(|(m, x)| m * x).sum();
        let cb = self.c0.matvec(b);
        let ratio = energy / norm;
        let grad = hb
            .iter()
            .zip(&cb)
            .map(|(&h, &c)| self.scale * 2.0 * (h - ratio * c) / norm)
            .collect();
        Ok((self.scale * ratio, grad))
    }

    /// Normalized constraint gaps g_j = b^T D_j b / (b^T C_0 b).
    pub fn constraint_values(&self, b: &[f64]) -> Result<Vec<f64>, BoundsError> {
        let norm = self.c0.quad(b);
        if norm.abs() < NORM_FLOOR {
            return Err(BoundsError::DegeneratePoint);
        }
        Ok(self.constraints.iter().map(|d| d.quad(b) / norm).collect())
    }

    /// Augmented Lagrangian value and gradient at fixed multipliers.
    ///
    /// L = f + sum_j (lambda_j g_j + mu/2 g_j^2), with f and every g_j in
    /// their scale-invariant ratio forms.
    pub fn lagrangian(
        &self,
        b: &[f64],
        lambda: &[f64],
        mu: f64,
    ) -> Result<(f64, Vec<f64>), BoundsError> {
        let norm = self.c0.quad(b);
        if norm.abs() < NORM_FLOOR {
            return Err(BoundsError::DegeneratePoint);
        }
        let cb = self.c0.matvec(b);
        let hb = self.ch.matvec(b);
        let energy: f64 = hb.iter().zip(b).map(|(m, x)| m * x).sum();
        let ratio = energy / norm;
        let mut value = self.scale * ratio;
        let mut grad: Vec<f64> = hb
            .iter()
            .zip(&cb)
            .map(|(&h, &c)| self.scale * 2.0 * (h - ratio * c) / norm)
            .collect();
        for (d, &lam) in self.constraints.iter().zip(lambda) {
            let db = d.matvec(b);
            let g = db.iter().zip(b).map(|(m, x)| m * x).sum::<f64>() / norm;
            let weight = lam + mu * g;
            value += lam * g + 0.5 * mu * g * g;
            for ((out, &dv), &cv) in grad.iter_mut().zip(&db).zip(&cb) {
                *out += weight * 2.0 * (dv - g * cv) / norm;
            }
        }
        Ok((value, grad))
    }
}
