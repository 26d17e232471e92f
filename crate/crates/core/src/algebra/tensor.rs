//! Symmetrized structure constants of the scalar-product sector.
//!
//! For the ordered scalar-product basis {A_0 = 1, A_1, ...} on n sites, the
//! tensor stores, for every output index k, the symmetric matrix C_k with
//! entry (i, j) equal to the coefficient of A_k in (A_i A_j + A_j A_i)/2.
//! Squares of even-sector elements close on the even sector, so for
//! tau = sum_i b_i A_i the square expands as tau^2 = sum_k (b^T C_k b) A_k,
//! and the normalized state tau^2 / tr tau^2 has expansion coefficients
//! a_k(b) = (b^T C_k b) / (b^T C_0 b).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::{enumerate_basis, Sector};
use super::monomial::{AlgebraError, Monomial};
use super::rewrite::multiply_monomials;

/// Bump when the serialized schema or basis ordering changes.
pub const TENSOR_FORMAT_VERSION: u32 = 1;

/// Residues that should cancel exactly must stay below this after reduction.
const RESIDUE_TOL: f64 = 1e-9;

/// Sparse symmetric structure constants over the scalar-product basis.
#[derive(Debug, Clone)]
pub struct StructureTensor {
    n: usize,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    /// coeffs[k] lists (i, j, value) with i <= j; each matrix is symmetric.
    coeffs: Vec<Vec<(u32, u32, f64)>>,
}

#[derive(Serialize, Deserialize)]
struct TensorDoc {
    version: u32,
    n: usize,
    basis: Vec<String>,
    coeffs: Vec<CoeffBlock>,
}

#[derive(Serialize, Deserialize)]
struct CoeffBlock {
    k: u32,
    entries: Vec<(u32, u32, f64)>,
}

impl StructureTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Sparse upper-triangle entries (i <= j) of C_k.
    pub fn entries(&self, k: usize) -> &[(u32, u32, f64)] {
        &self.coeffs[k]
    }

    /// Dense symmetric C_k, mainly for reductions and tests.
    pub fn dense_matrix(&self, k: usize) -> Vec<Vec<f64>> {
        let m = self.basis.len();
        let mut out = vec![vec![0.0; m]; m];
        for &(i, j, v) in &self.coeffs[k] {
            out[i as usize][j as usize] = v;
            out[j as usize][i as usize] = v;
        }
        out
    }

    /// Quadratic form b^T C_k b.
    pub fn quad(&self, k: usize, b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for &(i, j, v) in &self.coeffs[k] {
            let (i, j) = (i as usize, j as usize);
            if i == j {
                acc += v * b[i] * b[i];
            } else {
                acc += 2.0 * v * b[i] * b[j];
            }
        }
        acc
    }

    /// Accumulates scale * 2 C_k b, the gradient of quad, into out.
    pub fn quad_grad_accum(&self, k: usize, scale: f64, b: &[f64], out: &mut [f64]) {
        for &(i, j, v) in &self.coeffs[k] {
            let (i, j) = (i as usize, j as usize);
            if i == j {
                out[i] += scale * 2.0 * v * b[i];
            } else {
                out[i] += scale * 2.0 * v * b[j];
                out[j] += scale * 2.0 * v * b[i];
            }
        }
    }

    /// Expansion coefficients a_k(b) of the normalized square; a_0 = 1.
    pub fn a_vector(&self, b: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        if b.len() != self.basis.len() {
            return Err(AlgebraError::SizeMismatch(b.len(), self.basis.len()));
        }
        let norm = self.quad(0, b);
        if norm.abs() < 1e-14 {
            return Err(AlgebraError::Inconsistency(
                "degenerate normalization in a-coefficient map".into(),
            ));
        }
        Ok((0..self.basis.len())
            .map(|k| self.quad(k, b) / norm)
            .collect())
    }

    pub fn to_json(&self) -> String {
        let doc = TensorDoc {
            version: TENSOR_FORMAT_VERSION,
            n: self.n,
            basis: self.basis.iter().map(|m| m.to_string()).collect(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, entries)| !entries.is_empty())
                .map(|(k, entries)| CoeffBlock {
                    k: k as u32,
                    entries: entries.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("tensor serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let doc: TensorDoc =
            serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        if doc.version != TENSOR_FORMAT_VERSION {
            return Err(AlgebraError::Parse(format!(
                "unsupported tensor format version {}",
                doc.version
            )));
        }
        let expected = enumerate_basis(doc.n, Sector::ScalarOnly)?;
        if doc.basis.len() != expected.len() {
            return Err(AlgebraError::Parse(format!(
                "basis length {} does not match {} for {} sites",
                doc.basis.len(),
                expected.len(),
                doc.n
            )));
        }
        for (stored, built) in doc.basis.iter().zip(&expected) {
            if stored != &built.to_string() {
                return Err(AlgebraError::Parse(format!(
                    "stored basis element {stored} does not match expected {built}"
                )));
            }
        }
        let m = expected.len();
        let mut coeffs = vec![Vec::new(); m];
        for block in doc.coeffs {
            let k = block.k as usize;
            if k >= m {
                return Err(AlgebraError::Parse(format!(
                    "coefficient index {k} out of range"
                )));
            }
            for &(i, j, _) in &block.entries {
                if i > j || j as usize >= m {
                    return Err(AlgebraError::Parse(format!(
                        "malformed sparse entry ({i}, {j}) in block {k}"
                    )));
                }
            }
            coeffs[k] = block.entries;
        }
        let index = expected
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(StructureTensor {
            n: doc.n,
            basis: expected,
            index,
            coeffs,
        })
    }
}

/// Expands every symmetrized basis product on n sites into the tensor.
///
/// Odd-sector residues must cancel when the product is symmetrized; a residue
/// above tolerance signals a reduction-rule bug and aborts construction.
pub fn build_structure_tensor(n: usize) -> Result<StructureTensor, AlgebraError> {
    let basis = enumerate_basis(n, Sector::ScalarOnly)?;
    let m = basis.len();
    let index: BTreeMap<Monomial, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut coeffs = vec![Vec::new(); m];
    for i in 0..m {
        for j in i..m {
            let product = multiply_monomials(&basis[i], &basis[j]);
            for (mono, c) in product {
                if mono.has_triple() {
                    // The symmetrized product is even under time reversal, so
                    // odd-sector terms carry purely imaginary coefficients and
                    // drop out of (A_iA_j + A_jA_i)/2.
                    if c.re.abs() > RESIDUE_TOL {
                        return Err(AlgebraError::Inconsistency(format!(
                            "odd-sector residue {} on {mono} in product {} x {}",
                            c.re, basis[i], basis[j]
                        )));
                    }
                    continue;
                }
                if c.im.abs() > RESIDUE_TOL {
                    return Err(AlgebraError::Inconsistency(format!(
                        "imaginary residue {} on {mono} in product {} x {}",
                        c.im, basis[i], basis[j]
                    )));
                }
                let k = *index.get(&mono).ok_or_else(|| {
                    AlgebraError::Inconsistency(format!(
                        "product term {mono} missing from the scalar basis"
                    ))
                })?;
                coeffs[k].push((i as u32, j as u32, c.re));
            }
        }
    }
    for block in &mut coeffs {
        block.sort_unstable_by_key(|&(i, j, _)| (i, j));
    }
    Ok(StructureTensor {
        n,
        basis,
        index,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_tensor_matches_hand_expansion() {
        let t = build_structure_tensor(2).unwrap();
        assert_eq!(
            t.basis_len(),
            2,
            "two sites carry the identity and one pair"
        );
        assert_eq!(
            t.dense_matrix(0),
            vec![vec![1.0, 0.0], vec![0.0, 3.0]],
            "identity component of the squared expansion"
        );
        // (s1s2)^2 = 3 - 2(s1s2), so b^T C_1 b = 2 b0 b1 - 2 b1^2.
        assert_eq!(
            t.dense_matrix(1),
            vec![vec![0.0, 1.0], vec![1.0, -2.0]],
            "pair component of the squared expansion"
        );
    }

    #[test]
    fn two_site_a_map_matches_ratio_of_quadratics() {
        let t = build_structure_tensor(2).unwrap();
        let b = [0.7, -0.4];
        let a = t.a_vector(&b).unwrap();
        let norm = b[0] * b[0] + 3.0 * b[1] * b[1];
        let pair = 2.0 * b[0] * b[1] - 2.0 * b[1] * b[1];
        assert!(
            (a[0] - 1.0).abs() < 1e-14,
            "identity coefficient normalizes to one"
        );
        assert!(
            (a[1] - pair / norm).abs() < 1e-14,
            "pair coefficient follows the quadratic ratio, got {}",
            a[1]
        );
    }

    #[test]
    fn identity_row_is_kronecker_delta() {
        for n in 2..=4 {
            let t = build_structure_tensor(n).unwrap();
            let m = t.basis_len();
            for j in 0..m {
                for k in 0..m {
                    let dense = t.dense_matrix(k);
                    let expected = if k == j { 1.0 } else { 0.0 };
                    assert!(
                        (dense[0][j] - expected).abs() < 1e-12,
                        "identity times A_{j} must be A_{j} alone, n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn diagonal_identity_entries_are_normalized_norms() {
        let t = build_structure_tensor(4).unwrap();
        let dense0 = t.dense_matrix(0);
        for (i, a) in t.basis().iter().enumerate() {
            let norm = crate::algebra::trace::trace_inner(a, a, 4) / 16.0;
            assert!(
                (dense0[i][i] - norm).abs() < 1e-12,
                "squared norm of {a} disagrees with its trace"
            );
        }
    }

    #[test]
    fn json_roundtrip_preserves_tensor() {
        let t = build_structure_tensor(3).unwrap();
        let text = t.to_json();
        let back = StructureTensor::from_json(&text).unwrap();
        assert_eq!(back.n(), 3);
        assert_eq!(back.basis(), t.basis());
        for k in 0..t.basis_len() {
            assert_eq!(
                back.entries(k),
                t.entries(k),
                "coefficient block {k} changed"
            );
        }
    }

    #[test]
    fn stale_version_is_rejected() {
        let t = build_structure_tensor(2).unwrap();
        let text = t.to_json().replace("\"version\":1", "\"version\":99");
        assert!(
            StructureTensor::from_json(&text).is_err(),
            "format version mismatch must not load"
        );
    }
}
