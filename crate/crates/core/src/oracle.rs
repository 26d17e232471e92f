//! Dense matrix oracle: brute-force Kronecker representation of invariant
//! monomials on `(C^2)^{⊗n}` plus a dependency-free Jacobi eigensolver.
//!
//! Everything here is deliberately independent of the symbolic reduction
//! rules so the two routes can check each other.

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::monomial::{Monomial, Site};
use crate::algebra::poly::OperatorPoly;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("dense representation for n={n} exceeds the cap of {cap} sites")]
    CapacityExceeded { n: usize, cap: usize },
    #[error("matrix is not Hermitian: max |M - M†| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NotConverged(usize),
}

/// Hard cap on dense representations (a 2^10-dimensional matrix is 16 MiB).
pub const DEFAULT_DENSE_CAP: usize = 10;

const HERMITICITY_TOL: f64 = 1e-10;
const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;
const POSITIVITY_FLOOR: f64 = -1e-9;

/// Row-major dense complex matrix on the full 2^n-dimensional cluster space.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Self {
        let dim = 1usize << n;
        DenseOperator {
            n,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn site_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set_add(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] += v;
    }

    pub fn add_scaled(&mut self, other: &DenseOperator, s: Complex64) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = DenseOperator::zeros(self.n);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                let orow = &mut out.data[i * d..(i + 1) * d];
                for (o, &b) in orow.iter_mut().zip(row.iter()) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// tr(A† B) without forming the product.
    pub fn inner(&self, other: &DenseOperator) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Dense matrix of a monomial: scalar products expand as `Σ_a σ_i^a σ_j^a`,
/// mixed products as `Σ ε_abc σ_p^a σ_r^b σ_s^c`; the monomial is the product
/// of its factors over disjoint sites.
pub fn represent_monomial(m: &Monomial, n: usize) -> Result<DenseOperator, OracleError> {
    represent_monomial_capped(m, n, DEFAULT_DENSE_CAP)
}

pub fn represent_monomial_capped(
    m: &Monomial,
    n: usize,
    cap: usize,
) -> Result<DenseOperator, OracleError> {
    if n > cap {
        return Err(OracleError::CapacityExceeded { n, cap });
    }
    assert!(
        m.max_site() as usize <= n,
        "monomial {m} does not fit a {n}-site cluster"
    );
    let mut out = DenseOperator::zeros(n);
    for (coeff, word) in pauli_words(m) {
        add_pauli_word(&mut out, &word, Complex64::new(coeff, 0.0));
    }
    Ok(out)
}

/// Dense matrix of a polynomial, by linearity.
pub fn represent(p: &OperatorPoly) -> Result<DenseOperator, OracleError> {
    represent_capped(p, DEFAULT_DENSE_CAP)
}

pub fn represent_capped(p: &OperatorPoly, cap: usize) -> Result<DenseOperator, OracleError> {
    let n = p.site_count();
    if n > cap {
        return Err(OracleError::CapacityExceeded { n, cap });
    }
    let mut out = DenseOperator::zeros(n);
    for (m, c) in p.terms() {
        let dm = represent_monomial_capped(m, n, cap)?;
        out.add_scaled(&dm, c);
    }
    Ok(out)
}

/// Axis assignment per site: 0=x, 1=y, 2=z.
type PauliWord = Vec<(Site, u8)>;

fn pauli_words(m: &Monomial) -> Vec<(f64, PauliWord)> {
    // Levi-Civita: (perm of (0,1,2), sign).
    const EPS: [([u8; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ];
    let mut words: Vec<(f64, PauliWord)> = vec![(1.0, Vec::new())];
    for &(i, j) in m.pairs() {
        let mut next = Vec::with_capacity(words.len() * 3);
        for (c, w) in &words {
            for a in 0..3u8 {
                let mut nw = w.clone();
                nw.push((i, a));
                nw.push((j, a));
                next.push((*c, nw));
            }
        }
        words = next;
    }
    if let Some([p, r, s]) = m.triple() {
        let mut next = Vec::with_capacity(words.len() * 6);
        for (c, w) in &words {
            for (axes, sign) in EPS {
                let mut nw = w.clone();
                nw.push((p, axes[0]));
                nw.push((r, axes[1]));
                nw.push((s, axes[2]));
                next.push((c * sign, nw));
            }
        }
        words = next;
    }
    words
}

/// Adds `coeff · Π σ_site^axis` to `out`. Each Pauli string maps a basis
/// state to a single basis state with a phase, so this is O(2^n) per word.
/// Site i occupies bit i-1; bit value 1 is the σ^z eigenstate with
/// eigenvalue -1.
fn add_pauli_word(out: &mut DenseOperator, word: &PauliWord, coeff: Complex64) {
    let dim = out.dim;
    for col in 0..dim {
        let mut row = col;
        let mut phase = coeff;
        for &(site, axis) in word {
            let bit = 1usize << (site - 1);
            let set = row & bit != 0;
            match axis {
                0 => row ^= bit,
                1 => {
                    // σ^y |0> = i|1>, σ^y |1> = -i|0>; applied left of what
                    // was already in `row`.
                    phase *= if set {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                    row ^= bit;
                }
                _ => {
                    if set {
                        phase = -phase;
                    }
                }
            }
        }
        out.set_add(row, col, phase);
    }
}

/// Smallest eigenvalue of a Hermitian operator via cyclic Jacobi. Complex
/// Hermitian input is embedded as the real symmetric `[[Re, -Im], [Im, Re]]`
/// (eigenvalues doubled in multiplicity); a real symmetric input is
/// diagonalized directly.
pub fn min_eigenvalue(op: &DenseOperator) -> Result<f64, OracleError> {
    let evs = eigenvalues(op)?;
    Ok(evs[0])
}

/// All eigenvalues, ascending. See [`min_eigenvalue`] for the method.
pub fn eigenvalues(op: &DenseOperator) -> Result<Vec<f64>, OracleError> {
    let dev = op.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(OracleError::NotHermitian { deviation: dev });
    }
    let d = op.dim;
    let mut evs = if op.max_imag() <= 1e-12 {
        let mut a = vec![0.0f64; d * d];
        for r in 0..d {
            for c in 0..d {
                a[r * d + c] = op.get(r, c).re;
            }
        }
        jacobi_eigenvalues(a, d)?
    } else {
        let dd = 2 * d;
        let mut a = vec![0.0f64; dd * dd];
        for r in 0..d {
            for c in 0..d {
                let z = op.get(r, c);
                a[r * dd + c] = z.re;
                a[r * dd + (c + d)] = -z.im;
                a[(r + d) * dd + c] = z.im;
                a[(r + d) * dd + (c + d)] = z.re;
            }
        }
        jacobi_eigenvalues(a, dd)?
    };
    evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(evs)
}

/// True when every eigenvalue clears the `-1e-9` floor.
pub fn spectrum_positivity(op: &DenseOperator) -> Result<bool, OracleError> {
    Ok(min_eigenvalue(op)? >= POSITIVITY_FLOOR)
}

/// Cyclic-by-row Jacobi on a real symmetric matrix; converges when the
/// off-diagonal Frobenius norm drops below `1e-12` relative to the matrix
/// scale.
fn jacobi_eigenvalues(mut a: Vec<f64>, d: usize) -> Result<Vec<f64>, OracleError> {
    if d == 1 {
        return Ok(vec![a[0]]);
    }
    let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_TOL * fro.max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..d {
                for q in p + 1..d {
                    s += 2.0 * a[p * d + q] * a[p * d + q];
                }
            }
            s.sqrt()
        };
        if off <= target {
            return Ok((0..d).map(|i| a[i * d + i]).collect());
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[p * d + q];
                if apq.abs() <= f64::EPSILON * fro.max(1.0) {
                    continue;
                }
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(OracleError::NotConverged(MAX_SWEEPS))
}
