use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::monomial::{AlgebraError, Monomial};
use super::PRUNE_EPS;

/// Complex linear combination of canonical monomials over a fixed cluster of
/// `n` sites. Terms live in a `BTreeMap` so iteration order is the basis
/// order, which keeps every downstream computation deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPoly {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl OperatorPoly {
    pub fn new(n: usize) -> Self {
        OperatorPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut p = OperatorPoly::new(n);
        p.terms
            .insert(Monomial::identity(), Complex64::new(1.0, 0.0));
        p
    }

    pub fn from_monomial(n: usize, m: Monomial) -> Result<Self, AlgebraError> {
        let mut p = OperatorPoly::new(n);
        p.add_term(m, Complex64::new(1.0, 0.0))?;
        Ok(p)
    }

    pub fn site_count(&self) -> usize {
        self.n
    }

    /// Accumulates `c` onto the coefficient of `m`, pruning magnitudes below
    /// `PRUNE_EPS`. Rejects monomials reaching outside the cluster.
    pub fn add_term(&mut self, m: Monomial, c: Complex64) -> Result<(), AlgebraError> {
        let max = m.max_site();
        if max as usize > self.n {
            return Err(AlgebraError::SiteOutOfRange {
                site: max,
                n: self.n,
            });
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if c.norm() >= PRUNE_EPS {
                    e.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.norm() < PRUNE_EPS {
                    e.remove();
                } else {
                    e.insert(v);
                }
            }
        }
        Ok(())
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms
            .get(m)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Complex64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&mut self, c: Complex64) {
        if c.norm() < PRUNE_EPS {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn add_assign(&mut self, other: &OperatorPoly) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::SizeMismatch(self.n, other.n));
        }
        for (m, c) in other.terms() {
            self.add_term(m.clone(), c)?;
        }
        Ok(())
    }

    /// Largest coefficient difference against `other`, for tests.
    pub fn max_coeff_diff(&self, other: &OperatorPoly) -> f64 {
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|m| (self.coeff(m) - other.coeff(m)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)·{}", c.re, c.im, m)?;
        }
        Ok(())
    }
}
