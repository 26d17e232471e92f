//! Overcompleteness analysis of the invariant operator set.
//!
//! The trace inner product vanishes unless supports coincide, so the Gram
//! matrix of the full even/odd set splits into blocks indexed by the exact
//! support subset. Within each block the known linear dependencies come in
//! two families: a four-term pivot identity on five odd-sector sites and a
//! 4x4 determinant identity on eight even-sector sites, both optionally
//! multiplied by a perfect matching of the remaining block sites. The check
//! compares the Gram rank of every block against the block dimension minus
//! the rank spanned by generated family instances.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::{enumerate_basis_capped, Sector};
use super::monomial::{canonicalize, AlgebraError, Monomial, Site};
use super::trace::trace_inner;

/// Full-set Gram analysis grows fast; eight sites stay comfortably cheap.
pub const DEFAULT_DEPS_CAP: usize = 8;

/// Relative pivot threshold below which elimination treats a value as zero.
const RANK_TOL_LO: f64 = 1e-10;
/// Pivots between the two thresholds are counted but flagged as suspect.
const RANK_TOL_HI: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DependencyReport {
    pub n: usize,
    pub set_size: usize,
    pub gram_rank: usize,
    pub predicted_rank: usize,
    pub verified: bool,
    pub ill_conditioned: bool,
}

pub fn check_dependencies(n: usize) -> Result<DependencyReport, AlgebraError> {
    check_dependencies_capped(n, DEFAULT_DEPS_CAP)
}

pub fn check_dependencies_capped(n: usize, cap: usize) -> Result<DependencyReport, AlgebraError> {
    let basis = enumerate_basis_capped(n, Sector::Full, cap)?;
    let mut blocks: BTreeMap<Vec<Site>, Vec<Monomial>> = BTreeMap::new();
    for m in &basis {
        blocks.entry(m.support()).or_default().push(m.clone());
    }
    let scale = (1u64 << n) as f64;
    let mut gram_rank = 0;
    let mut predicted_rank = 0;
    let mut ill_conditioned = false;
    for (support, members) in &blocks {
        let dim = members.len();
        let mut gram = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                let g = trace_inner(&members[i], &members[j], n) / scale;
                gram[i][j] = g;
                gram[j][i] = g;
            }
        }
        let (r, ill) = float_rank(gram);
        gram_rank += r;
        ill_conditioned |= ill;

        let index: BTreeMap<&Monomial, usize> =
            members.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut instances = pivot_identity_instances(support, &index)?;
        instances.extend(det_identity_instances(support, &index)?);
        let (dep_rank, ill) = float_rank(instances);
        predicted_rank += dim - dep_rank;
        ill_conditioned |= ill;
    }
    Ok(DependencyReport {
        n,
        set_size: basis.len(),
        gram_rank,
        predicted_rank,
        verified: gram_rank == predicted_rank,
        ill_conditioned,
    })
}

/// Gaussian elimination rank with full pivoting.
///
/// Returns the rank and whether any accepted pivot fell in the gray zone
/// between the hard zero threshold and the confident one.
fn float_rank(mut mat: Vec<Vec<f64>>) -> (usize, bool) {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let scale = mat
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    if scale == 0.0 {
        return (0, false);
    }
    let mut rank = 0;
    let mut ill = false;
    for step in 0..rows.min(cols) {
        let mut best = (step, step, 0.0f64);
        for (i, row) in mat.iter().enumerate().skip(step) {
            for (j, &cell) in row.iter().enumerate().skip(step) {
                let v = cell.abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 < scale * RANK_TOL_LO {
            break;
        }
        if best.2 < scale * RANK_TOL_HI {
            ill = true;
        }
        mat.swap(step, best.0);
        for row in mat.iter_mut() {
            row.swap(step, best.1);
        }
        let pivot = mat[step][step];
        let (upper, lower) = mat.split_at_mut(step + 1);
        let pivot_row = &upper[step][step..];
        for row in lower.iter_mut() {
            let factor = row[step] / pivot;
            if factor == 0.0 {
                continue;
            }
            for (cell, &p) in row[step..].iter_mut().zip(pivot_row) {
                *cell -= factor * p;
            }
        }
        rank += 1;
    }
    (rank, ill)
}

/// Rows spanning all pivot-identity instances inside one odd-sector block.
///
/// The generating relation pairs a pivot site with each of four partners in
/// ascending order, alternating signs, the complementary triple completing
/// five sites; the remaining block sites enter as a fixed perfect matching.
fn pivot_identity_instances(
    support: &[Site],
    index: &BTreeMap<&Monomial, usize>,
) -> Result<Vec<Vec<f64>>, AlgebraError> {
    let mut out = Vec::new();
    if support.len().is_multiple_of(2) || support.len() < 5 {
        return Ok(out);
    }
    let dim = index.len();
    for five in combinations(support, 5) {
        let rest: Vec<Site> = support
            .iter()
            .copied()
            .filter(|s| !five.contains(s))
            .collect();
        for matching in perfect_matchings(&rest) {
            for &pivot in &five {
                let partners: Vec<Site> = five.iter().copied().filter(|&s| s != pivot).collect();
                let mut row = vec![0.0; dim];
                let mut sign = 1.0;
                for &partner in &partners {
                    let mut pairs = matching.clone();
                    pairs.push((pivot, partner));
                    let triple: Vec<Site> = five
                        .iter()
                        .copied()
                        .filter(|&s| s != pivot && s != partner)
                        .collect();
                    let (mono, parity) =
                        canonicalize(&pairs, Some([triple[0], triple[1], triple[2]]))?;
                    let slot = *index.get(&mono).ok_or_else(|| {
                        AlgebraError::Inconsistency(format!(
                            "identity term {mono} missing from its support block"
                        ))
                    })?;
                    row[slot] += sign * f64::from(parity);
                    sign = -sign;
                }
                out.push(row);
            }
        }
    }
    Ok(out)
}

/// Rows spanning all determinant-identity instances inside one even block.
///
/// Eight sites split into four column sites and four row sites; the 4x4
/// matrix of cross pairs has zero determinant, giving 24 signed matchings.
/// Splits are deduplicated by keeping the smallest site on the column side,
/// since transposing the matrix reproduces the same terms.
fn det_identity_instances(
    support: &[Site],
    index: &BTreeMap<&Monomial, usize>,
) -> Result<Vec<Vec<f64>>, AlgebraError> {
    let mut out = Vec::new();
    if support.len() % 2 == 1 || support.len() < 8 {
        return Ok(out);
    }
    let dim = index.len();
    let perms = permutations_with_sign(4);
    for eight in combinations(support, 8) {
        let rest: Vec<Site> = support
            .iter()
            .copied()
            .filter(|s| !eight.contains(s))
            .collect();
        for matching in perfect_matchings(&rest) {
            for cols in combinations(&eight, 4) {
                if cols[0] != eight[0] {
                    continue;
                }
                let rows: Vec<Site> = eight
                    .iter()
                    .copied()
                    .filter(|s| !cols.contains(s))
                    .collect();
                let mut row_vec = vec![0.0; dim];
                for (perm, sign) in &perms {
                    let mut pairs = matching.clone();
                    for (r, &c) in perm.iter().enumerate() {
                        pairs.push((cols[c], rows[r]));
                    }
                    let (mono, parity) = canonicalize(&pairs, None)?;
                    let slot = *index.get(&mono).ok_or_else(|| {
                        AlgebraError::Inconsistency(format!(
                            "identity term {mono} missing from its support block"
                        ))
                    })?;
                    row_vec[slot] += f64::from(*sign) * f64::from(parity);
                }
                out.push(row_vec);
            }
        }
    }
    Ok(out)
}

fn combinations(items: &[Site], k: usize) -> Vec<Vec<Site>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(
        items: &[Site],
        k: usize,
        start: usize,
        current: &mut Vec<Site>,
        out: &mut Vec<Vec<Site>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..=items.len().saturating_sub(needed) {
            current.push(items[i]);
            recurse(items, k, i + 1, current, out);
            current.pop();
        }
    }
    recurse(items, k, 0, &mut current, &mut out);
    out
}

fn perfect_matchings(items: &[Site]) -> Vec<Vec<(Site, Site)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let partner = items[i];
        let rest: Vec<Site> = items[1..]
            .iter()
            .copied()
            .filter(|&s| s != partner)
            .collect();
        for mut tail in perfect_matchings(&rest) {
            tail.insert(0, (first, partner));
            out.push(tail);
        }
    }
    out
}

fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = vec![(Vec::new(), 1i8)];
    for item in 0..k {
        let mut next = Vec::new();
        for (perm, sign) in &out {
            for slot in 0..=perm.len() {
                let mut p = perm.clone();
                p.insert(slot, item);
                // Moving the new largest item left from the end flips parity
                // once per displaced position.
                let flips = perm.len() - slot;
                let s = if flips % 2 == 0 { *sign } else { -sign };
                next.push((p, s));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::OperatorPoly;
    use crate::algebra::rewrite::multiply;
    use num_complex::Complex64;

    #[test]
    fn four_sites_have_no_dependencies() {
        let report = check_dependencies(4).unwrap();
        assert_eq!(report.set_size, 14, "ten even plus four odd elements");
        assert_eq!(
            report.gram_rank, report.set_size,
            "no identity fits in four sites, so the set is independent"
        );
        assert_eq!(report.predicted_rank, report.set_size);
        assert!(report.verified);
        assert!(!report.ill_conditioned);
    }

    #[test]
    fn five_site_pivot_identity_sums_to_zero() {
        // Each instance row encodes a combination that must vanish as an
        // operator; rebuild one symbolically and check it reduces to nothing.
        let mut acc = OperatorPoly::new(5);
        let signs = [1.0, -1.0, 1.0, -1.0];
        let partners = [2u8, 3, 4, 5];
        for (t, sign) in partners.iter().zip(signs) {
            let triple: Vec<Site> = partners.iter().copied().filter(|s| s != t).collect();
            let (mono, parity) =
                canonicalize(&[(1, *t)], Some([triple[0], triple[1], triple[2]])).unwrap();
            acc.add_term(mono, Complex64::new(sign * f64::from(parity), 0.0))
                .unwrap();
        }
        // Multiply by itself: a zero operator squares to zero trace.
        let square = multiply(&acc, &acc).unwrap();
        assert!(
            square.terms().all(|(_, c)| c.norm() < 1e-12),
            "pivot combination is a null operator"
        );
    }

    #[test]
    fn five_sites_verify_with_reduced_rank() {
        let report = check_dependencies(5).unwrap();
        assert_eq!(report.set_size, 46, "twenty six even plus twenty odd");
        assert!(
            report.verified,
            "Gram rank {} vs predicted {}",
            report.gram_rank, report.predicted_rank
        );
        assert!(
            report.gram_rank < report.set_size,
            "five sites admit pivot identities, rank must drop"
        );
        assert!(!report.ill_conditioned);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(
            check_dependencies(9).is_err(),
            "default cap stops at eight sites"
        );
        assert!(check_dependencies_capped(5, 5).is_ok());
    }

    #[test]
    fn permutation_signs_match_inversion_parity() {
        for (perm, sign) in permutations_with_sign(4) {
            let mut inversions = 0;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let expected = if inversions % 2 == 0 { 1 } else { -1 };
            assert_eq!(sign, expected, "parity of {perm:?}");
        }
    }

    #[test]
    fn matchings_cover_all_pairings() {
        assert_eq!(perfect_matchings(&[1, 2, 3, 4]).len(), 3);
        assert_eq!(perfect_matchings(&[1, 2, 3, 4, 5, 6]).len(), 15);
        assert_eq!(
            perfect_matchings(&[]).len(),
            1,
            "empty matching is the only one"
        );
    }
}
