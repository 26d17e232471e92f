//! Linear constraints carving out the lattice-invariant state set.
//!
//! For an open chain embedded in an infinite translation-invariant system,
//! the expansion coefficients of a physical reduced state must agree on
//! translated copies of the same bond pattern. Mirror reflection about the
//! chain center is imposed directly on the square-root coefficients b; that
//! hard identification makes the squared state mirror-symmetric on its own,
//! so only translation equalities connecting different mirror orbits remain
//! as nonlinear constraints for the optimizer.

use serde::{Deserialize, Serialize};

use crate::algebra::monomial::{canonicalize, AlgebraError, Monomial, Site};

/// Index-level constraint data over one scalar-sector basis ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub n: usize,
    /// Raw translation equalities a_k = a_k' as basis index pairs.
    pub a_equalities: Vec<(usize, usize)>,
    /// Mirror orbits partitioning every basis index; b is constant per orbit.
    pub b_orbits: Vec<Vec<usize>>,
    /// Basis index of the identity, whose coefficient is pinned to one.
    pub normalization: usize,
}

/// Applies a site map to every index, then re-canonicalizes.
///
/// Returns None when the map sends any site out of the cluster. The sign is
/// the permutation parity picked up by re-sorting a mixed-product triple;
/// scalar pairs reorder without sign.
fn apply_site_map(
    m: &Monomial,
    f: impl Fn(Site) -> Option<Site>,
) -> Result<Option<(Monomial, i8)>, AlgebraError> {
    let mut pairs = Vec::with_capacity(m.pairs().len());
    for &(a, b) in m.pairs() {
        match (f(a), f(b)) {
            (Some(a2), Some(b2)) => pairs.push((a2, b2)),
            _ => return Ok(None),
        }
    }
    let triple = match m.triple() {
        None => None,
        Some([a, b, c]) => match (f(a), f(b), f(c)) {
            (Some(a2), Some(b2), Some(c2)) => Some([a2, b2, c2]),
            _ => return Ok(None),
        },
    };
    canonicalize(&pairs, triple).map(Some)
}

/// Shifts every site by one step along the chain; None when the pattern
/// leaves the cluster.
pub fn shift_monomial(m: &Monomial, n: usize) -> Result<Option<(Monomial, i8)>, AlgebraError> {
    apply_site_map(m, |s| {
        let shifted = s as usize + 1;
        (shifted <= n).then_some(shifted as Site)
    })
}

/// Reflects every site through the chain center, i to n+1-i.
pub fn mirror_monomial(m: &Monomial, n: usize) -> Result<(Monomial, i8), AlgebraError> {
    let mapped = apply_site_map(m, |s| Some((n + 1 - s as usize) as Site))?;
    Ok(mapped.expect("reflection keeps sites inside the cluster"))
}

/// Equalities between each basis element and its one-step translate.
///
/// Emitted only when the shifted pattern stays inside the cluster; the
/// identity shifts to itself and produces no constraint.
pub fn translation_constraints(
    n: usize,
    basis: &[Monomial],
) -> Result<Vec<(usize, usize)>, AlgebraError> {
    let index: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = Vec::new();
    for (k, m) in basis.iter().enumerate() {
        if let Some((shifted, _)) = shift_monomial(m, n)? {
            if shifted == *m {
                continue;
            }
            let k2 = *index.get(&shifted).ok_or_else(|| {
                AlgebraError::Inconsistency(format!("translate {shifted} missing from the basis"))
            })?;
            out.push((k, k2));
        }
    }
    Ok(out)
}

/// Orbit partition of the basis under center reflection.
///
/// Reflection is an involution, so orbits are singletons or pairs; they are
/// listed by ascending smallest member with members ascending.
pub fn mirror_identification(
    n: usize,
    basis: &[Monomial],
) -> Result<Vec<Vec<usize>>, AlgebraError> {
    let index: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut seen = vec![false; basis.len()];
    let mut orbits = Vec::new();
    for (k, m) in basis.iter().enumerate() {
        if seen[k] {
            continue;
        }
        let (mirrored, _) = mirror_monomial(m, n)?;
        let k2 = *index.get(&mirrored).ok_or_else(|| {
            AlgebraError::Inconsistency(format!("mirror image {mirrored} missing from the basis"))
        })?;
        seen[k] = true;
        let mut orbit = vec![k];
        if k2 != k {
            seen[k2] = true;
            orbit.push(k2);
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Translation equalities that mirror identification does not already force.
///
/// Equalities inside one mirror orbit hold automatically once b is constant
/// on orbits. Of the equalities connecting two distinct orbits, one per
/// unordered orbit pair suffices, since orbit-mates share their coefficient;
/// the first occurrence in basis order is kept.
pub fn residual_constraints(
    translation: &[(usize, usize)],
    mirror: &[Vec<usize>],
) -> Vec<(usize, usize)> {
    let size = mirror.iter().map(|o| o.len()).sum();
    let mut orbit_of = vec![usize::MAX; size];
    for (oi, orbit) in mirror.iter().enumerate() {
        for &k in orbit {
            orbit_of[k] = oi;
        }
    }
    let mut kept_orbit_pairs = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &(k, k2) in translation {
        let (a, b) = (orbit_of[k], orbit_of[k2]);
        if a == b {
            continue;
        }
        if kept_orbit_pairs.insert((a.min(b), a.max(b))) {
            out.push((k, k2));
        }
    }
    out
}

/// Builds the full constraint data for a scalar-sector basis on a chain.
pub fn constraint_set(n: usize, basis: &[Monomial]) -> Result<ConstraintSet, AlgebraError> {
    let normalization = basis
        .iter()
        .position(|m| m.is_identity())
        .ok_or_else(|| AlgebraError::Inconsistency("basis lacks the identity".into()))?;
    Ok(ConstraintSet {
        n,
        a_equalities: translation_constraints(n, basis)?,
        b_orbits: mirror_identification(n, basis)?,
        normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::basis::{enumerate_basis, Sector};

    fn scalar_basis(n: usize) -> Vec<Monomial> {
        enumerate_basis(n, Sector::ScalarOnly).unwrap()
    }

    fn pair_of(basis: &[Monomial], a: &str, b: &str) -> (usize, usize) {
        let find = |s: &str| {
            let m: Monomial = s.parse().unwrap();
            basis.iter().position(|x| *x == m).unwrap()
        };
        (find(a), find(b))
    }

    #[test]
    fn four_site_translations_match_known_chains() {
        let basis = scalar_basis(4);
        let got = translation_constraints(4, &basis).unwrap();
        let expected = vec![
            pair_of(&basis, "(1,2)", "(2,3)"),
            pair_of(&basis, "(1,3)", "(2,4)"),
            pair_of(&basis, "(2,3)", "(3,4)"),
        ];
        assert_eq!(got, expected, "nearest and next-nearest chains only");
    }

    #[test]
    fn four_site_mirror_orbits_match_known_partition() {
        let basis = scalar_basis(4);
        let orbits = mirror_identification(4, &basis).unwrap();
        let as_strings: Vec<Vec<String>> = orbits
            .iter()
            .map(|o| o.iter().map(|&k| basis[k].to_string()).collect())
            .collect();
        let expected: Vec<Vec<String>> = vec![
            vec!["1".into()],
            vec!["(1,2)".into(), "(3,4)".into()],
            vec!["(1,3)".into(), "(2,4)".into()],
            vec!["(1,4)".into()],
            vec!["(2,3)".into()],
            vec!["(1,2)(3,4)".into()],
            vec!["(1,3)(2,4)".into()],
            vec!["(1,4)(2,3)".into()],
        ];
        assert_eq!(as_strings, expected);
    }

    #[test]
    fn four_site_residual_is_single_bond_equality() {
        let basis = scalar_basis(4);
        let cs = constraint_set(4, &basis).unwrap();
        let residual = residual_constraints(&cs.a_equalities, &cs.b_orbits);
        assert_eq!(
            residual,
            vec![pair_of(&basis, "(1,2)", "(2,3)")],
            "mirror absorbs every other translation equality"
        );
        assert_eq!(cs.normalization, 0, "identity leads the basis ordering");
    }

    #[test]
    fn three_site_residual_is_empty() {
        // The only in-cluster translate, (1,2) to (2,3), lands in the same
        // mirror orbit, so nothing survives.
        let basis = scalar_basis(3);
        let cs = constraint_set(3, &basis).unwrap();
        assert_eq!(cs.a_equalities, vec![pair_of(&basis, "(1,2)", "(2,3)")]);
        let residual = residual_constraints(&cs.a_equalities, &cs.b_orbits);
        assert!(
            residual.is_empty(),
            "mirror implies the lone translation equality"
        );
    }

    #[test]
    fn two_site_residual_is_empty() {
        let basis = scalar_basis(2);
        let cs = constraint_set(2, &basis).unwrap();
        assert!(
            cs.a_equalities.is_empty(),
            "the single bond has no translate"
        );
        assert!(residual_constraints(&cs.a_equalities, &cs.b_orbits).is_empty());
    }

    #[test]
    fn five_site_orbits_and_residuals() {
        let basis = scalar_basis(5);
        let cs = constraint_set(5, &basis).unwrap();
        let orbit_strings: Vec<Vec<String>> = cs
            .b_orbits
            .iter()
            .map(|o| o.iter().map(|&k| basis[k].to_string()).collect())
            .collect();
        assert!(orbit_strings.contains(&vec!["(1,2)".to_string(), "(4,5)".to_string()]));
        assert!(orbit_strings.contains(&vec!["(2,3)".to_string(), "(3,4)".to_string()]));
        assert!(orbit_strings.contains(&vec!["(1,5)".to_string()]));
        let residual = residual_constraints(&cs.a_equalities, &cs.b_orbits);
        let expected = vec![
            pair_of(&basis, "(1,2)", "(2,3)"),
            pair_of(&basis, "(1,3)", "(2,4)"),
        ];
        assert_eq!(residual, expected, "one equality per distinct orbit pair");
    }

    #[test]
    fn maps_commute_with_canonical_form() {
        let cases = ["(1,3)(2,5)", "[2,4,5](1,3)", "[1,2,3]", "(2,4)"];
        for s in cases {
            let m: Monomial = s.parse().unwrap();
            if let Some((shifted, sign)) = shift_monomial(&m, 6).unwrap() {
                let roundtrip = canonicalize(shifted.pairs(), shifted.triple()).unwrap();
                assert_eq!(roundtrip.0, shifted, "shift output stays canonical for {s}");
                assert_eq!(roundtrip.1, 1, "canonical form carries no pending sign");
                assert_eq!(sign, 1, "ascending patterns shift without reordering");
            }
            let (mirrored, _) = mirror_monomial(&m, 6).unwrap();
            let roundtrip = canonicalize(mirrored.pairs(), mirrored.triple()).unwrap();
            assert_eq!(
                roundtrip.0, mirrored,
                "mirror output stays canonical for {s}"
            );
        }
    }

    #[test]
    fn mirror_parity_tracks_triple_reordering() {
        // Reflecting [1,2,3] on five sites gives sites 5,4,3, an odd
        // rearrangement into ascending order.
        let m: Monomial = "[1,2,3]".parse().unwrap();
        let (mirrored, sign) = mirror_monomial(&m, 5).unwrap();
        assert_eq!(mirrored.to_string(), "[3,4,5]");
        assert_eq!(sign, -1, "descending triple needs one transposition");
    }
}
