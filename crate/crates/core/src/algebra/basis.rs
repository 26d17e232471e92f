use num_bigint::BigUint;

use super::monomial::{canonicalize, AlgebraError, Monomial, Site};

/// Which part of the invariant operator set to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Scalar-product monomials only (the expansion basis for density
    /// matrices), identity included.
    ScalarOnly,
    /// Scalar-product monomials plus the single-mixed-product monomials that
    /// close the algebra.
    Full,
}

/// Default enumeration cap; counts grow factorially with n.
pub const DEFAULT_ENUM_CAP: usize = 12;

/// All canonical monomials of the requested sector on sites `1..=n`, sorted
/// in basis order (identity first, then support size, then lexicographic;
/// mixed-product monomials after all scalar ones).
pub fn enumerate_basis(n: usize, sector: Sector) -> Result<Vec<Monomial>, AlgebraError> {
    enumerate_basis_capped(n, sector, DEFAULT_ENUM_CAP)
}

pub fn enumerate_basis_capped(
    n: usize,
    sector: Sector,
    cap: usize,
) -> Result<Vec<Monomial>, AlgebraError> {
    if n > cap || n > u8::MAX as usize {
        return Err(AlgebraError::EnumerationCap { n, cap });
    }
    let sites: Vec<Site> = (1..=n as Site).collect();
    let mut out = Vec::new();
    for pairs in pair_sets(&sites) {
        let (m, _) = canonicalize(&pairs, None)?;
        out.push(m);
    }
    if sector == Sector::Full {
        for triple in three_subsets(&sites) {
            let rest: Vec<Site> = sites
                .iter()
                .copied()
                .filter(|s| !triple.contains(s))
                .collect();
            for pairs in pair_sets(&rest) {
                let (m, sign) = canonicalize(&pairs, Some(triple))?;
                debug_assert_eq!(sign, 1);
                out.push(m);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every set of pairwise-disjoint pairs drawn from `sites` (including the
/// empty set). Each set appears exactly once: the smallest remaining site is
/// either skipped or paired with a larger one.
fn pair_sets(sites: &[Site]) -> Vec<Vec<(Site, Site)>> {
    fn rec(rest: &[Site], acc: &mut Vec<(Site, Site)>, out: &mut Vec<Vec<(Site, Site)>>) {
        match rest.split_first() {
            None => out.push(acc.clone()),
            Some((&s, tail)) => {
                rec(tail, acc, out);
                for (i, &t) in tail.iter().enumerate() {
                    let mut next: Vec<Site> = tail.to_vec();
                    next.remove(i);
                    acc.push((s, t));
                    rec(&next, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(sites, &mut Vec::new(), &mut out);
    out
}

fn three_subsets(sites: &[Site]) -> Vec<[Site; 3]> {
    let mut out = Vec::new();
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            for k in j + 1..sites.len() {
                out.push([sites[i], sites[j], sites[k]]);
            }
        }
    }
    out
}

/// Closed-form size of the scalar-product sector including the identity:
/// `sum_k C(n, 2k) * (2k-1)!!` over `0 <= 2k <= n`.
pub fn basis_size_formula(n: usize) -> BigUint {
    let mut total = BigUint::from(0u32);
    for k in 0..=(n / 2) {
        total += binomial(n, 2 * k) * double_factorial_odd(k);
    }
    total
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut r = BigUint::from(1u32);
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// (2k-1)!! = 1·3·5···(2k-1), with the empty product equal to 1.
fn double_factorial_odd(k: usize) -> BigUint {
    let mut r = BigUint::from(1u32);
    for m in 1..=k {
        r *= BigUint::from(2 * m - 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_matches_known_counts_without_identity() {
        // Known reference counts exclude the identity; the formula includes it.
        let known = [(2usize, 1u64), (3, 3), (4, 9), (5, 25), (10, 9495)];
        for (n, want) in known {
            let with_id = basis_size_formula(n);
            assert_eq!(with_id, BigUint::from(want + 1), "n={n}");
        }
    }

    #[test]
    fn enumeration_agrees_with_formula() {
        for n in 2..=8 {
            let basis = enumerate_basis(n, Sector::ScalarOnly).unwrap();
            assert_eq!(BigUint::from(basis.len()), basis_size_formula(n), "n={n}");
        }
    }

    #[test]
    fn four_site_scalar_basis_is_the_expected_ten() {
        let basis = enumerate_basis(4, Sector::ScalarOnly).unwrap();
        let shown: Vec<String> = basis.iter().map(|m| m.to_string()).collect();
        assert_eq!(
            shown,
            [
                "1",
                "(1,2)",
                "(1,3)",
                "(1,4)",
                "(2,3)",
                "(2,4)",
                "(3,4)",
                "(1,2)(3,4)",
                "(1,3)(2,4)",
                "(1,4)(2,3)"
            ]
        );
    }

    #[test]
    fn full_sector_counts() {
        // Mixed-product monomials: one triple plus disjoint pairs.
        // n=5: 10 bare triples + 10 triple-with-one-pair on all five sites.
        let full = enumerate_basis(5, Sector::Full).unwrap();
        let scalar = enumerate_basis(5, Sector::ScalarOnly).unwrap();
        assert_eq!(scalar.len(), 26);
        assert_eq!(full.len() - scalar.len(), 20);
        // n=8 closes at 764 scalar + 1456 mixed.
        let full8 = enumerate_basis(8, Sector::Full).unwrap();
        assert_eq!(full8.len(), 764 + 1456);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_basis(13, Sector::ScalarOnly),
            Err(AlgebraError::EnumerationCap { n: 13, cap: 12 })
        ));
        assert!(enumerate_basis_capped(13, Sector::ScalarOnly, 13).is_ok());
    }
}
