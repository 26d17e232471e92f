//! Product structure beyond the frozen tables: associativity, site-map
//! automorphisms, canonicalization invariance, and reality of squares.
//!
//! Beyond four sites the invariant set is overcomplete, so two correct
//! expansions of the same operator may differ by a dependency combination.
//! Coefficient-level comparisons are therefore restricted to n <= 4, where
//! the set is a basis; larger clusters are compared as dense operators.

use num_complex::Complex64;
use proptest::prelude::*;
use spinlb_core::{
    canonicalize, mirror_monomial, multiply, represent, Monomial, OperatorPoly, Site,
};

fn poly(m: &Monomial, n: usize) -> OperatorPoly {
    OperatorPoly::from_monomial(n, m.clone()).expect("monomial fits the cluster")
}

fn mirror_poly(p: &OperatorPoly, n: usize) -> OperatorPoly {
    let mut out = OperatorPoly::new(n);
    for (m, c) in p.terms() {
        let (img, sign) = mirror_monomial(m, n).expect("reflection stays inside");
        out.add_term(img, c * sign as f64).expect("image fits");
    }
    out
}

/// Random canonical monomial over sites 1..=n: up to two disjoint pairs and
/// optionally a triple on the remaining sites.
fn monomial_strategy(n: usize) -> impl Strategy<Value = Monomial> {
    let sites: Vec<Site> = (1..=n as Site).collect();
    (Just(sites).prop_shuffle(), 0usize..=2, any::<bool>()).prop_map(
        move |(perm, want_pairs, want_triple)| {
            let mut idx = 0;
            let mut pairs = Vec::new();
            while pairs.len() < want_pairs && idx + 2 <= perm.len() {
                pairs.push((perm[idx], perm[idx + 1]));
                idx += 2;
            }
            let triple = if want_triple && idx + 3 <= perm.len() {
                Some([perm[idx], perm[idx + 1], perm[idx + 2]])
            } else {
                None
            };
            canonicalize(&pairs, triple).expect("sites are disjoint").0
        },
    )
}

proptest! {
    #[test]
    fn product_is_associative_coefficientwise_on_a_basis(
        x in monomial_strategy(4),
        y in monomial_strategy(4),
        z in monomial_strategy(4),
    ) {
        let n = 4;
        let xy = multiply(&poly(&x, n), &poly(&y, n)).expect("closes");
        let yz = multiply(&poly(&y, n), &poly(&z, n)).expect("closes");
        let left = multiply(&xy, &poly(&z, n)).expect("closes");
        let right = multiply(&poly(&x, n), &yz).expect("closes");
        let diff = left.max_coeff_diff(&right);
        prop_assert!(diff < 1e-9, "associativity violated by {diff:.3e} for {x}, {y}, {z}");
    }

    #[test]
    fn product_is_associative_as_operators(
        x in monomial_strategy(6),
        y in monomial_strategy(6),
        z in monomial_strategy(6),
    ) {
        let n = 6;
        let xy = multiply(&poly(&x, n), &poly(&y, n)).expect("closes");
        let yz = multiply(&poly(&y, n), &poly(&z, n)).expect("closes");
        let left = multiply(&xy, &poly(&z, n)).expect("closes");
        let right = multiply(&poly(&x, n), &yz).expect("closes");
        let dl = represent(&left).expect("within cap");
        let dr = represent(&right).expect("within cap");
        let diff = dl.max_abs_diff(&dr);
        prop_assert!(diff < 1e-10, "associativity violated by {diff:.3e} for {x}, {y}, {z}");
    }

    #[test]
    fn reflection_is_an_automorphism_coefficientwise_on_a_basis(
        x in monomial_strategy(4),
        y in monomial_strategy(4),
    ) {
        let n = 4;
        let product_then_mirror = mirror_poly(
            &multiply(&poly(&x, n), &poly(&y, n)).expect("closes"),
            n,
        );
        let (mx, sx) = mirror_monomial(&x, n).expect("stays inside");
        let (my, sy) = mirror_monomial(&y, n).expect("stays inside");
        let mut mirror_then_product = multiply(&poly(&mx, n), &poly(&my, n)).expect("closes");
        mirror_then_product.scale(Complex64::new((sx * sy) as f64, 0.0));
        let diff = product_then_mirror.max_coeff_diff(&mirror_then_product);
        prop_assert!(diff < 1e-9, "automorphism violated by {diff:.3e} for {x}, {y}");
    }

    #[test]
    fn reflection_is_an_automorphism_as_operators(
        x in monomial_strategy(5),
        y in monomial_strategy(5),
    ) {
        let n = 5;
        let product_then_mirror = mirror_poly(
            &multiply(&poly(&x, n), &poly(&y, n)).expect("closes"),
            n,
        );
        let (mx, sx) = mirror_monomial(&x, n).expect("stays inside");
        let (my, sy) = mirror_monomial(&y, n).expect("stays inside");
        let mut mirror_then_product = multiply(&poly(&mx, n), &poly(&my, n)).expect("closes");
        mirror_then_product.scale(Complex64::new((sx * sy) as f64, 0.0));
        let dl = represent(&product_then_mirror).expect("within cap");
        let dr = represent(&mirror_then_product).expect("within cap");
        let diff = dl.max_abs_diff(&dr);
        prop_assert!(diff < 1e-10, "automorphism violated by {diff:.3e} for {x}, {y}");
    }

    #[test]
    fn squares_expand_with_real_coefficients(x in monomial_strategy(6)) {
        let square = multiply(&poly(&x, 6), &poly(&x, 6)).expect("closes");
        for (m, c) in square.terms() {
            prop_assert!(
                c.im.abs() < 1e-12,
                "square of {x} carries imaginary weight {} on {m}",
                c.im
            );
        }
    }

    #[test]
    fn identity_is_neutral(x in monomial_strategy(6)) {
        let one = OperatorPoly::identity(6);
        let left = multiply(&one, &poly(&x, 6)).expect("closes");
        let right = multiply(&poly(&x, 6), &one).expect("closes");
        prop_assert!(left.max_coeff_diff(&poly(&x, 6)) == 0.0);
        prop_assert!(right.max_coeff_diff(&poly(&x, 6)) == 0.0);
    }
}

#[test]
fn pair_order_does_not_change_the_canonical_form() {
    let (base, base_sign) = canonicalize(&[(1, 2), (3, 4)], Some([5, 6, 7])).expect("disjoint");
    assert_eq!(base_sign, 1, "ascending input is already canonical");
    let (swapped_pairs, s1) = canonicalize(&[(3, 4), (1, 2)], Some([5, 6, 7])).expect("disjoint");
    assert_eq!(swapped_pairs, base, "pair list order is immaterial");
    assert_eq!(s1, 1, "pair reordering carries no sign");
    let (swapped_sites, s2) = canonicalize(&[(2, 1), (4, 3)], Some([5, 6, 7])).expect("disjoint");
    assert_eq!(swapped_sites, base, "within-pair order is immaterial");
    assert_eq!(s2, 1, "scalar products are symmetric");
}

#[test]
fn triple_transpositions_flip_the_sign() {
    let (base, _) = canonicalize(&[], Some([1, 2, 3])).expect("disjoint");
    for (perm, parity) in [
        ([1, 2, 3], 1),
        ([2, 1, 3], -1),
        ([1, 3, 2], -1),
        ([3, 2, 1], -1),
        ([2, 3, 1], 1),
        ([3, 1, 2], 1),
    ] {
        let (m, sign) = canonicalize(&[], Some(perm)).expect("disjoint");
        assert_eq!(
            m, base,
            "permuted triple canonicalizes to the same monomial"
        );
        assert_eq!(
            sign as i32, parity,
            "sign of {perm:?} must track the permutation parity"
        );
    }
}
