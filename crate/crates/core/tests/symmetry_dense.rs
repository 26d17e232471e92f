//! Site maps checked against explicit permutation conjugation on the dense
//! oracle, and structural guarantees of the constraint sets.

use spinlb_core::{
    constraint_set, enumerate_basis, mirror_monomial, represent_monomial, shift_monomial,
    DenseOperator, Monomial, Sector, Site,
};

/// Permutation operator on computational basis states: bit i-1 of the input
/// index moves to bit perm(i)-1 of the output index.
fn permutation_operator(n: usize, perm: impl Fn(Site) -> Site) -> DenseOperator {
    let mut op = DenseOperator::zeros(n);
    for state in 0..(1usize << n) {
        let mut image = 0usize;
        for site in 1..=n as Site {
            if state & (1 << (site - 1)) != 0 {
                image |= 1 << (perm(site) - 1);
            }
        }
        op.set_add(image, state, num_complex::Complex64::new(1.0, 0.0));
    }
    op
}

fn conjugate(p: &DenseOperator, x: &DenseOperator, p_inv: &DenseOperator) -> DenseOperator {
    p.matmul(&x.matmul(p_inv))
}

#[test]
fn reflection_matches_permutation_conjugation() {
    for n in [4usize, 5] {
        let reflect = permutation_operator(n, |s| (n as Site) + 1 - s);
        let reflect_inv = permutation_operator(n, |s| (n as Site) + 1 - s);
        for m in enumerate_basis(n, Sector::Full).expect("within cap") {
            let (image, sign) = mirror_monomial(&m, n).expect("stays inside");
            let direct = represent_monomial(&m, n).expect("within cap");
            let conjugated = conjugate(&reflect, &direct, &reflect_inv);
            let mut expected = DenseOperator::zeros(n);
            expected.add_scaled(
                &represent_monomial(&image, n).expect("within cap"),
                num_complex::Complex64::new(sign as f64, 0.0),
            );
            let diff = conjugated.max_abs_diff(&expected);
            assert!(
                diff < 1e-10,
                "n={n}: reflection of {m} disagrees with conjugation by {diff:.3e}"
            );
        }
    }
}

#[test]
fn translation_matches_cyclic_permutation_for_interior_patterns() {
    let n = 5;
    let cycle = permutation_operator(n, |s| (s % n as Site) + 1);
    let cycle_inv = permutation_operator(n, |s| if s == 1 { n as Site } else { s - 1 });
    for m in enumerate_basis(n, Sector::Full).expect("within cap") {
        if m.is_identity() || m.max_site() as usize == n {
            continue;
        }
        let (image, sign) = shift_monomial(&m, n)
            .expect("valid sites")
            .expect("interior patterns shift within the cluster");
        assert_eq!(sign, 1, "an order-preserving shift carries no sign");
        let direct = represent_monomial(&m, n).expect("within cap");
        let conjugated = conjugate(&cycle, &direct, &cycle_inv);
        let expected = represent_monomial(&image, n).expect("within cap");
        let diff = conjugated.max_abs_diff(&expected);
        assert!(
            diff < 1e-10,
            "shift of {m} disagrees with cyclic conjugation by {diff:.3e}"
        );
    }
}

#[test]
fn boundary_patterns_do_not_shift() {
    let n = 4;
    let m: Monomial = "(1,4)".parse().expect("canonical");
    assert!(
        shift_monomial(&m, n).expect("valid sites").is_none(),
        "a pattern touching the last site has no in-range translate"
    );
}

#[test]
fn orbits_partition_the_basis_exactly_once() {
    for n in 2..=6 {
        let basis = enumerate_basis(n, Sector::ScalarOnly).expect("within cap");
        let cs = constraint_set(n, &basis).expect("closed basis");
        let mut seen = vec![0usize; basis.len()];
        for orbit in &cs.b_orbits {
            assert!(!orbit.is_empty(), "n={n}: orbits are nonempty");
            let mut sorted = orbit.clone();
            sorted.sort_unstable();
            assert_eq!(&sorted, orbit, "n={n}: orbit members are ascending");
            for &k in orbit {
                seen[k] += 1;
            }
        }
        assert!(
            seen.iter().all(|&c| c == 1),
            "n={n}: every basis element belongs to exactly one orbit"
        );
        let identity_orbit = &cs.b_orbits[cs.normalization];
        assert_eq!(
            identity_orbit,
            &vec![0usize],
            "n={n}: the identity sits alone in the normalization orbit"
        );
    }
}

#[test]
fn orbit_members_are_mirror_images_with_equal_norms() {
    use spinlb_core::trace_inner;
    let n = 5;
    let basis = enumerate_basis(n, Sector::ScalarOnly).expect("within cap");
    let cs = constraint_set(n, &basis).expect("closed basis");
    for orbit in &cs.b_orbits {
        assert!(orbit.len() <= 2, "reflection is an involution");
        if orbit.len() == 2 {
            let (a, b) = (&basis[orbit[0]], &basis[orbit[1]]);
            let (image, _) = mirror_monomial(a, n).expect("stays inside");
            assert_eq!(&image, b, "paired members map onto each other");
            assert_eq!(
                trace_inner(a, a, n),
                trace_inner(b, b, n),
                "reflection preserves norms"
            );
        }
    }
}
