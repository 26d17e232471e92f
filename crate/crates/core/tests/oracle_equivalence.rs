//! Dense-matrix cross-checks of the symbolic algebra on small clusters.

use num_complex::Complex64;
use spinlb_core::{
    enumerate_basis, multiply, represent, represent_monomial, trace_inner, Monomial, OperatorPoly,
    Sector,
};

fn poly_of(s: &str, n: usize) -> OperatorPoly {
    let m: Monomial = s.parse().expect("canonical string");
    OperatorPoly::from_monomial(n, m).expect("fits")
}

#[test]
fn products_and_traces_match_dense_matrices_up_to_five_sites() {
    for n in 2..=5 {
        let basis = enumerate_basis(n, Sector::Full).expect("within cap");
        let dense: Vec<_> = basis
            .iter()
            .map(|m| represent_monomial(m, n).expect("within cap"))
            .collect();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let px = OperatorPoly::from_monomial(n, x.clone()).expect("fits");
                let py = OperatorPoly::from_monomial(n, y.clone()).expect("fits");
                let product = multiply(&px, &py).expect("algebra closes");
                let product_dense = represent(&product).expect("within cap");
                let direct = dense[i].matmul(&dense[j]);
                let diff = product_dense.max_abs_diff(&direct);
                assert!(
                    diff < 1e-10,
                    "n={n}: {x} * {y} deviates from the dense product by {diff:.3e}"
                );

                let symbolic = trace_inner(x, y, n);
                let direct_trace = dense[i].inner(&dense[j]);
                assert!(
                    (symbolic - direct_trace.re).abs() < 1e-9 && direct_trace.im.abs() < 1e-9,
                    "n={n}: trace of {x}, {y} is {symbolic} symbolically but {direct_trace} densely"
                );
                assert!(
                    (symbolic - symbolic.round()).abs() < 1e-9,
                    "n={n}: trace of {x}, {y} must be an integer, got {symbolic}"
                );
            }
        }
    }
}

#[test]
fn five_factor_bond_pattern_traces_to_six_times_the_space_dimension() {
    // Product of two triples sharing an edge and a path of three bonds closing
    // the loop; its normalized trace counts 6 closed configurations.
    let n = 6;
    let factors = ["[1,2,3]", "[1,2,6]", "(3,4)", "(4,5)", "(5,6)"];
    let mut product = OperatorPoly::identity(n);
    for f in factors {
        product = multiply(&product, &poly_of(f, n)).expect("algebra closes");
    }
    let symbolic = product.coeff(&Monomial::identity()).re * (1u64 << n) as f64;
    assert!(
        (symbolic - 384.0).abs() < 1e-9,
        "symbolic trace should be 6 * 2^6 = 384, got {symbolic}"
    );

    let mut dense = represent(&OperatorPoly::identity(n)).expect("within cap");
    for f in factors {
        dense = dense.matmul(&represent(&poly_of(f, n)).expect("within cap"));
    }
    let direct = dense.trace();
    assert!(
        (direct.re - 384.0).abs() < 1e-9 && direct.im.abs() < 1e-9,
        "dense trace should be 384, got {direct}"
    );
}

#[test]
fn mixed_sector_overlap_reproduces_the_frozen_value() {
    let x: Monomial = "[1,2,3](4,5)".parse().expect("canonical");
    let y: Monomial = "[1,2,4](3,5)".parse().expect("canonical");
    assert_eq!(trace_inner(&x, &y, 5), 192.0, "frozen mixed-sector overlap");

    let dx = represent_monomial(&x, 5).expect("within cap");
    let dy = represent_monomial(&y, 5).expect("within cap");
    let dense = dx.inner(&dy);
    assert!(
        (dense.re - 192.0).abs() < 1e-9 && dense.im.abs() < 1e-9,
        "dense overlap should be 192, got {dense}"
    );
}

#[test]
fn monomials_with_different_supports_are_orthogonal() {
    let cases = [
        ("(1,2)", "(1,3)"),
        ("(1,2)", "1"),
        ("[1,2,3]", "(1,2)"),
        ("[1,2,3](4,5)", "[1,2,3]"),
        ("(1,2)(3,4)", "(1,2)"),
    ];
    for (a, b) in cases {
        let x: Monomial = a.parse().expect("canonical");
        let y: Monomial = b.parse().expect("canonical");
        assert_eq!(
            trace_inner(&x, &y, 5),
            0.0,
            "{a} and {b} have different supports, so their overlap vanishes"
        );
    }
}

#[test]
fn identity_normalization_is_the_space_dimension() {
    for n in 1..=6 {
        let one = Monomial::identity();
        assert_eq!(
            trace_inner(&one, &one, n),
            (1u64 << n) as f64,
            "identity overlap at n={n} is 2^n"
        );
    }
}

#[test]
fn scalar_square_norm_counts_three_per_bond_cycle() {
    // A pair overlapping itself closes one two-site cycle: tr (σ1σ2)^2 = 3·2^n.
    let m: Monomial = "(1,2)".parse().expect("canonical");
    assert_eq!(trace_inner(&m, &m, 2), 12.0);
    // Two disjoint pairs close two cycles: 9·2^n.
    let mm: Monomial = "(1,2)(3,4)".parse().expect("canonical");
    assert_eq!(trace_inner(&mm, &mm, 4), 144.0);
    // Matchings whose union is one four-site loop close a single cycle: 3·2^n.
    let other: Monomial = "(1,3)(2,4)".parse().expect("canonical");
    assert_eq!(trace_inner(&mm, &other, 4), 48.0);
}

#[test]
fn represent_rejects_oversized_clusters() {
    let m: Monomial = "(1,2)".parse().expect("canonical");
    let err = represent_monomial(&m, 11).expect_err("dense cap is ten sites");
    let text = err.to_string();
    assert!(
        text.contains("11"),
        "error should name the offending size, got: {text}"
    );
}

#[test]
fn dense_operators_are_hermitian_with_real_traces() {
    let basis = enumerate_basis(5, Sector::Full).expect("within cap");
    for m in &basis {
        let d = represent_monomial(m, 5).expect("within cap");
        let t = d.trace();
        assert!(t.im.abs() < 1e-12, "trace of {m} should be real, got {t}");
        let sq = d.matmul(&d);
        let frob = sq.trace();
        assert!(
            frob.re > 0.0,
            "squared norm of {m} must be positive, got {frob}"
        );
    }
}

#[test]
fn pauli_identity_on_two_sites() {
    // (σ1·σ2)^2 + 2(σ1·σ2) - 3 = 0 as a dense matrix.
    let p = poly_of("(1,2)", 2);
    let d = represent(&p).expect("within cap");
    let mut combo = d.matmul(&d);
    combo.add_scaled(&d, Complex64::new(2.0, 0.0));
    let one = represent(&OperatorPoly::identity(2)).expect("within cap");
    combo.add_scaled(&one, Complex64::new(-3.0, 0.0));
    let zero = represent(&OperatorPoly::new(2)).expect("within cap");
    assert!(
        combo.max_abs_diff(&zero) < 1e-12,
        "minimal polynomial of a scalar product must vanish"
    );
}
