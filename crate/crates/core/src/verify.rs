//! Self-check suites covering the algebra, oracle, symmetry, and bounds.
//!
//! Every check is pure and deterministic: random draws come from a fixed
//! counter-mode stream. The quick level finishes in seconds and guards the
//! rewrite rules, the Gram example, counting, small-size oracle equivalence,
//! and the constraint goldens; the full level widens the sweeps and adds the
//! dependency-rank and gradient checks.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::basis::{basis_size_formula, enumerate_basis, Sector};
use crate::algebra::deps::check_dependencies;
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::OperatorPoly;
use crate::algebra::rewrite::multiply;
use crate::algebra::tensor::build_structure_tensor;
use crate::algebra::trace::trace_inner;
use crate::bounds::model::ClusterModel;
use crate::bounds::objective::objective;
use crate::oracle::{represent, represent_monomial, spectrum_positivity, DenseOperator};
use crate::symmetry::{constraint_set, mirror_monomial, residual_constraints};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: false,
            detail,
        }
    }
}

/// One frozen product identity: left factors and fully reduced expansion.
pub struct RelationCase {
    pub name: &'static str,
    pub lhs: (&'static str, &'static str),
    pub rhs: &'static [(f64, f64, &'static str)],
}

/// Deliberate corruption of one expected coefficient, used by fault-injection
/// tests to prove the relation check actually bites.
#[derive(Debug, Clone, Copy)]
pub struct RelationFault {
    pub case: usize,
    pub scale: f64,
}

/// The frozen product table: every generator product that does not simply
/// concatenate, plus the disjoint-triple determinant expansion.
pub fn relation_table() -> &'static [RelationCase] {
    const TABLE: &[RelationCase] = &[
        RelationCase {
            name: "pair_square",
            lhs: ("(1,2)", "(1,2)"),
            rhs: &[(3.0, 0.0, "1"), (-2.0, 0.0, "(1,2)")],
        },
        RelationCase {
            name: "pair_chain",
            lhs: ("(1,2)", "(2,3)"),
            rhs: &[(1.0, 0.0, "(1,3)"), (0.0, -1.0, "[1,2,3]")],
        },
        RelationCase {
            name: "pair_times_own_triple",
            lhs: ("(1,2)", "[1,2,3]"),
            rhs: &[
                (-1.0, 0.0, "[1,2,3]"),
                (0.0, -2.0, "(1,3)"),
                (0.0, 2.0, "(2,3)"),
            ],
        },
        RelationCase {
            name: "own_triple_times_pair",
            lhs: ("[1,2,3]", "(1,2)"),
            rhs: &[
                (-1.0, 0.0, "[1,2,3]"),
                (0.0, 2.0, "(1,3)"),
                (0.0, -2.0, "(2,3)"),
            ],
        },
        RelationCase {
            name: "pair_times_adjacent_triple",
            lhs: ("(1,2)", "[2,3,4]"),
            rhs: &[
                (1.0, 0.0, "[1,3,4]"),
                (0.0, -1.0, "(1,3)(2,4)"),
                (0.0, 1.0, "(1,4)(2,3)"),
            ],
        },
        RelationCase {
            name: "adjacent_triple_times_pair",
            lhs: ("[2,3,4]", "(1,2)"),
            rhs: &[
                (1.0, 0.0, "[1,3,4]"),
                (0.0, 1.0, "(1,3)(2,4)"),
                (0.0, -1.0, "(1,4)(2,3)"),
            ],
        },
        RelationCase {
            name: "triple_square",
            lhs: ("[1,2,3]", "[1,2,3]"),
            rhs: &[
                (6.0, 0.0, "1"),
                (-2.0, 0.0, "(1,2)"),
                (-2.0, 0.0, "(1,3)"),
                (-2.0, 0.0, "(2,3)"),
            ],
        },
        RelationCase {
            name: "edge_sharing_triples",
            lhs: ("[1,2,3]", "[1,2,4]"),
            rhs: &[
                (-1.0, 0.0, "(1,3)(2,4)"),
                (-1.0, 0.0, "(1,4)(2,3)"),
                (2.0, 0.0, "(3,4)"),
                (0.0, 1.0, "[1,3,4]"),
                (0.0, 1.0, "[2,3,4]"),
            ],
        },
        RelationCase {
            name: "site_sharing_triples",
            lhs: ("[1,2,3]", "[1,4,5]"),
            rhs: &[
                (1.0, 0.0, "(2,4)(3,5)"),
                (-1.0, 0.0, "(2,5)(3,4)"),
                (0.0, -1.0, "[3,4,5](1,2)"),
                (0.0, 1.0, "[2,4,5](1,3)"),
            ],
        },
        RelationCase {
            name: "disjoint_triples_determinant",
            lhs: ("[1,2,3]", "[4,5,6]"),
            rhs: &[
                (1.0, 0.0, "(1,4)(2,5)(3,6)"),
                (-1.0, 0.0, "(1,5)(2,4)(3,6)"),
                (-1.0, 0.0, "(1,6)(2,5)(3,4)"),
                (-1.0, 0.0, "(1,4)(2,6)(3,5)"),
                (1.0, 0.0, "(1,6)(2,4)(3,5)"),
                (1.0, 0.0, "(1,5)(2,6)(3,4)"),
            ],
        },
    ];
    TABLE
}

/// Runs the selected suite and reports one result per check.
pub fn run_verify(level: VerifyLevel) -> Vec<CheckResult> {
    run_verify_with_fault(level, None)
}

/// Same as run_verify, with an optional injected corruption of the expected
/// relation table so tests can prove a broken coefficient is caught.
pub fn run_verify_with_fault(level: VerifyLevel, fault: Option<RelationFault>) -> Vec<CheckResult> {
    let full = level == VerifyLevel::Full;
    let mut results = vec![
        check_relations(fault),
        check_gram_example(),
        check_counting(if full { 12 } else { 8 }),
        check_oracle_equivalence(if full { 6 } else { 4 }),
        check_structure_tensor(if full { 5 } else { 4 }),
        check_symmetry_goldens(),
        check_mirror_forces_equalities(if full { 6 } else { 4 }, if full { 100 } else { 10 }),
        check_positivity_and_scale(if full { 6 } else { 4 }, if full { 100 } else { 20 }),
        check_objective_against_dense(if full { 6 } else { 4 }, if full { 100 } else { 20 }),
    ];
    if full {
        results.push(check_dependency_ranks());
        results.push(check_gradients());
    }
    results
}

fn parse(s: &str) -> Monomial {
    s.parse().expect("frozen table strings are canonical")
}

fn poly_from(
    n: usize,
    terms: &[(f64, f64, &str)],
    fault_scale: Option<(usize, f64)>,
) -> OperatorPoly {
    let mut p = OperatorPoly::new(n);
    for (idx, &(re, im, s)) in terms.iter().enumerate() {
        let mut c = Complex64::new(re, im);
        if let Some((fi, scale)) = fault_scale {
            if fi == idx {
                c *= scale;
            }
        }
        p.add_term(parse(s), c)
            .expect("table terms fit the site count");
    }
    p
}

fn case_site_count(case: &RelationCase) -> usize {
    let mut n = 0;
    let mut visit = |m: &Monomial| {
        n = n.max(m.max_site() as usize);
    };
    visit(&parse(case.lhs.0));
    visit(&parse(case.lhs.1));
    for &(_, _, s) in case.rhs {
        visit(&parse(s));
    }
    n
}

fn check_relations(fault: Option<RelationFault>) -> CheckResult {
    let name = "product_relations";
    for (ci, case) in relation_table().iter().enumerate() {
        let n = case_site_count(case);
        let mut lhs = OperatorPoly::new(n);
        lhs.add_term(parse(case.lhs.0), Complex64::new(1.0, 0.0))
            .expect("lhs fits");
        let mut rhs_factor = OperatorPoly::new(n);
        rhs_factor
            .add_term(parse(case.lhs.1), Complex64::new(1.0, 0.0))
            .expect("lhs fits");
        let product = match multiply(&lhs, &rhs_factor) {
            Ok(p) => p,
            Err(e) => {
                return CheckResult::fail(name, format!("{}: multiply failed: {e}", case.name))
            }
        };
        let fault_scale = fault.filter(|f| f.case == ci).map(|f| (0usize, f.scale));
        let expected = poly_from(n, case.rhs, fault_scale);
        let diff = product.max_coeff_diff(&expected);
        if diff > 1e-12 {
            return CheckResult::fail(
                name,
                format!("{}: reduced product deviates by {diff:.3e}", case.name),
            );
        }
        let dense_lhs = represent_monomial(&parse(case.lhs.0), n)
            .and_then(|x| Ok(x.matmul(&represent_monomial(&parse(case.lhs.1), n)?)));
        let dense_rhs = represent(&expected);
        match (dense_lhs, dense_rhs) {
            (Ok(a), Ok(b)) => {
                let d = a.max_abs_diff(&b);
                if d > 1e-10 {
                    return CheckResult::fail(
                        name,
                        format!("{}: dense product deviates by {d:.3e}", case.name),
                    );
                }
            }
            _ => return CheckResult::fail(name, format!("{}: dense build failed", case.name)),
        }
    }
    CheckResult::pass(
        name,
        format!(
            "{} product identities, symbolic and dense",
            relation_table().len()
        ),
    )
}

fn check_gram_example() -> CheckResult {
    let name = "gram_example";
    let members = ["(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"];
    let expected = [[9.0, 3.0, 3.0], [3.0, 9.0, 3.0], [3.0, 3.0, 9.0]];
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            let got = trace_inner(&parse(a), &parse(b), 4) / 16.0;
            if (got - expected[i][j]).abs() > 1e-12 {
                return CheckResult::fail(
                    name,
                    format!("entry ({i},{j}): got {got}, want {}", expected[i][j]),
                );
            }
        }
    }
    CheckResult::pass(name, "four-site pair-product Gram matrix".into())
}

fn check_counting(n_max: usize) -> CheckResult {
    let name = "basis_counting";
    for n in 1..=n_max {
        let formula = basis_size_formula(n);
        let enumerated = match enumerate_basis(n, Sector::ScalarOnly) {
            Ok(b) => b.len(),
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        if formula != enumerated.into() {
            return CheckResult::fail(
                name,
                format!("n={n}: formula {formula} vs enumerated {enumerated}"),
            );
        }
    }
    let ten = basis_size_formula(10);
    if ten != 9496u32.into() {
        return CheckResult::fail(name, format!("ten sites: formula gives {ten}, want 9496"));
    }
    CheckResult::pass(
        name,
        format!("formula matches enumeration through n={n_max}; ten sites hold 9495 plus identity"),
    )
}

fn check_oracle_equivalence(n_max: usize) -> CheckResult {
    let name = "oracle_equivalence";
    for n in 2..=n_max {
        let basis = match enumerate_basis(n, Sector::Full) {
            Ok(b) => b,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let dense: Vec<DenseOperator> = match basis
            .iter()
            .map(|m| represent_monomial(m, n))
            .collect::<Result<_, _>>()
        {
            Ok(d) => d,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let mut px = OperatorPoly::new(n);
                px.add_term(x.clone(), Complex64::new(1.0, 0.0))
                    .expect("fits");
                let mut py = OperatorPoly::new(n);
                py.add_term(y.clone(), Complex64::new(1.0, 0.0))
                    .expect("fits");
                let reduced = match multiply(&px, &py) {
                    Ok(p) => p,
                    Err(e) => return CheckResult::fail(name, format!("n={n} {x}*{y}: {e}")),
                };
                let reduced_dense = match represent(&reduced) {
                    Ok(d) => d,
                    Err(e) => return CheckResult::fail(name, format!("n={n} {x}*{y}: {e}")),
                };
                let direct = dense[i].matmul(&dense[j]);
                let diff = reduced_dense.max_abs_diff(&direct);
                if diff > 1e-10 {
                    return CheckResult::fail(
                        name,
                        format!("n={n} {x}*{y}: dense deviation {diff:.3e}"),
                    );
                }
                let t_sym = trace_inner(x, y, n);
                let t_dense = dense[i].inner(&dense[j]);
                if (t_sym - t_dense.re).abs() > 1e-9 || t_dense.im.abs() > 1e-9 {
                    return CheckResult::fail(
                        name,
                        format!("n={n} trace({x},{y}): {t_sym} vs {t_dense}"),
                    );
                }
            }
        }
    }
    CheckResult::pass(
        name,
        format!("all products and traces match dense matrices through n={n_max}"),
    )
}

fn check_structure_tensor(n_max: usize) -> CheckResult {
    let name = "structure_tensor";
    for n in 2..=n_max {
        let tensor = match build_structure_tensor(n) {
            Ok(t) => t,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let m = tensor.basis_len();
        for j in 0..m {
            for k in 0..m {
                let entries = tensor.entries(k);
                let got = entries
                    .iter()
                    .find(|&&(a, b, _)| (a as usize, b as usize) == (0, j))
                    .map_or(0.0, |&(_, _, v)| v);
                let want = if k == j { 1.0 } else { 0.0 };
                if (got - want).abs() > 1e-12 {
                    return CheckResult::fail(
                        name,
                        format!("n={n}: identity row entry ({j},{k}) is {got}"),
                    );
                }
            }
        }
    }
    CheckResult::pass(
        name,
        format!("built with vanishing odd residues through n={n_max}"),
    )
}

fn check_symmetry_goldens() -> CheckResult {
    let name = "symmetry_goldens";
    let basis = match enumerate_basis(4, Sector::ScalarOnly) {
        Ok(b) => b,
        Err(e) => return CheckResult::fail(name, e.to_string()),
    };
    let cs = match constraint_set(4, &basis) {
        Ok(c) => c,
        Err(e) => return CheckResult::fail(name, e.to_string()),
    };
    let find = |s: &str| basis.iter().position(|m| m.to_string() == s).unwrap();
    let expected_translations = vec![
        (find("(1,2)"), find("(2,3)")),
        (find("(1,3)"), find("(2,4)")),
        (find("(2,3)"), find("(3,4)")),
    ];
    if cs.a_equalities != expected_translations {
        return CheckResult::fail(name, "four-site translation list deviates".into());
    }
    let residual = residual_constraints(&cs.a_equalities, &cs.b_orbits);
    if residual != vec![(find("(1,2)"), find("(2,3)"))] {
        return CheckResult::fail(name, "four-site residual list deviates".into());
    }
    let basis3 = enumerate_basis(3, Sector::ScalarOnly).expect("small basis");
    let cs3 = constraint_set(3, &basis3).expect("small constraint set");
    if !residual_constraints(&cs3.a_equalities, &cs3.b_orbits).is_empty() {
        return CheckResult::fail(name, "three-site residual should be empty".into());
    }
    CheckResult::pass(
        name,
        "four-site constraints and three-site reduction".into(),
    )
}

fn check_mirror_forces_equalities(n_max: usize, draws: usize) -> CheckResult {
    let name = "mirror_forces_equalities";
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=n_max {
        let tensor = match build_structure_tensor(n) {
            Ok(t) => t,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let basis = tensor.basis().to_vec();
        let cs = match constraint_set(n, &basis) {
            Ok(c) => c,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let mirror_index: Vec<usize> = basis
            .iter()
            .map(|m| {
                let (img, _) = mirror_monomial(m, n).expect("mirror stays inside");
                basis
                    .iter()
                    .position(|x| *x == img)
                    .expect("closed under mirror")
            })
            .collect();
        for _ in 0..draws {
            let mut b = vec![0.0; basis.len()];
            for orbit in &cs.b_orbits {
                let v = rng.gen_range(-1.0..1.0);
                for &k in orbit {
                    b[k] = v;
                }
            }
            b[cs.normalization] = 1.0;
            let a = match tensor.a_vector(&b) {
                Ok(a) => a,
                Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
            };
            for (k, &mk) in mirror_index.iter().enumerate() {
                if (a[k] - a[mk]).abs() > 1e-10 {
                    return CheckResult::fail(
                        name,
                        format!(
                            "n={n}: a[{}] = {} vs mirrored a[{}] = {}",
                            basis[k], a[k], basis[mk], a[mk]
                        ),
                    );
                }
            }
        }
    }
    CheckResult::pass(
        name,
        format!("orbit-constant b makes a mirror-even, {draws} draws through n={n_max}"),
    )
}

fn check_positivity_and_scale(n_max: usize, draws: usize) -> CheckResult {
    let name = "positivity_and_scale";
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=n_max {
        let tensor = match build_structure_tensor(n) {
            Ok(t) => t,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let model = match ClusterModel::chain(n) {
            Ok(m) => m,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let dim = tensor.basis_len();
        let dense_basis: Vec<DenseOperator> = match tensor
            .basis()
            .iter()
            .map(|m| represent_monomial(m, n))
            .collect::<Result<_, _>>()
        {
            Ok(d) => d,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        for _ in 0..draws {
            let mut b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            b[0] += 1.5;
            let a = match tensor.a_vector(&b) {
                Ok(a) => a,
                Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
            };
            let mut rho = DenseOperator::zeros(n);
            let weight = 1.0 / (1u64 << n) as f64;
            for (op, &ak) in dense_basis.iter().zip(&a) {
                rho.add_scaled(op, Complex64::new(ak * weight, 0.0));
            }
            match spectrum_positivity(&rho) {
                Ok(true) => {}
                Ok(false) => {
                    return CheckResult::fail(name, format!("n={n}: squared state not positive"))
                }
                Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
            }
            let (base, _) = match objective(&b, &tensor, &model) {
                Ok(v) => v,
                Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
            };
            for c in [-1.0, 0.01, 100.0] {
                let scaled: Vec<f64> = b.iter().map(|x| c * x).collect();
                let (v, _) = match objective(&scaled, &tensor, &model) {
                    Ok(v) => v,
                    Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
                };
                if (v - base).abs() > 1e-10 {
                    return CheckResult::fail(
                        name,
                        format!("n={n}: scaling by {c} moved the value by {:.3e}", v - base),
                    );
                }
            }
        }
    }
    CheckResult::pass(
        name,
        format!("squared states positive and scale-free, {draws} draws through n={n_max}"),
    )
}

fn check_objective_against_dense(n_max: usize, draws: usize) -> CheckResult {
    let name = "objective_matches_dense";
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=n_max {
        let tensor = match build_structure_tensor(n) {
            Ok(t) => t,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let model = ClusterModel::chain(n).expect("n >= 2");
        let h_dense = match model
            .hamiltonian_poly()
            .map_err(|e| e.to_string())
            .and_then(|p| represent(&p).map_err(|e| e.to_string()))
        {
            Ok(h) => h,
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        };
        let dense_basis: Vec<DenseOperator> = tensor
            .basis()
            .iter()
            .map(|m| represent_monomial(m, n).expect("within cap"))
            .collect();
        let dim = tensor.basis_len();
        for _ in 0..draws {
            let mut b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            b[0] += 1.5;
            let mut tau = DenseOperator::zeros(n);
            for (op, &bk) in dense_basis.iter().zip(&b) {
                tau.add_scaled(op, Complex64::new(bk, 0.0));
            }
            let tau_sq = tau.matmul(&tau);
            let denom = tau_sq.trace().re * (n as f64 - 1.0);
            let reference = h_dense.matmul(&tau_sq).trace().re / denom;
            let (value, _) = match objective(&b, &tensor, &model) {
                Ok(v) => v,
                Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
            };
            if (value - reference).abs() > 1e-9 {
                return CheckResult::fail(
                    name,
                    format!("n={n}: algebraic {value} vs dense {reference}"),
                );
            }
        }
    }
    CheckResult::pass(
        name,
        format!("algebraic energy agrees with dense traces, {draws} draws through n={n_max}"),
    )
}

fn check_dependency_ranks() -> CheckResult {
    let name = "dependency_ranks";
    let mut details = Vec::new();
    for n in 5..=8 {
        match check_dependencies(n) {
            Ok(report) => {
                if !report.verified || report.ill_conditioned {
                    return CheckResult::fail(
                        name,
                        format!(
                            "n={n}: gram rank {} vs predicted {} (ill: {})",
                            report.gram_rank, report.predicted_rank, report.ill_conditioned
                        ),
                    );
                }
                details.push(format!("n={n}: rank {}", report.gram_rank));
            }
            Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
        }
    }
    CheckResult::pass(name, details.join(", "))
}

fn check_gradients() -> CheckResult {
    let name = "gradient_check";
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [4usize, 5] {
        let tensor = build_structure_tensor(n).expect("within cap");
        let model = ClusterModel::chain(n).expect("n >= 2");
        let dim = tensor.basis_len();
        for _ in 0..20 {
            let mut b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            b[0] += 1.5;
            let (_, grad) = match objective(&b, &tensor, &model) {
                Ok(v) => v,
                Err(e) => return CheckResult::fail(name, format!("n={n}: {e}")),
            };
            let step = 1e-5;
            for i in 0..dim {
                let mut plus = b.clone();
                plus[i] += step;
                let mut minus = b.clone();
                minus[i] -= step;
                let vp = objective(&plus, &tensor, &model).map(|v| v.0);
                let vm = objective(&minus, &tensor, &model).map(|v| v.0);
                let (vp, vm) = match (vp, vm) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => return CheckResult::fail(name, format!("n={n}: evaluation failed")),
                };
                let fd = (vp - vm) / (2.0 * step);
                let denom = grad[i].abs().max(1.0);
                if ((grad[i] - fd) / denom).abs() > 1e-6 {
                    return CheckResult::fail(
                        name,
                        format!("n={n} component {i}: analytic {} vs fd {fd}", grad[i]),
                    );
                }
            }
        }
    }
    CheckResult::pass(name, "20 random points each for four and five sites".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_on_a_healthy_build() {
        let results = run_verify(VerifyLevel::Quick);
        for r in &results {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
        assert!(results.len() >= 9, "quick level runs the core checks");
    }

    #[test]
    fn corrupted_relation_coefficient_is_caught_and_named() {
        let fault = RelationFault {
            case: 7,
            scale: 1.5,
        };
        let results = run_verify_with_fault(VerifyLevel::Quick, Some(fault));
        let relations = results
            .iter()
            .find(|r| r.name == "product_relations")
            .expect("relation check always runs");
        assert!(!relations.passed, "corruption must not slip through");
        assert!(
            relations.detail.contains("edge_sharing_triples"),
            "failure names the poisoned case, got: {}",
            relations.detail
        );
    }

    #[test]
    fn relation_table_is_self_consistent() {
        for case in relation_table() {
            let n = case_site_count(case);
            assert!(n <= 6, "{} fits in the dense cap", case.name);
            assert!(!case.rhs.is_empty(), "{} has an expansion", case.name);
        }
    }
}
