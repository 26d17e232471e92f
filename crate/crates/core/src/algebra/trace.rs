//! Trace inner product `(X, Y) = tr(X† Y)` on invariant monomials.
//!
//! Basis monomials are Hermitian, so `tr(X† Y) = tr(X Y)`. The inner product
//! vanishes unless the supports coincide: any site touched by only one
//! factor leaves a lone traceless Pauli. For two scalar-product monomials on
//! the same support the value is `2^n · 3^C`, where `C` counts the cycles of
//! the multigraph formed by superimposing the two sets of bonds. Patterns
//! involving mixed products reduce through the product rules instead: the
//! trace is `2^n` times the identity coefficient of `X·Y`.

use super::monomial::{Monomial, Site};
use super::rewrite::multiply_monomials;

/// `tr(X† Y)` on an `n`-site cluster. Always integer-valued.
pub fn trace_inner(x: &Monomial, y: &Monomial, n: usize) -> f64 {
    debug_assert!(x.max_site() as usize <= n && y.max_site() as usize <= n);
    let sx = x.support();
    if sx != y.support() {
        return 0.0;
    }
    let two_n = (1u64 << n) as f64;
    if !x.has_triple() && !y.has_triple() {
        let c = bond_cycles(x, y, &sx);
        return two_n * 3f64.powi(c as i32);
    }
    // Mixed-product patterns: fall back to the exact product reduction and
    // read off the identity coefficient.
    log::debug!("trace_inner reducing mixed-product pattern tr({x}·{y}) through the product rules");
    let prod = multiply_monomials(x, y);
    let c = prod
        .get(&Monomial::identity())
        .copied()
        .unwrap_or(num_complex::Complex64::new(0.0, 0.0));
    debug_assert!(
        c.im.abs() < 1e-9,
        "trace of a product of Hermitian monomials must be real, got {c}"
    );
    two_n * c.re
}

/// Number of connected components of the multigraph whose edges are the
/// bonds of both monomials. On coinciding supports every site has degree
/// two, so each component is a cycle (a doubled bond counts as one cycle).
fn bond_cycles(x: &Monomial, y: &Monomial, support: &[Site]) -> usize {
    if support.is_empty() {
        return 0;
    }
    let mut parent: Vec<usize> = (0..support.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    let idx = |s: Site| support.binary_search(&s).expect("site in support");
    for &(a, b) in x.pairs().iter().chain(y.pairs().iter()) {
        let (ra, rb) = (find(&mut parent, idx(a)), find(&mut parent, idx(b)));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (0..support.len()).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}
