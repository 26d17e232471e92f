//! Product reduction for invariant monomials.
//!
//! A product of two canonical monomials is a word of pair/triple factors.
//! Factors with disjoint supports commute; the reduction repeatedly rewrites
//! the leftmost interacting factor pair through the closed set of product
//! rules until all factors are disjoint and at most one triple remains.
//!
//! Termination: every rule strictly decreases (total factor slots, number of
//! triples) lexicographically: the disjoint-triple rule keeps slots but
//! removes both triples, every other rule reduces slots.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::monomial::{canonicalize, permutation_parity, AlgebraError, Monomial, Site};
use super::poly::OperatorPoly;
use super::PRUNE_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    Pair(Site, Site),
    Triple([Site; 3]),
}

impl Factor {
    fn contains(&self, s: Site) -> bool {
        match *self {
            Factor::Pair(a, b) => a == s || b == s,
            Factor::Triple(t) => t.contains(&s),
        }
    }

    fn shares_site(&self, other: &Factor) -> bool {
        match *self {
            Factor::Pair(a, b) => other.contains(a) || other.contains(b),
            Factor::Triple(t) => t.iter().any(|&s| other.contains(s)),
        }
    }

    fn is_triple(&self) -> bool {
        matches!(self, Factor::Triple(_))
    }
}

fn factors_of(m: &Monomial) -> Vec<Factor> {
    let mut f: Vec<Factor> = m.pairs().iter().map(|&(a, b)| Factor::Pair(a, b)).collect();
    if let Some(t) = m.triple() {
        f.push(Factor::Triple(t));
    }
    f
}

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Rotates `t` so that `first` sits in front. Rotations are even, so no sign.
fn triple_with_first(t: [Site; 3], first: Site) -> [Site; 3] {
    if t[0] == first {
        t
    } else if t[1] == first {
        [t[1], t[2], t[0]]
    } else {
        [t[2], t[0], t[1]]
    }
}

/// Reorders `t` to start with `a, b`; returns the remaining site and the
/// permutation parity of the reordering.
fn triple_with_first_two(t: [Site; 3], a: Site, b: Site) -> (Site, i8) {
    let c = *t.iter().find(|&&s| s != a && s != b).expect("third site");
    (c, permutation_parity(&t, &[a, b, c]))
}

/// Product rules for two adjacent interacting factors, as (coefficient,
/// replacement factors). Callers guarantee `f` and `g` either share a site
/// or are both triples.
fn rewrite_adjacent(f: Factor, g: Factor) -> Vec<(Complex64, Vec<Factor>)> {
    match (f, g) {
        (Factor::Pair(a, b), Factor::Pair(c, d)) => {
            if (a, b) == (c, d) || (a, b) == (d, c) {
                // (σ1σ2)^2 = 3 - 2(σ1σ2)
                vec![(re(3.0), vec![]), (re(-2.0), vec![Factor::Pair(a, b)])]
            } else {
                // (σ1σ2)(σ2σ3) = (σ1σ3) - i(σ1σ2σ3), shared site in the middle
                let (x, s, y) = if a == c {
                    (b, a, d)
                } else if a == d {
                    (b, a, c)
                } else if b == c {
                    (a, b, d)
                } else {
                    (a, b, c)
                };
                vec![
                    (ONE, vec![Factor::Pair(x, y)]),
                    (-I, vec![Factor::Triple([x, s, y])]),
                ]
            }
        }
        (Factor::Pair(a, b), Factor::Triple(t)) => {
            let a_in = t.contains(&a);
            let b_in = t.contains(&b);
            if a_in && b_in {
                // (σ1σ2)(σ1σ2σ3) = -(σ1σ2σ3) - 2i(σ1σ3) + 2i(σ2σ3)
                let (c, par) = triple_with_first_two(t, a, b);
                scaled(
                    par,
                    vec![
                        (re(-1.0), vec![Factor::Triple([a, b, c])]),
                        (im(-2.0), vec![Factor::Pair(a, c)]),
                        (im(2.0), vec![Factor::Pair(b, c)]),
                    ],
                )
            } else {
                // (σ1σ2)(σ2σ3σ4) = (σ1σ3σ4) - i(σ1σ3)(σ2σ4) + i(σ1σ4)(σ2σ3)
                let (x, s) = if a_in { (b, a) } else { (a, b) };
                let t = triple_with_first(t, s);
                let (c, d) = (t[1], t[2]);
                vec![
                    (ONE, vec![Factor::Triple([x, c, d])]),
                    (-I, vec![Factor::Pair(x, c), Factor::Pair(s, d)]),
                    (I, vec![Factor::Pair(x, d), Factor::Pair(s, c)]),
                ]
            }
        }
        (Factor::Triple(t), Factor::Pair(a, b)) => {
            let a_in = t.contains(&a);
            let b_in = t.contains(&b);
            if a_in && b_in {
                // (σ1σ2σ3)(σ1σ2) = -(σ1σ2σ3) + 2i(σ1σ3) - 2i(σ2σ3)
                let (c, par) = triple_with_first_two(t, a, b);
                scaled(
                    par,
                    vec![
                        (re(-1.0), vec![Factor::Triple([a, b, c])]),
                        (im(2.0), vec![Factor::Pair(a, c)]),
                        (im(-2.0), vec![Factor::Pair(b, c)]),
                    ],
                )
            } else {
                // (σ2σ3σ4)(σ1σ2) = (σ1σ3σ4) + i(σ1σ3)(σ2σ4) - i(σ1σ4)(σ2σ3)
                let (x, s) = if a_in { (b, a) } else { (a, b) };
                let t = triple_with_first(t, s);
                let (c, d) = (t[1], t[2]);
                vec![
                    (ONE, vec![Factor::Triple([x, c, d])]),
                    (I, vec![Factor::Pair(x, c), Factor::Pair(s, d)]),
                    (-I, vec![Factor::Pair(x, d), Factor::Pair(s, c)]),
                ]
            }
        }
        (Factor::Triple(t1), Factor::Triple(t2)) => {
            let shared: Vec<Site> = t1.iter().copied().filter(|s| t2.contains(s)).collect();
            match shared.len() {
                3 => {
                    // (σ1σ2σ3)^2 = 6 - 2(σ1σ2) - 2(σ1σ3) - 2(σ2σ3)
                    let par = permutation_parity(&t2, &t1);
                    let [a, b, c] = t1;
                    scaled(
                        par,
                        vec![
                            (re(6.0), vec![]),
                            (re(-2.0), vec![Factor::Pair(a, b)]),
                            (re(-2.0), vec![Factor::Pair(a, c)]),
                            (re(-2.0), vec![Factor::Pair(b, c)]),
                        ],
                    )
                }
                2 => {
                    // (σ1σ2σ3)(σ1σ2σ4) = -(σ1σ3)(σ2σ4) - (σ1σ4)(σ2σ3)
                    //                    + 2(σ3σ4) + i(σ1σ3σ4) + i(σ2σ3σ4)
                    let (s, t) = (shared[0], shared[1]);
                    let (c, p1) = triple_with_first_two(t1, s, t);
                    let (d, p2) = triple_with_first_two(t2, s, t);
                    scaled(
                        p1 * p2,
                        vec![
                            (re(-1.0), vec![Factor::Pair(s, c), Factor::Pair(t, d)]),
                            (re(-1.0), vec![Factor::Pair(s, d), Factor::Pair(t, c)]),
                            (re(2.0), vec![Factor::Pair(c, d)]),
                            (I, vec![Factor::Triple([s, c, d])]),
                            (I, vec![Factor::Triple([t, c, d])]),
                        ],
                    )
                }
                1 => {
                    // (σ1σ2σ3)(σ1σ4σ5) = (σ2σ4)(σ3σ5) - (σ2σ5)(σ3σ4)
                    //                    - i(σ1σ2)(σ3σ4σ5) + i(σ1σ3)(σ2σ4σ5)
                    let s = shared[0];
                    let u = triple_with_first(t1, s);
                    let v = triple_with_first(t2, s);
                    let (b, c, d, e) = (u[1], u[2], v[1], v[2]);
                    vec![
                        (ONE, vec![Factor::Pair(b, d), Factor::Pair(c, e)]),
                        (re(-1.0), vec![Factor::Pair(b, e), Factor::Pair(c, d)]),
                        (-I, vec![Factor::Pair(s, b), Factor::Triple([c, d, e])]),
                        (I, vec![Factor::Pair(s, c), Factor::Triple([b, d, e])]),
                    ]
                }
                _ => {
                    // Disjoint mixed products reduce to the determinant of
                    // their scalar-product overlap matrix: six signed terms
                    // of three pairs each.
                    const PERMS: [([usize; 3], f64); 6] = [
                        ([0, 1, 2], 1.0),
                        ([1, 2, 0], 1.0),
                        ([2, 0, 1], 1.0),
                        ([0, 2, 1], -1.0),
                        ([1, 0, 2], -1.0),
                        ([2, 1, 0], -1.0),
                    ];
                    PERMS
                        .iter()
                        .map(|&(p, sgn)| {
                            (
                                re(sgn),
                                vec![
                                    Factor::Pair(t1[p[0]], t2[0]),
                                    Factor::Pair(t1[p[1]], t2[1]),
                                    Factor::Pair(t1[p[2]], t2[2]),
                                ],
                            )
                        })
                        .collect()
                }
            }
        }
    }
}

fn scaled(par: i8, mut terms: Vec<(Complex64, Vec<Factor>)>) -> Vec<(Complex64, Vec<Factor>)> {
    if par < 0 {
        for (c, _) in terms.iter_mut() {
            *c = -*c;
        }
    }
    terms
}

/// Finds the leftmost interacting pair of positions `(i, j)`, `i < j`.
/// Interacting means sharing a site, or being two triples (disjoint triples
/// must still merge through the determinant rule). Scanning j upward from
/// i+1 guarantees everything strictly between commutes with position `i`.
fn find_rewrite(w: &[Factor]) -> Option<(usize, usize)> {
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i].shares_site(&w[j]) || (w[i].is_triple() && w[j].is_triple()) {
                return Some((i, j));
            }
        }
    }
    None
}

fn emit(word: &[Factor], coeff: Complex64, out: &mut BTreeMap<Monomial, Complex64>) {
    let mut pairs: Vec<(Site, Site)> = Vec::with_capacity(word.len());
    let mut triple = None;
    for f in word {
        match *f {
            Factor::Pair(a, b) => pairs.push((a, b)),
            Factor::Triple(t) => {
                debug_assert!(triple.is_none(), "reduced word holds at most one triple");
                triple = Some(t);
            }
        }
    }
    let (m, sign) = canonicalize(&pairs, triple).expect("reduced word has disjoint factors");
    let entry = out.entry(m).or_insert(Complex64::new(0.0, 0.0));
    *entry += coeff * re(sign as f64);
}

/// Reduces the product of two canonical monomials to canonical form.
pub(crate) fn multiply_monomials(x: &Monomial, y: &Monomial) -> BTreeMap<Monomial, Complex64> {
    let mut word = factors_of(x);
    word.extend(factors_of(y));

    let mut out = BTreeMap::new();
    let mut stack: Vec<(Complex64, Vec<Factor>)> = vec![(ONE, word)];
    while let Some((coeff, w)) = stack.pop() {
        match find_rewrite(&w) {
            None => emit(&w, coeff, &mut out),
            Some((i, j)) => {
                let (fi, fj) = (w[i], w[j]);
                for (rc, repl) in rewrite_adjacent(fi, fj) {
                    let mut nw = Vec::with_capacity(w.len() + repl.len());
                    nw.extend_from_slice(&w[..i]);
                    nw.extend_from_slice(&w[i + 1..j]);
                    nw.extend(repl);
                    nw.extend_from_slice(&w[j + 1..]);
                    stack.push((coeff * rc, nw));
                }
            }
        }
    }
    out.retain(|_, c| c.norm() >= PRUNE_EPS);
    out
}

/// Operator product of two polynomials over the same cluster.
pub fn multiply(x: &OperatorPoly, y: &OperatorPoly) -> Result<OperatorPoly, AlgebraError> {
    if x.site_count() != y.site_count() {
        return Err(AlgebraError::SizeMismatch(x.site_count(), y.site_count()));
    }
    let mut out = OperatorPoly::new(x.site_count());
    for (mx, cx) in x.terms() {
        for (my, cy) in y.terms() {
            for (m, c) in multiply_monomials(mx, my) {
                out.add_term(m, cx * cy * c)?;
            }
        }
    }
    Ok(out)
}
