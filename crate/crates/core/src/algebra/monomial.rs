use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// 1-based site index. Enumeration caps keep these comfortably small.
pub type Site = u8;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgebraError {
    #[error("malformed monomial: site {0} appears more than once")]
    DuplicateSite(Site),
    #[error("malformed monomial: site indices are 1-based, got 0")]
    ZeroSite,
    #[error("site {site} exceeds the cluster size {n}")]
    SiteOutOfRange { site: Site, n: usize },
    #[error("cluster size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("enumeration for n={n} exceeds the configured cap of {cap} sites")]
    EnumerationCap { n: usize, cap: usize },
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
    #[error("cannot parse monomial from {0:?}")]
    Parse(String),
}

/// Canonical invariant monomial: scalar-product pairs sorted ascending with
/// disjoint supports, plus at most one mixed-product triple stored ascending.
/// The sign produced when reordering a triple lives in the owning
/// polynomial's coefficient, never in the monomial itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pairs: Vec<(Site, Site)>,
    triple: Option<[Site; 3]>,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial {
            pairs: Vec::new(),
            triple: None,
        }
    }

    pub fn pairs(&self) -> &[(Site, Site)] {
        &self.pairs
    }

    pub fn triple(&self) -> Option<[Site; 3]> {
        self.triple
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.is_empty() && self.triple.is_none()
    }

    /// True when the monomial carries a mixed product (time-reversal odd).
    pub fn has_triple(&self) -> bool {
        self.triple.is_some()
    }

    /// Sites touched by the monomial, ascending.
    pub fn support(&self) -> Vec<Site> {
        let mut s: Vec<Site> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        if let Some(t) = self.triple {
            s.extend_from_slice(&t);
        }
        s.sort_unstable();
        s
    }

    pub fn support_len(&self) -> usize {
        2 * self.pairs.len() + if self.triple.is_some() { 3 } else { 0 }
    }

    pub fn max_site(&self) -> Site {
        self.support().last().copied().unwrap_or(0)
    }

    /// Relabels every site through `map` (`map[site]` must be a valid new site)
    /// and re-canonicalizes. Returns the parity sign picked up by reordering
    /// the mixed-product triple, `+1` for pure scalar-product monomials.
    pub fn relabel(&self, map: impl Fn(Site) -> Site) -> Result<(Monomial, i8), AlgebraError> {
        let pairs: Vec<(Site, Site)> = self.pairs.iter().map(|&(a, b)| (map(a), map(b))).collect();
        let triple = self.triple.map(|t| [map(t[0]), map(t[1]), map(t[2])]);
        canonicalize(&pairs, triple)
    }

    fn sort_key(&self) -> (u8, usize, [Site; 3], &[(Site, Site)]) {
        (
            self.triple.is_some() as u8,
            self.support_len(),
            self.triple.unwrap_or([0, 0, 0]),
            &self.pairs,
        )
    }
}

/// Basis order: scalar-product sector first (identity leading, then by
/// support size, then lexicographic), mixed-product sector after it.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds the canonical monomial from raw pairs and an optional ordered
/// triple. Pair order never contributes a sign; reordering the triple to
/// ascending contributes its permutation parity. Any repeated site across
/// all factors is rejected.
pub fn canonicalize(
    pairs: &[(Site, Site)],
    triple: Option<[Site; 3]>,
) -> Result<(Monomial, i8), AlgebraError> {
    let mut seen = [false; 256];
    let mut mark = |s: Site| -> Result<(), AlgebraError> {
        if s == 0 {
            return Err(AlgebraError::ZeroSite);
        }
        if seen[s as usize] {
            return Err(AlgebraError::DuplicateSite(s));
        }
        seen[s as usize] = true;
        Ok(())
    };

    let mut norm: Vec<(Site, Site)> = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        mark(a)?;
        mark(b)?;
        norm.push((a.min(b), a.max(b)));
    }
    norm.sort_unstable();

    let mut sign: i8 = 1;
    let triple = match triple {
        None => None,
        Some(t) => {
            for &s in &t {
                mark(s)?;
            }
            let mut sorted = t;
            sorted.sort_unstable();
            sign = permutation_parity(&t, &sorted);
            Some(sorted)
        }
    };

    Ok((
        Monomial {
            pairs: norm,
            triple,
        },
        sign,
    ))
}

/// Parity of the permutation carrying `from` onto `to` (same three elements):
/// `+1` for the identity and the two cyclic rotations, `-1` otherwise.
pub(crate) fn permutation_parity(from: &[Site; 3], to: &[Site; 3]) -> i8 {
    if from == to
        || (from[0] == to[1] && from[1] == to[2] && from[2] == to[0])
        || (from[0] == to[2] && from[1] == to[0] && from[2] == to[1])
    {
        1
    } else {
        -1
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        if let Some(t) = self.triple {
            write!(f, "[{},{},{}]", t[0], t[1], t[2])?;
        }
        for &(a, b) in &self.pairs {
            write!(f, "({},{})", a, b)?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AlgebraError::Parse(s.to_string());
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::identity());
        }
        let mut pairs = Vec::new();
        let mut triple = None;
        let mut rest = s;
        while !rest.is_empty() {
            let (open, close) = match rest.as_bytes()[0] {
                b'(' => ('(', ')'),
                b'[' => ('[', ']'),
                _ => return Err(err()),
            };
            let end = rest.find(close).ok_or_else(err)?;
            let inner = &rest[1..end];
            let nums: Vec<Site> = inner
                .split(',')
                .map(|t| t.trim().parse::<Site>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            match (open, nums.len()) {
                ('(', 2) => pairs.push((nums[0], nums[1])),
                ('[', 3) => {
                    if triple.is_some() {
                        return Err(err());
                    }
                    triple = Some([nums[0], nums[1], nums[2]]);
                }
                _ => return Err(err()),
            }
            rest = &rest[end + 1..];
        }
        let (m, sign) = canonicalize(&pairs, triple)?;
        if sign != 1 {
            // Canonical strings always carry ascending triples.
            return Err(err());
        }
        Ok(m)
    }
}
