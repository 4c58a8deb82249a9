//! Finite abstract convexity spaces: a ground set with an
//! intersection-closed family containing `∅` and the ground set.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{blocks_of, Rgs};
use crate::error::{check_cap, input, Error, Result};
use crate::geometry::PointSet;
use crate::ranges::hull_closed_subsets;
use crate::set_systems::SetSystem;
use crate::subset::{k_subsets, Subset, MAX_GROUND};

/// Default cap on the number of member unions or pairs a query may visit.
pub const DEFAULT_ABSTRACT_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct ConvexitySpace {
    n: usize,
    family: Vec<Subset>,
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    n: usize,
    family: Vec<Vec<usize>>,
}

impl TryFrom<SpaceJson> for ConvexitySpace {
    type Error = Error;

    fn try_from(j: SpaceJson) -> Result<Self> {
        let family = j
            .family
            .iter()
            .map(|e| Subset::try_from_indices(e, j.n))
            .collect::<Result<Vec<_>>>()?;
        ConvexitySpace::new(j.n, family)
    }
}

impl From<ConvexitySpace> for SpaceJson {
    fn from(s: ConvexitySpace) -> Self {
        SpaceJson {
            n: s.n,
            family: s.family.iter().map(|e| e.to_vec()).collect(),
        }
    }
}

/// Least size at which a property holds for every subset, or none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Number {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Finite(k) => write!(f, "{k}"),
            Number::Infinite => write!(f, "inf"),
        }
    }
}

/// First failed axiom, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub violation: Option<String>,
}

impl ConvexitySpace {
    /// Deduplicates the family without checking the axioms.
    pub fn new(n: usize, family: impl IntoIterator<Item = Subset>) -> Result<Self> {
        if n > MAX_GROUND {
            return input(format!("ground set of {n} exceeds {MAX_GROUND}"));
        }
        let full = Subset::full(n);
        let mut family: Vec<Subset> = family.into_iter().collect();
        if let Some(e) = family.iter().find(|e| !e.is_subset_of(full)) {
            return input(format!("member {e} is not within 0..{n}"));
        }
        family.sort_unstable();
        family.dedup();
        Ok(ConvexitySpace { n, family })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn family(&self) -> &[Subset] {
        &self.family
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.family.binary_search(&s).is_ok()
    }

    /// Parses and rejects families that are not convexity spaces.
    pub fn from_json(s: &str) -> Result<Self> {
        let space: ConvexitySpace =
            serde_json::from_str(s).map_err(|e| Error::Input(format!("convexity space JSON: {e}")))?;
        if let Some(v) = space.validate().violation {
            return input(v);
        }
        Ok(space)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spaces always serialize")
    }

    pub fn validate(&self) -> Validation {
        let violation = if !self.contains(Subset::EMPTY) {
            Some("the empty set is not a member".to_string())
        } else if !self.contains(self.ground()) {
            Some("the ground set is not a member".to_string())
        } else {
            self.family.iter().enumerate().find_map(|(i, &a)| {
                self.family[i + 1..]
                    .iter()
                    .find(|&&b| !self.contains(a.intersect(b)))
                    .map(|&b| format!("{a} ∩ {b} = {} is not a member", a.intersect(b)))
            })
        };
        Validation {
            valid: violation.is_none(),
            violation,
        }
    }

    /// Intersection of all members containing `s`.
    pub fn hull(&self, s: Subset) -> Subset {
        self.family
            .iter()
            .filter(|m| s.is_subset_of(**m))
            .fold(self.ground(), |acc, m| acc.intersect(*m))
    }

    /// Members whose complement is a member, as a set system.
    pub fn halfspaces(&self) -> SetSystem {
        let full = self.ground();
        SetSystem::new(
            self.n,
            self.family.iter().copied().filter(|&m| self.contains(full.minus(m))),
        )
        .expect("members lie in the ground set")
    }

    /// True iff `set` splits into `r` parts whose hulls share a point.
    fn has_tverberg_partition(&self, set: Subset, r: usize) -> bool {
        Rgs::new(set.len(), r)
            .filter(|a| a.iter().max().is_some_and(|&m| m + 1 == r))
            .any(|a| {
                let common = blocks_of(set, &a)
                    .iter()
                    .fold(self.ground(), |acc, b| acc.intersect(self.hull(*b)));
                !common.is_empty()
            })
    }

    /// Least `k` such that every `k`-subset has an `r`-partition with
    /// intersecting hulls.
    pub fn tverberg_number(&self, r: usize) -> Result<Number> {
        if r < 2 {
            return input("r must be at least 2");
        }
        // property is inherited by supersets
        for k in r..=self.n {
            let all = k_subsets(self.ground(), k)
                .into_par_iter()
                .all(|s| self.has_tverberg_partition(s, r));
            if all {
                return Ok(Number::Finite(k));
            }
        }
        Ok(Number::Infinite)
    }

    pub fn radon_number(&self) -> Result<Number> {
        self.tverberg_number(2)
    }

    /// Every two disjoint members are split by a halfspace; otherwise the
    /// first violating pair in family order.
    pub fn is_separable(&self, cap: u128) -> Result<(bool, Option<(Subset, Subset)>)> {
        let f = self.family.len() as u128;
        check_cap("member pairs", f.saturating_mul(f), cap)?;
        let halves: Vec<Subset> = self.halfspaces().edges().to_vec();
        for &c1 in &self.family {
            for &c2 in &self.family {
                if !c1.is_disjoint(c2) {
                    continue;
                }
                let split = halves
                    .iter()
                    .any(|&h| c1.is_subset_of(h) && c2.is_disjoint(h));
                if !split {
                    return Ok((false, Some((c1, c2))));
                }
            }
        }
        Ok((true, None))
    }

    /// Distinct unions of at most `s` members.
    pub fn unions(&self, s: usize, cap: u128) -> Result<Vec<Subset>> {
        let mut seen: HashSet<Subset> = self.family.iter().copied().collect();
        let mut frontier: Vec<Subset> = self.family.clone();
        for _ in 1..s {
            let mut next = Vec::new();
            for &x in &frontier {
                for &m in &self.family {
                    let y = x.union(m);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
                check_cap("member unions", seen.len() as u128, cap)?;
            }
            frontier = next;
        }
        let mut out: Vec<Subset> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// Disjoint covers refuting one bipartition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractWitness {
    pub a: Subset,
    pub b: Subset,
    /// Union of `≤ s` members containing `a`.
    pub cover_a: Subset,
    /// Union of `≤ t` members containing `b`, disjoint from `cover_a`.
    pub cover_b: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AbstractSearch {
    Found {
        a: Subset,
        b: Subset,
        rank: usize,
        /// Cover pairs checked for the found bipartition, all intersecting.
        pairs_checked: u128,
    },
    NoneFound {
        candidates: usize,
        witnesses: Vec<AbstractWitness>,
    },
}

/// Disjoint covers for `(a, b)` from unions of `≤ s` and `≤ t` members, or
/// the number of intersecting pairs seen.
fn disjoint_covers(ua: &[Subset], ub: &[Subset], a: Subset, b: Subset) -> std::result::Result<(Subset, Subset), u128> {
    let ca: Vec<Subset> = ua.iter().copied().filter(|u| a.is_subset_of(*u)).collect();
    let cb: Vec<Subset> = ub.iter().copied().filter(|u| b.is_subset_of(*u)).collect();
    for &x in &ca {
        for &y in &cb {
            if x.is_disjoint(y) {
                return Ok((x, y));
            }
        }
    }
    Err(ca.len() as u128 * cb.len() as u128)
}

/// Some union of `≤ s` members containing `a` misses some union of `≤ t`
/// members containing `b`. Decided by enumerating all unions.
pub fn abstract_st_separable(space: &ConvexitySpace, a: Subset, b: Subset, s: usize, t: usize, cap: u128) -> Result<bool> {
    if !a.union(b).is_subset_of(space.ground()) {
        return input(format!("{} is not within the ground set", a.union(b)));
    }
    let ua = space.unions(s, cap)?;
    let ub = space.unions(t, cap)?;
    Ok(disjoint_covers(&ua, &ub, a, b).is_ok())
}

/// Same question through hulls of blocks: a union of members containing `A`
/// can be shrunk to the union of the hulls of its traces on `A`.
pub fn separable_by_blocks(space: &ConvexitySpace, a: Subset, b: Subset, s: usize, t: usize) -> bool {
    let covers = |x: Subset, k: usize| -> Vec<Subset> {
        if x.is_empty() {
            return vec![Subset::EMPTY];
        }
        Rgs::new(x.len(), k)
            .map(|g| {
                blocks_of(x, &g)
                    .iter()
                    .fold(Subset::EMPTY, |acc, blk| acc.union(space.hull(*blk)))
            })
            .collect()
    };
    let ca = covers(a, s);
    let cb = covers(b, t);
    ca.iter().any(|x| cb.iter().any(|y| x.is_disjoint(*y)))
}

/// First bipartition `(A, P \ A)`, by size of `A` and then mask, such that
/// every union of `≤ s` members containing `A` meets every union of `≤ t`
/// members containing `P \ A`. Decided by enumerating all unions.
pub fn abstract_good_partition(space: &ConvexitySpace, p: Subset, s: usize, t: usize, cap: u128) -> Result<AbstractSearch> {
    if !p.is_subset_of(space.ground()) {
        return input(format!("{p} is not within the ground set"));
    }
    if s == 0 || t == 0 {
        return input("group counts must be at least 1");
    }
    if p.len() < 2 {
        return input("a partition needs at least two points");
    }
    let ua = space.unions(s, cap)?;
    let ub = space.unions(t, cap)?;
    let cands = crate::oracles::radon_candidates(p);
    let outcomes: Vec<std::result::Result<(Subset, Subset), u128>> = cands
        .par_iter()
        .map(|&a| disjoint_covers(&ua, &ub, a, p.minus(a)))
        .collect();
    if let Some((rank, pairs)) = outcomes
        .iter()
        .enumerate()
        .find_map(|(i, o)| o.as_ref().err().map(|&n| (i, n)))
    {
        let a = cands[rank];
        return Ok(AbstractSearch::Found {
            a,
            b: p.minus(a),
            rank,
            pairs_checked: pairs,
        });
    }
    let witnesses = cands
        .iter()
        .zip(outcomes)
        .map(|(&a, o)| {
            let (cover_a, cover_b) = o.expect("all candidates refuted");
            AbstractWitness {
                a,
                b: p.minus(a),
                cover_a,
                cover_b,
            }
        })
        .collect();
    Ok(AbstractSearch::NoneFound {
        candidates: cands.len(),
        witnesses,
    })
}

/// Intervals `{a, .., b}` of the path `0 - 1 - .. - (n-1)`, plus `∅`.
pub fn interval_convexity(n: usize) -> Result<ConvexitySpace> {
    let mut family = vec![Subset::EMPTY];
    for a in 0..n {
        for b in a..n {
            family.push(Subset::from_indices(a..=b));
        }
    }
    ConvexitySpace::new(n, family)
}

/// Every subset is convex.
pub fn free_space(n: usize) -> Result<ConvexitySpace> {
    ConvexitySpace::new(n, crate::subset::all_subsets(Subset::full(n)))
}

/// Subsets `S` of a point set with `CH(S) ∩ P = S`.
pub fn hull_closed_space(ps: &PointSet) -> Result<ConvexitySpace> {
    ConvexitySpace::new(ps.len(), hull_closed_subsets(ps)?)
}
