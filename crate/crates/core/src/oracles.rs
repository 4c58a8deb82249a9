//! Decision procedures for partitions of a point set covered by unions of
//! convex sets, and the constructive separations that certify them.
//!
//! A union of `s` convex sets containing `A` can be shrunk to the union of the
//! hulls of its pieces restricted to `A`, so every question here reduces to
//! a search over groupings of the points into at most `s` blocks, with
//! hull-intersection queries as the only geometric predicate.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{completions, partitions_at_most, Rgs};
use crate::error::{check_cap, input, Error, Result};
use crate::geometry::{
    strict_separator, verify_meet, HullMeet, HullOracle, Hyperplane, PointSet, Separation,
};
use crate::lp::{lp_feasible, LinearProgram, LpOutcome, Relation, VarKind};
use crate::rational::{serde_rat_vec, Rat};
use crate::subset::{binomial, Subset};

/// Default cap on the number of candidate groupings or partitions.
pub const DEFAULT_SEARCH_CAP: u128 = 50_000_000;

/// Record that a search visited its whole candidate space.
///
/// `total` is the closed-form number of candidates; `covered` counts the
/// candidates rejected, a pruned prefix counting every completion below it.
/// A refutation is complete exactly when the two agree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub total: u128,
    pub covered: u128,
    pub pruned: u64,
    pub cap: u128,
}

impl Exhaustion {
    pub fn is_complete(&self) -> bool {
        self.covered == self.total
    }
}

/// Witness that `A` lies in a union of `≤ s` convex sets disjoint from a
/// union of `≤ t` convex sets containing `B`.
///
/// `hyperplanes[i][j]` strictly separates `CH(a_groups[i])` (positive side)
/// from `CH(b_groups[j])`; row `i` is the polyhedron `K_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub a_groups: Vec<Subset>,
    pub b_groups: Vec<Subset>,
    pub hyperplanes: Vec<Vec<Hyperplane>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StOutcome {
    Separable(SeparationCertificate),
    Inseparable(Exhaustion),
}

impl StOutcome {
    pub fn is_separable(&self) -> bool {
        matches!(self, StOutcome::Separable(_))
    }
}

fn check_groups(ps: &PointSet, a: Subset, b: Subset, s: usize, t: usize) -> Result<()> {
    ps.check_subset(a)?;
    ps.check_subset(b)?;
    if s == 0 || t == 0 {
        return input("group counts must be at least 1");
    }
    if !a.is_disjoint(b) {
        return input(format!("parts overlap in {}", a.intersect(b)));
    }
    Ok(())
}

struct StSearch<'o, 'a> {
    oracle: &'o HullOracle<'a>,
    a: Vec<usize>,
    b: Vec<usize>,
    s: usize,
    t: usize,
    b_total: u128,
    covered: u128,
    pruned: u64,
}

impl StSearch<'_, '_> {
    fn hits_b(&self, x: Subset) -> Result<bool> {
        for &q in &self.b {
            if self.oracle.intersects(&[x, Subset::singleton(q)])? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn dfs_a(&mut self, k: usize, xs: &mut Vec<Subset>) -> Result<Option<(Vec<Subset>, Vec<Subset>)>> {
        if k == self.a.len() {
            let mut ys = Vec::new();
            return Ok(self.dfs_b(0, xs, &mut ys)?.map(|ys| (xs.clone(), ys)));
        }
        let p = self.a[k];
        let used = xs.len();
        for j in 0..=used.min(self.s - 1) {
            if j == used {
                xs.push(Subset::singleton(p));
            } else {
                xs[j].insert(p);
            }
            if self.hits_b(xs[j])? {
                let rest = completions(self.a.len() - k - 1, xs.len(), self.s);
                self.covered += rest.saturating_mul(self.b_total);
                self.pruned += 1;
            } else if let Some(found) = self.dfs_a(k + 1, xs)? {
                return Ok(Some(found));
            }
            if j == used {
                xs.pop();
            } else {
                xs[j] = xs[j].minus(Subset::singleton(p));
            }
        }
        Ok(None)
    }

    fn dfs_b(&mut self, k: usize, xs: &[Subset], ys: &mut Vec<Subset>) -> Result<Option<Vec<Subset>>> {
        if k == self.b.len() {
            return Ok(Some(ys.clone()));
        }
        let q = self.b[k];
        let used = ys.len();
        for j in 0..=used.min(self.t - 1) {
            if j == used {
                ys.push(Subset::singleton(q));
            } else {
                ys[j].insert(q);
            }
            let mut meets = false;
            for &x in xs {
                if self.oracle.intersects(&[x, ys[j]])? {
                    meets = true;
                    break;
                }
            }
            if meets {
                self.covered += completions(self.b.len() - k - 1, ys.len(), self.t);
                self.pruned += 1;
            } else if let Some(found) = self.dfs_b(k + 1, xs, ys)? {
                return Ok(Some(found));
            }
            if j == used {
                ys.pop();
            } else {
                ys[j] = ys[j].minus(Subset::singleton(q));
            }
        }
        Ok(None)
    }
}

/// Decides whether some union of `≤ s` convex sets containing `A` misses
/// some union of `≤ t` convex sets containing `B`.
///
/// Groupings are enumerated in restricted-growth order, `A` first. An empty
/// side is separable with no groups.
pub fn st_separable_with(oracle: &HullOracle, a: Subset, b: Subset, s: usize, t: usize) -> Result<StOutcome> {
    let ps = oracle.points();
    check_groups(ps, a, b, s, t)?;
    if a.is_empty() || b.is_empty() {
        let groups = |x: Subset| if x.is_empty() { vec![] } else { vec![x] };
        let (a_groups, b_groups) = (groups(a), groups(b));
        let hyperplanes = vec![Vec::new(); a_groups.len()];
        return Ok(StOutcome::Separable(SeparationCertificate {
            a_groups,
            b_groups,
            hyperplanes,
        }));
    }
    let a_total = partitions_at_most(a.len(), s);
    let b_total = partitions_at_most(b.len(), t);
    let mut search = StSearch {
        oracle,
        a: a.to_vec(),
        b: b.to_vec(),
        s,
        t,
        b_total,
        covered: 0,
        pruned: 0,
    };
    match search.dfs_a(0, &mut Vec::new())? {
        Some((xs, ys)) => {
            let hyperplanes = build_k_polyhedra(ps, &xs, &ys)?;
            Ok(StOutcome::Separable(SeparationCertificate {
                a_groups: xs,
                b_groups: ys,
                hyperplanes,
            }))
        }
        None => {
            let ex = Exhaustion {
                total: a_total.saturating_mul(b_total),
                covered: search.covered,
                pruned: search.pruned,
                cap: 0,
            };
            if !ex.is_complete() {
                return Err(Error::Invariant(format!(
                    "separability search covered {} of {} groupings",
                    ex.covered, ex.total
                )));
            }
            Ok(StOutcome::Inseparable(ex))
        }
    }
}

pub fn st_separable(ps: &PointSet, a: Subset, b: Subset, s: usize, t: usize) -> Result<StOutcome> {
    st_separable_with(&HullOracle::new(ps), a, b, s, t)
}

/// The separators `h_{i,j}` between every A-group `X_i` (positive side) and
/// every B-group `Y_j`; row `i` cuts out the polyhedron `K_i`.
pub fn build_k_polyhedra(ps: &PointSet, a_groups: &[Subset], b_groups: &[Subset]) -> Result<Vec<Vec<Hyperplane>>> {
    let mut out = Vec::with_capacity(a_groups.len());
    for &x in a_groups {
        let mut row = Vec::with_capacity(b_groups.len());
        for &y in b_groups {
            match strict_separator(ps, y, x)? {
                Separation::Separated(h) => row.push(h),
                Separation::Meet(meet) => {
                    return Err(Error::Precondition(format!(
                        "hulls of {x} and {y} meet at {}",
                        fmt_point(meet.point().map(|p| p.as_slice()).unwrap_or(&[]))
                    )))
                }
            }
        }
        out.push(row);
    }
    Ok(out)
}

pub(crate) fn fmt_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(crate::rational::format_rat).collect();
    format!("({})", parts.join(", "))
}

/// Blocks are nonempty, pairwise disjoint, at most `cap` of them, and their
/// union is `base`.
fn is_grouping(groups: &[Subset], base: Subset, cap: usize) -> bool {
    let mut seen = Subset::EMPTY;
    for &g in groups {
        if g.is_empty() || !g.is_disjoint(seen) {
            return false;
        }
        seen = seen.union(g);
    }
    groups.len() <= cap && seen == base
}

/// Re-checks a [`SeparationCertificate`] with exact sign evaluations only.
pub fn verify_separation(ps: &PointSet, a: Subset, b: Subset, s: usize, t: usize, cert: &SeparationCertificate) -> bool {
    if !is_grouping(&cert.a_groups, a, s) || !is_grouping(&cert.b_groups, b, t) {
        return false;
    }
    if cert.hyperplanes.len() != cert.a_groups.len() {
        return false;
    }
    if a.is_empty() || b.is_empty() {
        return cert.hyperplanes.iter().all(|r| r.is_empty());
    }
    let pt = |i: usize| ps.points[i].as_slice();
    for (x, row) in cert.a_groups.iter().zip(&cert.hyperplanes) {
        if row.len() != cert.b_groups.len() || row.len() > t {
            return false;
        }
        for (y, h) in cert.b_groups.iter().zip(row) {
            if h.normal.len() != ps.dim
                || !x.iter().all(|i| h.strictly_positive(pt(i)))
                || !y.iter().all(|i| h.strictly_negative(pt(i)))
            {
                return false;
            }
        }
    }
    // no B point in any K_i
    b.iter().all(|q| {
        cert.hyperplanes
            .iter()
            .all(|row| row.iter().any(|h| h.strictly_negative(pt(q))))
    })
}

/// Per-tuple witness that the chosen hulls have no common point. `groups`
/// lists some of the chosen blocks in increasing mask order, matching
/// `farkas`; an empty sub-intersection empties the whole tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleWitness {
    pub choice: Vec<usize>,
    pub groups: Vec<Subset>,
    #[serde(with = "serde_rat_vec")]
    pub farkas: Vec<Rat>,
}

/// Covers `C_i = ⋃ CH(groupings[i][j])` whose common intersection is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmptyIntersectionCertificate {
    pub groupings: Vec<Vec<Subset>>,
    pub tuples: Vec<TupleWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JointOutcome {
    Empty(EmptyIntersectionCertificate),
    Meets(Exhaustion),
}

impl JointOutcome {
    pub fn is_empty(&self) -> bool {
        matches!(self, JointOutcome::Empty(_))
    }
}

/// Every index vector `v` with `v[i] < radix[i]`, in lexicographic order.
pub(crate) fn mixed_radix(radix: &[usize]) -> Vec<Vec<usize>> {
    if radix.iter().any(|&r| r == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut v = vec![0; radix.len()];
    loop {
        out.push(v.clone());
        let mut i = radix.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < radix[i] {
                break;
            }
            v[i] = 0;
        }
    }
}

struct JointSearch<'o, 'a> {
    oracle: &'o HullOracle<'a>,
    parts: Vec<Vec<usize>>,
    s_list: Vec<usize>,
    covered: u128,
    pruned: u64,
}

impl JointSearch<'_, '_> {
    fn dfs(&mut self, c: usize, k: usize, gs: &mut Vec<Vec<Subset>>) -> Result<bool> {
        let r = self.parts.len();
        if k == self.parts[c].len() {
            if c + 1 == r {
                return Ok(true);
            }
            gs.push(Vec::new());
            if self.dfs(c + 1, 0, gs)? {
                return Ok(true);
            }
            gs.pop();
            return Ok(false);
        }
        let p = self.parts[c][k];
        let cap = self.s_list[c];
        let used = gs[c].len();
        for j in 0..=used.min(cap - 1) {
            if j == used {
                gs[c].push(Subset::singleton(p));
            } else {
                gs[c][j].insert(p);
            }
            let bad = c + 1 == r && self.tuple_meets(gs, gs[c][j])?;
            if bad {
                self.covered += completions(self.parts[c].len() - k - 1, gs[c].len(), cap);
                self.pruned += 1;
            } else if self.dfs(c, k + 1, gs)? {
                return Ok(true);
            }
            if j == used {
                gs[c].pop();
            } else {
                gs[c][j] = gs[c][j].minus(Subset::singleton(p));
            }
        }
        Ok(false)
    }

    /// Does `y` together with some choice of earlier blocks have a common
    /// point?
    fn tuple_meets(&self, gs: &[Vec<Subset>], y: Subset) -> Result<bool> {
        let r = self.parts.len();
        let radix: Vec<usize> = gs[..r - 1].iter().map(|g| g.len()).collect();
        for choice in mixed_radix(&radix) {
            let mut groups: Vec<Subset> = choice.iter().enumerate().map(|(i, &j)| gs[i][j]).collect();
            groups.push(y);
            if self.oracle.intersects(&groups)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn check_parts(ps: &PointSet, parts: &[Subset], s_list: &[usize]) -> Result<()> {
    if parts.len() < 2 {
        return input("at least two parts are required");
    }
    if s_list.len() != parts.len() {
        return input(format!("{} group counts for {} parts", s_list.len(), parts.len()));
    }
    if s_list.iter().any(|&s| s == 0) {
        return input("group counts must be at least 1");
    }
    let mut seen = Subset::EMPTY;
    for &p in parts {
        ps.check_subset(p)?;
        if !p.is_disjoint(seen) {
            return input("parts are not pairwise disjoint");
        }
        seen = seen.union(p);
    }
    Ok(())
}

/// Decides whether covers `C_i ⊇ parts[i]`, each a union of `≤ s_list[i]`
/// convex sets, can have empty common intersection.
pub fn joint_cover_empty_with(oracle: &HullOracle, parts: &[Subset], s_list: &[usize], cap: u128) -> Result<JointOutcome> {
    let ps = oracle.points();
    check_parts(ps, parts, s_list)?;
    if parts.iter().any(|p| p.is_empty()) {
        let groupings = parts
            .iter()
            .map(|&p| if p.is_empty() { vec![] } else { vec![p] })
            .collect();
        return Ok(JointOutcome::Empty(EmptyIntersectionCertificate {
            groupings,
            tuples: Vec::new(),
        }));
    }
    let total = parts
        .iter()
        .zip(s_list)
        .map(|(p, &s)| partitions_at_most(p.len(), s))
        .fold(1u128, u128::saturating_mul);
    check_cap("cover groupings", total, cap)?;
    let mut search = JointSearch {
        oracle,
        parts: parts.iter().map(|p| p.to_vec()).collect(),
        s_list: s_list.to_vec(),
        covered: 0,
        pruned: 0,
    };
    let mut gs = vec![Vec::new()];
    if search.dfs(0, 0, &mut gs)? {
        let radix: Vec<usize> = gs.iter().map(|g| g.len()).collect();
        let mut tuples = Vec::new();
        for choice in mixed_radix(&radix) {
            let chosen: Vec<Subset> = choice.iter().enumerate().map(|(i, &j)| gs[i][j]).collect();
            let groups = HullOracle::canonical(&chosen);
            match &*oracle.meet(&groups)? {
                HullMeet::Empty { farkas } => tuples.push(TupleWitness {
                    choice,
                    groups,
                    farkas: farkas.clone(),
                }),
                HullMeet::Common { .. } => {
                    return Err(Error::Invariant("accepted cover tuple has a common point".into()))
                }
            }
        }
        return Ok(JointOutcome::Empty(EmptyIntersectionCertificate { groupings: gs, tuples }));
    }
    let ex = Exhaustion {
        total,
        covered: search.covered,
        pruned: search.pruned,
        cap,
    };
    if !ex.is_complete() {
        return Err(Error::Invariant(format!(
            "cover search covered {} of {} groupings",
            ex.covered, ex.total
        )));
    }
    Ok(JointOutcome::Meets(ex))
}

pub fn joint_cover_empty(ps: &PointSet, parts: &[Subset], s_list: &[usize], cap: u128) -> Result<JointOutcome> {
    joint_cover_empty_with(&HullOracle::new(ps), parts, s_list, cap)
}

/// Re-checks an [`EmptyIntersectionCertificate`] against the point set.
pub fn verify_empty_intersection(ps: &PointSet, parts: &[Subset], s_list: &[usize], cert: &EmptyIntersectionCertificate) -> bool {
    if check_parts(ps, parts, s_list).is_err() || cert.groupings.len() != parts.len() {
        return false;
    }
    for ((g, &p), &s) in cert.groupings.iter().zip(parts).zip(s_list) {
        if !is_grouping(g, p, s) {
            return false;
        }
    }
    let radix: Vec<usize> = cert.groupings.iter().map(|g| g.len()).collect();
    let expect = mixed_radix(&radix);
    if expect.len() != cert.tuples.len() {
        return false;
    }
    expect.iter().zip(&cert.tuples).all(|(choice, w)| {
        let chosen: Vec<Subset> = choice.iter().enumerate().map(|(i, &j)| cert.groupings[i][j]).collect();
        w.choice == *choice
            && !w.groups.is_empty()
            && w.groups.windows(2).all(|g| g[0] < g[1])
            && w.groups.iter().all(|g| chosen.contains(g))
            && verify_meet(ps, &w.groups, &HullMeet::Empty { farkas: w.farkas.clone() })
    })
}

/// A partition none of whose cover families can be made disjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodPartition {
    pub parts: Vec<Subset>,
    pub s_list: Vec<usize>,
    /// Position of the partition in the search order.
    pub rank: usize,
    pub transcript: Exhaustion,
}

/// Proof that one candidate partition is not good.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    Separation {
        parts: Vec<Subset>,
        certificate: SeparationCertificate,
    },
    EmptyIntersection {
        parts: Vec<Subset>,
        certificate: EmptyIntersectionCertificate,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionSearch {
    Found(GoodPartition),
    /// Every candidate refuted, in search order.
    NoneFound { candidates: u128, refutations: Vec<Refutation> },
}

impl PartitionSearch {
    pub fn found(&self) -> Option<&GoodPartition> {
        match self {
            PartitionSearch::Found(g) => Some(g),
            PartitionSearch::NoneFound { .. } => None,
        }
    }
}

/// Nonempty proper subsets of `s`, by size and then by mask.
pub fn radon_candidates(s: Subset) -> Vec<Subset> {
    (1..s.len())
        .flat_map(|k| crate::subset::k_subsets(s, k))
        .collect()
}

/// First `A ⊂ S` (by size, then mask) such that every union of `≤ s` convex
/// sets containing `A` meets every union of `≤ t` convex sets containing
/// `S \ A`.
pub fn good_radon_partition_with(oracle: &HullOracle, set: Subset, s: usize, t: usize) -> Result<PartitionSearch> {
    oracle.points().check_subset(set)?;
    if set.len() < 2 {
        return input("a partition needs at least two points");
    }
    let cands = radon_candidates(set);
    let hit = cands
        .par_iter()
        .enumerate()
        .map(|(rank, &a)| (rank, a, st_separable_with(oracle, a, set.minus(a), s, t)))
        .find_map_first(|(rank, a, out)| match out {
            Err(e) => Some(Err(e)),
            Ok(StOutcome::Inseparable(ex)) => Some(Ok(GoodPartition {
                parts: vec![a, set.minus(a)],
                s_list: vec![s, t],
                rank,
                transcript: ex,
            })),
            Ok(StOutcome::Separable(_)) => None,
        });
    if let Some(found) = hit {
        return Ok(PartitionSearch::Found(found?));
    }
    let refutations = cands
        .par_iter()
        .map(|&a| match st_separable_with(oracle, a, set.minus(a), s, t)? {
            StOutcome::Separable(certificate) => Ok(Refutation::Separation {
                parts: vec![a, set.minus(a)],
                certificate,
            }),
            StOutcome::Inseparable(_) => Err(Error::Invariant("separability changed between passes".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionSearch::NoneFound {
        candidates: cands.len() as u128,
        refutations,
    })
}

pub fn good_radon_partition(ps: &PointSet, set: Subset, s: usize, t: usize) -> Result<PartitionSearch> {
    good_radon_partition_with(&HullOracle::new(ps), set, s, t)
}

/// Partitions of `set` into exactly `r` nonempty parts. With equal group
/// counts the parts are unordered (restricted-growth order); otherwise every
/// surjective labelling is listed in lexicographic order.
pub fn tverberg_candidates(set: Subset, r: usize, s_list: &[usize], cap: u128) -> Result<Vec<Vec<Subset>>> {
    let n = set.len();
    let symmetric = s_list.windows(2).all(|w| w[0] == w[1]);
    if symmetric {
        check_cap("r-partitions", crate::combinatorics::stirling2(n, r), cap)?;
        Ok(Rgs::new(n, r)
            .filter(|a| a.iter().max().map_or(r == 0, |&m| m + 1 == r))
            .map(|a| crate::combinatorics::blocks_of(set, &a))
            .collect())
    } else {
        let total = (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        check_cap("ordered r-partitions", total, cap)?;
        let idx = set.to_vec();
        let mut out = Vec::new();
        for lab in mixed_radix(&vec![r; n]) {
            let mut parts = vec![Subset::EMPTY; r];
            for (k, &c) in lab.iter().enumerate() {
                parts[c].insert(idx[k]);
            }
            if parts.iter().all(|p| !p.is_empty()) {
                out.push(parts);
            }
        }
        Ok(out)
    }
}

/// First `r`-partition of `set` whose parts cannot be covered by unions of
/// `≤ s_list[i]` convex sets with empty common intersection.
pub fn good_tverberg_partition_with(oracle: &HullOracle, set: Subset, r: usize, s_list: &[usize], cap: u128) -> Result<PartitionSearch> {
    oracle.points().check_subset(set)?;
    if r < 2 || s_list.len() != r {
        return input("need r >= 2 and one group count per part");
    }
    if set.len() < r {
        return input(format!("{} points cannot be split into {r} parts", set.len()));
    }
    let cands = tverberg_candidates(set, r, s_list, cap)?;
    let hit = cands
        .par_iter()
        .enumerate()
        .map(|(rank, parts)| (rank, parts, joint_cover_empty_with(oracle, parts, s_list, cap)))
        .find_map_first(|(rank, parts, out)| match out {
            Err(e) => Some(Err(e)),
            Ok(JointOutcome::Meets(ex)) => Some(Ok(GoodPartition {
                parts: parts.clone(),
                s_list: s_list.to_vec(),
                rank,
                transcript: ex,
            })),
            Ok(JointOutcome::Empty(_)) => None,
        });
    if let Some(found) = hit {
        return Ok(PartitionSearch::Found(found?));
    }
    let refutations = cands
        .par_iter()
        .map(|parts| match joint_cover_empty_with(oracle, parts, s_list, cap)? {
            JointOutcome::Empty(certificate) => Ok(Refutation::EmptyIntersection {
                parts: parts.clone(),
                certificate,
            }),
            JointOutcome::Meets(_) => Err(Error::Invariant("cover search changed between passes".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionSearch::NoneFound {
        candidates: cands.len() as u128,
        refutations,
    })
}

pub fn good_tverberg_partition(ps: &PointSet, set: Subset, r: usize, s_list: &[usize], cap: u128) -> Result<PartitionSearch> {
    good_tverberg_partition_with(&HullOracle::new(ps), set, r, s_list, cap)
}

/// Re-checks a refutation with kernel predicates only.
pub fn verify_refutation(ps: &PointSet, s_list: &[usize], refutation: &Refutation) -> bool {
    match refutation {
        Refutation::Separation { parts, certificate } => {
            parts.len() == 2
                && s_list.len() == 2
                && check_groups(ps, parts[0], parts[1], s_list[0], s_list[1]).is_ok()
                && verify_separation(ps, parts[0], parts[1], s_list[0], s_list[1], certificate)
        }
        Refutation::EmptyIntersection { parts, certificate } => {
            verify_empty_intersection(ps, parts, s_list, certificate)
        }
    }
}

/// Closed polyhedron `{x : normal·x >= offset}` for every facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polyhedron {
    pub facets: Vec<Hyperplane>,
}

impl Polyhedron {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|h| !h.strictly_negative(x))
    }
}

/// `classes[i][a]` is the polyhedron around group `a` of class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RSeparation {
    pub classes: Vec<Vec<Polyhedron>>,
}

impl RSeparation {
    pub fn max_facets(&self) -> usize {
        self.classes
            .iter()
            .flatten()
            .map(|p| p.facets.len())
            .max()
            .unwrap_or(0)
    }
}

/// Feasibility program of `Q = {x : rows hold} ∩ CH(hull_1) ∩ ...`.
/// Variables: `x` (free), then convex weights per hull.
fn target_lp(ps: &PointSet, rows: &[&Hyperplane], hulls: &[Subset]) -> LinearProgram {
    let d = ps.dim;
    let nl: usize = hulls.iter().map(|h| h.len()).sum();
    let mut vars = vec![VarKind::Free; d];
    vars.extend(std::iter::repeat(VarKind::NonNeg).take(nl));
    let mut lp = LinearProgram::new(vars);
    let nv = d + nl;
    for h in rows {
        let mut row = vec![Rat::zero(); nv];
        row[..d].clone_from_slice(&h.normal);
        lp.push(row, Relation::Ge, h.offset.clone());
    }
    let mut at = d;
    for g in hulls {
        for c in 0..d {
            let mut row = vec![Rat::zero(); nv];
            row[c] = Rat::one();
            for (k, i) in g.iter().enumerate() {
                row[at + k] = -ps.points[i][c].clone();
            }
            lp.push(row, Relation::Eq, Rat::zero());
        }
        let mut row = vec![Rat::zero(); nv];
        for k in 0..g.len() {
            row[at + k] = Rat::one();
        }
        lp.push(row, Relation::Eq, Rat::one());
        at += g.len();
    }
    lp
}

/// Hyperplane `w·x = b` with `CH(x_group)` in `w·x >= b + 1` and the target
/// `Q` in `w·x <= b - 1`, found through the dual description of `Q`.
///
/// Variables: `w`, `b` (free), `μ >= 0` per polyhedron row, `ν` (free) per
/// equality row of [`target_lp`].
fn separate_from_target(ps: &PointSet, x_group: Subset, rows: &[&Hyperplane], hulls: &[Subset]) -> Result<Option<Hyperplane>> {
    let d = ps.dim;
    let nm = rows.len();
    let ne: usize = hulls.len() * (d + 1);
    let nv = d + 1 + nm + ne;
    let (ib, im, ie) = (d, d + 1, d + 1 + nm);
    let mut vars = vec![VarKind::Free; d + 1];
    vars.extend(std::iter::repeat(VarKind::NonNeg).take(nm));
    vars.extend(std::iter::repeat(VarKind::Free).take(ne));
    let mut lp = LinearProgram::new(vars);
    for p in x_group.iter() {
        let mut row = vec![Rat::zero(); nv];
        row[..d].clone_from_slice(&ps.points[p]);
        row[ib] = -Rat::one();
        lp.push(row, Relation::Ge, Rat::one());
    }
    // ν for hull h: coordinate rows at ie + h(d+1) + c, weight row at +d
    for c in 0..d {
        let mut row = vec![Rat::zero(); nv];
        row[c] = -Rat::one();
        for (r, h) in rows.iter().enumerate() {
            row[im + r] = -h.normal[c].clone();
        }
        for h in 0..hulls.len() {
            row[ie + h * (d + 1) + c] = Rat::one();
        }
        lp.push(row, Relation::Eq, Rat::zero());
    }
    for (h, g) in hulls.iter().enumerate() {
        for p in g.iter() {
            let mut row = vec![Rat::zero(); nv];
            for c in 0..d {
                row[ie + h * (d + 1) + c] = -ps.points[p][c].clone();
            }
            row[ie + h * (d + 1) + d] = Rat::one();
            lp.push(row, Relation::Ge, Rat::zero());
        }
    }
    let mut row = vec![Rat::zero(); nv];
    for (r, h) in rows.iter().enumerate() {
        row[im + r] = -h.offset.clone();
    }
    for h in 0..hulls.len() {
        row[ie + h * (d + 1) + d] = Rat::one();
    }
    row[ib] = -Rat::one();
    lp.push(row, Relation::Le, -Rat::one());
    match lp_feasible(&lp)? {
        LpOutcome::Feasible(sol) => Ok(Some(Hyperplane::new(sol[..d].to_vec(), sol[ib].clone())?)),
        LpOutcome::Infeasible(_) => Ok(None),
    }
}

/// Sequentially replaces each cover `C_i` by a union of polyhedra `K_i`
/// separating it from the intersection of the other current sets.
///
/// Class `i` is separated from every nonempty
/// `K_{0,a_0} ∩ .. ∩ K_{i-1,a_{i-1}} ∩ CH(X_{i+1,b}) ∩ ..`, so each
/// polyhedron has at most `Π_{j≠i} |covers[j]|` facets.
pub fn build_r_separation(ps: &PointSet, covers: &[Vec<Subset>]) -> Result<RSeparation> {
    if covers.len() < 2 {
        return input("at least two covers are required");
    }
    for g in covers.iter().flatten() {
        ps.check_subset(*g)?;
        if g.is_empty() {
            return input("cover groups must be nonempty");
        }
    }
    let r = covers.len();
    let mut built: Vec<Vec<Polyhedron>> = Vec::with_capacity(r);
    for i in 0..r {
        let radix: Vec<usize> = (0..r)
            .filter(|&j| j != i)
            .map(|j| covers[j].len())
            .collect();
        let tuples = mixed_radix(&radix);
        let mut class = Vec::with_capacity(covers[i].len());
        for &x in &covers[i] {
            let mut facets: Vec<Hyperplane> = Vec::new();
            for choice in &tuples {
                let mut rows: Vec<&Hyperplane> = Vec::new();
                let mut hulls: Vec<Subset> = Vec::new();
                for (k, j) in (0..r).filter(|&j| j != i).enumerate() {
                    if j < i {
                        rows.extend(built[j][choice[k]].facets.iter());
                    } else {
                        hulls.push(covers[j][choice[k]]);
                    }
                }
                if !lp_feasible(&target_lp(ps, &rows, &hulls))?.is_feasible() {
                    continue;
                }
                let Some(h) = separate_from_target(ps, x, &rows, &hulls)? else {
                    return Err(Error::Precondition(format!(
                        "group {x} of class {i} meets the intersection of the other sets"
                    )));
                };
                if !facets.contains(&h) {
                    facets.push(h);
                }
            }
            class.push(Polyhedron { facets });
        }
        built.push(class);
    }
    Ok(RSeparation { classes: built })
}

/// Outcome of re-checking an [`RSeparation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RSeparationCheck {
    pub covers_contained: bool,
    pub joint_empty: bool,
    pub max_facets: usize,
    pub facet_bound: u128,
}

impl RSeparationCheck {
    pub fn pass(&self) -> bool {
        self.covers_contained && self.joint_empty && self.max_facets as u128 <= self.facet_bound
    }
}

/// Checks `C_i ⊆ K_i`, the facet bound `s^(r-1)` and, with a Farkas
/// certificate per component tuple, `⋂ K_i = ∅`.
pub fn verify_r_separation(ps: &PointSet, covers: &[Vec<Subset>], sep: &RSeparation) -> Result<RSeparationCheck> {
    let r = covers.len();
    if sep.classes.len() != r || sep.classes.iter().zip(covers).any(|(k, c)| k.len() != c.len()) {
        return input("separation shape differs from the covers");
    }
    let s = covers.iter().map(|c| c.len()).max().unwrap_or(0) as u128;
    let covers_contained = covers.iter().zip(&sep.classes).all(|(cs, ks)| {
        cs.iter()
            .zip(ks)
            .all(|(g, k)| g.iter().all(|p| k.contains(&ps.points[p])))
    });
    let radix: Vec<usize> = sep.classes.iter().map(|c| c.len()).collect();
    let mut joint_empty = true;
    for choice in mixed_radix(&radix) {
        let rows: Vec<&Hyperplane> = choice
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| sep.classes[i][a].facets.iter())
            .collect();
        let lp = target_lp(ps, &rows, &[]);
        let out = lp_feasible(&lp)?;
        if out.is_feasible() || !lp.check(&out) {
            joint_empty = false;
            break;
        }
    }
    Ok(RSeparationCheck {
        covers_contained,
        joint_empty,
        max_facets: sep.max_facets(),
        facet_bound: s.saturating_pow(r as u32 - 1),
    })
}

/// Facet counts of an [`RSeparation`] next to the refined target for covers
/// whose components are `(ℓ+1)`-wise disjoint. Reported, never asserted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetAudit {
    pub r: usize,
    pub s: usize,
    pub d: usize,
    /// Largest number of groups of one class with a common point.
    pub ell: usize,
    pub max_facets: usize,
    pub sequential_bound: u128,
    /// `Σ_{i<=d} C(r-1, i) s^i ℓ^(r-1-i)`.
    pub refined_target: u128,
}

pub fn facet_audit(oracle: &HullOracle, covers: &[Vec<Subset>], sep: &RSeparation) -> Result<FacetAudit> {
    let ps = oracle.points();
    let r = covers.len();
    let s = covers.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut ell = 1;
    for cls in covers {
        for mask in 1u64..(1u64 << cls.len()) {
            let sub = Subset(mask);
            if sub.len() <= ell {
                continue;
            }
            let groups: Vec<Subset> = sub.iter().map(|k| cls[k]).collect();
            if oracle.intersects(&groups)? {
                ell = sub.len();
            }
        }
    }
    let d = ps.dim;
    let refined_target = (0..=d.min(r - 1))
        .map(|i| {
            binomial((r - 1) as u64, i as u64)
                .saturating_mul((s as u128).saturating_pow(i as u32))
                .saturating_mul((ell as u128).saturating_pow((r - 1 - i) as u32))
        })
        .fold(0u128, u128::saturating_add);
    Ok(FacetAudit {
        r,
        s,
        d,
        ell,
        max_facets: sep.max_facets(),
        sequential_bound: (s as u128).saturating_pow(r as u32 - 1),
        refined_target,
    })
}
