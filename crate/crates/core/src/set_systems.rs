//! Finite set systems and shattering: VC-dimension, the primal shatter
//! function, realizable r-partitions and the r-VC-dimension.
//!
//! Everything here is exhaustive. Searches that can blow up take an explicit
//! cap and fail with [`Error::Resource`] instead of sampling.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{falling, set_partitions};
use crate::error::{check_cap, input, Error, Result};
use crate::subset::{binomial, k_subsets, Subset, MAX_GROUND};

/// Default cap on the number of subsets or partitions a search may visit.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// A hypergraph on `{0, .., n-1}` with deduplicated, sorted edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetSystemJson", into = "SetSystemJson")]
pub struct SetSystem {
    n: usize,
    edges: Vec<Subset>,
    meta: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct SetSystemJson {
    n: usize,
    edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    meta: BTreeMap<String, String>,
}

impl TryFrom<SetSystemJson> for SetSystem {
    type Error = Error;

    fn try_from(j: SetSystemJson) -> Result<Self> {
        let edges = j
            .edges
            .iter()
            .map(|e| Subset::try_from_indices(e, j.n))
            .collect::<Result<Vec<_>>>()?;
        let mut s = SetSystem::new(j.n, edges)?;
        s.meta = j.meta;
        Ok(s)
    }
}

impl From<SetSystem> for SetSystemJson {
    fn from(s: SetSystem) -> Self {
        SetSystemJson {
            n: s.n,
            edges: s.edges.iter().map(|e| e.to_vec()).collect(),
            meta: s.meta,
        }
    }
}

impl SetSystem {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Subset>) -> Result<Self> {
        if n > MAX_GROUND {
            return input(format!("ground set of {n} exceeds {MAX_GROUND}"));
        }
        let full = Subset::full(n);
        let mut edges: Vec<Subset> = edges.into_iter().collect();
        if let Some(e) = edges.iter().find(|e| !e.is_subset_of(full)) {
            return input(format!("edge {e} is not within 0..{n}"));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(SetSystem {
            n,
            edges,
            meta: BTreeMap::new(),
        })
    }

    /// Every subset of `{0, .., n-1}`.
    pub fn power_set(n: usize) -> Self {
        SetSystem::new(n, crate::subset::all_subsets(Subset::full(n))).expect("valid")
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn edges(&self) -> &[Subset] {
        &self.edges
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("set system JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set systems always serialize")
    }

    /// Distinct traces `e ∩ S`, compressed onto the positions of `S`, sorted.
    pub fn traces_on(&self, s: Subset) -> Vec<u64> {
        let mut t: Vec<u64> = self.edges.iter().map(|e| e.intersect(s).compress(s)).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// The same system after renaming vertex `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        SetSystem::new(self.n, self.edges.iter().map(|e| e.relabel(perm))).expect("permutation")
    }

    fn check(&self, s: Subset) -> Result<()> {
        if !s.is_subset_of(self.ground()) {
            return input(format!("{s} is not within the ground set 0..{}", self.n));
        }
        Ok(())
    }
}

/// True iff every `T ⊆ S` is `e ∩ S` for some edge.
pub fn is_shattered(sys: &SetSystem, s: Subset) -> bool {
    let k = s.len();
    if k >= 64 || (sys.edges.len() as u128) < 1u128 << k {
        return false;
    }
    sys.traces_on(s).len() as u128 == 1u128 << k
}

/// Size of the largest shattered set, with the smallest such set (by mask).
///
/// Shattered sets are closed under taking subsets, so the search grows them
/// level by level and only tries `S + v` when every `|S|`-subset of it was
/// shattered. A system with no edges shatters nothing; its dimension is
/// reported as 0 with an empty witness.
pub fn vc_dim_witness(sys: &SetSystem) -> (usize, Subset) {
    if sys.edges.is_empty() {
        return (0, Subset::EMPTY);
    }
    let mut level: Vec<Subset> = vec![Subset::EMPTY];
    let mut dim = 0;
    loop {
        let next = grow_level(&level, sys.n, |c| is_shattered(sys, c));
        if next.is_empty() {
            return (dim, level[0]);
        }
        dim += 1;
        level = next;
    }
}

pub fn vc_dim(sys: &SetSystem) -> usize {
    vc_dim_witness(sys).0
}

/// Next level of a downward-closed family: candidates `S + v` (`v` above
/// `max S`) whose every one-smaller subset is in `level`, kept when `keep`
/// accepts them. Result is sorted.
fn grow_level(level: &[Subset], n: usize, keep: impl Fn(Subset) -> bool + Sync) -> Vec<Subset> {
    let members: HashSet<Subset> = level.iter().copied().collect();
    let mut cands = Vec::new();
    for &s in level {
        let start = s.iter().last().map_or(0, |m| m + 1);
        for v in start..n {
            let c = s.with(v);
            if c.iter().all(|x| members.contains(&c.minus(Subset::singleton(x)))) {
                cands.push(c);
            }
        }
    }
    let mut out: Vec<Subset> = cands.into_par_iter().filter(|&c| keep(c)).collect();
    out.sort_unstable();
    out
}

/// `π_H(m)`: the largest number of distinct traces on an `m`-subset.
pub fn primal_shatter(sys: &SetSystem, m: usize, cap: u128) -> Result<u128> {
    if m > sys.n {
        return input(format!("m = {m} exceeds ground size {}", sys.n));
    }
    check_cap("m-subsets for the primal shatter function", binomial(sys.n as u64, m as u64), cap)?;
    Ok(k_subsets(sys.ground(), m)
        .into_par_iter()
        .map(|s| sys.traces_on(s).len() as u128)
        .max()
        .unwrap_or(0))
}

/// `Σ_{i<=d} C(m, i)`.
pub fn sauer_bound(d: usize, m: usize) -> u128 {
    (0..=d.min(m)).map(|i| binomial(m as u64, i as u64)).sum()
}

/// One row of a shatter profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub m: usize,
    pub computed: u128,
    pub bound: u128,
    pub pass: bool,
}

/// Computed shatter-function values against their binomial bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterProfile {
    /// Dimension the bound was evaluated with (VC- or r-VC-dimension).
    pub dim: usize,
    /// Number of parts, `None` for the ordinary shatter function.
    pub r: Option<usize>,
    pub rows: Vec<ProfileRow>,
}

impl ShatterProfile {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let kind = match self.r {
            None => "shatter-profile".to_string(),
            Some(r) => format!("r-shatter-profile r={r}"),
        };
        writeln!(s, "# {kind} v1 dim={}", self.dim).unwrap();
        writeln!(s, "m,computed,bound,pass").unwrap();
        for row in &self.rows {
            writeln!(s, "{},{},{},{}", row.m, row.computed, row.bound, row.pass).unwrap();
        }
        s
    }
}

/// Evaluates `π_H(m)` against the Sauer–Shelah–Perles bound for
/// `m = 0..=m_max`. A failing row means a bug, not a counterexample.
pub fn check_sauer(sys: &SetSystem, m_max: usize, cap: u128) -> Result<ShatterProfile> {
    let d = vc_dim(sys);
    let mut rows = Vec::new();
    for m in 0..=m_max.min(sys.n) {
        let computed = primal_shatter(sys, m, cap)?;
        let bound = sauer_bound(d, m);
        rows.push(ProfileRow {
            m,
            computed,
            bound,
            pass: computed <= bound,
        });
    }
    Ok(ShatterProfile { dim: d, r: None, rows })
}

/// An ordered partition of `base` into `r` pairwise disjoint, possibly empty
/// parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RPartition {
    pub base: Subset,
    pub parts: Vec<Subset>,
}

impl RPartition {
    pub fn new(base: Subset, parts: Vec<Subset>) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        for p in &parts {
            if !p.is_disjoint(seen) {
                return input("parts are not pairwise disjoint");
            }
            seen = seen.union(*p);
        }
        if seen != base {
            return input("parts do not cover the base set exactly");
        }
        Ok(RPartition { base, parts })
    }

    /// Part `i` gets the points `j` with `labels[k] = i` (k-th smallest of base).
    pub fn from_labels(base: Subset, r: usize, labels: &[usize]) -> Self {
        let mut parts = vec![Subset::EMPTY; r];
        for (k, i) in base.iter().enumerate() {
            parts[labels[k]].insert(i);
        }
        RPartition { base, parts }
    }
}

/// Realizability queries against the traces of one fixed set `S`.
pub(crate) struct Realizer {
    traces: Vec<u64>,
}

impl Realizer {
    pub(crate) fn new(sys: &SetSystem, s: Subset) -> Self {
        Realizer {
            traces: sys.traces_on(s),
        }
    }

    /// Inclusion-minimal traces containing `part` (compressed bits).
    fn minimal_covers(&self, part: u64) -> Vec<u64> {
        let sup: Vec<u64> = self.traces.iter().copied().filter(|t| t & part == part).collect();
        sup.iter()
            .copied()
            .filter(|&t| !sup.iter().any(|&u| u != t && u & t == u))
            .collect()
    }

    /// Edges (as traces) witnessing that the compressed parts are realizable.
    pub(crate) fn witness(&self, parts: &[u64], width: usize) -> Option<Vec<u64>> {
        let mut cands: Vec<(usize, Vec<u64>)> = parts
            .iter()
            .enumerate()
            .map(|(i, &p)| (i, self.minimal_covers(p)))
            .collect();
        if cands.iter().any(|(_, c)| c.is_empty()) {
            return None;
        }
        cands.sort_by_key(|(i, c)| (c.len(), *i));
        let full = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
        let mut chosen = vec![0u64; parts.len()];
        fn dfs(cands: &[(usize, Vec<u64>)], at: usize, acc: u64, chosen: &mut [u64]) -> bool {
            if at == cands.len() {
                return acc == 0;
            }
            let (i, list) = &cands[at];
            for &t in list {
                chosen[*i] = t;
                if dfs(cands, at + 1, acc & t, chosen) {
                    return true;
                }
            }
            false
        }
        dfs(&cands, 0, full, &mut chosen).then_some(chosen)
    }
}

/// True iff edges `e_i ⊇ S_i` exist with `S ∩ ⋂ e_i = ∅`.
pub fn is_realizable(sys: &SetSystem, part: &RPartition) -> bool {
    realizing_edges(sys, part).is_some()
}

/// Edges witnessing realizability (one per part), if any.
pub fn realizing_edges(sys: &SetSystem, part: &RPartition) -> Option<Vec<Subset>> {
    let s = part.base;
    let rz = Realizer::new(sys, s);
    let parts: Vec<u64> = part.parts.iter().map(|p| p.compress(s)).collect();
    let traces = rz.witness(&parts, s.len())?;
    Some(
        traces
            .iter()
            .map(|&t| {
                *sys.edges
                    .iter()
                    .find(|e| e.intersect(s).compress(s) == t)
                    .expect("trace comes from an edge")
            })
            .collect(),
    )
}

/// Realizability of every unordered partition of `S` into at most `r`
/// blocks (padded with empty parts), in RGS order; `(blocks, realizable)`.
fn for_each_partition<F>(sys: &SetSystem, s: Subset, r: usize, mut f: F)
where
    F: FnMut(&[Subset], bool) -> bool,
{
    let rz = Realizer::new(sys, s);
    for blocks in set_partitions(s, r) {
        let mut parts: Vec<u64> = blocks.iter().map(|b| b.compress(s)).collect();
        parts.resize(r, 0);
        let ok = rz.witness(&parts, s.len()).is_some();
        if !f(&blocks, ok) {
            return;
        }
    }
}

/// True iff every partition of `S` into `r` parts is realizable.
///
/// Realizability does not depend on the order of the parts, so the check
/// runs over unordered partitions (at most `r` nonempty blocks).
pub fn is_r_shattered(sys: &SetSystem, s: Subset, r: usize) -> Result<bool> {
    if r < 2 {
        return input("r must be at least 2");
    }
    sys.check(s)?;
    let mut all = true;
    for_each_partition(sys, s, r, |_, ok| {
        all &= ok;
        ok
    });
    Ok(all)
}

/// Largest `r`-shattered set size.
///
/// r-shattered sets are closed under subsets (extend a partition of the
/// subset by putting the extra points into any part), so the search is
/// level-wise like [`vc_dim`]. `cap` bounds the total number of partition
/// checks.
pub fn r_vc_dim(sys: &SetSystem, r: usize, cap: u128) -> Result<usize> {
    if r < 2 {
        return input("r must be at least 2");
    }
    if sys.edges.is_empty() || !is_r_shattered(sys, Subset::EMPTY, r)? {
        return Ok(0);
    }
    let mut level = vec![Subset::EMPTY];
    let mut dim = 0;
    let mut spent: u128 = 0;
    loop {
        let k = dim + 1;
        let per = crate::combinatorics::partitions_at_most(k, r);
        let bound = binomial(sys.n as u64, k as u64).min(level.len() as u128 * sys.n as u128);
        spent = spent.saturating_add(per.saturating_mul(bound));
        check_cap("partition checks for the r-VC-dimension", spent, cap)?;
        let next = grow_level(&level, sys.n, |c| is_r_shattered(sys, c, r).unwrap_or(false));
        if next.is_empty() {
            return Ok(dim);
        }
        dim = k;
        level = next;
    }
}

/// Number of realizable ordered `r`-partitions of `S` (parts may be empty).
///
/// Counted over unordered partitions: one with `j` nonempty blocks stands for
/// `r·(r-1)···(r-j+1)` ordered ones.
pub fn count_realizable(sys: &SetSystem, s: Subset, r: usize, cap: u128) -> Result<u128> {
    if r < 2 {
        return input("r must be at least 2");
    }
    sys.check(s)?;
    let total = (r as u128).checked_pow(s.len() as u32).unwrap_or(u128::MAX);
    check_cap("ordered r-partitions", total, cap)?;
    let mut count = 0u128;
    for_each_partition(sys, s, r, |blocks, ok| {
        if ok {
            count += falling(r, blocks.len());
        }
        true
    });
    Ok(count)
}

/// `Σ_{i<=t} C(m, i) (r-1)^(m-i)`.
pub fn r_shatter_bound(t: usize, m: usize, r: usize) -> u128 {
    (0..=t.min(m))
        .map(|i| {
            binomial(m as u64, i as u64)
                .saturating_mul(((r - 1) as u128).saturating_pow((m - i) as u32))
        })
        .fold(0u128, u128::saturating_add)
}

/// `π_r(m)` for `m = 0..=m_max` against the r-shatter bound with
/// `t = r_vc_dim`.
pub fn check_r_shatter(sys: &SetSystem, r: usize, m_max: usize, cap: u128) -> Result<ShatterProfile> {
    let t = r_vc_dim(sys, r, cap)?;
    let mut rows = Vec::new();
    for m in 0..=m_max.min(sys.n) {
        check_cap("m-subsets for the r-shatter function", binomial(sys.n as u64, m as u64), cap)?;
        let mut computed = 0;
        for s in k_subsets(sys.ground(), m) {
            computed = computed.max(count_realizable(sys, s, r, cap)?);
        }
        let bound = r_shatter_bound(t, m, r);
        rows.push(ProfileRow {
            m,
            computed,
            bound,
            pass: computed <= bound,
        });
    }
    Ok(ShatterProfile {
        dim: t,
        r: Some(r),
        rows,
    })
}

/// Least `f` with `(Σ_{i<=d} C(f,i))^r · (r-1)^f < r^f`.
///
/// No set of `f` vertices of a VC-dimension-`d` system is `r`-shattered, so
/// the r-VC-dimension is at most `f - 1`. `d = 0` is accepted and gives 1.
pub fn min_f_counting(d: usize, r: usize) -> Result<u64> {
    if r < 2 {
        return input("r must be at least 2");
    }
    let rb = BigUint::from(r);
    let rm1 = BigUint::from(r - 1);
    let mut f: u64 = 0;
    loop {
        f += 1;
        let mut sum = BigUint::zero();
        let mut c = BigUint::one();
        for i in 0..=d as u64 {
            if i > f {
                break;
            }
            if i > 0 {
                c = c * BigUint::from(f - i + 1) / BigUint::from(i);
            }
            sum += &c;
        }
        let lhs = sum.pow(r as u32) * rm1.pow(f as u32);
        if lhs < rb.pow(f as u32) {
            return Ok(f);
        }
        if f > 1_000_000 {
            return Err(Error::Invariant("counting criterion did not terminate".into()));
        }
    }
}
