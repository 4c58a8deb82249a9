//! Trace families of geometric ranges on a finite point set: halfspaces,
//! polyhedra with at most `t` facets, and unions of `s` such polyhedra.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, input, Result};
use crate::geometry::{hulls_common_point, PointSet};
use crate::set_systems::SetSystem;
use crate::subset::{all_subsets, Subset};

/// Largest point set [`halfspace_traces`] accepts by default.
pub const DEFAULT_MAX_POINTS: usize = 18;

/// Default cap on the size of a closed trace family.
pub const DEFAULT_FAMILY_CAP: u128 = 1 << 20;

/// Distinct traces of some range family on `n` indexed points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFamily {
    pub n: usize,
    /// Sorted by mask.
    pub traces: Vec<Subset>,
    /// `halfspace`, then `intersect:t` and `union:s` steps joined by `|`.
    pub provenance: String,
}

impl TraceFamily {
    pub fn new(n: usize, traces: impl IntoIterator<Item = Subset>, provenance: String) -> Self {
        let mut traces: Vec<Subset> = traces.into_iter().collect();
        traces.sort_unstable();
        traces.dedup();
        TraceFamily {
            n,
            traces,
            provenance,
        }
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.traces.binary_search(&s).is_ok()
    }

    pub fn to_set_system(&self) -> SetSystem {
        SetSystem::new(self.n, self.traces.iter().copied())
            .expect("traces lie in the ground set")
            .with_meta("provenance", self.provenance.clone())
    }
}

/// Subsets `S` with `CH(S) ∩ CH(P \ S) = ∅`, which for a finite set are
/// exactly the traces of open (equivalently closed) halfspaces.
pub fn halfspace_traces(ps: &PointSet) -> Result<TraceFamily> {
    halfspace_traces_capped(ps, DEFAULT_MAX_POINTS)
}

pub fn halfspace_traces_capped(ps: &PointSet, max_points: usize) -> Result<TraceFamily> {
    let n = ps.len();
    check_cap("points for halfspace trace enumeration", n as u128, max_points as u128)?;
    let full = ps.all();
    let mut traces = vec![Subset::EMPTY, full];
    if n >= 2 {
        // complement-closed: only test sets holding point 0
        let rest = full.minus(Subset::singleton(0));
        let found: Vec<Subset> = all_subsets(rest)
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter_map(|r| {
                let s = r.with(0);
                if s == full {
                    return None;
                }
                let disjoint = hulls_common_point(ps, &[s, full.minus(s)])
                    .expect("nonempty groups")
                    .is_empty();
                disjoint.then_some(s)
            })
            .collect();
        for s in found {
            traces.push(s);
            traces.push(full.minus(s));
        }
    }
    Ok(TraceFamily::new(n, traces, "halfspace".into()))
}

/// Closure of `base` under up to `k - 1` applications of `op` with a member of
/// `base`, plus `extra`.
fn close(base: &[Subset], k: usize, extra: Subset, cap: u128, op: fn(Subset, Subset) -> Subset, what: &str) -> Result<Vec<Subset>> {
    let mut seen: HashSet<Subset> = base.iter().copied().collect();
    seen.insert(extra);
    let mut frontier: Vec<Subset> = base.to_vec();
    for _ in 1..k {
        let mut next = Vec::new();
        for &x in &frontier {
            for &e in base {
                let y = op(x, e);
                if seen.insert(y) {
                    next.push(y);
                }
            }
            check_cap(what, seen.len() as u128, cap)?;
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

/// All intersections of 1 to `t` traces, plus the full set.
pub fn intersect_close(tf: &TraceFamily, t: usize, cap: u128) -> Result<TraceFamily> {
    if t == 0 {
        return input("t must be at least 1");
    }
    let out = close(&tf.traces, t, Subset::full(tf.n), cap, Subset::intersect, "traces of polyhedra")?;
    Ok(TraceFamily::new(tf.n, out, format!("{}|intersect:{t}", tf.provenance)))
}

/// All unions of 1 to `s` traces, plus the empty set.
pub fn union_close(tf: &TraceFamily, s: usize, cap: u128) -> Result<TraceFamily> {
    if s == 0 {
        return input("s must be at least 1");
    }
    let out = close(&tf.traces, s, Subset::EMPTY, cap, Subset::union, "traces of unions of polyhedra")?;
    Ok(TraceFamily::new(tf.n, out, format!("{}|union:{s}", tf.provenance)))
}

/// Traces of unions of at most `s` polyhedra with at most `t` facets each.
pub fn build_union_polytope_system(ps: &PointSet, s: usize, t: usize) -> Result<SetSystem> {
    let h = halfspace_traces(ps)?;
    let k = intersect_close(&h, t, DEFAULT_FAMILY_CAP)?;
    Ok(union_close(&k, s, DEFAULT_FAMILY_CAP)?.to_set_system())
}

/// Point indices in increasing coordinate order for a 1-dimensional set of
/// distinct points.
pub fn line_order(ps: &PointSet) -> Result<Vec<usize>> {
    if ps.dim != 1 {
        return input(format!("expected points on a line, got dimension {}", ps.dim));
    }
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_by(|&a, &b| ps.points[a][0].cmp(&ps.points[b][0]));
    if order.windows(2).any(|w| ps.points[w[0]][0] == ps.points[w[1]][0]) {
        return input("points on the line must be pairwise distinct");
    }
    Ok(order)
}

/// Unions of at most `s` runs of consecutive points along the line, plus ∅.
pub fn interval_union_traces(ps: &PointSet, s: usize) -> Result<SetSystem> {
    let order = line_order(ps)?;
    let n = order.len();
    let mut out = vec![Subset::EMPTY];
    // runs start at `from` or later; `acc` already holds `used` runs
    fn rec(order: &[usize], from: usize, used: usize, s: usize, acc: Subset, out: &mut Vec<Subset>) {
        if used == s {
            return;
        }
        for a in from..order.len() {
            let mut run = acc;
            for b in a..order.len() {
                run.insert(order[b]);
                out.push(run);
                rec(order, b + 2, used + 1, s, run, out);
            }
        }
    }
    rec(&order, 0, 0, s, Subset::EMPTY, &mut out);
    Ok(SetSystem::new(n, out)?.with_meta("provenance", format!("intervals|union:{s}")))
}

/// Subsets `S` with `CH(S) ∩ P = S`.
pub fn hull_closed_subsets(ps: &PointSet) -> Result<Vec<Subset>> {
    let n = ps.len();
    check_cap("points for hull-closed subset enumeration", n as u128, DEFAULT_MAX_POINTS as u128)?;
    let full = ps.all();
    let mut out: Vec<Subset> = all_subsets(full)
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&s| {
            s.is_empty()
                || full.minus(s).iter().all(|q| {
                    hulls_common_point(ps, &[s, Subset::singleton(q)])
                        .expect("nonempty groups")
                        .is_empty()
                })
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set_systems::{is_shattered, vc_dim};

    fn line(n: usize) -> PointSet {
        let pts: Vec<Vec<i64>> = (0..n as i64).map(|i| vec![i]).collect();
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        PointSet::from_ints(1, &refs).unwrap()
    }

    #[test]
    fn two_points_on_a_line() {
        let tf = halfspace_traces(&line(2)).unwrap();
        assert_eq!(tf.traces.len(), 4);
    }

    #[test]
    fn collinear_traces_are_prefixes_and_suffixes() {
        for n in 2..7 {
            let tf = halfspace_traces(&line(n)).unwrap();
            let mut expect = vec![Subset::EMPTY];
            for k in 1..=n {
                expect.push(Subset::from_indices(0..k));
                expect.push(Subset::from_indices(n - k..n));
            }
            let want = TraceFamily::new(n, expect, String::new());
            assert_eq!(tf.traces, want.traces);
            // 2n nontrivial, counting the full set once
            assert_eq!(tf.traces.len(), 2 * n);
        }
    }

    #[test]
    fn four_generic_planar_points_not_shattered() {
        let ps = PointSet::from_ints(2, &[&[0, 0], &[3, 1], &[1, 4], &[5, 5]]).unwrap();
        let sys = halfspace_traces(&ps).unwrap().to_set_system();
        assert!(!is_shattered(&sys, ps.all()));
    }

    #[test]
    fn intervals_from_prefixes_and_suffixes() {
        let ps = line(5);
        let h = halfspace_traces(&ps).unwrap();
        assert_eq!(intersect_close(&h, 1, DEFAULT_FAMILY_CAP).unwrap().traces, h.traces);
        let k = intersect_close(&h, 2, DEFAULT_FAMILY_CAP).unwrap();
        let want = interval_union_traces(&ps, 1).unwrap();
        assert_eq!(k.traces, want.edges());
    }

    #[test]
    fn interval_unions_small() {
        let sys = interval_union_traces(&line(3), 1).unwrap();
        assert_eq!(sys.edges().len(), 7);
        let sys = interval_union_traces(&line(6), 2).unwrap();
        assert_eq!(vc_dim(&sys), 4);
        assert_eq!(
            build_union_polytope_system(&line(6), 2, 2).unwrap().edges(),
            sys.edges()
        );
    }

    #[test]
    fn interval_unions_need_sorted_distinct_points() {
        let ps = PointSet::from_ints(1, &[&[3], &[1], &[2]]).unwrap();
        let sys = interval_union_traces(&ps, 1).unwrap();
        // {0,1} are the two ends of the line, not a run
        assert!(!sys.edges().contains(&Subset::from_indices([0, 1])));
        assert!(sys.edges().contains(&Subset::from_indices([0, 2])));
        assert!(interval_union_traces(&PointSet::from_ints(1, &[&[1], &[1]]).unwrap(), 1).is_err());
        assert!(interval_union_traces(&PointSet::from_ints(2, &[&[1, 0]]).unwrap(), 1).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let ps = line(6);
        assert!(halfspace_traces_capped(&ps, 5).is_err());
        let h = halfspace_traces(&ps).unwrap();
        assert!(union_close(&h, 3, 10).is_err());
    }
}
