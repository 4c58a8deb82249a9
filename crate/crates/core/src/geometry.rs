//! Exact point sets and the hull predicates every other module is built on.
//!
//! Point identity is the index into a [`PointSet`]; groups of points are
//! [`Subset`]s of those indices. All predicates reduce to [`lp_feasible`] and
//! return checkable certificates.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::lp::{lp_feasible, LinearProgram, LpOutcome, Relation, VarKind};
use crate::rational::{dot, serde_rat, serde_rat_mat, serde_rat_vec, Rat};
use crate::subset::{Subset, MAX_GROUND};

pub type Point = Vec<Rat>;

/// Points of `R^dim`, identified by index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub dim: usize,
    #[serde(with = "serde_rat_mat")]
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        let ps = PointSet {
            dim,
            points,
            labels: None,
        };
        ps.validate()?;
        Ok(ps)
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(dim: usize, pts: &[&[i64]]) -> Result<Self> {
        Self::new(
            dim,
            pts.iter()
                .map(|p| p.iter().map(|&c| Rat::from_integer(c.into())).collect())
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return input("dimension must be positive");
        }
        if self.points.len() > MAX_GROUND {
            return input(format!(
                "{} points exceed the {MAX_GROUND}-point limit",
                self.points.len()
            ));
        }
        if let Some(i) = self.points.iter().position(|p| p.len() != self.dim) {
            return input(format!("point {i} does not have dimension {}", self.dim));
        }
        if let Some(l) = &self.labels {
            if l.len() != self.points.len() {
                return input("label count differs from point count");
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ps: PointSet =
            serde_json::from_str(s).map_err(|e| Error::Input(format!("point set JSON: {e}")))?;
        ps.validate()?;
        Ok(ps)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point sets always serialize")
    }

    pub(crate) fn check_subset(&self, s: Subset) -> Result<()> {
        if !s.is_subset_of(self.all()) {
            return input(format!("index set {s} is not within 0..{}", self.len()));
        }
        Ok(())
    }

    /// Same points listed in a different order: `out[k] = self[order[k]]`.
    pub fn reordered(&self, order: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| order.iter().map(|&i| l[i].clone()).collect()),
        }
    }
}

/// `{x : normal·x = offset}`; the positive side is `normal·x > offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "serde_rat_vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub offset: Rat,
}

impl Hyperplane {
    /// Scales so that the first nonzero normal entry is `±1`.
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Result<Self> {
        let Some(lead) = normal.iter().find(|v| !v.is_zero()).map(|v| v.abs()) else {
            return input("hyperplane normal is the zero vector");
        };
        Ok(Hyperplane {
            normal: normal.iter().map(|v| v / &lead).collect(),
            offset: offset / lead,
        })
    }

    /// `normal·x - offset`: positive, zero or negative.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.normal, x) - &self.offset
    }

    pub fn strictly_positive(&self, x: &[Rat]) -> bool {
        self.eval(x).is_positive()
    }

    pub fn strictly_negative(&self, x: &[Rat]) -> bool {
        self.eval(x).is_negative()
    }
}

/// Outcome of intersecting the hulls of several groups.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HullMeet {
    /// A common point and, per group, convex weights over the group's points
    /// in increasing index order.
    Common {
        #[serde(with = "serde_rat_vec")]
        point: Point,
        #[serde(with = "serde_rat_mat")]
        weights: Vec<Vec<Rat>>,
    },
    /// Farkas multipliers for the program built by [`hull_lp`].
    Empty {
        #[serde(with = "serde_rat_vec")]
        farkas: Vec<Rat>,
    },
}

impl HullMeet {
    pub fn is_empty(&self) -> bool {
        matches!(self, HullMeet::Empty { .. })
    }

    pub fn point(&self) -> Option<&Point> {
        match self {
            HullMeet::Common { point, .. } => Some(point),
            HullMeet::Empty { .. } => None,
        }
    }
}

/// The feasibility program "some point lies in every `CH(group)`".
///
/// Variables are convex weights, group by group, each group's points in
/// increasing index order. Rows: one `Σ λ = 1` per group, then for every later
/// group and coordinate `Σ λ_g p - Σ λ_0 p = 0`.
pub fn hull_lp(ps: &PointSet, groups: &[Subset]) -> LinearProgram {
    let sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
    let nvars: usize = sizes.iter().sum();
    let mut offsets = Vec::with_capacity(groups.len());
    let mut acc = 0;
    for s in &sizes {
        offsets.push(acc);
        acc += s;
    }
    let mut lp = LinearProgram::new(vec![VarKind::NonNeg; nvars]);
    for (g, grp) in groups.iter().enumerate() {
        let mut row = vec![Rat::zero(); nvars];
        for k in 0..grp.len() {
            row[offsets[g] + k] = Rat::one();
        }
        lp.push(row, Relation::Eq, Rat::one());
    }
    for g in 1..groups.len() {
        for c in 0..ps.dim {
            let mut row = vec![Rat::zero(); nvars];
            for (k, i) in groups[g].iter().enumerate() {
                row[offsets[g] + k] = ps.points[i][c].clone();
            }
            for (k, i) in groups[0].iter().enumerate() {
                row[offsets[0] + k] = -ps.points[i][c].clone();
            }
            lp.push(row, Relation::Eq, Rat::zero());
        }
    }
    lp
}

fn combine(ps: &PointSet, grp: Subset, w: &[Rat]) -> Point {
    let mut out = vec![Rat::zero(); ps.dim];
    for (k, i) in grp.iter().enumerate() {
        for (o, c) in out.iter_mut().zip(&ps.points[i]) {
            *o += &w[k] * c;
        }
    }
    out
}

/// Decides whether `CH(g_1) ∩ ... ∩ CH(g_k)` is nonempty.
///
/// Every group must be nonempty; callers treat `CH(∅)` themselves.
pub fn hulls_common_point(ps: &PointSet, groups: &[Subset]) -> Result<HullMeet> {
    if groups.is_empty() {
        return input("at least one group is required");
    }
    for g in groups {
        ps.check_subset(*g)?;
        if g.is_empty() {
            return input("empty group: the hull of no points is empty");
        }
    }
    let lp = hull_lp(ps, groups);
    match lp_feasible(&lp)? {
        LpOutcome::Feasible(x) => {
            let mut weights = Vec::with_capacity(groups.len());
            let mut at = 0;
            for g in groups {
                weights.push(x[at..at + g.len()].to_vec());
                at += g.len();
            }
            let point = combine(ps, groups[0], &weights[0]);
            Ok(HullMeet::Common { point, weights })
        }
        LpOutcome::Infeasible(farkas) => Ok(HullMeet::Empty { farkas }),
    }
}

/// Re-checks a [`HullMeet`] from scratch.
pub fn verify_meet(ps: &PointSet, groups: &[Subset], meet: &HullMeet) -> bool {
    if groups.is_empty() || groups.iter().any(|g| g.is_empty() || ps.check_subset(*g).is_err()) {
        return false;
    }
    match meet {
        HullMeet::Common { point, weights } => {
            weights.len() == groups.len()
                && groups.iter().zip(weights).all(|(g, w)| {
                    w.len() == g.len()
                        && w.iter().all(|v| !v.is_negative())
                        && w.iter().fold(Rat::zero(), |a, v| a + v).is_one()
                        && combine(ps, *g, w) == *point
                })
        }
        HullMeet::Empty { farkas } => hull_lp(ps, groups).is_farkas(farkas),
    }
}

/// Result of [`strict_separator`].
#[derive(Clone, Debug, PartialEq)]
pub enum Separation {
    /// `S` strictly negative, `T` strictly positive.
    Separated(Hyperplane),
    /// The hulls meet; carries the common point.
    Meet(HullMeet),
}

/// LP for a hyperplane `w·x = b` with `w·p <= b - 1` on `S` and `w·q >= b + 1`
/// on `T`. Variables: `w` then `b`, all free.
pub fn separator_lp(ps: &PointSet, s: Subset, t: Subset) -> LinearProgram {
    let d = ps.dim;
    let mut lp = LinearProgram::new(vec![VarKind::Free; d + 1]);
    let row = |p: &Point| {
        let mut r: Vec<Rat> = p.clone();
        r.push(-Rat::one());
        r
    };
    for i in s.iter() {
        lp.push(row(&ps.points[i]), Relation::Le, -Rat::one());
    }
    for i in t.iter() {
        lp.push(row(&ps.points[i]), Relation::Ge, Rat::one());
    }
    lp
}

/// A hyperplane strictly separating `CH(S)` (negative side) from `CH(T)`
/// (positive side), or the common point of the two hulls.
pub fn strict_separator(ps: &PointSet, s: Subset, t: Subset) -> Result<Separation> {
    ps.check_subset(s)?;
    ps.check_subset(t)?;
    if s.is_empty() || t.is_empty() {
        return input("both sides of a separation must be nonempty");
    }
    if !s.is_disjoint(t) {
        return input(format!("index sets overlap in {}", s.intersect(t)));
    }
    match lp_feasible(&separator_lp(ps, s, t))? {
        LpOutcome::Feasible(x) => {
            let (w, b) = x.split_at(ps.dim);
            Ok(Separation::Separated(Hyperplane::new(w.to_vec(), b[0].clone())?))
        }
        LpOutcome::Infeasible(_) => Ok(Separation::Meet(hulls_common_point(ps, &[s, t])?)),
    }
}

/// A classical Radon partition of `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadonPartition {
    pub a: Subset,
    pub b: Subset,
    #[serde(with = "serde_rat_vec")]
    pub point: Point,
}

/// Splits `S` by the signs of an exact affine dependence.
///
/// `A` is the smaller side (ties: the side holding the lowest index);
/// points with zero coefficient join the negative side before that choice.
pub fn radon_partition_classic(ps: &PointSet, s: Subset) -> Result<RadonPartition> {
    ps.check_subset(s)?;
    let idx = s.to_vec();
    let Some(lambda) = affine_dependence(ps, &idx) else {
        return Err(Error::NoRadonPartition(idx.len()));
    };
    let mut pos = Subset::EMPTY;
    let mut neg = Subset::EMPTY;
    let mut total = Rat::zero();
    let mut point = vec![Rat::zero(); ps.dim];
    for (k, &i) in idx.iter().enumerate() {
        if lambda[k].is_positive() {
            pos.insert(i);
            total += &lambda[k];
            for (o, c) in point.iter_mut().zip(&ps.points[i]) {
                *o += &lambda[k] * c;
            }
        } else {
            neg.insert(i);
        }
    }
    for o in point.iter_mut() {
        *o /= &total;
    }
    let first = s.first().expect("dependence needs points");
    let (a, b) = if pos.len() < neg.len() || (pos.len() == neg.len() && pos.contains(first)) {
        (pos, neg)
    } else {
        (neg, pos)
    };
    Ok(RadonPartition { a, b, point })
}

/// Nonzero `λ` with `Σ λ_k p_k = 0` and `Σ λ_k = 0`, if the points are
/// affinely dependent.
pub fn affine_dependence(ps: &PointSet, idx: &[usize]) -> Option<Vec<Rat>> {
    let rows = lifted_matrix(ps, idx);
    null_vector(rows, idx.len())
}

/// Affine rank of the listed points (the dimension of their affine hull plus
/// one; zero for no points).
pub fn affine_rank(ps: &PointSet, idx: &[usize]) -> usize {
    let (_, pivots) = rref(lifted_matrix(ps, idx), idx.len());
    pivots.len()
}

/// No `d+1` of the points lie on a common hyperplane (and no duplicates).
pub fn in_general_position(ps: &PointSet) -> bool {
    let n = ps.len();
    let k = (ps.dim + 1).min(n);
    crate::subset::k_subsets(ps.all(), k)
        .into_iter()
        .all(|s| affine_rank(ps, &s.to_vec()) == k)
}

fn lifted_matrix(ps: &PointSet, idx: &[usize]) -> Vec<Vec<Rat>> {
    let mut rows: Vec<Vec<Rat>> = (0..ps.dim)
        .map(|c| idx.iter().map(|&i| ps.points[i][c].clone()).collect())
        .collect();
    rows.push(vec![Rat::one(); idx.len()]);
    rows
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub(crate) fn rref(mut a: Vec<Vec<Rat>>, ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v /= &piv;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (a, pivots)
}

/// First basis vector of the null space (lowest free column set to one).
fn null_vector(a: Vec<Vec<Rat>>, ncols: usize) -> Option<Vec<Rat>> {
    let (a, pivots) = rref(a, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rat::zero(); ncols];
    v[free] = Rat::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[row][free].clone();
    }
    Some(v)
}

/// Memoizing front end to [`hulls_common_point`] for one point set.
///
/// Groups are sorted before lookup, so a cached answer (and its certificate)
/// always refers to the groups in increasing mask order. Answers are pure
/// functions of the key, so sharing the cache across threads cannot change
/// any result.
pub struct HullOracle<'a> {
    ps: &'a PointSet,
    cache: RwLock<HashMap<Vec<Subset>, Arc<HullMeet>>>,
}

impl<'a> HullOracle<'a> {
    pub fn new(ps: &'a PointSet) -> Self {
        HullOracle {
            ps,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn points(&self) -> &'a PointSet {
        self.ps
    }

    /// Canonical (sorted) order of a group list.
    pub fn canonical(groups: &[Subset]) -> Vec<Subset> {
        let mut key = groups.to_vec();
        key.sort_unstable();
        key
    }

    /// Intersection of the hulls of `groups`, answered for
    /// [`HullOracle::canonical`] order.
    pub fn meet(&self, groups: &[Subset]) -> Result<Arc<HullMeet>> {
        let key = Self::canonical(groups);
        if let Some(hit) = self.cache.read().get(&key) {
            return Ok(hit.clone());
        }
        let ans = Arc::new(hulls_common_point(self.ps, &key)?);
        self.cache.write().entry(key).or_insert_with(|| ans.clone());
        Ok(ans)
    }

    /// True iff the hulls of all groups have a common point.
    pub fn intersects(&self, groups: &[Subset]) -> Result<bool> {
        Ok(!self.meet(groups)?.is_empty())
    }

    pub fn cached(&self) -> usize {
        self.cache.read().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn square() -> PointSet {
        PointSet::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn diagonals_meet_at_center() {
        let ps = square();
        let groups = [Subset::from_indices([0, 3]), Subset::from_indices([1, 2])];
        let m = hulls_common_point(&ps, &groups).unwrap();
        assert_eq!(m.point(), Some(&vec![rat(1, 2), rat(1, 2)]));
        assert!(verify_meet(&ps, &groups, &m));
    }

    #[test]
    fn parallel_segments_are_disjoint() {
        let ps = square();
        let groups = [Subset::from_indices([0, 1]), Subset::from_indices([2, 3])];
        let m = hulls_common_point(&ps, &groups).unwrap();
        assert!(m.is_empty());
        assert!(verify_meet(&ps, &groups, &m));
    }

    #[test]
    fn hexagon_triangles_and_center() {
        // centrally symmetric hexagon with the origin as point 6
        let ps = PointSet::from_ints(
            2,
            &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1], &[0, 0]],
        )
        .unwrap();
        let groups = [
            Subset::singleton(6),
            Subset::from_indices([0, 2, 4]),
            Subset::from_indices([1, 3, 5]),
        ];
        let m = hulls_common_point(&ps, &groups).unwrap();
        assert_eq!(m.point(), Some(&vec![int(0), int(0)]));
        assert!(verify_meet(&ps, &groups, &m));
    }

    #[test]
    fn empty_group_rejected() {
        let ps = square();
        assert!(matches!(
            hulls_common_point(&ps, &[Subset::EMPTY, Subset::singleton(0)]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn unit_separator() {
        let ps = PointSet::from_ints(2, &[&[0, 0], &[1, 0]]).unwrap();
        let Separation::Separated(h) =
            strict_separator(&ps, Subset::singleton(0), Subset::singleton(1)).unwrap()
        else {
            panic!("points are separable");
        };
        assert_eq!(h.normal, vec![int(1), int(0)]);
        assert!(h.offset > int(0) && h.offset < int(1));
    }

    #[test]
    fn crossing_diagonals_not_separable() {
        let ps = square();
        let sep = strict_separator(&ps, Subset::from_indices([0, 3]), Subset::from_indices([1, 2]))
            .unwrap();
        match sep {
            Separation::Meet(m) => assert_eq!(m.point(), Some(&vec![rat(1, 2), rat(1, 2)])),
            Separation::Separated(_) => panic!("diagonals cross"),
        }
        assert!(strict_separator(&ps, Subset::from_indices([0, 1]), Subset::from_indices([1])).is_err());
    }

    #[test]
    fn radon_of_square_and_line() {
        let ps = square();
        let r = radon_partition_classic(&ps, ps.all()).unwrap();
        assert_eq!(r.a, Subset::from_indices([0, 3]));
        assert_eq!(r.b, Subset::from_indices([1, 2]));
        assert_eq!(r.point, vec![rat(1, 2), rat(1, 2)]);

        let line = PointSet::from_ints(1, &[&[0], &[1], &[2]]).unwrap();
        let r = radon_partition_classic(&line, line.all()).unwrap();
        assert_eq!(r.a, Subset::singleton(1));
        assert_eq!(r.b, Subset::from_indices([0, 2]));
    }

    #[test]
    fn independent_points_have_no_radon_partition() {
        let tri = PointSet::from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(
            radon_partition_classic(&tri, tri.all()),
            Err(Error::NoRadonPartition(3))
        );
        assert!(in_general_position(&tri));
        assert!(!in_general_position(&PointSet::from_ints(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap()));
    }

    #[test]
    fn oracle_caches_canonical_order() {
        let ps = square();
        let o = HullOracle::new(&ps);
        let a = Subset::from_indices([0, 3]);
        let b = Subset::from_indices([1, 2]);
        assert!(o.intersects(&[b, a]).unwrap());
        assert!(o.intersects(&[a, b]).unwrap());
        assert_eq!(o.cached(), 1);
    }

    #[test]
    fn point_set_json() {
        let ps = PointSet::new(2, vec![vec![rat(1, 2), int(-3)]]).unwrap();
        let js = ps.to_json();
        assert!(js.contains("\"1/2\"") && js.contains("\"-3/1\""));
        assert_eq!(PointSet::from_json(&js).unwrap(), ps);
        assert!(PointSet::from_json(r#"{"dim":2,"points":[["1"]]}"#).is_err());
    }
}
