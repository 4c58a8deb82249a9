//! Explicit point configurations and colorings behind the known bounds, each
//! with an exhaustive verifier.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::geometry::{in_general_position, HullMeet, HullOracle, PointSet};
use crate::oracles::{
    good_tverberg_partition_with, mixed_radix, st_separable_with, verify_empty_intersection,
    EmptyIntersectionCertificate, PartitionSearch, StOutcome, TupleWitness, DEFAULT_SEARCH_CAP,
};
use crate::ranges::halfspace_traces;
use crate::rational::{rat, Rat};
use crate::subset::Subset;

/// Color of every point, in `0..r`.
pub type Coloring = Vec<usize>;

/// `z_i = (t_i, t_i^2, .., t_i^d)`; default `t_i = i/(n+1)`, `i = 1..=n`.
pub fn moment_curve(n: usize, d: usize, t_values: Option<&[Rat]>) -> Result<PointSet> {
    let ts: Vec<Rat> = match t_values {
        Some(t) => {
            if t.len() != n {
                return input(format!("{} parameters for {n} points", t.len()));
            }
            if t.windows(2).any(|w| w[0] >= w[1]) {
                return input("moment-curve parameters must be strictly increasing");
            }
            if t.iter().any(|v| *v <= Rat::zero() || *v >= Rat::one()) {
                return input("moment-curve parameters must lie in (0, 1)");
            }
            t.to_vec()
        }
        None => (1..=n).map(|i| rat(i as i64, n as i64 + 1)).collect(),
    };
    let points = ts
        .iter()
        .map(|t| {
            let mut p = Vec::with_capacity(d);
            let mut x = t.clone();
            for _ in 0..d {
                p.push(x.clone());
                x *= t;
            }
            p
        })
        .collect();
    PointSet::new(d, points)
}

/// `n` points on the unit circle at `u = 0, 1/n, .., (n-1)/n` of the
/// rational parametrization.
pub fn convex_position(n: usize) -> Result<PointSet> {
    if n < 3 {
        return input("convex position needs at least 3 points");
    }
    let points = (0..n)
        .map(|i| {
            let u = rat(i as i64, n as i64);
            let u2 = &u * &u;
            let den = Rat::one() + &u2;
            vec![(Rat::one() - &u2) / &den, (Rat::from_integer(2.into()) * &u) / &den]
        })
        .collect();
    PointSet::new(2, points)
}

/// Color `i mod r` for point `i`.
pub fn periodic_coloring(n: usize, r: usize) -> Result<Coloring> {
    if r == 0 {
        return input("r must be at least 1");
    }
    Ok((0..n).map(|i| i % r).collect())
}

/// Moment-curve instance with `p` groups of `m` consecutive points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct T42Instance {
    pub d: usize,
    pub s: usize,
    pub r: usize,
    pub m: usize,
    pub p: usize,
    pub n: usize,
    pub points: PointSet,
    /// Interval of each point; point `i` is in interval `i / m`.
    pub interval: Vec<usize>,
}

/// Requires `s >= 3`, even `r >= 2` and `d >= 1`. Odd `r` reduces to `r - 1`.
pub fn t42_instance(d: usize, s: usize, r: usize) -> Result<T42Instance> {
    if d < 1 || s < 3 || r < 2 || r % 2 != 0 {
        return input("need d >= 1, s >= 3 and even r >= 2");
    }
    let m = (d / 2 + 1) * r / 2;
    let p = (s - 1) / 2 * r / 2;
    let n = m * p;
    Ok(T42Instance {
        d,
        s,
        r,
        m,
        p,
        n,
        points: moment_curve(n, d, None)?,
        interval: (0..n).map(|i| i / m).collect(),
    })
}

fn check_coloring(coloring: &[usize], n: usize, r: usize) -> Result<()> {
    if coloring.len() != n {
        return input(format!("coloring has {} entries for {n} points", coloring.len()));
    }
    if coloring.iter().any(|&c| c >= r) {
        return input(format!("colors must lie in 0..{r}"));
    }
    Ok(())
}

/// Cover groups per color: the single-interval pieces of the intervals chosen
/// for that color, then the color's points over each maximal run of the
/// other intervals. Empty groups are dropped. Also returns the color chosen
/// for each interval.
pub fn t42_adversary(inst: &T42Instance, coloring: &[usize]) -> Result<(Vec<Vec<Subset>>, Vec<usize>)> {
    check_coloring(coloring, inst.n, inst.r)?;
    let (r, p) = (inst.r, inst.p);
    let quota = (inst.s - 1) / 2;
    let mut members = vec![vec![Subset::EMPTY; p]; r];
    for (i, &c) in coloring.iter().enumerate() {
        members[c][inst.interval[i]].insert(i);
    }
    let mut times = vec![0usize; r];
    let mut chosen = Vec::with_capacity(p);
    for q in 0..p {
        let Some(c) = (0..r).find(|&c| members[c][q].len() <= inst.d / 2 && times[c] < quota) else {
            return Err(Error::Invariant(format!("no eligible color for interval {q}")));
        };
        times[c] += 1;
        chosen.push(c);
    }
    let covers = (0..r)
        .map(|c| {
            let mut groups = Vec::new();
            for q in 0..p {
                if chosen[q] == c && !members[c][q].is_empty() {
                    groups.push(members[c][q]);
                }
            }
            let mut run = Subset::EMPTY;
            for q in 0..=p {
                if q == p || chosen[q] == c {
                    if !run.is_empty() {
                        groups.push(run);
                    }
                    run = Subset::EMPTY;
                } else {
                    run = run.union(members[c][q]);
                }
            }
            groups
        })
        .collect();
    Ok((covers, chosen))
}

/// Emptiness certificate for the covers, checking for each tuple the pairs
/// before the whole tuple.
pub fn certify_covers(oracle: &HullOracle, covers: &[Vec<Subset>]) -> Result<Option<EmptyIntersectionCertificate>> {
    if covers.iter().any(|c| c.is_empty()) {
        return Ok(Some(EmptyIntersectionCertificate {
            groupings: covers.to_vec(),
            tuples: Vec::new(),
        }));
    }
    let radix: Vec<usize> = covers.iter().map(|c| c.len()).collect();
    let mut tuples = Vec::new();
    'tuple: for choice in mixed_radix(&radix) {
        let chosen: Vec<Subset> = choice.iter().enumerate().map(|(i, &j)| covers[i][j]).collect();
        for a in 0..chosen.len() {
            for b in a + 1..chosen.len() {
                let pair = HullOracle::canonical(&[chosen[a], chosen[b]]);
                if let HullMeet::Empty { farkas } = &*oracle.meet(&pair)? {
                    tuples.push(TupleWitness {
                        choice,
                        groups: pair,
                        farkas: farkas.clone(),
                    });
                    continue 'tuple;
                }
            }
        }
        let groups = HullOracle::canonical(&chosen);
        match &*oracle.meet(&groups)? {
            HullMeet::Empty { farkas } => tuples.push(TupleWitness {
                choice,
                groups,
                farkas: farkas.clone(),
            }),
            HullMeet::Common { .. } => return Ok(None),
        }
    }
    Ok(Some(EmptyIntersectionCertificate {
        groupings: covers.to_vec(),
        tuples,
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct T42Report {
    pub coloring: Coloring,
    pub chosen: Vec<usize>,
    pub max_groups: usize,
    pub pass: bool,
    pub certificate: Option<EmptyIntersectionCertificate>,
}

/// Builds the adversary covers for one coloring and certifies them.
pub fn verify_t42_with(oracle: &HullOracle, inst: &T42Instance, coloring: &[usize]) -> Result<T42Report> {
    let (covers, chosen) = t42_adversary(inst, coloring)?;
    let max_groups = covers.iter().map(|c| c.len()).max().unwrap_or(0);
    let parts: Vec<Subset> = (0..inst.r)
        .map(|c| (0..inst.n).filter(|&i| coloring[i] == c).collect())
        .collect();
    let certificate = certify_covers(oracle, &covers)?;
    let s_list = vec![inst.s; inst.r];
    let pass = max_groups <= inst.s
        && certificate
            .as_ref()
            .is_some_and(|c| verify_empty_intersection(&inst.points, &parts, &s_list, c));
    Ok(T42Report {
        coloring: coloring.to_vec(),
        chosen,
        max_groups,
        pass,
        certificate,
    })
}

pub fn verify_t42(inst: &T42Instance, coloring: &[usize]) -> Result<T42Report> {
    verify_t42_with(&HullOracle::new(&inst.points), inst, coloring)
}

/// Result of running the adversary on every coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T42Sweep {
    pub d: usize,
    pub s: usize,
    pub r: usize,
    pub n: usize,
    pub colorings: u128,
    pub passed: u128,
    pub max_groups: usize,
    pub first_failure: Option<Coloring>,
}

/// [`verify_t42`] over all `r^n` colorings.
pub fn sweep_t42(inst: &T42Instance, cap: u128) -> Result<T42Sweep> {
    let total = (inst.r as u128).checked_pow(inst.n as u32).unwrap_or(u128::MAX);
    crate::error::check_cap("colorings", total, cap)?;
    let oracle = HullOracle::new(&inst.points);
    let all = mixed_radix(&vec![inst.r; inst.n]);
    let reports: Vec<(bool, usize, Coloring)> = all
        .par_iter()
        .map(|c| {
            let rep = verify_t42_with(&oracle, inst, c)?;
            Ok((rep.pass, rep.max_groups, rep.coloring))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(T42Sweep {
        d: inst.d,
        s: inst.s,
        r: inst.r,
        n: inst.n,
        colorings: total,
        passed: reports.iter().filter(|r| r.0).count() as u128,
        max_groups: reports.iter().map(|r| r.1).max().unwrap_or(0),
        first_failure: reports.iter().find(|r| !r.0).map(|r| r.2.clone()),
    })
}

/// Closed interval `[lo, hi]` with endpoints at points of the line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_rat")]
    pub lo: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub hi: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T999Report {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub cover_tuples: u128,
    pub max_missed: usize,
    pub miss_bound: usize,
    pub pass: bool,
    /// Covers (one interval list per color) with no common point.
    pub counterexample: Option<Vec<Vec<Interval>>>,
}

/// Ways to cut `k` sorted items into at most `s` nonempty consecutive runs,
/// as `(first, last)` index pairs.
fn run_splits(k: usize, s: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    fn rec(start: usize, k: usize, left: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if left == 0 {
            return;
        }
        for end in start..k {
            acc.push((start, end));
            if end + 1 == k {
                out.push(acc.clone());
            } else {
                rec(end + 1, k, left - 1, acc, out);
            }
            acc.pop();
        }
    }
    rec(0, k, s, &mut Vec::new(), &mut out);
    out
}

/// Periodic coloring of `n` points on a line (default `n = r(r-1)(s+1)+1`)
/// against every choice of covers by `≤ s` intervals per color.
///
/// Minimal covers are the interval hulls of consecutive runs of a color
/// class, so those are enumerated. Covers are closed unions of intervals
/// whose endpoints are points, so two of them meet iff they share a point.
pub fn verify_t999(r: usize, s: usize, n: Option<usize>) -> Result<T999Report> {
    if r < 2 || s < 1 {
        return input("need r >= 2 and s >= 1");
    }
    let n = n.unwrap_or(r * (r - 1) * (s + 1) + 1);
    let xs: Vec<Rat> = (1..=n).map(|i| rat(i as i64, n as i64 + 1)).collect();
    let coloring = periodic_coloring(n, r)?;
    // per color: each cover as the mask of points it contains, plus intervals
    let mut covers: Vec<Vec<(u128, Vec<(usize, usize)>)>> = Vec::with_capacity(r);
    for c in 0..r {
        let class: Vec<usize> = (0..n).filter(|&i| coloring[i] == c).collect();
        let list = run_splits(class.len(), s)
            .into_iter()
            .map(|runs| {
                let spans: Vec<(usize, usize)> = runs.iter().map(|&(a, b)| (class[a], class[b])).collect();
                let mut mask = 0u128;
                for &(a, b) in &spans {
                    for i in a..=b {
                        mask |= 1 << i;
                    }
                }
                (mask, spans)
            })
            .collect();
        covers.push(list);
    }
    if n > 128 {
        return input("at most 128 points are supported");
    }
    let all_mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let max_missed = covers
        .iter()
        .flatten()
        .map(|(m, _)| (all_mask & !m).count_ones() as usize)
        .max()
        .unwrap_or(0);
    let radix: Vec<usize> = covers.iter().map(|c| c.len()).collect();
    let mut tuples = 0u128;
    let mut counterexample = None;
    for choice in mixed_radix(&radix) {
        tuples += 1;
        let common = choice
            .iter()
            .enumerate()
            .fold(all_mask, |acc, (c, &k)| acc & covers[c][k].0);
        if common == 0 {
            counterexample = Some(
                choice
                    .iter()
                    .enumerate()
                    .map(|(c, &k)| {
                        covers[c][k]
                            .1
                            .iter()
                            .map(|&(a, b)| Interval {
                                lo: xs[a].clone(),
                                hi: xs[b].clone(),
                            })
                            .collect()
                    })
                    .collect(),
            );
            break;
        }
    }
    let miss_bound = (s + 1) * (r - 1);
    Ok(T999Report {
        r,
        s,
        n,
        cover_tuples: tuples,
        max_missed,
        miss_bound,
        pass: counterexample.is_none() && max_missed <= miss_bound,
        counterexample,
    })
}

/// Points on a line at the given integers.
pub fn line_points(xs: &[i64]) -> Result<PointSet> {
    PointSet::new(1, xs.iter().map(|&x| vec![Rat::from_integer(x.into())]).collect())
}

/// Uniform integer coordinates in `[-bound, bound]` from a seeded stream.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize, bound: i64) -> Result<PointSet> {
    let points = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| Rat::from_integer(rng.gen_range(-bound..=bound).into()))
                .collect()
        })
        .collect();
    PointSet::new(d, points)
}

/// Like [`random_points`] but retried until in general position.
pub fn random_general_points(rng: &mut ChaCha8Rng, n: usize, d: usize, bound: i64) -> Result<PointSet> {
    for _ in 0..1000 {
        let ps = random_points(rng, n, d, bound)?;
        if in_general_position(&ps) {
            return Ok(ps);
        }
    }
    Err(Error::Resource {
        what: "general-position retries".into(),
        needed: 1001,
        cap: 1000,
    })
}

/// `(r-1)(d+1)` points with no Tverberg `r`-partition, checked exhaustively.
pub fn tverberg_tight_instance(d: usize, r: usize, seed: u64) -> Result<PointSet> {
    if d == 0 || r < 2 {
        return input("need d >= 1 and r >= 2");
    }
    let n = (r - 1) * (d + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let ps = random_general_points(&mut rng, n, d, 30)?;
        let oracle = HullOracle::new(&ps);
        let search = good_tverberg_partition_with(&oracle, ps.all(), r, &vec![1; r], DEFAULT_SEARCH_CAP)?;
        if matches!(search, PartitionSearch::NoneFound { .. }) {
            return Ok(ps);
        }
    }
    Err(Error::Resource {
        what: "Tverberg-tight retries".into(),
        needed: 201,
        cap: 200,
    })
}

/// `s` copies of `ps`, the `k`-th shifted along the first axis by `k` times
/// one more than the extent of `ps` on that axis.
pub fn translated_copies(ps: &PointSet, s: usize) -> Result<PointSet> {
    if s == 0 {
        return input("s must be at least 1");
    }
    let xs = ps.points.iter().map(|p| &p[0]);
    let (Some(lo), Some(hi)) = (xs.clone().min(), xs.max()) else {
        return input("empty point set");
    };
    let step = hi - lo + Rat::one();
    let mut points = Vec::with_capacity(ps.len() * s);
    for k in 0..s {
        let shift = &step * Rat::from_integer((k as i64).into());
        for p in &ps.points {
            let mut q = p.clone();
            q[0] += &shift;
            points.push(q);
        }
    }
    PointSet::new(ps.dim, points)
}

/// Coloring with 4 colors so that no halfspace containing at least two
/// points is monochromatic; point 0 gets color 0 and new colors appear in
/// order.
pub fn halfspace_4coloring(ps: &PointSet) -> Result<Option<Coloring>> {
    if ps.dim != 3 {
        return input("the four-coloring search is for points in R^3");
    }
    let traces = halfspace_traces(ps)?;
    let big: Vec<Subset> = traces.traces.iter().copied().filter(|t| t.len() >= 2).collect();
    let minimal: Vec<Subset> = big
        .iter()
        .copied()
        .filter(|&t| !big.iter().any(|&u| u != t && u.is_subset_of(t)))
        .collect();
    let n = ps.len();
    // constraints keyed by their largest point
    let mut by_last: Vec<Vec<Subset>> = vec![Vec::new(); n];
    for t in minimal {
        by_last[t.iter().last().expect("nonempty")].push(t);
    }
    let mut col = vec![0usize; n];
    fn rec(k: usize, used: usize, col: &mut Vec<usize>, by_last: &[Vec<Subset>]) -> bool {
        if k == col.len() {
            return true;
        }
        for c in 0..=used.min(3) {
            col[k] = c;
            let ok = by_last[k].iter().all(|t| t.iter().any(|i| col[i] != c));
            if ok && rec(k + 1, used.max(c + 1), col, by_last) {
                return true;
            }
        }
        false
    }
    if n == 0 || rec(0, 0, &mut col, &by_last) {
        Ok(Some(col))
    } else {
        Ok(None)
    }
}

/// True iff no halfspace trace with at least two points is monochromatic.
pub fn check_halfspace_coloring(ps: &PointSet, coloring: &[usize]) -> Result<bool> {
    check_coloring(coloring, ps.len(), 4)?;
    let traces = halfspace_traces(ps)?;
    Ok(traces.traces.iter().filter(|t| t.len() >= 2).all(|t| {
        let first = coloring[t.first().expect("nonempty")];
        t.iter().any(|i| coloring[i] != first)
    }))
}

/// Largest color class (lowest color on ties).
pub fn largest_class(coloring: &[usize], colors: usize) -> Subset {
    (0..colors)
        .map(|c| (0..coloring.len()).filter(|&i| coloring[i] == c).collect::<Subset>())
        .fold(Subset::EMPTY, |best, s| if s.len() > best.len() { s } else { best })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct F3Report {
    pub n: usize,
    pub s: usize,
    pub coloring: Option<Coloring>,
    pub largest_class: Subset,
    pub separable: bool,
    pub pass: bool,
}

/// On `4s+1` points in `R^3`: a halfspace four-coloring exists and its
/// largest class cannot be put in `s` convex sets avoiding a convex set
/// around the rest.
pub fn verify_f3(ps: &PointSet, s: usize) -> Result<F3Report> {
    let coloring = halfspace_4coloring(ps)?;
    let Some(col) = coloring.clone() else {
        return Ok(F3Report {
            n: ps.len(),
            s,
            coloring,
            largest_class: Subset::EMPTY,
            separable: false,
            pass: false,
        });
    };
    let b = largest_class(&col, 4);
    let oracle = HullOracle::new(ps);
    let out = st_separable_with(&oracle, b, ps.all().minus(b), s, 1)?;
    let separable = matches!(out, StOutcome::Separable(_));
    Ok(F3Report {
        n: ps.len(),
        s,
        coloring,
        largest_class: b,
        separable,
        pass: b.len() > s && !separable && check_halfspace_coloring(ps, &col)?,
    })
}
