//! Acceptance suite: one PASS/FAIL line per criterion, all checks exact.
//!
//! Criteria 1 to 13 run in an 8-thread pool and again in a 1-thread pool;
//! criterion 14 compares the two runs' artifacts byte for byte.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use sconvex::abstract_convexity::{
    abstract_good_partition, abstract_st_separable, hull_closed_space, interval_convexity, AbstractSearch, Number,
    DEFAULT_ABSTRACT_CAP,
};
use sconvex::constructions::{
    convex_position, line_points, random_general_points, random_points, sweep_t42, t42_instance, translated_copies,
    tverberg_tight_instance, verify_f3, verify_t999,
};
use sconvex::geometry::{hulls_common_point, verify_meet, HullOracle, PointSet};
use sconvex::oracles::{
    build_k_polyhedra, build_r_separation, good_radon_partition, good_radon_partition_with, good_tverberg_partition,
    joint_cover_empty_with, st_separable, st_separable_with, verify_r_separation, verify_refutation, PartitionSearch,
    DEFAULT_SEARCH_CAP,
};
use sconvex::ranges::{halfspace_traces, intersect_close, interval_union_traces, DEFAULT_FAMILY_CAP};
use sconvex::set_systems::{
    check_r_shatter, check_sauer, is_r_shattered, min_f_counting, vc_dim, SetSystem, DEFAULT_CAP,
};
use sconvex::Subset;

struct Outcome {
    pass: bool,
    summary: String,
    artifact: String,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subsets_of(base: Subset) -> Vec<Subset> {
    let idx = base.to_vec();
    (0u64..1 << idx.len())
        .map(|m| Subset::from_indices(idx.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &i)| i)))
        .collect()
}

/// Nonempty proper subsets.
fn proper_parts(base: Subset) -> Vec<Subset> {
    subsets_of(base).into_iter().filter(|a| !a.is_empty() && *a != base).collect()
}

fn count(xs: impl Iterator<Item = bool>) -> usize {
    xs.filter(|&b| b).count()
}

// Point-set corpora, regenerated identically wherever they are needed.

fn c1_sets() -> (Vec<PointSet>, Vec<PointSet>) {
    let mut r = rng(101);
    let quads = (0..200).map(|_| random_general_points(&mut r, 4, 2, 50).unwrap()).collect();
    let mut r = rng(102);
    let tris = (0..200).map(|_| random_general_points(&mut r, 3, 2, 50).unwrap()).collect();
    (quads, tris)
}

fn c2_sets() -> Vec<PointSet> {
    let mut r = rng(201);
    (0..100).map(|_| random_general_points(&mut r, 5, 1, 50).unwrap()).collect()
}

fn c3_sets(s: usize) -> Vec<PointSet> {
    let mut r = rng(300 + s as u64);
    let mut out: Vec<PointSet> = (0..100).map(|_| random_general_points(&mut r, 2 * s + 2, 2, 50).unwrap()).collect();
    out.push(convex_position(2 * s + 2).unwrap());
    out
}

fn c4_sets() -> Vec<PointSet> {
    let mut r = rng(401);
    (0..10).map(|_| random_general_points(&mut r, 9, 3, 50).unwrap()).collect()
}

/// Independent check that a reported good Radon partition has meeting hulls.
fn hulls_meet(ps: &PointSet, parts: &[Subset]) -> bool {
    let meet = hulls_common_point(ps, parts).unwrap();
    !meet.is_empty() && verify_meet(ps, parts, &meet)
}

fn refutations_verify(ps: &PointSet, s_list: &[usize], search: &PartitionSearch, expected: u128) -> bool {
    match search {
        PartitionSearch::Found(_) => false,
        PartitionSearch::NoneFound { candidates, refutations } => {
            *candidates == expected
                && refutations.len() as u128 == expected
                && refutations.iter().all(|r| verify_refutation(ps, s_list, r))
        }
    }
}

fn criterion1() -> Outcome {
    let (quads, tris) = c1_sets();
    let found: Vec<(bool, String)> = quads
        .par_iter()
        .map(|ps| match good_radon_partition(ps, ps.all(), 1, 1).unwrap() {
            PartitionSearch::Found(g) => (hulls_meet(ps, &g.parts) && g.transcript.is_complete(), serde_json::to_string(&g).unwrap()),
            other => (false, serde_json::to_string(&other).unwrap()),
        })
        .collect();
    let refuted: Vec<(bool, String)> = tris
        .par_iter()
        .map(|ps| {
            let out = good_radon_partition(ps, ps.all(), 1, 1).unwrap();
            (refutations_verify(ps, &[1, 1], &out, 6), serde_json::to_string(&out).unwrap())
        })
        .collect();
    let good = count(found.iter().map(|x| x.0));
    let none = count(refuted.iter().map(|x| x.0));
    Outcome {
        pass: good == 200 && none == 200,
        summary: format!("Radon tightness in the plane: {good}/200 four-point sets have a good partition, {none}/200 three-point sets refuted exhaustively"),
        artifact: found.into_iter().chain(refuted).map(|x| x.1).collect::<Vec<_>>().join("\n"),
    }
}

fn criterion2() -> Outcome {
    let sets = c2_sets();
    let found: Vec<(bool, String)> = sets
        .par_iter()
        .map(|ps| match good_tverberg_partition(ps, ps.all(), 3, &[1, 1, 1], DEFAULT_SEARCH_CAP).unwrap() {
            PartitionSearch::Found(g) => (hulls_meet(ps, &g.parts), serde_json::to_string(&g).unwrap()),
            other => (false, serde_json::to_string(&other).unwrap()),
        })
        .collect();
    let good = count(found.iter().map(|x| x.0));
    let witness = tverberg_tight_instance(1, 3, 202).unwrap();
    let out = good_tverberg_partition(&witness, witness.all(), 3, &[1, 1, 1], DEFAULT_SEARCH_CAP).unwrap();
    // partitions of 4 points into exactly 3 blocks: S(4,3) = 6
    let refuted = witness.len() == 4 && refutations_verify(&witness, &[1, 1, 1], &out, 6);
    Outcome {
        pass: good == 100 && refuted,
        summary: format!("Tverberg tightness on a line, r = 3: {good}/100 five-point sets have a good 3-partition, 4-point witness refuted: {refuted}"),
        artifact: format!(
            "{}\n{}\n{}",
            found.into_iter().map(|x| x.1).collect::<Vec<_>>().join("\n"),
            witness.to_json(),
            serde_json::to_string(&out).unwrap()
        ),
    }
}

fn criterion3() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let mut artifact = String::new();
    for s in 1..=2usize {
        let p = convex_position(2 * s + 1).unwrap();
        let polys = intersect_close(&halfspace_traces(&p).unwrap(), s, DEFAULT_FAMILY_CAP).unwrap();
        let vc = vc_dim(&polys.to_set_system());
        // every subset is a trace, so the whole set is shattered
        let brute_all = polys.traces.len() == 1 << (2 * s + 1);
        let absent = good_radon_partition(&p, p.all(), s, 1).unwrap();
        let refuted = refutations_verify(&p, &[s, 1], &absent, (1 << (2 * s + 1)) - 2);
        let sets = c3_sets(s);
        let present: Vec<(bool, String)> = sets
            .par_iter()
            .map(|ps| match good_radon_partition(ps, ps.all(), s, 1).unwrap() {
                PartitionSearch::Found(g) => (g.transcript.is_complete(), serde_json::to_string(&g).unwrap()),
                other => (false, serde_json::to_string(&other).unwrap()),
            })
            .collect();
        let good = count(present.iter().map(|x| x.0));
        pass &= vc == 2 * s + 1 && brute_all && refuted && good == sets.len();
        notes.push(format!("s={s}: vc={vc}, absent on {} points: {refuted}, present on {good}/{}", 2 * s + 1, sets.len()));
        artifact += &format!("{s} {vc} {}\n", serde_json::to_string(&absent).unwrap());
        artifact += &present.into_iter().map(|x| x.1).collect::<Vec<_>>().join("\n");
    }
    Outcome {
        pass,
        summary: format!("f(2,s,1) = 2s+2: {}", notes.join("; ")),
        artifact,
    }
}

fn criterion4() -> Outcome {
    let sets = c4_sets();
    let reports: Vec<_> = sets.par_iter().map(|ps| verify_f3(ps, 2).unwrap()).collect();
    let ok = count(reports.iter().map(|r| r.pass && r.largest_class.len() >= 3 && r.coloring.is_some()));
    // independent re-check of the separability claim
    let rechecked = count(
        sets.iter()
            .zip(&reports)
            .map(|(ps, r)| !st_separable(ps, r.largest_class, ps.all().minus(r.largest_class), 2, 1).unwrap().is_separable()),
    );
    Outcome {
        pass: ok == 10 && rechecked == 10,
        summary: format!("f(3,2,1) <= 9 instances: {ok}/10 nine-point sets four-colored with an inseparable largest class"),
        artifact: serde_json::to_string(&reports).unwrap(),
    }
}

/// Shatter function by brute force over all subsets.
fn brute_shatter(sys: &SetSystem, m: usize) -> u128 {
    subsets_of(sys.ground())
        .into_iter()
        .filter(|s| s.len() == m)
        .map(|s| sys.edges().iter().map(|e| e.intersect(s)).collect::<HashSet<_>>().len() as u128)
        .max()
        .unwrap_or(0)
}

fn brute_vc(sys: &SetSystem) -> usize {
    subsets_of(sys.ground())
        .into_iter()
        .filter(|s| sys.edges().iter().map(|e| e.intersect(*s)).collect::<HashSet<_>>().len() == 1 << s.len())
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

fn random_system(r: &mut ChaCha8Rng, n: usize, max_edges: usize) -> SetSystem {
    let k = r.gen_range(1..=max_edges);
    let edges: Vec<Subset> = (0..k).map(|_| Subset(r.gen_range(0..1u64 << n))).collect();
    SetSystem::new(n, edges).unwrap()
}

fn criterion5() -> Outcome {
    let mut systems: Vec<SetSystem> = Vec::new();
    let (quads, tris) = c1_sets();
    let mut geo: Vec<PointSet> = quads.into_iter().chain(tris).chain(c2_sets()).collect();
    geo.extend((1..=2).flat_map(c3_sets));
    geo.extend((1..=2).map(|s| convex_position(2 * s + 1).unwrap()));
    geo.extend(c4_sets());
    systems.extend(geo.par_iter().map(|ps| halfspace_traces(ps).unwrap().to_set_system()).collect::<Vec<_>>());
    for s in 1..=2usize {
        let p = convex_position(2 * s + 1).unwrap();
        systems.push(intersect_close(&halfspace_traces(&p).unwrap(), s, DEFAULT_FAMILY_CAP).unwrap().to_set_system());
    }
    let geometric = systems.len();
    let mut r = rng(501);
    for _ in 0..500 {
        let n = r.gen_range(1..=10);
        systems.push(random_system(&mut r, n, 40));
    }
    let results: Vec<(bool, String)> = systems
        .par_iter()
        .map(|sys| {
            let n = sys.ground_size();
            let prof = check_sauer(sys, n, DEFAULT_CAP).unwrap();
            let d = brute_vc(sys);
            let agree = prof.dim == d
                && prof.rows.iter().all(|row| {
                    let bound: u128 = (0..=d.min(row.m)).map(|i| binom(row.m as u64, i as u64)).sum();
                    row.computed == brute_shatter(sys, row.m) && row.bound == bound && row.computed <= bound
                });
            (prof.pass() && agree && prof.rows.len() == n + 1, prof.to_csv())
        })
        .collect();
    let ok = count(results.iter().map(|x| x.0));
    Outcome {
        pass: ok == systems.len(),
        summary: format!("Sauer-Shelah audit: {ok}/{} systems ({geometric} geometric, 500 random) within the binomial bound", systems.len()),
        artifact: results.into_iter().map(|x| x.1).collect::<Vec<_>>().join("\n"),
    }
}

/// Ordered labellings of `s` into `r` parts that some edge choice realizes.
fn brute_count_realizable(sys: &SetSystem, s: Subset, r: usize) -> u128 {
    let traces: Vec<Subset> = sys.edges().iter().map(|e| e.intersect(s)).collect::<HashSet<_>>().into_iter().collect();
    let idx = s.to_vec();
    let mut total = 0;
    let mut lab = vec![0usize; idx.len()];
    loop {
        let mut parts = vec![Subset::EMPTY; r];
        for (k, &c) in lab.iter().enumerate() {
            parts[c].insert(idx[k]);
        }
        fn rec(parts: &[Subset], traces: &[Subset], acc: Subset) -> bool {
            match parts.split_first() {
                None => acc.is_empty(),
                Some((p, rest)) => traces.iter().any(|t| p.is_subset_of(*t) && rec(rest, traces, acc.intersect(*t))),
            }
        }
        if rec(&parts, &traces, s) {
            total += 1;
        }
        let mut k = 0;
        loop {
            if k == lab.len() {
                return total;
            }
            lab[k] += 1;
            if lab[k] < r {
                break;
            }
            lab[k] = 0;
            k += 1;
        }
    }
}

fn brute_min_f(d: usize, r: usize) -> u64 {
    use num_bigint::BigUint;
    (1..100_000u64)
        .find(|&f| {
            let sum: BigUint = (0..=d as u64).map(|i| binom_big(f, i)).sum();
            sum.pow(r as u32) * BigUint::from(r - 1).pow(f as u32) < BigUint::from(r).pow(f as u32)
        })
        .expect("the criterion holds eventually")
}

fn binom_big(n: u64, k: u64) -> num_bigint::BigUint {
    if k > n {
        return 0u32.into();
    }
    (0..k).fold(num_bigint::BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn criterion6() -> Outcome {
    let mut r = rng(601);
    let cases: Vec<(SetSystem, usize)> = (0..200)
        .map(|i| {
            let n = 2 + i % 7;
            let parts = 2 + (i / 7) % 3;
            (random_system(&mut r, n, 12), parts)
        })
        .collect();
    let results: Vec<(bool, String)> = cases
        .par_iter()
        .map(|(sys, parts)| {
            let n = sys.ground_size();
            let prof = check_r_shatter(sys, *parts, n, DEFAULT_CAP).unwrap();
            let vc = vc_dim(sys);
            let f = min_f_counting(vc, *parts).unwrap();
            let within = (prof.dim as u64) < f && f == brute_min_f(vc, *parts);
            // brute-force oracle on the smaller ground sets
            let agree = n > 6
                || prof.rows.iter().all(|row| {
                    let brute = subsets_of(sys.ground())
                        .into_iter()
                        .filter(|s| s.len() == row.m)
                        .map(|s| brute_count_realizable(sys, s, *parts))
                        .max()
                        .unwrap_or(0);
                    row.computed == brute
                });
            (prof.pass() && within && agree, format!("{} {} {}", prof.to_csv(), vc, f))
        })
        .collect();
    let ok = count(results.iter().map(|x| x.0));
    Outcome {
        pass: ok == 200,
        summary: format!("r-shatter audit: {ok}/200 systems within the bound and below the counting criterion"),
        artifact: results.into_iter().map(|x| x.1).collect::<Vec<_>>().join("\n"),
    }
}

fn criterion7() -> Outcome {
    let (s, r) = (3usize, 4usize);
    let ps = line_points(&[1, 2, 3, 4]).unwrap();
    let sys = interval_union_traces(&ps, s).unwrap();
    let shattered = is_r_shattered(&sys, sys.ground(), r).unwrap();
    // every ordered 4-labelling realizable
    let brute = brute_count_realizable(&sys, sys.ground(), r) == (r as u128).pow(4);
    let bound = (s - 1) / 2 * r * r / 4;
    Outcome {
        pass: shattered && brute && bound == ps.len(),
        summary: format!("unions of <= 3 intervals 4-shatter 4 collinear points: {shattered} (brute force {brute}), bound {bound}"),
        artifact: sys.to_json(),
    }
}

fn criterion8() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let mut artifact = String::new();
    for d in 1..=2 {
        let inst = t42_instance(d, 3, 4).unwrap();
        let sweep = sweep_t42(&inst, 1 << 20).unwrap();
        let expect = 4u128.pow(inst.n as u32);
        pass &= sweep.colorings == expect && sweep.passed == expect && sweep.max_groups <= 3;
        notes.push(format!("d={d}: {}/{} colorings, max groups {}", sweep.passed, sweep.colorings, sweep.max_groups));
        artifact += &serde_json::to_string(&sweep).unwrap();
    }
    Outcome {
        pass,
        summary: format!("moment-curve adversary: {}", notes.join("; ")),
        artifact,
    }
}

fn criterion9() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let mut artifact = String::new();
    for r in 2..=3usize {
        for s in 1..=3usize {
            let rep = verify_t999(r, s, None).unwrap();
            let n = r * (r - 1) * (s + 1) + 1;
            let bound = (s + 1) * (r - 1);
            let ok = rep.pass && rep.n == n && rep.miss_bound == bound && rep.max_missed <= bound && rep.counterexample.is_none();
            pass &= ok;
            notes.push(format!("(r,s)=({r},{s}) n={n} missed<={}", rep.max_missed));
            artifact += &serde_json::to_string(&rep).unwrap();
        }
    }
    Outcome {
        pass,
        summary: format!("periodic coloring on a line: {}", notes.join(", ")),
        artifact,
    }
}

/// Groups of consecutive indices, one cluster per size, around random
/// centers.
fn clusters(r: &mut ChaCha8Rng, d: usize, sizes: &[usize], spread: i64) -> (PointSet, Vec<Subset>) {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    let mut groups = Vec::new();
    for &k in sizes {
        let center: Vec<i64> = (0..d).map(|_| r.gen_range(-60..=60)).collect();
        let start = pts.len();
        for _ in 0..k {
            pts.push(center.iter().map(|c| c + r.gen_range(-spread..=spread)).collect());
        }
        groups.push(Subset::from_indices(start..start + k));
    }
    let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    (PointSet::from_ints(d, &refs).unwrap(), groups)
}

fn disjoint_instance(r: &mut ChaCha8Rng, d: usize, s: usize, t: usize) -> (PointSet, Vec<Subset>, Vec<Subset>) {
    loop {
        let sizes: Vec<usize> = (0..s + t).map(|_| r.gen_range(1..=3)).collect();
        let (ps, groups) = clusters(r, d, &sizes, 8);
        let (a, b) = groups.split_at(s);
        let ok = a.iter().all(|&x| b.iter().all(|&y| hulls_common_point(&ps, &[x, y]).unwrap().is_empty()));
        if ok {
            return (ps, a.to_vec(), b.to_vec());
        }
    }
}

fn criterion10() -> Outcome {
    let mut r = rng(1001);
    let instances: Vec<_> = (0..100)
        .map(|i| disjoint_instance(&mut r, 1 + i % 3, 1 + (i / 3) % 3, 1 + (i / 9) % 3))
        .collect();
    let k_results: Vec<(bool, String)> = instances
        .par_iter()
        .map(|(ps, a, b)| {
            let ks = build_k_polyhedra(ps, a, b).unwrap();
            let facets = ks.len() == a.len() && ks.iter().all(|row| row.len() == b.len());
            let coverage = a.iter().zip(&ks).all(|(g, row)| g.iter().all(|p| row.iter().all(|h| h.strictly_positive(&ps.points[p]))));
            let avoid = b.iter().flat_map(|g| g.iter()).all(|p| ks.iter().all(|row| row.iter().any(|h| h.strictly_negative(&ps.points[p]))));
            (facets && coverage && avoid, serde_json::to_string(&ks).unwrap())
        })
        .collect();
    let k_ok = count(k_results.iter().map(|x| x.0));

    let mut r = rng(1002);
    let mut covers_list = Vec::new();
    while covers_list.len() < 50 {
        let sizes: Vec<usize> = (0..6).map(|_| r.gen_range(1..=3)).collect();
        let (ps, groups) = clusters(&mut r, 2, &sizes, 20);
        let covers: Vec<Vec<Subset>> = groups.chunks(2).map(|c| c.to_vec()).collect();
        let joint_empty = (0..8).all(|m: usize| {
            let tuple: Vec<Subset> = (0..3).map(|i| covers[i][m >> i & 1]).collect();
            hulls_common_point(&ps, &tuple).unwrap().is_empty()
        });
        if joint_empty {
            covers_list.push((ps, covers));
        }
    }
    let r_results: Vec<(bool, String)> = covers_list
        .par_iter()
        .map(|(ps, covers)| {
            let sep = build_r_separation(ps, covers).unwrap();
            let chk = verify_r_separation(ps, covers, &sep).unwrap();
            let contained = covers
                .iter()
                .zip(&sep.classes)
                .all(|(cs, ks)| cs.iter().zip(ks).all(|(g, k)| g.iter().all(|p| k.facets.iter().all(|h| !h.strictly_negative(&ps.points[p])))));
            let ok = chk.pass() && chk.facet_bound == 4 && sep.max_facets() <= 4 && contained;
            (ok, serde_json::to_string(&sep).unwrap())
        })
        .collect();
    let r_ok = count(r_results.iter().map(|x| x.0));
    Outcome {
        pass: k_ok == 100 && r_ok == 50,
        summary: format!("polyhedral separation: {k_ok}/100 two-class instances, {r_ok}/50 three-class instances within 4 facets"),
        artifact: k_results.into_iter().chain(r_results).map(|x| x.1).collect::<Vec<_>>().join("\n"),
    }
}

fn criterion11() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let mut artifact = String::new();
    for (d, r, s) in [(1usize, 2usize, 2usize), (2, 2, 2)] {
        let base = tverberg_tight_instance(d, r, 1101).unwrap();
        let ps = translated_copies(&base, s).unwrap();
        let n = s * (d + 1) * (r - 1);
        let s_list = vec![s; r];
        let out = good_tverberg_partition(&ps, ps.all(), r, &s_list, DEFAULT_SEARCH_CAP).unwrap();
        // unordered 2-partitions into nonempty parts
        let expected = (1u128 << (n - 1)) - 1;
        let ok = ps.len() == n && refutations_verify(&ps, &s_list, &out, expected);
        pass &= ok;
        notes.push(format!("(d,r,s)=({d},{r},{s}): {n} points, all {expected} partitions refuted: {ok}"));
        artifact += &format!("{}\n{}\n", ps.to_json(), serde_json::to_string(&out).unwrap());
    }
    Outcome {
        pass,
        summary: format!("translated copies: {}", notes.join("; ")),
        artifact,
    }
}

fn criterion12() -> Outcome {
    let sp = interval_convexity(8).unwrap();
    let radon = sp.radon_number().unwrap();
    let tverberg = sp.tverberg_number(3).unwrap();
    let (separable, _) = sp.is_separable(DEFAULT_ABSTRACT_CAP).unwrap();
    let vc = vc_dim(&sp.halfspaces());
    let space_ok = radon == Number::Finite(3) && tverberg == Number::Finite(5) && separable && vc <= 2;

    let mut r = rng(1201);
    let lines: Vec<PointSet> = (0..12).map(|i| random_general_points(&mut r, 3 + i % 4, 1, 50).unwrap()).collect();
    let results: Vec<(usize, usize, String)> = lines
        .par_iter()
        .map(|ps| {
            let space = hull_closed_space(ps).unwrap();
            let mut agree = 0;
            let mut total = 0;
            let mut art = String::new();
            for s in 1..=2 {
                for t in 1..=2 {
                    for a in proper_parts(ps.all()) {
                        let b = ps.all().minus(a);
                        let abs = abstract_st_separable(&space, a, b, s, t, DEFAULT_ABSTRACT_CAP).unwrap();
                        let geo = st_separable(ps, a, b, s, t).unwrap().is_separable();
                        total += 1;
                        agree += usize::from(abs == geo);
                    }
                    let abs = abstract_good_partition(&space, ps.all(), s, t, DEFAULT_ABSTRACT_CAP).unwrap();
                    let geo = good_radon_partition(ps, ps.all(), s, t).unwrap();
                    let same = match (&abs, geo.found()) {
                        (AbstractSearch::Found { a, .. }, Some(g)) => g.parts[0] == *a,
                        (AbstractSearch::NoneFound { .. }, None) => true,
                        _ => false,
                    };
                    total += 1;
                    agree += usize::from(same);
                    art += &format!("{s}{t}:{}|", serde_json::to_string(&abs).unwrap());
                }
            }
            (agree, total, art)
        })
        .collect();
    let agree: usize = results.iter().map(|x| x.0).sum();
    let total: usize = results.iter().map(|x| x.1).sum();
    Outcome {
        pass: space_ok && agree == total,
        summary: format!(
            "interval convexity on 8 points: radon {radon}, tverberg(3) {tverberg}, separable {separable}, halfspace vc {vc}; line agreement {agree}/{total}"
        ),
        artifact: results.into_iter().map(|x| x.2).collect::<Vec<_>>().join("\n"),
    }
}

/// Distinct small-integer points, collinear triples allowed.
fn corpus13() -> Vec<PointSet> {
    let mut r = rng(1301);
    let mut out = Vec::new();
    for n in 2..=7 {
        for _ in 0..6 {
            loop {
                let ps = random_points(&mut r, n, 2, 4).unwrap();
                let distinct: HashSet<_> = ps.points.iter().collect();
                if distinct.len() == n {
                    out.push(ps);
                    break;
                }
            }
        }
    }
    out
}

fn criterion13() -> Outcome {
    let corpus = corpus13();
    let results: Vec<(usize, usize, String)> = corpus
        .par_iter()
        .map(|ps| {
            let oracle = HullOracle::new(ps);
            let h = halfspace_traces(ps).unwrap();
            let polys: Vec<_> = (1..=2).map(|s| intersect_close(&h, s, DEFAULT_FAMILY_CAP).unwrap()).collect();
            let (mut agree, mut total) = (0, 0);
            let mut bits = String::new();
            for a in proper_parts(ps.all()) {
                let b = ps.all().minus(a);
                for s in 1..=2usize {
                    let sep = st_separable_with(&oracle, a, b, s, 1).unwrap().is_separable();
                    let trace = polys[s - 1].traces.iter().any(|e| b.is_subset_of(*e) && e.is_disjoint(a));
                    total += 1;
                    agree += usize::from(sep == trace);
                    for t in 1..=2usize {
                        let sep = st_separable_with(&oracle, a, b, s, t).unwrap().is_separable();
                        let joint = joint_cover_empty_with(&oracle, &[a, b], &[s, t], DEFAULT_SEARCH_CAP).unwrap().is_empty();
                        total += 1;
                        agree += usize::from(sep == joint);
                        bits.push(if sep { '1' } else { '0' });
                    }
                }
            }
            let radon = good_radon_partition_with(&oracle, ps.all(), 1, 1).unwrap();
            bits += &format!(" {}", radon.found().map_or(-1, |g| g.rank as i64));
            (agree, total, bits)
        })
        .collect();
    let agree: usize = results.iter().map(|x| x.0).sum();
    let total: usize = results.iter().map(|x| x.1).sum();
    Outcome {
        pass: agree == total,
        summary: format!("oracle cross-validation on {} planar sets (n <= 7): {agree}/{total} checks agree", corpus.len()),
        artifact: results.into_iter().map(|x| x.2).collect::<Vec<_>>().join("\n"),
    }
}

fn run_all(report: bool) -> Vec<Outcome> {
    let criteria: [fn() -> Outcome; 13] = [
        criterion1,
        criterion2,
        criterion3,
        criterion4,
        criterion5,
        criterion6,
        criterion7,
        criterion8,
        criterion9,
        criterion10,
        criterion11,
        criterion12,
        criterion13,
    ];
    criteria
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let start = Instant::now();
            let out = f();
            if report {
                let tag = if out.pass { "PASS" } else { "FAIL" };
                println!("{tag} criterion {}: {} [{:.1}s]", i + 1, out.summary, start.elapsed().as_secs_f64());
            }
            out
        })
        .collect()
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let eight = pool(8).install(|| run_all(true));
    let one = pool(1).install(|| run_all(false));
    let same: Vec<usize> = eight
        .iter()
        .zip(&one)
        .enumerate()
        .filter(|(_, (a, b))| a.artifact == b.artifact && a.pass == b.pass)
        .map(|(i, _)| i + 1)
        .collect();
    let det = same.len() == eight.len();
    let bytes: usize = eight.iter().map(|o| o.artifact.len()).sum();
    println!(
        "{} criterion 14: {}/13 criteria byte-identical with 1 and 8 threads ({bytes} artifact bytes)",
        if det { "PASS" } else { "FAIL" },
        same.len()
    );
    let summary = json!({ "passed": count(eight.iter().map(|o| o.pass)) + usize::from(det), "total": 14 });
    println!("acceptance: {summary}");
    if eight.iter().all(|o| o.pass) && det {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
