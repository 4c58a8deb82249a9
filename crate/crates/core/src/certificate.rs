//! Self-contained certificate files and a re-checker that trusts nothing in
//! them beyond the point coordinates.

use serde::{Deserialize, Serialize};

use crate::constructions::{t42_adversary, t42_instance, verify_t999, T42Report, T999Report};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::oracles::{
    joint_cover_empty, radon_candidates, st_separable, tverberg_candidates, verify_empty_intersection,
    verify_r_separation, verify_refutation, verify_separation, EmptyIntersectionCertificate, GoodPartition,
    JointOutcome, RSeparation, Refutation, SeparationCertificate, StOutcome, DEFAULT_SEARCH_CAP,
};
use crate::subset::Subset;

pub const CERT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
// adjacent tagging: u128 fields cannot pass through buffered content
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum CertBody {
    Separation {
        points: PointSet,
        a: Subset,
        b: Subset,
        s: usize,
        t: usize,
        certificate: SeparationCertificate,
    },
    EmptyIntersection {
        points: PointSet,
        parts: Vec<Subset>,
        s_list: Vec<usize>,
        certificate: EmptyIntersectionCertificate,
    },
    GoodPartition {
        points: PointSet,
        set: Subset,
        partition: GoodPartition,
    },
    NoGoodPartition {
        points: PointSet,
        set: Subset,
        s_list: Vec<usize>,
        candidates: u128,
        refutations: Vec<Refutation>,
    },
    RSeparation {
        points: PointSet,
        covers: Vec<Vec<Subset>>,
        separation: RSeparation,
    },
    T42 {
        d: usize,
        s: usize,
        r: usize,
        report: T42Report,
    },
    T999 {
        report: T999Report,
    },
}

impl CertBody {
    pub fn kind(&self) -> &'static str {
        match self {
            CertBody::Separation { .. } => "separation",
            CertBody::EmptyIntersection { .. } => "empty-intersection",
            CertBody::GoodPartition { .. } => "good-partition",
            CertBody::NoGoodPartition { .. } => "no-good-partition",
            CertBody::RSeparation { .. } => "r-separation",
            CertBody::T42 { .. } => "t42",
            CertBody::T999 { .. } => "t999",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub version: u32,
    pub body: CertBody,
}

impl CertificateFile {
    pub fn new(body: CertBody) -> Self {
        CertificateFile {
            version: CERT_VERSION,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: CertificateFile =
            serde_json::from_str(s).map_err(|e| Error::Input(format!("certificate JSON: {e}")))?;
        if c.version != CERT_VERSION {
            return Err(Error::Input(format!("unsupported certificate version {}", c.version)));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertCheck {
    pub kind: String,
    pub valid: bool,
    pub detail: String,
}

fn is_partition_of(parts: &[Subset], set: Subset) -> bool {
    let mut acc = Subset::EMPTY;
    for p in parts {
        if p.is_empty() || !acc.is_disjoint(*p) {
            return false;
        }
        acc = acc.union(*p);
    }
    acc == set
}

fn candidates_for(set: Subset, s_list: &[usize]) -> Result<Vec<Vec<Subset>>> {
    if s_list.len() == 2 {
        Ok(radon_candidates(set).into_iter().map(|a| vec![a, set.minus(a)]).collect())
    } else {
        tverberg_candidates(set, s_list.len(), s_list, DEFAULT_SEARCH_CAP)
    }
}

fn check(body: &CertBody) -> Result<(bool, String)> {
    Ok(match body {
        CertBody::Separation { points, a, b, s, t, certificate } => {
            points.validate()?;
            let ok = verify_separation(points, *a, *b, *s, *t, certificate);
            (ok, format!("{} A-groups, {} B-groups", certificate.a_groups.len(), certificate.b_groups.len()))
        }
        CertBody::EmptyIntersection { points, parts, s_list, certificate } => {
            points.validate()?;
            let ok = verify_empty_intersection(points, parts, s_list, certificate);
            (ok, format!("{} tuples", certificate.tuples.len()))
        }
        CertBody::GoodPartition { points, set, partition } => {
            points.validate()?;
            points.check_subset(*set)?;
            let parts = &partition.parts;
            if !is_partition_of(parts, *set) || parts.len() != partition.s_list.len() || parts.len() < 2 {
                return Ok((false, "parts do not partition the set".into()));
            }
            let ex = if parts.len() == 2 {
                match st_separable(points, parts[0], parts[1], partition.s_list[0], partition.s_list[1])? {
                    StOutcome::Inseparable(ex) => Some(ex),
                    StOutcome::Separable(_) => None,
                }
            } else {
                match joint_cover_empty(points, parts, &partition.s_list, partition.transcript.cap)? {
                    JointOutcome::Meets(ex) => Some(ex),
                    JointOutcome::Empty(_) => None,
                }
            };
            match ex {
                Some(ex) => (
                    ex.is_complete() && ex.total == partition.transcript.total,
                    format!("{} groupings exhausted", ex.total),
                ),
                None => (false, "the partition is refutable".into()),
            }
        }
        CertBody::NoGoodPartition { points, set, s_list, candidates, refutations } => {
            points.validate()?;
            points.check_subset(*set)?;
            let cands = candidates_for(*set, s_list)?;
            let listed: Vec<&Vec<Subset>> = refutations
                .iter()
                .map(|r| match r {
                    Refutation::Separation { parts, .. } | Refutation::EmptyIntersection { parts, .. } => parts,
                })
                .collect();
            let ok = cands.len() as u128 == *candidates
                && listed.len() == cands.len()
                && listed.iter().zip(&cands).all(|(a, b)| *a == b)
                && refutations.iter().all(|r| verify_refutation(points, s_list, r));
            (ok, format!("{} candidates refuted", cands.len()))
        }
        CertBody::RSeparation { points, covers, separation } => {
            points.validate()?;
            let chk = verify_r_separation(points, covers, separation)?;
            (chk.pass(), format!("max facets {} of {}", chk.max_facets, chk.facet_bound))
        }
        CertBody::T42 { d, s, r, report } => {
            let inst = t42_instance(*d, *s, *r)?;
            let (covers, chosen) = t42_adversary(&inst, &report.coloring)?;
            let parts: Vec<Subset> = (0..inst.r)
                .map(|c| (0..inst.n).filter(|&i| report.coloring[i] == c).collect())
                .collect();
            let ok = report.pass
                && chosen == report.chosen
                && covers.iter().all(|c| c.len() <= inst.s)
                && report.certificate.as_ref().is_some_and(|c| {
                    c.groupings == covers && verify_empty_intersection(&inst.points, &parts, &vec![inst.s; inst.r], c)
                });
            (ok, format!("{} points, {} colors", inst.n, inst.r))
        }
        CertBody::T999 { report } => {
            let fresh = verify_t999(report.r, report.s, Some(report.n))?;
            (fresh == *report && fresh.pass, format!("{} cover tuples", fresh.cover_tuples))
        }
    })
}

/// Re-verifies a certificate from its raw data.
pub fn verify_cert(cert: &CertificateFile) -> Result<CertCheck> {
    let (valid, detail) = check(&cert.body)?;
    Ok(CertCheck {
        kind: cert.body.kind().into(),
        valid,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::verify_t42;
    use crate::oracles::{good_radon_partition, PartitionSearch};

    fn square() -> PointSet {
        PointSet::from_ints(2, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]).unwrap()
    }

    fn roundtrip(body: CertBody) -> CertCheck {
        let json = CertificateFile::new(body).to_json();
        verify_cert(&CertificateFile::from_json(&json).unwrap()).unwrap()
    }

    #[test]
    fn good_partition_roundtrip() {
        let ps = square();
        let g = good_radon_partition(&ps, ps.all(), 1, 1).unwrap().found().cloned().unwrap();
        assert_eq!(g.parts, vec![Subset::from_indices([0, 2]), Subset::from_indices([1, 3])]);
        let chk = roundtrip(CertBody::GoodPartition {
            points: ps.clone(),
            set: ps.all(),
            partition: g.clone(),
        });
        assert!(chk.valid, "{chk:?}");
        let mut bad = g;
        bad.parts = vec![Subset::from_indices([0, 1]), Subset::from_indices([2, 3])];
        let chk = roundtrip(CertBody::GoodPartition {
            points: ps.clone(),
            set: ps.all(),
            partition: bad,
        });
        assert!(!chk.valid);
    }

    #[test]
    fn no_good_partition_roundtrip() {
        let ps = PointSet::from_ints(2, &[&[0, 0], &[4, 1], &[1, 3]]).unwrap();
        let PartitionSearch::NoneFound { candidates, refutations } = good_radon_partition(&ps, ps.all(), 1, 1).unwrap() else {
            panic!("triangle has a good partition");
        };
        let body = CertBody::NoGoodPartition {
            points: ps.clone(),
            set: ps.all(),
            s_list: vec![1, 1],
            candidates,
            refutations: refutations.clone(),
        };
        assert!(roundtrip(body).valid);
        let body = CertBody::NoGoodPartition {
            points: ps.clone(),
            set: ps.all(),
            s_list: vec![1, 1],
            candidates,
            refutations: refutations[1..].to_vec(),
        };
        assert!(!roundtrip(body).valid);
    }

    #[test]
    fn tampered_coordinates_fail() {
        let ps = PointSet::from_ints(2, &[&[0, 0], &[4, 1], &[1, 3]]).unwrap();
        let a = Subset::singleton(0);
        let b = Subset::from_indices([1, 2]);
        let StOutcome::Separable(certificate) = st_separable(&ps, a, b, 1, 1).unwrap() else {
            panic!("vertex separates from the opposite edge");
        };
        let moved = PointSet::from_ints(2, &[&[2, 2], &[4, 1], &[0, 3]]).unwrap();
        assert!(roundtrip(CertBody::Separation { points: ps, a, b, s: 1, t: 1, certificate: certificate.clone() }).valid);
        assert!(!roundtrip(CertBody::Separation { points: moved, a, b, s: 1, t: 1, certificate }).valid);
    }

    #[test]
    fn construction_reports() {
        let inst = t42_instance(1, 3, 4).unwrap();
        let coloring = vec![0, 1, 2, 3];
        let report = verify_t42(&inst, &coloring).unwrap();
        assert!(roundtrip(CertBody::T42 { d: 1, s: 3, r: 4, report: report.clone() }).valid);
        let mut forged = report;
        forged.coloring = vec![0, 0, 1, 1];
        assert!(!roundtrip(CertBody::T42 { d: 1, s: 3, r: 4, report: forged }).valid);
        let rep = verify_t999(2, 1, None).unwrap();
        assert!(roundtrip(CertBody::T999 { report: rep }).valid);
        assert!(CertificateFile::from_json(r#"{"version":9,"body":{"kind":"t999","data":{}}}"#).is_err());
    }
}
