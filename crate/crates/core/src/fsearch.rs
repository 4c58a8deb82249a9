//! Empirical bracketing of partition thresholds: sample point sets, run the
//! partition searcher on each, and keep the first set with no good partition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{convex_position, moment_curve, random_general_points};
use crate::error::{input, Result};
use crate::geometry::{HullOracle, PointSet};
use crate::oracles::{good_radon_partition_with, good_tverberg_partition_with, GoodPartition, PartitionSearch, Refutation};

/// Coordinate bound for the random sampler.
pub const RANDOM_BOUND: i64 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Sampler {
    /// Integer points in general position, `samples` draws from the seed.
    RandomRational { samples: usize },
    /// One regular-ish polygon, `d = 2` only.
    ConvexPosition,
    MomentCurve,
    /// One user-supplied set; `n` and `d` are taken from it.
    File { points: PointSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Radon { s: usize, t: usize },
    Tverberg { r: usize, s_list: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FSearchConfig {
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub cap: u128,
    pub sampler: Sampler,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub index: usize,
    pub found: Option<GoodPartition>,
    /// Candidate partitions refuted when none is good.
    pub refuted: u128,
}

/// A sampled set with every partition refuted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundWitness {
    pub index: usize,
    pub points: PointSet,
    pub candidates: u128,
    pub refutations: Vec<Refutation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FSearchReport {
    pub config: FSearchConfig,
    pub samples: Vec<SampleResult>,
    pub all_good: bool,
    /// First witness in sample order.
    pub witness: Option<LowerBoundWitness>,
}

/// Point sets drawn sequentially from the seed.
pub fn sample_sets(cfg: &FSearchConfig) -> Result<Vec<PointSet>> {
    match &cfg.sampler {
        Sampler::RandomRational { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..*samples)
                .map(|_| random_general_points(&mut rng, cfg.n, cfg.d, RANDOM_BOUND))
                .collect()
        }
        Sampler::ConvexPosition => {
            if cfg.d != 2 {
                return input("convex-position sampling is planar");
            }
            Ok(vec![convex_position(cfg.n)?])
        }
        Sampler::MomentCurve => Ok(vec![moment_curve(cfg.n, cfg.d, None)?]),
        Sampler::File { points } => {
            points.validate()?;
            Ok(vec![points.clone()])
        }
    }
}

fn search(ps: &PointSet, mode: &Mode, cap: u128) -> Result<PartitionSearch> {
    let oracle = HullOracle::new(ps);
    match mode {
        Mode::Radon { s, t } => good_radon_partition_with(&oracle, ps.all(), *s, *t),
        Mode::Tverberg { r, s_list } => good_tverberg_partition_with(&oracle, ps.all(), *r, s_list, cap),
    }
}

pub fn f_search(cfg: &FSearchConfig) -> Result<FSearchReport> {
    let sets = sample_sets(cfg)?;
    let outcomes = sets
        .par_iter()
        .map(|ps| search(ps, &cfg.mode, cfg.cap))
        .collect::<Result<Vec<_>>>()?;
    let mut samples = Vec::with_capacity(outcomes.len());
    let mut witness = None;
    for (index, (ps, out)) in sets.into_iter().zip(outcomes).enumerate() {
        match out {
            PartitionSearch::Found(g) => samples.push(SampleResult {
                index,
                found: Some(g),
                refuted: 0,
            }),
            PartitionSearch::NoneFound { candidates, refutations } => {
                samples.push(SampleResult {
                    index,
                    found: None,
                    refuted: candidates,
                });
                if witness.is_none() {
                    witness = Some(LowerBoundWitness {
                        index,
                        points: ps,
                        candidates,
                        refutations,
                    });
                }
            }
        }
    }
    Ok(FSearchReport {
        config: cfg.clone(),
        all_good: witness.is_none(),
        samples,
        witness,
    })
}
