//! Archive-backed fitness strategy: evaluate a candidate exactly only when
//! it is promising or unexplored, otherwise estimate it from its nearest
//! archived neighbour.
//!
//! Every exact evaluation is recorded as a (position, fitness) pair in a
//! history archive. A new candidate is then classified by its distance to
//! that archive:
//!
//! * distance zero: the stored value is returned outright (cache hit);
//! * within `d` of the archive's best record: evaluated exactly and
//!   archived (worth refining);
//! * at least `d` from every record: evaluated exactly and archived
//!   (unexplored territory);
//! * within `d` of a non-best record: the neighbour's fitness is copied
//!   without touching the oracle or the archive.
//!
//! The archive therefore grows by exactly one record per oracle call, which
//! is what makes evaluation counts trustworthy.

use crate::error::{Error, Result};

/// Distance between lattice positions used by the nearest-record query.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum DistanceMetric {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl DistanceMetric {
    pub fn distance(self, a: &[i32], b: &[i32]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            DistanceMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| {
                    let d = x as f64 - y as f64;
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            DistanceMetric::Manhattan => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| (x as f64 - y as f64).abs())
                .sum(),
            DistanceMetric::Chebyshev => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| (x as f64 - y as f64).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// One exactly evaluated position.
#[derive(Clone, Debug)]
pub struct ArchiveRecord {
    pub position: Vec<i32>,
    pub fitness: f64,
}

/// Insertion-ordered archive of every exact evaluation so far. Unbounded:
/// block searches are short, so the linear nearest-neighbour scan stays
/// cheap and ties resolve to the earliest insertion.
#[derive(Clone, Debug, Default)]
pub struct HistoryArchive {
    records: Vec<ArchiveRecord>,
    metric: DistanceMetric,
}

impl HistoryArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_metric(metric: DistanceMetric) -> Self {
        Self {
            records: Vec::new(),
            metric,
        }
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn records(&self) -> &[ArchiveRecord] {
        &self.records
    }

    /// Number of exact oracle calls made through this archive.
    pub fn evaluation_count(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Index of and distance to the record closest to `position`; among
    /// equal distances the earliest-inserted record wins.
    pub fn nearest(&self, position: &[i32]) -> Result<(usize, f64)> {
        if self.records.is_empty() {
            return Err(Error::EmptyArchive);
        }
        let mut best_idx = 0;
        let mut best_dist = self.metric.distance(&self.records[0].position, position);
        for (i, record) in self.records.iter().enumerate().skip(1) {
            let dist = self.metric.distance(&record.position, position);
            if dist < best_dist {
                best_idx = i;
                best_dist = dist;
            }
        }
        Ok((best_idx, best_dist))
    }

    fn min_fitness(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.fitness)
            .fold(f64::INFINITY, f64::min)
    }

    fn insert(&mut self, position: &[i32], fitness: f64) {
        self.records.push(ArchiveRecord {
            position: position.to_vec(),
            fitness,
        });
    }
}

/// How a candidate's fitness was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rule {
    /// Exact value replayed for an already-archived position.
    CacheHit,
    /// Near the archive's best record: exactly evaluated and archived.
    Exploitation,
    /// Far from every record: exactly evaluated and archived.
    Exploration,
    /// Near a non-best record: fitness copied from the nearest neighbour.
    NearestNeighbour,
}

/// Classification and resulting fitness for one candidate.
#[derive(Clone, Copy, Debug)]
pub struct FitnessDecision {
    pub rule: Rule,
    pub value: f64,
}

impl FitnessDecision {
    /// True when the oracle was actually called for this candidate.
    pub fn evaluated(&self) -> bool {
        matches!(self.rule, Rule::Exploitation | Rule::Exploration)
    }
}

/// Classifies `position` against the archive and produces its fitness,
/// calling `exact` only for exploitation/exploration. Exactly one rule
/// applies to any candidate. A threshold `d` below the lattice spacing
/// (e.g. 0) disables estimation entirely: everything not already archived
/// is evaluated.
pub fn decide_and_fit(
    position: &[i32],
    archive: &mut HistoryArchive,
    d: f64,
    exact: impl FnOnce(&[i32]) -> f64,
) -> FitnessDecision {
    let Ok((nearest_idx, distance)) = archive.nearest(position) else {
        // Empty archive: everything is unexplored.
        let value = exact(position);
        archive.insert(position, value);
        return FitnessDecision {
            rule: Rule::Exploration,
            value,
        };
    };
    if distance == 0.0 {
        return FitnessDecision {
            rule: Rule::CacheHit,
            value: archive.records[nearest_idx].fitness,
        };
    }
    if distance < d {
        let nearest_fitness = archive.records[nearest_idx].fitness;
        if nearest_fitness == archive.min_fitness() {
            let value = exact(position);
            archive.insert(position, value);
            FitnessDecision {
                rule: Rule::Exploitation,
                value,
            }
        } else {
            FitnessDecision {
                rule: Rule::NearestNeighbour,
                value: nearest_fitness,
            }
        }
    } else {
        let value = exact(position);
        archive.insert(position, value);
        FitnessDecision {
            rule: Rule::Exploration,
            value,
        }
    }
}
