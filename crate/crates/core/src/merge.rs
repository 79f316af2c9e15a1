//! Coresets that can be combined, and a merge-and-reduce streaming harness.
//!
//! The shortest point of a set whose angular diameter `θ` is at most `π/2`
//! is a `(1 - cos θ)`-coreset, and taking the shorter of two such points keeps
//! that guarantee for the union. Re-running the solver on the union of two
//! small coresets gives a certificate relative to that union only; the
//! harness measures how far it drifts from the certificate against the
//! whole stream.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    angle_between, angular_diameter, certify, epsilon_of, norm, ConvexCombination, PointSet,
};
use crate::solver::{frank_wolfe, SolveResult, SolverConfig};

/// Slack allowed when comparing a computed angle against `π/2`.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

/// A retained subset of points (by value) with its witness and claimed ε.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeableCoreset {
    pub points: PointSet,
    pub witness: ConvexCombination,
    pub claimed_epsilon: f64,
}

impl MergeableCoreset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn witness_point(&self) -> Vec<f64> {
        self.witness.witness_point(&self.points)
    }

    /// ε̂ of the witness against the retained points themselves.
    pub fn self_epsilon(&self) -> Result<f64> {
        Ok(epsilon_of(&self.witness, &self.points)?.epsilon_hat)
    }

    /// ε̂ of the witness against an arbitrary universe (typically the stream
    /// prefix the coreset was built from).
    pub fn measure_against(&self, universe: &PointSet) -> Result<f64> {
        Ok(certify(&self.witness_point(), universe)?.epsilon_hat)
    }

    fn singleton(point: &[f64], claimed_epsilon: f64) -> Result<Self> {
        let points = PointSet::new([point])?;
        let witness = ConvexCombination::vertex(0, &points)?;
        Ok(Self {
            points,
            witness,
            claimed_epsilon,
        })
    }

    /// Retains the support of a solver run over `universe`.
    pub fn from_solve(universe: &PointSet, result: &SolveResult) -> Result<Self> {
        let points = universe.subset(&result.coreset_indices)?;
        let witness = ConvexCombination::new(
            result
                .coreset_indices
                .iter()
                .enumerate()
                .map(|(local, &global)| (local, result.witness.weight(global))),
            &points,
        )?;
        Ok(Self {
            points,
            witness,
            claimed_epsilon: result.certificate.epsilon_hat,
        })
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_nan() || theta > FRAC_PI_2 + ANGLE_TOLERANCE {
        Err(Error::WideAngle { theta })
    } else {
        Ok(())
    }
}

/// The shortest point of `points` (lowest index on ties) as a
/// `(1 - cos θ)`-coreset.
pub fn shortest_point_coreset(points: &PointSet) -> Result<MergeableCoreset> {
    let theta = angular_diameter(points)?;
    check_angle(theta)?;
    let shortest = points.point(points.shortest_index());
    MergeableCoreset::singleton(shortest, 1.0 - theta.cos())
}

/// Keeps the shorter retained point (`a` on ties). `theta_bound` must bound the
/// angular diameter of everything either side has summarized.
pub fn merge_min_norm(
    a: &MergeableCoreset,
    b: &MergeableCoreset,
    theta_bound: f64,
) -> Result<MergeableCoreset> {
    check_angle(theta_bound)?;
    for (name, side) in [("a", a), ("b", b)] {
        if side.len() != 1 {
            return Err(Error::NotSingleton(format!(
                "{name} retains {} points",
                side.len()
            )));
        }
    }
    let pa = a.points.point(0);
    let pb = b.points.point(0);
    let kept = if norm(pb) < norm(pa) { pb } else { pa };
    MergeableCoreset::singleton(kept, 1.0 - theta_bound.cos())
}

/// Runs the solver on the union of both retained sets (`a`'s points first).
/// The claimed ε is relative to that union.
pub fn merge_rerun(
    a: &MergeableCoreset,
    b: &MergeableCoreset,
    config: &SolverConfig,
) -> Result<MergeableCoreset> {
    Ok(rerun(a, b, config)?.0)
}

fn rerun(
    a: &MergeableCoreset,
    b: &MergeableCoreset,
    config: &SolverConfig,
) -> Result<(MergeableCoreset, bool)> {
    let union = a.points.concat(&b.points)?;
    let result = frank_wolfe(&union, config)?;
    Ok((
        MergeableCoreset::from_solve(&union, &result)?,
        result.converged,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Shortest point per batch, merged by [`merge_min_norm`].
    MinNorm,
    /// Solver per batch, merged by [`merge_rerun`].
    Rerun,
    /// Solver over the whole prefix after every batch (baseline).
    #[serde(rename = "full")]
    FullRecompute,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::MinNorm => "min-norm",
            Strategy::Rerun => "rerun",
            Strategy::FullRecompute => "full",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamOptions {
    pub strategy: Strategy,
    pub config: SolverConfig,
    /// A-priori bound on the angular diameter of the whole stream, used by
    /// [`Strategy::MinNorm`] merges. When absent the harness uses the measured
    /// prefix diameter.
    pub theta_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamRecord {
    pub batch: usize,
    pub strategy: Strategy,
    pub retained_size: usize,
    /// ε̂ of the current witness against the full prefix.
    pub measured_epsilon: f64,
    pub claimed_epsilon: f64,
    pub theta_prefix: f64,
    /// `1 - cos(theta_prefix)`.
    pub bound: f64,
    /// False if any solver run behind this record hit its iteration limit.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamReport {
    pub records: Vec<StreamRecord>,
}

impl StreamReport {
    pub fn last(&self) -> Option<&StreamRecord> {
        self.records.last()
    }

    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }
}

/// Running angular diameter of a growing prefix.
struct PrefixAngle {
    seen: Vec<Vec<f64>>,
    theta: f64,
}

impl PrefixAngle {
    fn push(&mut self, batch: &PointSet) {
        for p in batch.iter() {
            for q in &self.seen {
                self.theta = self.theta.max(angle_between(p, q));
            }
            self.seen.push(p.to_vec());
        }
    }
}

/// Feeds `batches` one at a time into a single coreset and records, after
/// every batch, its ε̂ against the full prefix.
///
/// The prefix is kept only to measure ground truth; the strategies never read
/// it except for [`Strategy::FullRecompute`].
pub fn stream_process(batches: &[PointSet], options: &StreamOptions) -> Result<StreamReport> {
    if batches.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut prefix: Option<PointSet> = None;
    let mut angle = PrefixAngle {
        seen: Vec::new(),
        theta: 0.0,
    };
    let mut current: Option<MergeableCoreset> = None;
    let mut records = Vec::with_capacity(batches.len());

    for (index, batch) in batches.iter().enumerate() {
        let full = match &prefix {
            None => batch.clone(),
            Some(p) => p.concat(batch)?,
        };
        if let Some(i) = batch
            .iter()
            .position(|p| norm(p) < crate::geometry::ZERO_NORM)
        {
            return Err(Error::ZeroPoint {
                index: full.len() - batch.len() + i,
            });
        }
        angle.push(batch);
        let theta_prefix = angle.theta;

        let (next, converged) = match options.strategy {
            Strategy::MinNorm => {
                let local = shortest_point_coreset(batch)?;
                match &current {
                    None => (local, true),
                    Some(c) => {
                        let bound = options.theta_bound.unwrap_or(theta_prefix);
                        (merge_min_norm(c, &local, bound)?, true)
                    }
                }
            }
            Strategy::Rerun => {
                let result = frank_wolfe(batch, &options.config)?;
                let local = MergeableCoreset::from_solve(batch, &result)?;
                match &current {
                    None => (local, result.converged),
                    Some(c) => {
                        let (merged, ok) = rerun(c, &local, &options.config)?;
                        (merged, ok && result.converged)
                    }
                }
            }
            Strategy::FullRecompute => {
                let result = frank_wolfe(&full, &options.config)?;
                (
                    MergeableCoreset::from_solve(&full, &result)?,
                    result.converged,
                )
            }
        };

        records.push(StreamRecord {
            batch: index,
            strategy: options.strategy,
            retained_size: next.len(),
            measured_epsilon: next.measure_against(&full)?,
            claimed_epsilon: next.claimed_epsilon,
            theta_prefix,
            bound: 1.0 - theta_prefix.cos(),
            converged,
        });
        current = Some(next);
        prefix = Some(full);
    }
    Ok(StreamReport { records })
}
