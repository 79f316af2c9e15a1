//! Frank-Wolfe (Gilbert) iteration for the point of `conv(P)` closest to the
//! origin.
//!
//! The iteration starts at the shortest input point. Each step asks the
//! certificate for the point with the smallest projection onto the current
//! witness `x`; that point is also the Frank-Wolfe vertex. The step size is
//! the exact minimizer of `|(1 - λ) x + λ p|` over `λ ∈ [0, 1]`. Iteration
//! stops as soon as the certificate shows `(1 - ε)|x| <= p|x` for every `p`.
//! The support of the final witness is an ε-coreset.

mod oracle;

pub use oracle::{brute_force_distance, OracleSolution, ORACLE_MAX_POINTS, ORACLE_MIN_RESOLUTION};

use crate::error::{Error, Result};
use crate::geometry::{certify, dot, norm, Certificate, ConvexCombination, PointSet};

/// Weights are rescaled to sum to one every this many steps.
const RENORMALIZE_EVERY: usize = 64;

/// The witness is declared degenerate once its norm drops below this
/// fraction of the largest input norm.
const ORIGIN_RELATIVE_NORM: f64 = 1e-9;

const DEFAULT_ITERATION_FLOOR: usize = 1_000;
const DEFAULT_ITERATION_CAP: usize = 1_000_000;

/// Stopping rule for [`frank_wolfe`]. Ties are always broken toward the
/// lowest point index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    epsilon_target: f64,
    max_iterations: Option<usize>,
}

impl SolverConfig {
    pub fn new(epsilon_target: f64) -> Result<Self> {
        if !(epsilon_target > 0.0 && epsilon_target < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1), got {epsilon_target}"
            )));
        }
        Ok(Self {
            epsilon_target,
            max_iterations: None,
        })
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be at least 1".into(),
            ));
        }
        self.max_iterations = Some(max_iterations);
        Ok(self)
    }

    pub fn epsilon_target(&self) -> f64 {
        self.epsilon_target
    }

    pub fn max_iterations(&self) -> Option<usize> {
        self.max_iterations
    }

    /// Explicit limit if set, otherwise `10·⌈2E/ε⌉` where `E` is estimated
    /// from the shortest point, clamped to `[1000, 1_000_000]`.
    pub fn iteration_limit(&self, points: &PointSet) -> usize {
        if let Some(limit) = self.max_iterations {
            return limit;
        }
        let start = norm(points.point(points.shortest_index()));
        let estimate = if start > 0.0 {
            points.diameter_sq() / (start * start)
        } else {
            f64::INFINITY
        };
        let limit = 10.0 * (2.0 * estimate / self.epsilon_target).ceil();
        if limit.is_finite() {
            (limit as usize).clamp(DEFAULT_ITERATION_FLOOR, DEFAULT_ITERATION_CAP)
        } else {
            DEFAULT_ITERATION_CAP
        }
    }
}

/// Output of [`frank_wolfe`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub witness: ConvexCombination,
    /// Support of `witness`, ascending.
    pub coreset_indices: Vec<usize>,
    /// Exactly `epsilon_of(&witness, points)`.
    pub certificate: Certificate,
    /// Frank-Wolfe steps taken after initialization.
    pub iterations: usize,
    pub converged: bool,
    pub epsilon_target: f64,
    pub iteration_limit: usize,
}

impl SolveResult {
    pub fn witness_norm(&self) -> f64 {
        self.certificate.witness_norm
    }

    /// Turns a non-converged run into [`Error::IterationLimit`].
    pub fn into_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::IterationLimit {
                limit: self.iteration_limit,
                epsilon_hat: self.certificate.epsilon_hat,
            })
        }
    }

    /// Coreset size bound `2⌈2E/ε⌉` with `E` estimated from the returned norm.
    pub fn size_bound(&self, points: &PointSet) -> usize {
        let e = points.diameter_sq() / (self.witness_norm() * self.witness_norm());
        coreset_size_bound(e, self.epsilon_target)
    }
}

/// `2⌈2E/ε⌉`, at least 1 so that a zero-diameter set (E = 0) still admits its
/// single-point coreset.
pub fn coreset_size_bound(excentricity: f64, epsilon: f64) -> usize {
    let half = (2.0 * excentricity / epsilon).ceil();
    if half.is_finite() {
        (2.0 * half).max(1.0) as usize
    } else {
        usize::MAX
    }
}

/// Per-step observation passed to [`frank_wolfe_observed`].
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub iteration: usize,
    pub witness_norm: f64,
    pub epsilon_hat: f64,
    pub support_len: usize,
}

pub fn frank_wolfe(points: &PointSet, config: &SolverConfig) -> Result<SolveResult> {
    frank_wolfe_observed(points, config, |_| {})
}

/// [`frank_wolfe`] calling `observe` once per evaluated witness, including
/// the initial one.
pub fn frank_wolfe_observed<F>(
    points: &PointSet,
    config: &SolverConfig,
    mut observe: F,
) -> Result<SolveResult>
where
    F: FnMut(&Step),
{
    let limit = config.iteration_limit(points);
    let floor = ORIGIN_RELATIVE_NORM * points.max_norm();
    let mut witness = ConvexCombination::vertex(points.shortest_index(), points)?;
    let mut iterations = 0;

    loop {
        let x = witness.witness_point(points);
        if norm(&x) <= floor {
            return Err(Error::OriginInsideHull);
        }
        let certificate = certify(&x, points).map_err(|_| Error::OriginInsideHull)?;
        observe(&Step {
            iteration: iterations,
            witness_norm: certificate.witness_norm,
            epsilon_hat: certificate.epsilon_hat,
            support_len: witness.support_len(),
        });

        let converged = certificate.epsilon_hat <= config.epsilon_target;
        let lambda = if converged || iterations >= limit {
            None
        } else {
            line_search(&x, points.point(certificate.worst_index))
        };
        let Some(lambda) = lambda else {
            return Ok(SolveResult {
                coreset_indices: witness.support(),
                witness,
                certificate,
                iterations,
                converged,
                epsilon_target: config.epsilon_target,
                iteration_limit: limit,
            });
        };

        witness.blend_toward(certificate.worst_index, lambda);
        iterations += 1;
        if iterations % RENORMALIZE_EVERY == 0 {
            witness = witness.renormalized();
        }
    }
}

/// Minimizer of `|(1 - λ) x + λ p|` over `[0, 1]`; `None` if no progress is
/// possible (only reachable through rounding once the certificate is ~0).
fn line_search(x: &[f64], p: &[f64]) -> Option<f64> {
    let d: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
    let dd = dot(&d, &d);
    if dd == 0.0 {
        return None;
    }
    let lambda = (dot(x, &d) / dd).clamp(0.0, 1.0);
    (lambda > 0.0).then_some(lambda)
}
