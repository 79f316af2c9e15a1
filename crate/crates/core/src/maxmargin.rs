//! Homogeneous max-margin separation through polytope distance.
//!
//! Reflecting every point by its label (`q_i = y_i p_i`) turns the search for a
//! unit normal `w` maximizing `min_i y_i <w, p_i>` into the search for the
//! point of `conv{q_i}` nearest the origin: the optimal normal is `x*/|x*|`
//! and the optimal margin is `|x*|`. An ε-approximate witness `x` yields a
//! normal whose margin is at least `(1 - ε)|x*|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{certify, dot, norm, Certificate, ConvexCombination, PointSet};
use crate::solver::{frank_wolfe, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }

    /// Accepts exactly `-1` and `+1`.
    pub fn from_value(v: f64) -> Option<Self> {
        if v == 1.0 {
            Some(Label::Positive)
        } else if v == -1.0 {
            Some(Label::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPointSet {
    points: PointSet,
    labels: Vec<Label>,
}

impl LabeledPointSet {
    pub fn new(points: PointSet, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::InvalidLabels(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        Ok(Self { points, labels })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// False when every label is the same; such inputs are still solvable but
    /// the "separator" only bounds one class away from the origin.
    pub fn is_two_class(&self) -> bool {
        self.labels.iter().any(|&l| l != self.labels[0])
    }

    pub fn with_flipped_labels(&self) -> Self {
        Self {
            points: self.points.clone(),
            labels: self.labels.iter().map(|l| l.flipped()).collect(),
        }
    }

    /// Appends the constant coordinate `rho` to every point.
    ///
    /// A homogeneous separator `(w, w_rho)` of the lifted data is the affine
    /// separator `<w, p> + rho·w_rho` of the original data. Its lifted margin is
    /// not the affine margin of the original data; it only approximates it
    /// for large `rho`.
    pub fn lifted(&self, rho: f64) -> Result<Self> {
        let points = self.points.map_points(|p| {
            let mut q = p.to_vec();
            q.push(rho);
            q
        })?;
        Ok(Self {
            points,
            labels: self.labels.clone(),
        })
    }

    /// `min_i y_i <normal, p_i>`.
    pub fn margin_of(&self, normal: &[f64]) -> f64 {
        self.points
            .iter()
            .zip(&self.labels)
            .map(|(p, y)| y.sign() * dot(normal, p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `{y_i p_i}`, index-aligned with `labeled`.
pub fn reduce_labeled(labeled: &LabeledPointSet) -> PointSet {
    let mut labels = labeled.labels.iter();
    labeled
        .points
        .map_points(|p| {
            let y = labels.next().expect("one label per point").sign();
            p.iter().map(|c| y * c).collect()
        })
        .expect("reflection preserves dimension and finiteness")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginResult {
    /// Unit normal of the separating hyperplane through the origin.
    pub normal: Vec<f64>,
    /// `min_i y_i <normal, p_i>`, recomputed from the raw inputs.
    pub margin: f64,
    pub epsilon_used: f64,
    pub support_indices: Vec<usize>,
    pub converged: bool,
    pub iterations: usize,
    #[serde(skip)]
    pub witness: ConvexCombination,
}

/// An affine separator `<weights, p> + bias` read off a lifted solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineSeparator {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl MarginResult {
    /// Interprets a result computed on data lifted with constant `rho`.
    pub fn affine_separator(&self, rho: f64) -> AffineSeparator {
        let (last, weights) = self.normal.split_last().expect("nonempty normal");
        AffineSeparator {
            weights: weights.to_vec(),
            bias: last * rho,
        }
    }
}

/// Homogeneous max-margin separator within factor `(1 - ε)` of optimal.
///
/// Non-converged runs are returned with `converged == false`; their margin is
/// still recomputed honestly.
pub fn solve_margin(labeled: &LabeledPointSet, config: &SolverConfig) -> Result<MarginResult> {
    let reduced = reduce_labeled(labeled);
    let result = frank_wolfe(&reduced, config).map_err(|e| match e {
        Error::OriginInsideHull => Error::NotSeparable,
        other => other,
    })?;
    let x = result.witness.witness_point(&reduced);
    let n = result.witness_norm();
    let normal: Vec<f64> = x.iter().map(|c| c / n).collect();
    Ok(MarginResult {
        margin: labeled.margin_of(&normal),
        normal,
        epsilon_used: config.epsilon_target(),
        support_indices: result.coreset_indices,
        converged: result.converged,
        iterations: result.iterations,
        witness: result.witness,
    })
}

/// Re-derives the approximation certificate of `result` on `labeled`.
pub fn margin_certificate(result: &MarginResult, labeled: &LabeledPointSet) -> Result<Certificate> {
    if result.witness.universe_len() != labeled.len() {
        return Err(Error::Mismatch(format!(
            "witness built over {} points, labeled set has {}",
            result.witness.universe_len(),
            labeled.len()
        )));
    }
    if result.normal.len() != labeled.points.dim() {
        return Err(Error::Mismatch(format!(
            "normal has dimension {}, data has {}",
            result.normal.len(),
            labeled.points.dim()
        )));
    }
    let reduced = reduce_labeled(labeled);
    let x = result.witness.witness_point(&reduced);
    let n = norm(&x);
    let aligned = x
        .iter()
        .zip(&result.normal)
        .all(|(a, b)| n > 0.0 && (a / n - b).abs() <= 1e-9);
    if !aligned {
        return Err(Error::Mismatch(
            "witness direction differs from the stored normal".into(),
        ));
    }
    certify(&x, &reduced)
}
