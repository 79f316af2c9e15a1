//! Point sets, convex combinations and the projection-based approximation
//! certificate.
//!
//! For a nonzero direction `x`, the projection length of `p` is
//! `p|x = <p, x> / |x|`. A hull point `x` is an ε-approximation of the
//! polytope distance of `P` when `(1 - ε)|x| <= p|x` for every `p` in `P`;
//! [`epsilon_of`] reports the smallest such ε for a given witness.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Norms below this are treated as zero.
pub const ZERO_NORM: f64 = 1e-300;

/// Allowed deviation of a convex combination's weight sum from 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A nonempty, immutable, ordered set of points in ℝ^d.
///
/// Indices are 0-based and follow insertion order; every other type refers to
/// points by index.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new<R, I>(rows: I) -> Result<Self>
    where
        R: AsRef<[f64]>,
        I: IntoIterator<Item = R>,
    {
        let mut dim = None;
        let mut coords = Vec::new();
        for (index, row) in rows.into_iter().enumerate() {
            let row = row.as_ref();
            let expected = *dim.get_or_insert(row.len());
            if row.len() != expected || expected == 0 {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: expected.max(1),
                    found: row.len(),
                });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            coords.extend_from_slice(row);
        }
        match dim {
            Some(dim) => Ok(Self { dim, coords }),
            None => Err(Error::EmptyPointSet),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.coords[index * self.dim..(index + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// New point set holding the given points, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let len = self.len();
        if let Some(&index) = indices.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index, len });
        }
        Self::new(indices.iter().map(|&i| self.point(i)))
    }

    /// Points of `self` followed by points of `other`.
    pub fn concat(&self, other: &PointSet) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                index: self.len(),
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Self {
            dim: self.dim,
            coords,
        })
    }

    /// Applies `f` to every point; `f` must preserve the dimension.
    pub fn map_points<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        Self::new(self.iter().map(&mut f).collect::<Vec<_>>())
    }

    /// Index of the shortest point, lowest index on ties.
    pub fn shortest_index(&self) -> usize {
        let mut best = 0;
        let mut best_norm = f64::INFINITY;
        for (i, p) in self.iter().enumerate() {
            let n = norm(p);
            if n < best_norm {
                best = i;
                best_norm = n;
            }
        }
        best
    }

    pub fn max_norm(&self) -> f64 {
        self.iter().map(norm).fold(0.0, f64::max)
    }

    /// Squared diameter of the hull, i.e. the largest squared pairwise distance.
    pub fn diameter_sq(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.max(dist_sq(self.point(i), self.point(j)));
            }
        }
        best
    }
}

/// Nonnegative weights over point indices summing to one.
///
/// Zero weights are dropped, so the key set is exactly the support.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCombination {
    weights: BTreeMap<usize, f64>,
    universe: usize,
}

impl ConvexCombination {
    /// Validates weights against `points`. The sum must be within
    /// [`WEIGHT_SUM_TOLERANCE`] of 1; the stored weights are renormalized.
    pub fn new<I>(weights: I, points: &PointSet) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let comb = Self::collect(weights, points)?;
        let sum = comb.weight_sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(comb.renormalized())
    }

    /// Like [`ConvexCombination::new`] but accepts any positive total and
    /// rescales it to one.
    pub fn normalized<I>(weights: I, points: &PointSet) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        Ok(Self::collect(weights, points)?.renormalized())
    }

    /// Full weight on a single point.
    pub fn vertex(index: usize, points: &PointSet) -> Result<Self> {
        Self::new([(index, 1.0)], points)
    }

    fn collect<I>(weights: I, points: &PointSet) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let len = points.len();
        let mut map = BTreeMap::new();
        for (index, w) in weights {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "weight {w} at index {index}"
                )));
            }
            if w > 0.0 {
                *map.entry(index).or_insert(0.0) += w;
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidWeights("no positive weight".into()));
        }
        Ok(Self {
            weights: map,
            universe: len,
        })
    }

    fn weight_sum(&self) -> f64 {
        self.weights.values().sum()
    }

    pub(crate) fn renormalized(mut self) -> Self {
        let sum = self.weight_sum();
        for w in self.weights.values_mut() {
            *w /= sum;
        }
        self
    }

    /// Moves the combination a fraction `lambda` of the way toward the vertex
    /// `index`: `w <- (1 - lambda) w + lambda e_index`. Does not renormalize.
    pub(crate) fn blend_toward(&mut self, index: usize, lambda: f64) {
        debug_assert!((0.0..=1.0).contains(&lambda));
        debug_assert!(index < self.universe);
        if lambda >= 1.0 {
            self.weights.clear();
            self.weights.insert(index, 1.0);
            return;
        }
        let keep = 1.0 - lambda;
        for w in self.weights.values_mut() {
            *w *= keep;
        }
        *self.weights.entry(index).or_insert(0.0) += lambda;
        self.weights.retain(|_, w| *w > 0.0);
    }

    /// Size of the point set this combination was built against.
    pub fn universe_len(&self) -> usize {
        self.universe
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.keys().copied().collect()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&i, &w)| (i, w))
    }

    /// `Σ w_i p_i`.
    pub fn witness_point(&self, points: &PointSet) -> Vec<f64> {
        debug_assert_eq!(self.universe, points.len());
        let mut x = vec![0.0; points.dim()];
        for (i, w) in self.iter() {
            for (xk, pk) in x.iter_mut().zip(points.point(i)) {
                *xk += w * pk;
            }
        }
        x
    }

    fn check_fits(&self, points: &PointSet) -> Result<()> {
        let len = points.len();
        match self.weights.keys().next_back() {
            Some(&index) if index >= len => Err(Error::IndexOutOfRange { index, len }),
            _ => Ok(()),
        }
    }
}

/// Free-function form of [`ConvexCombination::witness_point`].
pub fn witness_point(x: &ConvexCombination, points: &PointSet) -> Vec<f64> {
    x.witness_point(points)
}

/// Approximation quality of a witness against a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    /// `1 - min_p p|x / |x|`, floored at zero.
    pub epsilon_hat: f64,
    /// Point attaining the minimum projection (lowest index on ties).
    pub worst_index: usize,
    pub witness_norm: f64,
    /// `min_p p|x`.
    pub min_projection: f64,
}

/// Signed length of the projection of `p` onto the direction of `x`.
pub fn projection_length(p: &[f64], x: &[f64]) -> Result<f64> {
    let n = norm(x);
    if n < ZERO_NORM {
        return Err(Error::ZeroDirection);
    }
    Ok(dot(p, x) / n)
}

/// Certificate for an arbitrary witness vector `x`.
///
/// Only meaningful as a coreset statement when `x` lies in the hull of
/// `points`; other vectors are evaluated the same way for diagnostics.
pub fn certify(x: &[f64], points: &PointSet) -> Result<Certificate> {
    let witness_norm = norm(x);
    if witness_norm < ZERO_NORM {
        return Err(Error::ZeroDirection);
    }
    let mut worst_index = 0;
    let mut min_projection = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let proj = dot(p, x) / witness_norm;
        if proj < min_projection {
            min_projection = proj;
            worst_index = i;
        }
    }
    // Rounding can push the raw value a few ulps below zero for hull points.
    let epsilon_hat = (1.0 - min_projection / witness_norm).max(0.0);
    Ok(Certificate {
        epsilon_hat,
        worst_index,
        witness_norm,
        min_projection,
    })
}

/// Smallest ε for which the witness of `x` is an ε-approximation of `points`.
pub fn epsilon_of(x: &ConvexCombination, points: &PointSet) -> Result<Certificate> {
    x.check_fits(points)?;
    certify(&x.witness_point(points), points)
}

/// Angle between two nonzero vectors, in `[0, π]`.
pub fn angle_between(p: &[f64], q: &[f64]) -> f64 {
    let c = dot(p, q) / (norm(p) * norm(q));
    c.clamp(-1.0, 1.0).acos()
}

/// Maximum angle between any two points, by exhaustive pair scan.
pub fn angular_diameter(points: &PointSet) -> Result<f64> {
    let norms: Vec<f64> = points.iter().map(norm).collect();
    if let Some(index) = norms.iter().position(|&n| n < ZERO_NORM) {
        return Err(Error::ZeroPoint { index });
    }
    let mut theta = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let c = dot(points.point(i), points.point(j)) / (norms[i] * norms[j]);
            theta = theta.max(c.clamp(-1.0, 1.0).acos());
        }
    }
    Ok(theta)
}

/// `diam(conv P)^2 / optimum_norm^2`.
pub fn excentricity(points: &PointSet, optimum_norm: f64) -> Result<f64> {
    if !(optimum_norm.is_finite() && optimum_norm > 0.0) {
        return Err(Error::DegenerateOptimum(optimum_norm));
    }
    Ok(points.diameter_sq() / (optimum_norm * optimum_norm))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, SQRT_2};

    use approx::assert_relative_eq;

    use super::*;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::new(rows.iter().copied()).unwrap()
    }

    #[test]
    fn point_set_rejects_bad_input() {
        assert_eq!(
            PointSet::new(Vec::<Vec<f64>>::new()),
            Err(Error::EmptyPointSet)
        );
        assert!(matches!(
            PointSet::new([vec![1.0, 2.0], vec![1.0]]),
            Err(Error::DimensionMismatch { index: 1, .. })
        ));
        assert!(matches!(
            PointSet::new([vec![f64::NAN]]),
            Err(Error::NonFinite { index: 0 })
        ));
        assert!(PointSet::new([Vec::<f64>::new()]).is_err());
    }

    #[test]
    fn projection_examples() {
        assert_eq!(projection_length(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(projection_length(&[0.0, 1.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(projection_length(&[1.0, 1.0], &[2.0, 0.0]).unwrap(), 1.0);
        assert_eq!(projection_length(&[-3.0, 0.0], &[2.0, 0.0]).unwrap(), -3.0);
        assert_eq!(
            projection_length(&[1.0, 0.0], &[0.0, 1e-301]),
            Err(Error::ZeroDirection)
        );
    }

    #[test]
    fn convex_combination_validation() {
        let p = ps(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let c = ConvexCombination::new([(0, 0.5), (1, 0.5), (1, 0.0)], &p).unwrap();
        assert_eq!(c.support(), vec![0, 1]);
        let c = ConvexCombination::new([(0, 1.0), (1, 0.0)], &p).unwrap();
        assert_eq!(c.support(), vec![0]);
        assert!(matches!(
            ConvexCombination::new([(0, 0.5)], &p),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            ConvexCombination::new([(0, 1.5), (1, -0.5)], &p),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            ConvexCombination::new([(2, 1.0)], &p),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
        let c = ConvexCombination::normalized([(0, 2.0), (1, 6.0)], &p).unwrap();
        assert_eq!(c.weight(0), 0.25);
        assert_eq!(c.weight(1), 0.75);
    }

    #[test]
    fn witness_point_examples() {
        let p = ps(&[&[3.0, 4.0]]);
        assert_eq!(
            ConvexCombination::vertex(0, &p).unwrap().witness_point(&p),
            vec![3.0, 4.0]
        );
        let p = ps(&[&[2.0, 0.0], &[0.0, 2.0]]);
        let c = ConvexCombination::new([(0, 0.5), (1, 0.5)], &p).unwrap();
        assert_eq!(witness_point(&c, &p), vec![1.0, 1.0]);
        let p = ps(&[&[4.0, 0.0], &[0.0, 4.0]]);
        let c = ConvexCombination::new([(0, 0.25), (1, 0.75)], &p).unwrap();
        assert_eq!(c.witness_point(&p), vec![1.0, 3.0]);
    }

    #[test]
    fn epsilon_of_examples() {
        let p = ps(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let c = ConvexCombination::new([(0, 0.5), (1, 0.5)], &p).unwrap();
        let cert = epsilon_of(&c, &p).unwrap();
        assert_relative_eq!(cert.epsilon_hat, 0.0, epsilon = 1e-15);
        assert_relative_eq!(cert.witness_norm, SQRT_2 / 2.0, epsilon = 1e-15);
        assert_eq!(cert.worst_index, 0);

        let p = ps(&[&[1.0, 0.0]]);
        let cert = epsilon_of(&ConvexCombination::vertex(0, &p).unwrap(), &p).unwrap();
        assert_eq!(cert.epsilon_hat, 0.0);

        // p1 = (1,0), p2 at θ/2, p3 at θ with θ = π/3; full weight on p1.
        let t = FRAC_PI_3;
        let p = ps(&[
            &[1.0, 0.0],
            &[(t / 2.0).cos(), (t / 2.0).sin()],
            &[t.cos(), t.sin()],
        ]);
        let cert = epsilon_of(&ConvexCombination::vertex(0, &p).unwrap(), &p).unwrap();
        assert_relative_eq!(cert.epsilon_hat, 0.5, epsilon = 1e-15);
        assert_eq!(cert.worst_index, 2);
    }

    #[test]
    fn epsilon_of_ties_pick_lowest_index() {
        let p = ps(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let c = ConvexCombination::vertex(3, &p).unwrap();
        assert_eq!(epsilon_of(&c, &p).unwrap().worst_index, 0);
    }

    #[test]
    fn epsilon_of_rejects_zero_witness() {
        let p = ps(&[&[1.0, 0.0], &[-1.0, 0.0]]);
        let c = ConvexCombination::new([(0, 0.5), (1, 0.5)], &p).unwrap();
        assert_eq!(epsilon_of(&c, &p), Err(Error::ZeroDirection));
    }

    #[test]
    fn epsilon_of_rejects_foreign_combination() {
        let big = ps(&[&[1.0], &[2.0], &[3.0]]);
        let small = ps(&[&[1.0]]);
        let c = ConvexCombination::vertex(2, &big).unwrap();
        assert!(matches!(
            epsilon_of(&c, &small),
            Err(Error::IndexOutOfRange { index: 2, len: 1 })
        ));
    }

    #[test]
    fn angular_diameter_examples() {
        assert_eq!(angular_diameter(&ps(&[&[1.0, 0.0]])).unwrap(), 0.0);
        assert_relative_eq!(
            angular_diameter(&ps(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            angular_diameter(&ps(&[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]])).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        // Antiparallel pair: clamping keeps acos finite.
        assert_relative_eq!(
            angular_diameter(&ps(&[&[1.0, 0.0], &[-3.0, 0.0]])).unwrap(),
            std::f64::consts::PI
        );
        assert_eq!(
            angular_diameter(&ps(&[&[1.0, 0.0], &[0.0, 0.0]])),
            Err(Error::ZeroPoint { index: 1 })
        );
    }

    #[test]
    fn excentricity_examples() {
        let p = ps(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_relative_eq!(
            excentricity(&p, SQRT_2 / 2.0).unwrap(),
            4.0,
            epsilon = 1e-12
        );
        assert_eq!(excentricity(&ps(&[&[1.0, 0.0]]), 1.0).unwrap(), 0.0);
        assert_eq!(
            excentricity(&ps(&[&[1.0, 0.0], &[1.0, 1.0]]), 1.0).unwrap(),
            1.0
        );
        assert_eq!(excentricity(&p, 0.0), Err(Error::DegenerateOptimum(0.0)));
        assert!(excentricity(&p, -1.0).is_err());
    }

    #[test]
    fn blend_toward_prunes_and_collapses() {
        let p = ps(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let mut c = ConvexCombination::new([(0, 0.5), (1, 0.5)], &p).unwrap();
        c.blend_toward(2, 0.5);
        assert_eq!(c.support(), vec![0, 1, 2]);
        assert_eq!(c.weight(2), 0.5);
        c.blend_toward(1, 1.0);
        assert_eq!(c.support(), vec![1]);
        assert_eq!(c.weight(1), 1.0);
    }
}
