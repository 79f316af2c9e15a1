//! Exponential-time reference solver for tiny point sets, used to check
//! [`super::frank_wolfe`]. It shares no code path with the Frank-Wolfe
//! iteration: a simplex grid scan seeds projected gradient descent on the
//! weights, and the final support is polished by solving its KKT system.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, ConvexCombination, PointSet};

pub const ORACLE_MAX_POINTS: usize = 6;
pub const ORACLE_MIN_RESOLUTION: usize = 10;

const DESCENT_STEP_TOL: f64 = 1e-10;
const DESCENT_MAX_ITERS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub norm: f64,
    pub combination: ConvexCombination,
}

/// Minimum of `|Σ w_i p_i|` over the probability simplex.
pub fn brute_force_distance(points: &PointSet, resolution: usize) -> Result<OracleSolution> {
    let n = points.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::TooManyPoints {
            max: ORACLE_MAX_POINTS,
            found: n,
        });
    }
    if resolution < ORACLE_MIN_RESOLUTION {
        return Err(Error::BadResolution {
            min: ORACLE_MIN_RESOLUTION,
            found: resolution,
        });
    }
    let rows = points.to_rows();
    let gram: Vec<Vec<f64>> = rows
        .iter()
        .map(|p| rows.iter().map(|q| dot(p, q)).collect())
        .collect();
    let objective = |w: &[f64]| quad_form(&gram, w);

    let mut best = vec![0.0; n];
    let mut best_value = f64::INFINITY;
    let mut counts = vec![0usize; n];
    for_each_composition(&mut counts, 0, resolution, &mut |c| {
        let w: Vec<f64> = c.iter().map(|&k| k as f64 / resolution as f64).collect();
        let value = objective(&w);
        if value < best_value {
            best_value = value;
            best = w;
        }
    });

    let mut w = projected_descent(&gram, best);
    if let Some(polished) = polish_support(&gram, &w) {
        if objective(&polished) <= objective(&w) {
            w = polished;
        }
    }

    let combination = ConvexCombination::normalized(w.iter().copied().enumerate(), points)?;
    let norm = norm(&combination.witness_point(points));
    Ok(OracleSolution { norm, combination })
}

fn quad_form(gram: &[Vec<f64>], w: &[f64]) -> f64 {
    gram.iter()
        .zip(w)
        .map(|(row, wi)| wi * dot(row, w))
        .sum::<f64>()
        .max(0.0)
}

/// Calls `visit` for every vector of nonnegative integers summing to `remaining`.
fn for_each_composition<F: FnMut(&[usize])>(
    counts: &mut [usize],
    slot: usize,
    remaining: usize,
    visit: &mut F,
) {
    if slot + 1 == counts.len() {
        counts[slot] = remaining;
        visit(counts);
        return;
    }
    for k in 0..=remaining {
        counts[slot] = k;
        for_each_composition(counts, slot + 1, remaining - k, visit);
    }
}

/// Projected gradient descent on `wᵀGw` with step `1/L`, `L = 2·trace(G)`.
fn projected_descent(gram: &[Vec<f64>], mut w: Vec<f64>) -> Vec<f64> {
    let lipschitz = 2.0 * (0..w.len()).map(|i| gram[i][i]).sum::<f64>();
    if lipschitz == 0.0 {
        return w;
    }
    let step = 1.0 / lipschitz;
    for _ in 0..DESCENT_MAX_ITERS {
        let trial: Vec<f64> = gram
            .iter()
            .zip(&w)
            .map(|(row, wi)| wi - step * 2.0 * dot(row, &w))
            .collect();
        let next = project_to_simplex(&trial);
        let moved = next
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        w = next;
        if moved < DESCENT_STEP_TOL {
            break;
        }
    }
    w
}

/// Euclidean projection onto the probability simplex (sort-and-threshold).
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            shift = candidate;
        }
    }
    v.iter().map(|&x| (x - shift).max(0.0)).collect()
}

/// Exact minimizer over the affine hull of the descent result's support, if it
/// stays inside the simplex.
fn polish_support(gram: &[Vec<f64>], w: &[f64]) -> Option<Vec<f64>> {
    let max_weight = w.iter().copied().fold(0.0, f64::max);
    let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 1e-6 * max_weight).collect();
    let k = support.len();
    let mut kkt = DMatrix::<f64>::zeros(k + 1, k + 1);
    for (a, &i) in support.iter().enumerate() {
        for (b, &j) in support.iter().enumerate() {
            kkt[(a, b)] = gram[i][j];
        }
        kkt[(a, k)] = 1.0;
        kkt[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let solution = kkt.lu().solve(&rhs)?;
    if solution.iter().take(k).any(|&x| !x.is_finite() || x < 0.0) {
        return None;
    }
    let mut polished = vec![0.0; w.len()];
    for (a, &i) in support.iter().enumerate() {
        polished[i] = solution[a];
    }
    Some(polished)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::SQRT_2;

    use approx::assert_relative_eq;

    use super::*;

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::new(rows.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_large_or_coarse_requests() {
        let p = PointSet::new((0..7).map(|i| vec![i as f64 + 1.0])).unwrap();
        assert!(matches!(
            brute_force_distance(&p, 10),
            Err(Error::TooManyPoints { max: 6, found: 7 })
        ));
        let p = ps(&[&[1.0]]);
        assert!(matches!(
            brute_force_distance(&p, 9),
            Err(Error::BadResolution { .. })
        ));
    }

    #[test]
    fn single_point() {
        let s = brute_force_distance(&ps(&[&[2.0, 0.0]]), 10).unwrap();
        assert_eq!(s.norm, 2.0);
        assert_eq!(s.combination.support(), vec![0]);
    }

    #[test]
    fn orthogonal_pair() {
        let s = brute_force_distance(&ps(&[&[1.0, 0.0], &[0.0, 1.0]]), 10).unwrap();
        assert_relative_eq!(s.norm, SQRT_2 / 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.combination.weight(0), 0.5, epsilon = 1e-9);
        assert_relative_eq!(s.combination.weight(1), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn slanted_segment() {
        // Segment (1,0)-(-1,2) lies on x + y = 1; foot of the origin is
        // (1/2, 1/2) at weight 1/4 on the second endpoint.
        let s = brute_force_distance(&ps(&[&[1.0, 0.0], &[-1.0, 2.0]]), 10).unwrap();
        assert_relative_eq!(s.norm, SQRT_2 / 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.combination.weight(1), 0.25, epsilon = 1e-9);
    }

    #[test]
    fn interior_face_optimum() {
        // Nearest point (0,0,1) sits strictly inside the triangle.
        let p = ps(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[-1.0, -1.0, 1.0]]);
        let s = brute_force_distance(&p, 12).unwrap();
        assert_relative_eq!(s.norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn simplex_projection() {
        assert_eq!(project_to_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(project_to_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let w = project_to_simplex(&[0.3, -0.2, 0.4]);
        assert_relative_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert!(w.iter().all(|&x| x >= 0.0));
    }
}
