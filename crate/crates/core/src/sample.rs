//! Random instance generators. All take the caller's RNG so that a single
//! seed drives an entire experiment.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::{angular_diameter, dot, norm, PointSet};
use crate::maxmargin::{Label, LabeledPointSet};

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-6 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// `n` points `a·u + g` with `a ∈ [lo, hi)` along a random axis `u` and
/// Gaussian noise `g` orthogonal to `u` of per-coordinate scale `sigma`.
/// Every point has positive projection on `u`, so the origin is outside the
/// hull.
fn around_axis<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    dim: usize,
    (lo, hi): (f64, f64),
    sigma: f64,
) -> Vec<Vec<f64>> {
    let axis = unit_vector(rng, dim);
    (0..n)
        .map(|_| {
            let mut g: Vec<f64> = (0..dim)
                .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let along = dot(&g, &axis);
            let a = rng.random_range(lo..hi);
            for (gk, uk) in g.iter_mut().zip(&axis) {
                *gk += (a - along) * uk;
            }
            g
        })
        .collect()
}

/// Point set whose hull avoids the origin; angular diameter unrestricted.
pub fn separable_points<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize) -> PointSet {
    PointSet::new(around_axis(rng, n, dim, (0.2, 1.5), 1.0)).expect("finite points")
}

/// Point set with angular diameter at most `π/2`, rejection-sampled from
/// clouds of random spread around a random axis.
pub fn narrow_points<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize) -> PointSet {
    loop {
        let spread = rng.random_range(0.05..1.0) / (dim as f64).sqrt();
        let points =
            PointSet::new(around_axis(rng, n, dim, (0.3, 1.5), spread)).expect("finite points");
        if angular_diameter(&points).is_ok_and(|t| t <= FRAC_PI_2) {
            return points;
        }
    }
}

/// Labeled set that a hyperplane through the origin separates with positive
/// margin; labels are uniform.
pub fn separable_labeled<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize) -> LabeledPointSet {
    let reduced = around_axis(rng, n, dim, (0.2, 1.5), 1.0);
    let mut labels = Vec::with_capacity(n);
    let rows: Vec<Vec<f64>> = reduced
        .into_iter()
        .map(|q| {
            let label = if rng.random_bool(0.5) {
                Label::Positive
            } else {
                Label::Negative
            };
            labels.push(label);
            q.into_iter().map(|c| label.sign() * c).collect()
        })
        .collect();
    LabeledPointSet::new(PointSet::new(rows).expect("finite points"), labels)
        .expect("labels aligned")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::maxmargin::reduce_labeled;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.random_range(1..20);
            let d = rng.random_range(1..6);
            let p = narrow_points(&mut rng, n, d);
            assert_eq!(p.len(), n);
            assert!(angular_diameter(&p).unwrap() <= FRAC_PI_2);

            let l = separable_labeled(&mut rng, n, d);
            let q = reduce_labeled(&l);
            assert_eq!(q.dim(), d);
            let u = unit_vector(&mut rng, d);
            assert!((norm(&u) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_points() {
        let a = separable_points(&mut ChaCha8Rng::seed_from_u64(3), 5, 3);
        let b = separable_points(&mut ChaCha8Rng::seed_from_u64(3), 5, 3);
        assert_eq!(a, b);
    }
}
