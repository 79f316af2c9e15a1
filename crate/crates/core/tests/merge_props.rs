use std::f64::consts::FRAC_PI_2;

use polycoreset::merge::ANGLE_TOLERANCE;
use polycoreset::sample::{narrow_points, separable_points};
use polycoreset::{
    angular_diameter, merge_min_norm, shortest_point_coreset, stream_process, PointSet,
    SolverConfig, Strategy, StreamOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn split(points: &PointSet, sizes: &[usize]) -> Vec<PointSet> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&k| {
            let idx: Vec<usize> = (start..start + k).collect();
            start += k;
            points.subset(&idx).unwrap()
        })
        .collect()
}

fn random_sizes(rng: &mut ChaCha8Rng, total: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = total;
    while left > 0 {
        let k = rng.random_range(1..=left.min(6));
        sizes.push(k);
        left -= k;
    }
    sizes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shortest_point_is_a_one_minus_cos_coreset(seed in any::<u64>(), n in 1usize..=40, d in 1usize..=8) {
        let points = narrow_points(&mut ChaCha8Rng::seed_from_u64(seed), n, d);
        let theta = angular_diameter(&points).unwrap();
        let c = shortest_point_coreset(&points).unwrap();
        prop_assert!(c.measure_against(&points).unwrap() <= 1.0 - theta.cos() + 1e-9);
        prop_assert!(c.self_epsilon().unwrap() <= c.claimed_epsilon + 1e-12);
    }

    #[test]
    fn min_norm_merge_depends_only_on_the_multiset(seed in any::<u64>(), n in 2usize..=12, d in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = narrow_points(&mut rng, n, d);
        let singles: Vec<_> = points
            .iter()
            .map(|p| shortest_point_coreset(&PointSet::new([p]).unwrap()).unwrap())
            .collect();
        let bound = FRAC_PI_2;
        let left = singles[1..]
            .iter()
            .fold(singles[0].clone(), |acc, c| merge_min_norm(&acc, c, bound).unwrap());
        let right = singles[..singles.len() - 1]
            .iter()
            .rev()
            .fold(singles[n - 1].clone(), |acc, c| merge_min_norm(c, &acc, bound).unwrap());
        prop_assert_eq!(left.points.point(0), right.points.point(0));
        let ab = merge_min_norm(&singles[0], &singles[1], bound).unwrap();
        let ba = merge_min_norm(&singles[1], &singles[0], bound).unwrap();
        prop_assert_eq!(
            polycoreset::geometry::norm(ab.points.point(0)),
            polycoreset::geometry::norm(ba.points.point(0))
        );
        // The merged point is the global shortest.
        prop_assert_eq!(left.points.point(0), points.point(points.shortest_index()));
    }

    #[test]
    fn min_norm_stream_stays_under_prefix_bound(seed in any::<u64>(), n in 1usize..=30, d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = narrow_points(&mut rng, n, d);
        let sizes = random_sizes(&mut rng, n);
        let opts = StreamOptions {
            strategy: Strategy::MinNorm,
            config: SolverConfig::new(0.05).unwrap(),
            theta_bound: None,
        };
        let report = stream_process(&split(&points, &sizes), &opts).unwrap();
        let mut last = 0.0;
        for r in &report.records {
            prop_assert!(r.theta_prefix >= last);
            prop_assert!(r.theta_prefix <= FRAC_PI_2 + ANGLE_TOLERANCE);
            last = r.theta_prefix;
            prop_assert!(r.measured_epsilon >= 0.0);
            prop_assert!(r.measured_epsilon <= r.bound + 1e-9);
        }
    }

    #[test]
    fn full_recompute_stays_on_target(seed in any::<u64>(), n in 1usize..=40, d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = separable_points(&mut rng, n, d);
        let sizes = random_sizes(&mut rng, n);
        let eps = 0.01;
        let opts = StreamOptions {
            strategy: Strategy::FullRecompute,
            config: SolverConfig::new(eps).unwrap(),
            theta_bound: None,
        };
        let report = stream_process(&split(&points, &sizes), &opts).unwrap();
        for r in &report.records {
            prop_assert!(r.converged);
            prop_assert!(r.measured_epsilon <= eps);
        }
    }

    #[test]
    fn rerun_claims_are_met_on_the_retained_union(seed in any::<u64>(), n in 2usize..=30, d in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = separable_points(&mut rng, n, d);
        let sizes = random_sizes(&mut rng, n);
        let eps = 0.02;
        let opts = StreamOptions {
            strategy: Strategy::Rerun,
            config: SolverConfig::new(eps).unwrap(),
            theta_bound: None,
        };
        let report = stream_process(&split(&points, &sizes), &opts).unwrap();
        for r in &report.records {
            prop_assert!(r.claimed_epsilon <= eps);
            prop_assert!(r.measured_epsilon >= 0.0);
        }
    }
}
