//! Three-point planar instances on which merging coresets loses accuracy.
//!
//! Both constructions put `p1` on the positive x-axis, `p2` at angle `θ/2` and
//! `p3` at angle `θ`, split the set as `P1 = {p2, p3}`, `P2 = {p1}` and pick
//! `S1 = {p2}`, `S2 = {p1}`, `S = {p1}`.
//!
//! * [`Theorem::Equal`]: all three points have unit length. `S1`, `S2` and `S`
//!   are `(1 - cos θ/2)`-coresets of their sets, yet `S` is only a
//!   `(1 - cos θ)`-coreset of `P`.
//! * [`Theorem::Nested`]: `p2|p1 = |p1|` and `p3|p2 = |p2|`, so every local
//!   choice is a 0-coreset, yet `S` is only a `(1 - cos θ)/(1 + cos θ)`-coreset
//!   of `P`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_between, certify, norm, projection_length, PointSet};

/// Tolerance of the clause and construction checks.
pub const CLAUSE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// Equal-norm construction (merging `(1 - cos θ/2)`-coresets).
    #[serde(rename = "2")]
    Equal,
    /// Nested-projection construction (merging 0-coresets).
    #[serde(rename = "3")]
    Nested,
}

impl Theorem {
    pub fn number(self) -> u8 {
        match self {
            Theorem::Equal => 2,
            Theorem::Nested => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            2 => Some(Theorem::Equal),
            3 => Some(Theorem::Nested),
            _ => None,
        }
    }

    /// ε each local coreset is allowed.
    pub fn small_epsilon(self, theta: f64) -> f64 {
        match self {
            Theorem::Equal => 1.0 - (theta / 2.0).cos(),
            Theorem::Nested => 0.0,
        }
    }

    /// ε the merged coreset actually has against the whole set.
    pub fn final_epsilon(self, theta: f64) -> f64 {
        let c = theta.cos();
        match self {
            Theorem::Equal => 1.0 - c,
            Theorem::Nested => (1.0 - c) / (1.0 + c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
}

/// A constructed instance together with its claimed coresets and bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialInstance {
    pub points: PointSet,
    pub partition: Partition,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s: Vec<usize>,
    pub theorem: Theorem,
    pub theta: f64,
    pub expected_small_eps: f64,
    pub expected_final_eps_lower_bound: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::BadTheta(theta))
    }
}

fn build(theorem: Theorem, theta: f64, points: [[f64; 2]; 3]) -> Result<AdversarialInstance> {
    Ok(AdversarialInstance {
        points: PointSet::new(points)?,
        partition: Partition {
            p1: vec![1, 2],
            p2: vec![0],
        },
        s1: vec![1],
        s2: vec![0],
        s: vec![0],
        theorem,
        theta,
        expected_small_eps: theorem.small_epsilon(theta),
        expected_final_eps_lower_bound: theorem.final_epsilon(theta),
    })
}

/// Unit vectors at angles `0`, `θ/2` and `θ`.
pub fn theorem2_instance(theta: f64) -> Result<AdversarialInstance> {
    check_theta(theta)?;
    let half = theta / 2.0;
    build(
        Theorem::Equal,
        theta,
        [
            [1.0, 0.0],
            [half.cos(), half.sin()],
            [theta.cos(), theta.sin()],
        ],
    )
}

/// `p1 = (1, 0)`, `p2 = (1, tan θ/2)`, and `p3` at angle `θ` with length
/// `1 / cos²(θ/2)`.
pub fn theorem3_instance(theta: f64) -> Result<AdversarialInstance> {
    check_theta(theta)?;
    let half = theta / 2.0;
    let scale = 1.0 / (half.cos() * half.cos());
    build(
        Theorem::Nested,
        theta,
        [
            [1.0, 0.0],
            [1.0, half.tan()],
            [scale * theta.cos(), scale * theta.sin()],
        ],
    )
}

/// Outcome of checking the four clauses on an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseReport {
    pub theorem: Theorem,
    pub theta: f64,
    /// Norm, projection and angle relations of the construction hold.
    pub construction_ok: bool,
    /// `S1` is an `expected_small_eps`-coreset of `P1`.
    pub clause1: bool,
    /// `S2` is an `expected_small_eps`-coreset of `P2`.
    pub clause2: bool,
    /// `S` is an `expected_small_eps`-coreset of `S1 ∪ S2`.
    pub clause3: bool,
    /// `S` measured against the full set equals the final bound.
    pub clause4: bool,
    pub eps_s1_p1: f64,
    pub eps_s2_p2: f64,
    pub eps_s_union: f64,
    pub eps_s_full: f64,
    pub expected_small_eps: f64,
    pub expected_final_eps: f64,
    pub bound_attained: bool,
    /// The witness of `S` is orthogonal to some point (ε̂ = 1); happens at
    /// `θ = π/2`.
    pub degenerate_certificate: bool,
}

impl ClauseReport {
    pub fn all_passed(&self) -> bool {
        self.construction_ok && self.clause1 && self.clause2 && self.clause3 && self.clause4
    }
}

/// ε̂ of the shortest point of `chosen` (as a single-vertex witness) against
/// `universe`, both given as indices into `points`.
fn selection_epsilon(points: &PointSet, chosen: &[usize], universe: &[usize]) -> Result<f64> {
    let witness = points.point(chosen[0]);
    let universe = points.subset(universe)?;
    Ok(certify(witness, &universe)?.epsilon_hat)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CLAUSE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn construction_holds(inst: &AdversarialInstance) -> Result<bool> {
    let p = |i| inst.points.point(i);
    let half = inst.theta / 2.0;
    let angles_ok = close(angle_between(p(0), p(1)), half)
        && close(angle_between(p(1), p(2)), half)
        && close(angle_between(p(0), p(2)), inst.theta);
    let relation_ok = match inst.theorem {
        Theorem::Equal => close(norm(p(0)), norm(p(1))) && close(norm(p(1)), norm(p(2))),
        Theorem::Nested => {
            close(projection_length(p(1), p(0))?, norm(p(0)))
                && close(projection_length(p(2), p(1))?, norm(p(1)))
        }
    };
    Ok(angles_ok && relation_ok)
}

fn check_structure(inst: &AdversarialInstance) -> Result<()> {
    let malformed = |msg: &str| Err(Error::MalformedInstance(msg.to_string()));
    if inst.points.len() != 3 || inst.points.dim() != 2 {
        return malformed("expected three points in the plane");
    }
    if !(inst.theta > 0.0 && inst.theta <= FRAC_PI_2) {
        return malformed("theta outside (0, pi/2]");
    }
    let sets = [
        &inst.partition.p1,
        &inst.partition.p2,
        &inst.s1,
        &inst.s2,
        &inst.s,
    ];
    if sets
        .iter()
        .any(|s| s.is_empty() || s.iter().any(|&i| i >= 3))
    {
        return malformed("index sets must be nonempty and refer to p1..p3");
    }
    let mut all: Vec<usize> = inst
        .partition
        .p1
        .iter()
        .chain(&inst.partition.p2)
        .copied()
        .collect();
    all.sort_unstable();
    if all != [0, 1, 2] {
        return malformed("P1 and P2 must partition the point set");
    }
    let within = |sub: &[usize], sup: &[usize]| sub.iter().all(|i| sup.contains(i));
    if !within(&inst.s1, &inst.partition.p1) || !within(&inst.s2, &inst.partition.p2) {
        return malformed("S1 and S2 must be subsets of P1 and P2");
    }
    let union: Vec<usize> = inst.s1.iter().chain(&inst.s2).copied().collect();
    if !within(&inst.s, &union) {
        return malformed("S must be a subset of S1 and S2");
    }
    if [&inst.s1, &inst.s2, &inst.s].iter().any(|s| s.len() != 1) {
        return malformed("selections must be single points");
    }
    Ok(())
}

/// Checks clauses (1)–(4) on `inst`.
///
/// Structural problems (wrong point count, bad index sets) are errors.
/// Geometric deviations from the construction are reported through
/// `construction_ok` and the clause flags so that perturbed instances can be
/// inspected.
pub fn verify_instance(inst: &AdversarialInstance) -> Result<ClauseReport> {
    check_structure(inst)?;
    let p = &inst.points;
    let union: Vec<usize> = inst.s1.iter().chain(&inst.s2).copied().collect();
    let all: Vec<usize> = (0..p.len()).collect();

    let eps_s1_p1 = selection_epsilon(p, &inst.s1, &inst.partition.p1)?;
    let eps_s2_p2 = selection_epsilon(p, &inst.s2, &inst.partition.p2)?;
    let eps_s_union = selection_epsilon(p, &inst.s, &union)?;
    let eps_s_full = selection_epsilon(p, &inst.s, &all)?;

    let small = inst.expected_small_eps + CLAUSE_TOLERANCE;
    let bound = inst.expected_final_eps_lower_bound;
    let clause4 = (eps_s_full - bound).abs() <= CLAUSE_TOLERANCE;
    Ok(ClauseReport {
        theorem: inst.theorem,
        theta: inst.theta,
        construction_ok: construction_holds(inst)?,
        clause1: eps_s1_p1 <= small,
        clause2: eps_s2_p2 <= small,
        clause3: eps_s_union <= small,
        clause4,
        eps_s1_p1,
        eps_s2_p2,
        eps_s_union,
        eps_s_full,
        expected_small_eps: inst.expected_small_eps,
        expected_final_eps: bound,
        bound_attained: clause4,
        degenerate_certificate: eps_s_full >= 1.0 - CLAUSE_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_3;

    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn theta_range() {
        for bad in [0.0, -0.1, FRAC_PI_2 + 1e-9, f64::NAN, f64::INFINITY] {
            assert!(matches!(theorem2_instance(bad), Err(Error::BadTheta(_))));
            assert!(matches!(theorem3_instance(bad), Err(Error::BadTheta(_))));
        }
        assert!(theorem2_instance(FRAC_PI_2).is_ok());
    }

    #[test]
    fn equal_norm_spot_values() {
        let r = verify_instance(&theorem2_instance(FRAC_PI_3).unwrap()).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_relative_eq!(r.eps_s_full, 0.5, epsilon = 1e-12);
        assert_relative_eq!(r.eps_s1_p1, 1.0 - (FRAC_PI_3 / 2.0).cos(), epsilon = 1e-15);
        assert_eq!(r.eps_s2_p2, 0.0);

        let inst = theorem2_instance(FRAC_PI_2).unwrap();
        assert_relative_eq!(inst.points.point(2)[0], 0.0, epsilon = 1e-16);
        assert_relative_eq!(inst.points.point(2)[1], 1.0);
        let r = verify_instance(&inst).unwrap();
        assert!(r.all_passed());
        assert_relative_eq!(r.eps_s_full, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn equal_norm_small_angle_matches_taylor() {
        let theta = 1e-3;
        let r = verify_instance(&theorem2_instance(theta).unwrap()).unwrap();
        assert!((r.eps_s_full - theta * theta / 2.0).abs() <= 1e-9);
        assert!(r.clause4);
    }

    #[test]
    fn nested_spot_values() {
        let inst = theorem3_instance(FRAC_PI_3).unwrap();
        let r = verify_instance(&inst).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_relative_eq!(r.eps_s_full, 1.0 / 3.0, epsilon = 1e-12);
        for e in [r.eps_s1_p1, r.eps_s2_p2, r.eps_s_union] {
            assert!(e.abs() <= 1e-12);
        }
        assert!(!r.degenerate_certificate);

        let r = verify_instance(&theorem3_instance(FRAC_PI_2).unwrap()).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_relative_eq!(r.eps_s_full, 1.0, epsilon = 1e-12);
        assert!(r.degenerate_certificate);
    }

    #[test]
    fn perturbed_instance_misses_bound() {
        let mut inst = theorem2_instance(FRAC_PI_3).unwrap();
        let rows = inst.points.to_rows();
        let (p1, p3) = (&rows[0], &rows[2]);
        let nudged: Vec<f64> = p3.iter().zip(p1).map(|(a, b)| a + 1e-3 * (b - a)).collect();
        inst.points = PointSet::new([rows[0].clone(), rows[1].clone(), nudged]).unwrap();
        let r = verify_instance(&inst).unwrap();
        assert!(r.eps_s_full < inst.expected_final_eps_lower_bound);
        assert!(!r.bound_attained);
        assert!(!r.clause4);
        assert!(!r.construction_ok);
        assert!(!r.all_passed());
    }

    #[test]
    fn malformed_structure_is_rejected() {
        let mut inst = theorem3_instance(1.0).unwrap();
        inst.s = vec![2];
        assert!(matches!(
            verify_instance(&inst),
            Err(Error::MalformedInstance(_))
        ));

        let mut inst = theorem3_instance(1.0).unwrap();
        inst.partition.p2 = vec![1];
        assert!(matches!(
            verify_instance(&inst),
            Err(Error::MalformedInstance(_))
        ));

        let mut inst = theorem2_instance(1.0).unwrap();
        inst.points = PointSet::new([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            verify_instance(&inst),
            Err(Error::MalformedInstance(_))
        ));
    }

    #[test]
    fn closed_forms_ordered_and_increasing() {
        let grid: Vec<f64> = (1..=100).map(|k| FRAC_PI_2 * k as f64 / 100.0).collect();
        for w in grid.windows(2) {
            for t in [Theorem::Equal, Theorem::Nested] {
                assert!(t.final_epsilon(w[1]) > t.final_epsilon(w[0]));
            }
        }
        for &theta in &grid[..99] {
            assert!(Theorem::Nested.final_epsilon(theta) < Theorem::Equal.final_epsilon(theta));
        }
    }
}
