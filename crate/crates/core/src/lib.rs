//! Coresets for the polytope-distance problem.
//!
//! Given a finite point set `P ⊂ ℝ^d`, the polytope-distance problem asks for
//! the point of `conv(P)` nearest the origin. This crate provides
//!
//! * [`geometry`]: point sets, convex combinations and the projection
//!   certificate that says how good a candidate point is;
//! * [`solver`]: a Frank-Wolfe (Gilbert) solver whose support is an
//!   ε-coreset, plus a brute-force reference for tiny inputs;
//! * [`merge`]: the shortest-point coreset, merge operators and a
//!   merge-and-reduce streaming harness;
//! * [`adversarial`]: three-point instances on which merging loses accuracy,
//!   with a clause-by-clause verifier;
//! * [`maxmargin`]: homogeneous max-margin separation via reduction to
//!   polytope distance;
//! * [`sample`]: seeded random instance generators.

pub mod adversarial;
pub mod error;
pub mod geometry;
pub mod maxmargin;
pub mod merge;
pub mod sample;
pub mod solver;

pub use adversarial::{
    theorem2_instance, theorem3_instance, verify_instance, AdversarialInstance, ClauseReport,
    Partition, Theorem,
};
pub use error::{Error, Result};
pub use geometry::{
    angle_between, angular_diameter, certify, epsilon_of, excentricity, projection_length,
    witness_point, Certificate, ConvexCombination, PointSet,
};
pub use maxmargin::{
    margin_certificate, reduce_labeled, solve_margin, AffineSeparator, Label, LabeledPointSet,
    MarginResult,
};
pub use merge::{
    merge_min_norm, merge_rerun, shortest_point_coreset, stream_process, MergeableCoreset,
    Strategy, StreamOptions, StreamRecord, StreamReport,
};
pub use solver::{
    brute_force_distance, coreset_size_bound, frank_wolfe, frank_wolfe_observed, OracleSolution,
    SolveResult, SolverConfig,
};
