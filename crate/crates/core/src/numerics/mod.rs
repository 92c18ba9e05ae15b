//! Deterministic numerical utilities shared by every other module:
//! seeded random streams, goodness-of-fit statistics, polynomial root
//! finding and dense linear solves.

pub mod ks;
pub mod linalg;
pub mod poly;
pub mod rng;
pub mod stats;

pub use ks::{ks_against_cdf, ks_against_cdf_with, ks_two_sample, ks_two_sample_with, KsReport};
pub use linalg::solve_linear;
pub use poly::{poly_roots, Polynomial};
pub use rng::RandomStream;
