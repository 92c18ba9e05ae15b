//! Performance analysis of carousel order-picking systems.
//!
//! One carousel: travel-time laws for pure-rotation, nearest-item, m-step
//! and optimal picking strategies, their spacing/exponential
//! representations and large-order limits. Two and more carousels: the
//! alternating-service waiting-time recursion, stationary solvers,
//! throughput, error bounds and the machine-repair comparison model.
//!
//! Geometry, sampling and law evaluation are generic over the scalar
//! ([`real::Real`], plus exact rationals where alternating sums require
//! them); solver modules with 1e-8..1e-12 tolerance contracts are
//! concrete on `f64`. The crate root exports double-precision aliases.

pub mod error;
pub mod multi;
pub mod numerics;
pub mod parallel;
pub mod queue;
pub mod real;
pub mod laws;
pub mod spacings;
pub mod strategies;

pub use error::{Error, Result};
pub use numerics::rng::RandomStream;

/// Double-precision aliases for the scalar-generic core types.
pub type OrderInstance64 = spacings::OrderInstance<f64>;
pub type SpacingVector64 = spacings::SpacingVector<f64>;
pub type ExponentialRepresentation64 = spacings::ExponentialRepresentation<f64>;
pub type RouteResult64 = strategies::RouteResult<f64>;
pub type CandidateRoute64 = strategies::CandidateRoute<f64>;
pub type RouteSample64 = strategies::RouteSample<f64>;
