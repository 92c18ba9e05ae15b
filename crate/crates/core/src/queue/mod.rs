//! Two-carousel alternating-service model: simulation of the
//! waiting-time recursion, stationary solvers, structural solutions for
//! Erlang laws, the perturbation error bound, covariance diagnostics and
//! throughput sensitivity.

pub mod covariance;
pub mod dist;
pub mod erlang_rotation;
pub mod erlang_uniform;
pub mod error_bound;
pub mod fixed_point;
pub mod sensitivity;
pub mod sim;

pub use covariance::{covariance_diagnostics, LagCovariance};
pub use dist::{DistributionSpec, ErlangBranch};
pub use erlang_rotation::{solve_erlang_rotation, ErlangRotationSolution};
pub use erlang_uniform::{erlang_uniform_structure, ErlangUniformStructure};
pub use error_bound::{discretized_uniform, error_bound_check, ErrorBoundReport};
pub use fixed_point::{solve_stationary_fixed_point, SolverOptions, StationarySolution};
pub use sensitivity::{throughput_sensitivity, SensitivityReport};
pub use sim::{simulate_recursion, simulate_waits, QueueSummary, WaitingPath};
