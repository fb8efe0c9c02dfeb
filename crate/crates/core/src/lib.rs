//! Solver for the multi-returning secretary problem: `n` rankable candidates
//! arrive one at a time in uniformly random order, each present as `m`
//! identical copies, and the goal is to stop on the best one.
//!
//! Three cooperating pieces:
//!
//! * [`dp`]: linear-time backward induction for the value tables, the
//!   optimal threshold `k*`, and the success probability `P(k*)`;
//! * [`montecarlo`]: seeded, reproducible simulation of the arrival process
//!   and exact exhaustive enumeration of tiny instances;
//! * [`asymptotics`]: the `n -> infinity` limits via an exact-rational
//!   power-series solution of the limiting ODE system: the threshold
//!   fraction `theta_m` and the limiting success probability `pi_m`.

pub mod asymptotics;
pub mod dp;
pub mod montecarlo;
pub mod problem;
pub mod scalar;
pub mod tables;

pub use asymptotics::{
    asymptotic_solution, build_system, limit_probability, taylor_solve, theta_limit,
    AsymptoticSolution, Fixed, OdeEquation, OdeSystem, TaylorSeries, ThetaLimit,
};
pub use dp::{solve, tables, Solution, ThresholdSolution};
pub use montecarlo::{
    estimate, exhaustive, exhaustive_all, exhaustive_optimal, run_trial, SimulationConfig,
    SimulationEstimate, SplitMix64, DEFAULT_ENUMERATION_CAP,
};
pub use problem::{ArithmeticMode, Error, ProblemSpec};
pub use scalar::Scalar;
pub use tables::{Table, TableSet, ValueTables};
