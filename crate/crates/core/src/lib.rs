//! Linear optimization under scenario uncertainty described by a
//! Dempster-Shafer mass function, minimizing the generalized Hurwicz
//! criterion `alpha * upper expectation + (1 - alpha) * lower expectation`.
//!
//! Modules:
//! * [`model`]: scenarios, mass functions, feasible sets and validation.
//! * [`criterion`]: expectations, the Hurwicz value and OWA masses.
//! * [`fuzzy`]: possibilistic focal elements and their crisp reduction.
//! * [`solvers`] and [`approx`]: exact and approximate minimization.
//! * [`verify`]: independent LP and brute-force oracles.
//! * [`mip`], [`io`], [`generate`]: model export, instance files, generators.
//! * [`linopt`]: the dense simplex solver used throughout.

pub mod approx;
pub mod criterion;
pub mod error;
pub mod fuzzy;
pub mod generate;
pub mod io;
pub mod linopt;
pub mod mip;
pub mod model;
pub mod solvers;
pub mod verify;

pub use criterion::{evaluate, Evaluation};
pub use error::{Error, Result, Violation};
pub use model::{FeasibleSet, FocalSet, Instance, MassFunction, MassModel, OwaMass, Polytope, ScenarioSet};
pub use solvers::{solve, MethodChoice, SolveOptions, SolveReport};
