//! Numerical Schubert calculus: Littlewood-Richardson counting and
//! homotopy solvers for instances of Schubert problems on Grassmannians.

pub mod combinatorics;
pub mod error;
pub mod geometry;
pub mod homotopy;
pub mod kernel;
pub mod solver;
pub mod systems;

pub use combinatorics::{Bracket, Partition, SchubertProblem};
pub use error::{Result, SchubertError};
pub use geometry::{check_incidence, Flag, KPlane, SchubertInstance};
pub use kernel::{CMatrix, RandomSource, C64};
pub use solver::{solve_schubert_problem, solve_simple_schubert, solve_via_known_instance, SolveOptions, SolveReport};
