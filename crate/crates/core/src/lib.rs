//! Multiobjective descent with normalized gradients and Barzilai–Borwein steps.
//!
//! The crate provides
//!
//! * a suite of 21 box-constrained benchmark problems with analytic Jacobians
//!   ([`problems`]),
//! * a Frank–Wolfe solver for the simplex-constrained dual that yields common
//!   descent directions ([`simplex_qp`], [`direction`]),
//! * monotone and max-type nonmonotone backtracking searches ([`linesearch`]),
//! * three solvers: multiobjective steepest descent, a global BB method, and
//!   the normalized global BB method ([`solvers`]),
//! * a benchmark harness that reproduces iteration and evaluation statistics
//!   over seeded start points ([`bench`]).
//!
//! ```
//! use gbbn::problems::by_name;
//! use gbbn::solvers::{solve, Algorithm, SolverConfig};
//!
//! let p = by_name("JOS1c").unwrap();
//! let x0 = gbbn::sampling::sample_starts(&p, 1, 0).remove(0);
//! let cfg = SolverConfig::for_problem(&p);
//! let run = solve(Algorithm::Gbbn, &p, &x0, &cfg).unwrap();
//! assert!(run.converged());
//! ```

pub mod bench;
pub mod direction;
pub mod error;
pub mod linalg;
pub mod linesearch;
pub mod pareto;
pub mod problems;
pub mod sampling;
pub mod simplex_qp;
pub mod solvers;

pub use error::{Error, Result};
pub use problems::{Problem, VectorObjective};
