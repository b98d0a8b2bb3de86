//! Composition ordering of monotone linear and piecewise-linear functions.
//!
//! Given functions f_1, ..., f_n and a start value c, the library finds the
//! order in which to compose them so that the final value is maximized (or
//! minimized). Three problem shapes are supported: composing all n functions,
//! composing the best prefix of some order, and composing exactly k of them.
//! All core arithmetic is exact (arbitrary-precision rationals).
//!
//! Layout:
//! - [`numeric`]: rationals, extended reals, parsing.
//! - [`functions`]: affine / clamped / piecewise-linear functions, hulls,
//!   envelopes.
//! - [`ordering`]: pairwise precedence tests and the sort key behind the
//!   exact solvers.
//! - [`solvers`]: polynomial-time exact solvers for all three shapes.
//! - [`oracle`]: factorial-time brute force used to cross-check the solvers.
//! - [`adapters`]: scheduling and hiring front ends.
//! - [`gadgets`]: reductions showing where the tractability boundary lies.
//! - [`float`]: a fast f64 backend for large instances where exactness is
//!   not required.

pub mod adapters;
pub mod float;
pub mod functions;
pub mod gadgets;
pub mod numeric;
pub mod oracle;
pub mod ordering;
pub mod solvers;

pub use functions::{AffineFn, ClampedFn, Function, FunctionError, MonotonePwlFn};
pub use numeric::{ExtReal, NumericError, Rational};
pub use ordering::{PrecedenceVerdict, lex_sort};
pub use solvers::{solve, solve_min, Instance, Mode, Objective, Solution, SolverError};
