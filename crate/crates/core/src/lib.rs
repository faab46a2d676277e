//! Certified real-root isolation for square nonlinear systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`interval`]: outward-rounded interval scalars, boxes and matrices.
//! * [`expr`]: the system text format, expression trees, interval extensions
//!   and symbolic Jacobians.
//! * [`contract`]: HC4, BC3, 3B shaving, Gauss–Seidel, Hansen–Sengupta and
//!   Krawczyk contractors, composable into pipelines.
//! * [`certify`]: existence/uniqueness tests, inflation and deduplication.
//! * [`solver`]: the branch-and-prune search.
//! * [`generators`]: seeded instance families (robot arms, Stewart platform,
//!   Kuramoto oscillators, flash unit, orbit determination).
//! * [`bench`]: dataset directory I/O, batch runs, result comparison and
//!   summary tables.

pub mod interval;

pub use interval::{Interval, IntervalBox, IntervalMatrix};
pub mod expr;

pub use expr::{parse_system, System};
pub mod contract;
pub mod certify;
pub mod solver;
pub mod generators;
pub mod bench;
