//! Exact computer algebra for the multiparameter `(p, λ)` quantum matrix
//! algebra: quantum determinants and minors, Laplace expansions,
//! quasi-centrality, quantum Pfaffians and hyper-Pfaffians, and a
//! differential-forms oracle that recomputes each of them independently.
#![allow(clippy::needless_range_loop)]

pub mod check;
pub mod error;
pub mod forms;
pub mod ncpoly;
pub mod pfaffian;
pub mod qalgebras;
pub mod qlinalg;
pub mod scalars;
pub mod verify;

pub use check::Verdict;
pub use error::{Error, Result};
pub use ncpoly::{Generator, Polynomial, Presentation};
pub use scalars::{ParameterTable, Perm, Rational};
