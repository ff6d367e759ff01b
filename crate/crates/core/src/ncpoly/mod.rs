//! Sparse noncommutative polynomials over the rationals, normal forms against
//! quadratic rewrite systems, and the local-confluence checker.

mod confluence;
mod generator;
mod polynomial;
mod presentation;

pub use confluence::{check_local_confluence, ConfluenceReport, FailedOverlap};
pub use generator::{graded_cmp, Family, Generator, Word, MAX_ARITY};
pub use polynomial::Polynomial;
pub use presentation::{Presentation, Rule, RuleRhs};
