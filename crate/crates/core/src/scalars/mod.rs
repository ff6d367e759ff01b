//! Exact coefficients and the `(p, λ)` parameter bookkeeping.

mod params;
mod perm;
mod rational;

pub use params::{ParamMatrix, ParameterTable};
pub use perm::{inv_factor, q_inversion, q_inversion_seq, quantum_factorial, quantum_number, Perm};
pub use rational::{ParseRationalError, Rational};
