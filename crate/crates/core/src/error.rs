use thiserror::Error;

use crate::ncpoly::{Generator, Polynomial};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("index sets overlap: {0:?} and {1:?}")]
    OverlappingSets(Vec<usize>, Vec<usize>),

    #[error("generator {0} is not declared in presentation {1}")]
    UndeclaredGenerator(Generator, String),

    #[error("tensor factors share generators: {0}")]
    OverlappingFamilies(String),

    #[error("singular relation system for {0}")]
    SingularSystem(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("precondition not met: {0}")]
    OutOfDomain(String),

    #[error("identity violated: {what}")]
    IdentityViolation { what: String, witness: Polynomial },

    #[error("rewriting did not terminate within {0} steps")]
    NonTermination(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
