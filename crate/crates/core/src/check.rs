//! Outcome of an identity check.

use serde_json::{json, Value};

use crate::error::Result;
use crate::ncpoly::{Polynomial, Presentation};

/// Whether an identity held; on failure, carries the nonzero residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails { what: String, residue: Polynomial },
}

impl Verdict {
    /// Normalizes `lhs − rhs` and reports any residue.
    pub fn compare(
        p: &Presentation,
        what: impl Into<String>,
        lhs: &Polynomial,
        rhs: &Polynomial,
    ) -> Result<Verdict> {
        Verdict::zero(p, what, &(lhs - rhs))
    }

    /// Normalizes `f` and reports it as the residue if nonzero.
    pub fn zero(p: &Presentation, what: impl Into<String>, f: &Polynomial) -> Result<Verdict> {
        let residue = p.normal_form(f)?;
        Ok(if residue.is_zero() {
            Verdict::Holds
        } else {
            Verdict::Fails {
                what: what.into(),
                residue,
            }
        })
    }

    pub fn pass(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Polynomial> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails { residue, .. } => Some(residue),
        }
    }

    /// Keeps the first failure.
    pub fn and(self, other: Verdict) -> Verdict {
        if self.pass() {
            other
        } else {
            self
        }
    }

    /// Runs checks in order and stops at the first failure.
    pub fn all(checks: impl IntoIterator<Item = Result<Verdict>>) -> Result<Verdict> {
        for v in checks {
            let v = v?;
            if !v.pass() {
                return Ok(v);
            }
        }
        Ok(Verdict::Holds)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Holds => json!({ "pass": true }),
            Verdict::Fails { what, residue } => {
                json!({ "pass": false, "failed": what, "witness": residue.to_json() })
            }
        }
    }
}
