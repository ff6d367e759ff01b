//! The coproduct `Δ(a_ij) = Σ_k a_ik ⊗ a_kj` into the tensor square.

use std::sync::Arc;

use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::ncpoly::{Family, Polynomial, Presentation, Word};
use crate::qalgebras::{tensor_presentation, QuantumMatrix};
use crate::scalars::ParameterTable;

use super::det_q;

/// `A ⊗ A`, with the left factor on copy 1 (`a'`) and the right factor on
/// copy 2 (`a''`).
#[derive(Clone, Debug)]
pub struct TensorSquare {
    left: QuantumMatrix,
    right: QuantumMatrix,
    presentation: Arc<Presentation>,
}

impl TensorSquare {
    pub fn new(table: Arc<ParameterTable>) -> Result<TensorSquare> {
        let left = QuantumMatrix::with_copy(table.clone(), 1)?;
        let right = QuantumMatrix::with_copy(table, 2)?;
        let presentation =
            tensor_presentation(&[left.presentation().clone(), right.presentation().clone()])?;
        Ok(TensorSquare {
            left,
            right,
            presentation,
        })
    }

    pub fn left(&self) -> &QuantumMatrix {
        &self.left
    }

    pub fn right(&self) -> &QuantumMatrix {
        &self.right
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    /// `f ⊗ g` for `f`, `g` written in copy-0 generators.
    pub fn tensor(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        let relabel = |copy: u8, f: &Polynomial| -> Result<Polynomial> {
            check_a_family(f, self.left.n())?;
            Ok(f.map_words(|w| {
                w.iter()
                    .map(|g| crate::Generator::a_copy(copy, g.idx(0), g.idx(1)))
                    .collect()
            }))
        };
        self.presentation.product(&relabel(1, f)?, &relabel(2, g)?)
    }
}

fn check_a_family(f: &Polynomial, n: usize) -> Result<()> {
    for g in f.generators() {
        if g.family() != Family::A || g.copy() != 0 || g.idx(0) > n || g.idx(1) > n {
            return Err(Error::UndeclaredGenerator(g, format!("A({n})")));
        }
    }
    Ok(())
}

/// Extends `Δ` multiplicatively to a polynomial in the copy-0 generators
/// `a_ij` and normalizes the result in the tensor square.
pub fn coproduct(ts: &TensorSquare, f: &Polynomial) -> Result<Polynomial> {
    let n = ts.left.n();
    check_a_family(f, n)?;
    let mut out = Polynomial::zero();
    for (word, c) in f.terms() {
        let mut acc: Vec<(Word, crate::Rational)> = vec![(Word::new(), c.clone())];
        for g in word {
            let (i, j) = (g.idx(0), g.idx(1));
            let mut next = Vec::with_capacity(acc.len() * n);
            for (w, c) in &acc {
                for k in 1..=n {
                    let mut w = w.clone();
                    w.push(ts.left.gen(i, k));
                    w.push(ts.right.gen(k, j));
                    next.push((w, c.clone()));
                }
            }
            acc = next;
        }
        for (w, c) in acc {
            out.add_term(w, &c);
        }
    }
    ts.presentation.normal_form(&out)
}

/// `Δ(det_q) = det_q ⊗ det_q`.
pub fn grouplike_check(a: &QuantumMatrix) -> Result<Verdict> {
    let ts = TensorSquare::new(a.table().clone())?;
    let det = det_q(a)?;
    let lhs = coproduct(&ts, &det)?;
    let rhs = ts.tensor(&det, &det)?;
    Verdict::compare(
        &ts.presentation,
        "coproduct of det_q is group-like",
        &lhs,
        &rhs,
    )
}
