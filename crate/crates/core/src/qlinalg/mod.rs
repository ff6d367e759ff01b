//! Quantum determinants and minors, Laplace expansions, and the identities
//! built on them.

mod coproduct;
mod identities;

use itertools::Itertools;

use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::ncpoly::{Polynomial, Word};
use crate::qalgebras::QuantumMatrix;
use crate::scalars::{q_inversion_seq, Perm, Rational};

pub use coproduct::{coproduct, grouplike_check, TensorSquare};
pub use identities::{
    centrality_predicate, cleared_antipode_check, cofactor_check, nested_minor_commute_check,
    quasi_central_check, quasi_central_factor,
};

/// Row and column index tuples of a square sub-array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSpec {
    /// Both tuples strictly increasing, of equal length, inside `1..=n`.
    pub fn new(n: usize, rows: Vec<usize>, cols: Vec<usize>) -> Result<MinorSpec> {
        if rows.len() != cols.len() {
            return Err(Error::Malformed(format!(
                "minor with {} rows and {} columns",
                rows.len(),
                cols.len()
            )));
        }
        for (what, t) in [("rows", &rows), ("cols", &cols)] {
            if t.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::Malformed(format!("{what} {t:?} outside 1..={n}")));
            }
            if t.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Malformed(format!(
                    "{what} {t:?} not strictly increasing"
                )));
            }
        }
        Ok(MinorSpec { rows, cols })
    }

    /// The principal minor on `indices`.
    pub fn principal(n: usize, indices: Vec<usize>) -> Result<MinorSpec> {
        MinorSpec::new(n, indices.clone(), indices)
    }

    /// All indices except `row` and all except `col`.
    pub fn complement(n: usize, row: usize, col: usize) -> Result<MinorSpec> {
        let skip = |k| (1..=n).filter(move |&i| i != k).collect();
        MinorSpec::new(n, skip(row), skip(col))
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// `Σ_σ weight(σ(cols)) a_{r1,σ1}⋯a_{rt,σt}` over all orderings of `cols`,
/// normalized. Rows may repeat.
pub fn row_minor_weighted(
    a: &QuantumMatrix,
    rows: &[usize],
    cols: &[usize],
    weight: &dyn Fn(&[usize]) -> Rational,
) -> Result<Polynomial> {
    check_lengths(rows, cols)?;
    let mut out = Polynomial::zero();
    for order in cols.iter().copied().permutations(cols.len()) {
        let word: Word = rows
            .iter()
            .zip(&order)
            .map(|(&r, &c)| a.gen(r, c))
            .collect();
        out.add_term(word, &weight(&order));
    }
    a.presentation().normal_form(&out)
}

/// `Σ_τ weight(τ(rows)) a_{τ1,c1}⋯a_{τt,ct}` over all orderings of `rows`,
/// normalized. Columns may repeat.
pub fn col_minor_weighted(
    a: &QuantumMatrix,
    rows: &[usize],
    cols: &[usize],
    weight: &dyn Fn(&[usize]) -> Rational,
) -> Result<Polynomial> {
    check_lengths(rows, cols)?;
    let mut out = Polynomial::zero();
    for order in rows.iter().copied().permutations(rows.len()) {
        let word: Word = order.iter().zip(cols).map(|(&r, &c)| a.gen(r, c)).collect();
        out.add_term(word, &weight(&order));
    }
    a.presentation().normal_form(&out)
}

fn check_lengths(rows: &[usize], cols: &[usize]) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::Malformed(format!(
            "{} rows against {} columns",
            rows.len(),
            cols.len()
        )));
    }
    Ok(())
}

/// Row-form minor with `(−q)` weights on the column values. Rows may repeat,
/// columns must be distinct.
pub fn row_minor(a: &QuantumMatrix, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
    let q = a.table().q();
    row_minor_weighted(a, rows, cols, &|order| q_inversion_seq(order, q))
}

/// Column-form minor with `(−p)` weights on the row values. Columns may
/// repeat, rows must be distinct.
pub fn col_minor(a: &QuantumMatrix, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
    let p = a.table().p();
    col_minor_weighted(a, rows, cols, &|order| q_inversion_seq(order, p))
}

/// `det_q(A^{rows}_{cols})` in row form.
pub fn quantum_minor(a: &QuantumMatrix, spec: &MinorSpec) -> Result<Polynomial> {
    row_minor(a, &spec.rows, &spec.cols)
}

/// `Σ_σ (−q)_σ a_{1σ1}⋯a_{nσn}`.
pub fn rdet(a: &QuantumMatrix) -> Result<Polynomial> {
    let all: Vec<usize> = (1..=a.n()).collect();
    row_minor(a, &all, &all)
}

/// `Σ_σ (−p)_σ a_{σ1 1}⋯a_{σn n}`.
pub fn cdet(a: &QuantumMatrix) -> Result<Polynomial> {
    let all: Vec<usize> = (1..=a.n()).collect();
    col_minor(a, &all, &all)
}

/// The quantum determinant. Fails with [`Error::IdentityViolation`] if the
/// row and column forms disagree.
pub fn det_q(a: &QuantumMatrix) -> Result<Polynomial> {
    let r = rdet(a)?;
    let c = cdet(a)?;
    if r != c {
        return Err(Error::IdentityViolation {
            what: "rdet = cdet".into(),
            witness: &r - &c,
        });
    }
    Ok(r)
}

/// Every `t`-shuffle of `1..=n`: increasing on the first `t` and the last
/// `n−t` positions, ordered by the first block.
pub fn shuffles(n: usize, t: usize) -> Vec<Perm> {
    assert!(t <= n);
    (1..=n)
        .combinations(t)
        .map(|head| {
            let tail = (1..=n).filter(|i| !head.contains(i));
            Perm::new(head.iter().copied().chain(tail).collect()).expect("shuffle")
        })
        .collect()
}

fn check_shuffle(sigma: &Perm, t: usize) -> Result<()> {
    let im = sigma.images();
    let ok = t <= im.len()
        && im[..t].windows(2).all(|w| w[0] < w[1])
        && im[t..].windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::Malformed(format!("{sigma:?} is not a {t}-shuffle")))
    }
}

/// Row Laplace expansion along the row blocks of `sigma`:
/// `Σ_α (−q)_α/(−q)_σ · det_q(A^{σ'}_{α'}) det_q(A^{σ''}_{α''})`.
pub fn laplace_row(a: &QuantumMatrix, sigma: &Perm, t: usize) -> Result<Polynomial> {
    check_shuffle(sigma, t)?;
    let q = a.table().q();
    let n = a.n();
    if sigma.len() != n {
        return Err(Error::Malformed(format!(
            "shuffle of length {} for n = {n}",
            sigma.len()
        )));
    }
    let (head, tail) = sigma.images().split_at(t);
    let base = q_inversion_seq(sigma.images(), q).recip();
    let mut out = Polynomial::zero();
    for alpha in shuffles(n, t) {
        let (ah, at) = alpha.images().split_at(t);
        let left = row_minor(a, head, ah)?;
        let right = row_minor(a, tail, at)?;
        let c = q_inversion_seq(alpha.images(), q) * &base;
        out.add_scaled(&left.multiply(&right), &c);
    }
    a.presentation().normal_form(&out)
}

/// Column Laplace expansion along the column blocks of `tau`, with `(−p)`
/// weights on the row shuffles.
pub fn laplace_col(a: &QuantumMatrix, tau: &Perm, t: usize) -> Result<Polynomial> {
    check_shuffle(tau, t)?;
    let p = a.table().p();
    let n = a.n();
    if tau.len() != n {
        return Err(Error::Malformed(format!(
            "shuffle of length {} for n = {n}",
            tau.len()
        )));
    }
    let (head, tail) = tau.images().split_at(t);
    let base = q_inversion_seq(tau.images(), p).recip();
    let mut out = Polynomial::zero();
    for beta in shuffles(n, t) {
        let (bh, bt) = beta.images().split_at(t);
        let left = col_minor(a, bh, head)?;
        let right = col_minor(a, bt, tail)?;
        let c = q_inversion_seq(beta.images(), p) * &base;
        out.add_scaled(&left.multiply(&right), &c);
    }
    a.presentation().normal_form(&out)
}

/// Row and column Laplace expansions for every `t`-shuffle against `det_q`.
pub fn laplace_check(a: &QuantumMatrix, t: usize) -> Result<Verdict> {
    let det = det_q(a)?;
    let p = a.presentation();
    Verdict::all(shuffles(a.n(), t).into_iter().flat_map(|s| {
        let det = det.clone();
        let s2 = s.clone();
        [
            laplace_row(a, &s, t)
                .and_then(|f| Verdict::compare(p, format!("row Laplace {s:?}"), &f, &det)),
            laplace_col(a, &s2, t)
                .and_then(|f| Verdict::compare(p, format!("column Laplace {s2:?}"), &f, &det)),
        ]
    }))
}

/// Row-form and column-form minors agree for every pair of increasing
/// `t`-tuples.
pub fn minor_agreement_check(a: &QuantumMatrix, t: usize) -> Result<Verdict> {
    let n = a.n();
    let tuples: Vec<Vec<usize>> = (1..=n).combinations(t).collect();
    let pairs = tuples.iter().cartesian_product(&tuples);
    Verdict::all(pairs.map(|(r, c)| {
        let row = row_minor(a, r, c)?;
        let col = col_minor(a, r, c)?;
        Verdict::compare(a.presentation(), format!("minor {r:?}x{c:?}"), &row, &col)
    }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::scalars::ParameterTable;

    fn matrix(n: usize, seed: u64) -> QuantumMatrix {
        let t = ParameterTable::seeded(n, ParameterTable::lambda_for_seed(seed), seed).unwrap();
        QuantumMatrix::new(Arc::new(t)).unwrap()
    }

    #[test]
    fn small_determinants() {
        let a = matrix(1, 0);
        assert_eq!(det_q(&a).unwrap(), a.entry(1, 1));
        let a = matrix(2, 1);
        let q12 = a.q(1, 2).clone();
        let expect = &Polynomial::word(&[a.gen(1, 1), a.gen(2, 2)])
            - &Polynomial::word(&[a.gen(1, 2), a.gen(2, 1)]).scale(&q12);
        assert_eq!(rdet(&a).unwrap(), expect);
        assert_eq!(det_q(&a).unwrap(), expect);
        let raw_c = &Polynomial::word(&[a.gen(1, 1), a.gen(2, 2)])
            - &Polynomial::word(&[a.gen(2, 1), a.gen(1, 2)]).scale(a.p(1, 2));
        assert_eq!(
            a.presentation().normal_form(&raw_c).unwrap(),
            cdet(&a).unwrap()
        );
    }

    #[test]
    fn rdet_equals_cdet() {
        for n in 1..=4 {
            for seed in 0..3 {
                let a = matrix(n, seed);
                assert!(det_q(&a).is_ok(), "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn minor_forms() {
        let a = matrix(3, 4);
        let m = quantum_minor(&a, &MinorSpec::new(3, vec![1], vec![2]).unwrap()).unwrap();
        assert_eq!(m, a.entry(1, 2));
        let m = quantum_minor(&a, &MinorSpec::principal(3, vec![1, 2]).unwrap()).unwrap();
        let b = QuantumMatrix::new(Arc::new(a.table().truncate(2))).unwrap();
        assert_eq!(m, det_q(&b).unwrap());
        assert!(row_minor(&a, &[2, 2], &[1, 3]).unwrap().is_zero());
        assert!(row_minor(&a, &[1, 3, 1], &[1, 2, 3]).unwrap().is_zero());
        assert!(col_minor(&a, &[1, 3], &[2, 2]).unwrap().is_zero());
        for t in 1..=3 {
            assert!(minor_agreement_check(&a, t).unwrap().pass());
        }
    }

    #[test]
    fn malformed_specs() {
        assert!(MinorSpec::new(3, vec![1, 2], vec![1]).is_err());
        assert!(MinorSpec::new(3, vec![2, 1], vec![1, 2]).is_err());
        assert!(MinorSpec::new(3, vec![4], vec![1]).is_err());
        let a = matrix(3, 0);
        let bad = Perm::new(vec![2, 1, 3]).unwrap();
        assert!(laplace_row(&a, &bad, 2).is_err());
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(4, 2).len(), 6);
        assert_eq!(shuffles(3, 0), vec![Perm::identity(3)]);
        assert_eq!(shuffles(3, 1)[2].images(), &[3, 1, 2]);
    }

    #[test]
    fn laplace_two_by_two() {
        let a = matrix(2, 2);
        let f = laplace_row(&a, &Perm::identity(2), 1).unwrap();
        assert_eq!(f, det_q(&a).unwrap());
    }

    #[test]
    fn laplace_expansions() {
        for n in 1..=4 {
            for t in 0..=n.min(2) {
                assert!(
                    laplace_check(&matrix(n, n as u64), t).unwrap().pass(),
                    "n={n} t={t}"
                );
            }
        }
    }

    #[test]
    fn classical_determinant() {
        let a = QuantumMatrix::new(Arc::new(ParameterTable::classical(3))).unwrap();
        let d = det_q(&a).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.terms().all(|(_, c)| c.is_one() || *c == -Rational::ONE));
    }
}
