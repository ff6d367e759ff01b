//! Cofactor identities, quasi-centrality of the determinant, and the
//! cleared-denominator forms of the antipode and quasideterminant
//! statements.

use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::ncpoly::Polynomial;
use crate::qalgebras::QuantumMatrix;
use crate::scalars::{ParamMatrix, ParameterTable, Rational};

use super::{det_q, row_minor};

fn gate(a: &QuantumMatrix) -> Result<()> {
    a.table()
        .validate()
        .map_err(|e| Error::OutOfDomain(e.to_string()))
}

fn without(n: usize, k: usize) -> Vec<usize> {
    (1..=n).filter(|&i| i != k).collect()
}

/// `∏_{l<j} (−m_lj)`.
fn lower_prod(m: &ParamMatrix, j: usize) -> Rational {
    (1..j).map(|l| -m.get(l, j)).product()
}

/// `∏_{l>j} (−m_jl)` for `l ≤ n`.
fn upper_prod(m: &ParamMatrix, n: usize, j: usize) -> Rational {
    (j + 1..=n).map(|l| -m.get(j, l)).product()
}

/// The four cofactor expansions for rows/columns `i` and `k`: each equals
/// `δ_ik det_q(A)`.
pub fn cofactor_check(a: &QuantumMatrix, i: usize, k: usize) -> Result<Verdict> {
    let n = a.n();
    if !(1..=n).contains(&i) || !(1..=n).contains(&k) {
        return Err(Error::Malformed(format!(
            "cofactor indices ({i},{k}) outside 1..={n}"
        )));
    }
    let (q, p) = (a.table().q(), a.table().p());
    let det = det_q(a)?;
    let rhs = if i == k { det } else { Polynomial::zero() };
    let pres = a.presentation();
    let mut forms = [
        Polynomial::zero(),
        Polynomial::zero(),
        Polynomial::zero(),
        Polynomial::zero(),
    ];
    for j in 1..=n {
        let row_cof = row_minor(a, &without(n, k), &without(n, j))?;
        let col_cof = row_minor(a, &without(n, j), &without(n, k))?;
        let aij = a.entry(i, j);
        let aji = a.entry(j, i);
        let c = [
            lower_prod(q, j) / lower_prod(q, i),
            upper_prod(q, n, j) / upper_prod(q, n, i),
            lower_prod(p, j) / lower_prod(p, i),
            upper_prod(p, n, j) / upper_prod(p, n, i),
        ];
        forms[0].add_scaled(&aij.multiply(&row_cof), &c[0]);
        forms[1].add_scaled(&row_cof.multiply(&aij), &c[1]);
        forms[2].add_scaled(&aji.multiply(&col_cof), &c[2]);
        forms[3].add_scaled(&col_cof.multiply(&aji), &c[3]);
    }
    let labels = ["row, left", "row, right", "column, left", "column, right"];
    Verdict::all(
        forms
            .iter()
            .zip(labels)
            .map(|(f, l)| Verdict::compare(pres, format!("cofactor {l} ({i},{k})"), f, &rhs)),
    )
}

/// `λ^{pos(j)−pos(i)} ∏_{l∈S} q_li / ∏_{l∈S} q_lj`, the scalar by which
/// `a_ij` commutes past the principal minor on `indices`.
pub fn quasi_central_factor(
    table: &ParameterTable,
    indices: &[usize],
    i: usize,
    j: usize,
) -> Rational {
    let pos = |x| indices.iter().position(|&y| y == x).expect("index in set") as i32;
    let q = table.q();
    let num: Rational = indices.iter().map(|&l| q.get(l, i).clone()).product();
    let den: Rational = indices.iter().map(|&l| q.get(l, j).clone()).product();
    table.lambda().pow(pos(j) - pos(i)) * num / den
}

fn quasi_central_on(
    a: &QuantumMatrix,
    indices: &[usize],
    minor: &Polynomial,
    i: usize,
    j: usize,
) -> Result<Verdict> {
    let factor = quasi_central_factor(a.table(), indices, i, j);
    let aij = a.entry(i, j);
    let mut f = aij.multiply(minor);
    f.add_scaled(&minor.multiply(&aij), &-factor);
    Verdict::zero(
        a.presentation(),
        format!("a[{i},{j}] past minor on {indices:?}"),
        &f,
    )
}

/// `a_ij det_q(A) = λ^{j−i} (∏_l q_li / ∏_l q_lj) det_q(A) a_ij`.
pub fn quasi_central_check(a: &QuantumMatrix, i: usize, j: usize) -> Result<Verdict> {
    gate(a)?;
    let n = a.n();
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::Malformed(format!("entry ({i},{j}) outside 1..={n}")));
    }
    let all: Vec<usize> = (1..=n).collect();
    quasi_central_on(a, &all, &det_q(a)?, i, j)
}

/// Whether every commutation factor of `det_q` is 1.
pub fn centrality_predicate(table: &ParameterTable) -> bool {
    let n = table.n();
    let all: Vec<usize> = (1..=n).collect();
    (1..=n).all(|i| (1..=n).all(|j| quasi_central_factor(table, &all, i, j).is_one()))
}

/// With `x_ij = det_q(A^{ĵ}_{î})`, `a′_ij = ∏_{l<j}(−q_lj)/∏_{l<i}(−q_li) a_ij`
/// and `a″_ij = ∏_{l>i}(−p_il)/∏_{l>j}(−p_jl) a_ij`: checks
/// `(A′X)_ik = (XA″)_ik = δ_ik det_q` and `a′_ij det_q = det_q a″_ij`.
pub fn cleared_antipode_check(a: &QuantumMatrix) -> Result<Verdict> {
    gate(a)?;
    let n = a.n();
    let (q, p) = (a.table().q(), a.table().p());
    let det = det_q(a)?;
    let pres = a.presentation();
    let alpha = |i, j| lower_prod(q, j) / lower_prod(q, i);
    let beta = |i, j| upper_prod(p, n, i) / upper_prod(p, n, j);
    let mut x = vec![vec![Polynomial::zero(); n + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            x[i][j] = row_minor(a, &without(n, j), &without(n, i))?;
        }
    }
    let mut checks = Vec::new();
    for i in 1..=n {
        for k in 1..=n {
            let rhs = if i == k {
                det.clone()
            } else {
                Polynomial::zero()
            };
            let mut left = Polynomial::zero();
            let mut right = Polynomial::zero();
            for j in 1..=n {
                left.add_scaled(&a.entry(i, j).multiply(&x[j][k]), &alpha(i, j));
                right.add_scaled(&x[i][j].multiply(&a.entry(j, k)), &beta(j, k));
            }
            checks.push(Verdict::compare(
                pres,
                format!("(A'X)[{i},{k}]"),
                &left,
                &rhs,
            ));
            checks.push(Verdict::compare(
                pres,
                format!("(XA'')[{i},{k}]"),
                &right,
                &rhs,
            ));
            let mut f = a.entry(i, k).multiply(&det).scale(&alpha(i, k));
            f.add_scaled(&det.multiply(&a.entry(i, k)), &-beta(i, k));
            checks.push(Verdict::zero(
                pres,
                format!("A' det = det A'' at [{i},{k}]"),
                &f,
            ));
        }
    }
    Verdict::all(checks)
}

/// The trailing principal minors `D_s` on `{s+1,…,n}` pairwise commute, and
/// each entry of that block quasi-commutes with `D_s`.
pub fn nested_minor_commute_check(a: &QuantumMatrix) -> Result<Verdict> {
    gate(a)?;
    let n = a.n();
    if n < 2 {
        return Err(Error::Malformed(format!(
            "nested minors need n >= 2, got {n}"
        )));
    }
    let blocks: Vec<Vec<usize>> = (0..n).map(|s| (s + 1..=n).collect()).collect();
    let minors = blocks
        .iter()
        .map(|b| row_minor(a, b, b))
        .collect::<Result<Vec<_>>>()?;
    let pres = a.presentation();
    let mut checks = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            let f = &minors[s].multiply(&minors[t]) - &minors[t].multiply(&minors[s]);
            checks.push(Verdict::zero(pres, format!("D{s} D{t} = D{t} D{s}"), &f));
        }
        for &i in &blocks[s] {
            for &j in &blocks[s] {
                checks.push(quasi_central_on(a, &blocks[s], &minors[s], i, j));
            }
        }
    }
    Verdict::all(checks)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;

    fn matrix(n: usize, seed: u64) -> QuantumMatrix {
        let t = ParameterTable::seeded(n, ParameterTable::lambda_for_seed(seed), seed).unwrap();
        QuantumMatrix::new(Arc::new(t)).unwrap()
    }

    #[test]
    fn cofactors() {
        let a = matrix(2, 0);
        assert!(cofactor_check(&a, 1, 1).unwrap().pass());
        assert!(cofactor_check(&a, 1, 2).unwrap().pass());
        for seed in 0..2 {
            let a = matrix(3, seed);
            for i in 1..=3 {
                for k in 1..=3 {
                    assert!(cofactor_check(&a, i, k).unwrap().pass(), "({i},{k})");
                }
            }
        }
    }

    #[test]
    fn quasi_central_two_by_two() {
        let a = matrix(2, 3);
        let all = [1, 2];
        assert!(quasi_central_factor(a.table(), &all, 1, 1).is_one());
        let expect = a.lambda() / (a.q(1, 2) * a.q(1, 2));
        assert_eq!(quasi_central_factor(a.table(), &all, 1, 2), expect);
        for i in 1..=2 {
            for j in 1..=2 {
                assert!(quasi_central_check(&a, i, j).unwrap().pass());
            }
        }
    }

    #[test]
    fn quasi_central_three_by_three() {
        let a = matrix(3, 5);
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(quasi_central_check(&a, i, j).unwrap().pass(), "({i},{j})");
            }
        }
    }

    #[test]
    fn wrong_factor_is_caught() {
        let a = matrix(2, 1);
        let det = det_q(&a).unwrap();
        let f = &a.entry(1, 2).multiply(&det) - &det.multiply(&a.entry(1, 2));
        assert!(!a.presentation().normal_form(&f).unwrap().is_zero());
    }

    #[test]
    fn centrality_matches_direct_check() {
        assert!(centrality_predicate(&ParameterTable::classical(1)));
        let a = matrix(2, 2);
        assert!(!centrality_predicate(a.table()));
        let det = det_q(&a).unwrap();
        let fails = (1..=2)
            .flat_map(|i| (1..=2).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                assert!(quasi_central_check(&a, i, j).unwrap().pass());
                let f = &a.entry(i, j).multiply(&det) - &det.multiply(&a.entry(i, j));
                !a.presentation().equals_zero(&f).unwrap()
            })
            .count();
        assert!(fails > 0);
        // q_ij = q for i<j with λ = q²: every factor λ^{j−i} q^{-2(j−i)} is 1
        let q = Rational::new(3, 2);
        let t = ParameterTable::uniform(3, q.clone(), &q * &q).unwrap();
        assert!(centrality_predicate(&t));
        let a = QuantumMatrix::new(Arc::new(t)).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(quasi_central_check(&a, i, j).unwrap().pass());
                let det = det_q(&a).unwrap();
                let f = &a.entry(i, j).multiply(&det) - &det.multiply(&a.entry(i, j));
                assert!(a.presentation().equals_zero(&f).unwrap());
            }
        }
    }

    #[test]
    fn antipode_identities() {
        for n in 1..=3 {
            assert!(
                cleared_antipode_check(&matrix(n, n as u64)).unwrap().pass(),
                "n={n}"
            );
        }
    }

    #[test]
    fn nested_minors() {
        let a = matrix(2, 0);
        assert!(nested_minor_commute_check(&a).unwrap().pass());
        for seed in 0..2 {
            assert!(nested_minor_commute_check(&matrix(3, seed)).unwrap().pass());
        }
    }

    #[test]
    fn corrupted_lambda_is_out_of_domain() {
        let good = ParameterTable::seeded(3, Rational::from(2), 7).unwrap();
        let bad = good.with_lambda_unchecked(Rational::from(5));
        let a = QuantumMatrix::new_unchecked(Arc::new(bad)).unwrap();
        assert!(matches!(
            nested_minor_commute_check(&a),
            Err(Error::OutOfDomain(_))
        ));
        let upper: BTreeMap<_, _> = [((1, 2), Rational::from(3))].into();
        assert!(ParameterTable::new(2, -Rational::ONE, &upper).is_err());
    }
}
