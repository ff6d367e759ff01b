//! Exterior-algebra comodules and the forms `Φ`, `ω_i`, `Ω`, giving a second,
//! independent route to determinants and Pfaffians as top-degree
//! coefficients.

use std::sync::Arc;

use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::ncpoly::{Family, Generator, Polynomial, Presentation, Word};
use crate::qalgebras::{
    exterior_presentation, tensor_presentation, AntisymMatrix, Flavor, HyperMatrix, QuantumMatrix,
};
use crate::qlinalg::{coproduct, TensorSquare};
use crate::scalars::{quantum_factorial, ParameterTable, Rational};

/// `A ⊗ Λ_p(y) ⊗ Λ_q(x)` for a quantum matrix of size `n`.
#[derive(Clone, Debug)]
pub struct FormSpace {
    matrix: QuantumMatrix,
    presentation: Arc<Presentation>,
}

impl FormSpace {
    pub fn new(matrix: &QuantumMatrix) -> Result<FormSpace> {
        let n = matrix.n();
        let table = matrix.table();
        let parts = [
            matrix.presentation().clone(),
            Arc::new(exterior_presentation(n, table, Flavor::P)?),
            Arc::new(exterior_presentation(n, table, Flavor::Q)?),
        ];
        let presentation = tensor_presentation(&parts)?;
        Ok(FormSpace {
            matrix: matrix.clone(),
            presentation,
        })
    }

    pub fn matrix(&self) -> &QuantumMatrix {
        &self.matrix
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }
}

fn distinct(indices: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for &i in indices {
        if i == 0 || i > n {
            return Err(Error::Malformed(format!("index {i} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Malformed(format!(
                "repeated index {i} in wedge {indices:?}"
            )));
        }
    }
    Ok(())
}

/// Multiplies out `∏_k Σ_j pieces(i_k, j)` as words, left to right.
fn expand_product(
    indices: &[usize],
    n: usize,
    piece: impl Fn(usize, usize) -> Vec<Generator>,
) -> Polynomial {
    let mut acc = vec![Word::new()];
    for &i in indices {
        let mut next = Vec::with_capacity(acc.len() * n);
        for w in &acc {
            for j in 1..=n {
                let mut w = w.clone();
                w.extend(piece(i, j));
                next.push(w);
            }
        }
        acc = next;
    }
    let mut out = Polynomial::zero();
    for w in acc {
        out.add_term(w, &Rational::ONE);
    }
    out
}

/// `μ_q(x_{i1}⋯x_{it})` with `μ_q(x_i) = Σ_j a_ij ⊗ x_j`.
pub fn coact_row(space: &FormSpace, indices: &[usize]) -> Result<Polynomial> {
    let a = &space.matrix;
    distinct(indices, a.n())?;
    let f = expand_product(indices, a.n(), |i, j| vec![a.gen(i, j), Generator::x(j)]);
    space.presentation.normal_form(&f)
}

/// `μ′_p(y_{i1}⋯y_{it})` with `μ′_p(y_i) = Σ_j y_j ⊗ a_ji`.
pub fn coact_col(space: &FormSpace, indices: &[usize]) -> Result<Polynomial> {
    let a = &space.matrix;
    distinct(indices, a.n())?;
    let f = expand_product(indices, a.n(), |i, j| vec![Generator::y(j), a.gen(j, i)]);
    space.presentation.normal_form(&f)
}

/// `Φ = Σ_ij a_ij y_i x_j`.
pub fn build_phi(space: &FormSpace) -> Result<Polynomial> {
    let n = space.matrix.n();
    let mut f = Polynomial::zero();
    for i in 1..=n {
        f.add_scaled(&build_omega_i(space, i)?, &Rational::ONE);
    }
    Ok(f)
}

/// `ω_i = y_i δ_i = Σ_j a_ij y_i x_j`.
pub fn build_omega_i(space: &FormSpace, i: usize) -> Result<Polynomial> {
    let a = &space.matrix;
    if !(1..=a.n()).contains(&i) {
        return Err(Error::Malformed(format!(
            "omega index {i} outside 1..={}",
            a.n()
        )));
    }
    let mut f = Polynomial::zero();
    for j in 1..=a.n() {
        f.add_term(
            Word::from_slice(&[a.gen(i, j), Generator::y(i), Generator::x(j)]),
            &Rational::ONE,
        );
    }
    space.presentation.normal_form(&f)
}

/// `ω_i ω_i = 0` and `ω_j ω_i = λ ω_i ω_j` for `i<j`.
pub fn omega_relations_check(space: &FormSpace) -> Result<Verdict> {
    let n = space.matrix.n();
    let pres = &space.presentation;
    let omegas = (1..=n)
        .map(|i| build_omega_i(space, i))
        .collect::<Result<Vec<_>>>()?;
    let lambda = space.matrix.lambda();
    let mut checks = Vec::new();
    for i in 0..n {
        checks.push(Verdict::zero(
            pres,
            format!("ω{}ω{} = 0", i + 1, i + 1),
            &omegas[i].multiply(&omegas[i]),
        ));
        for j in i + 1..n {
            let mut f = omegas[j].multiply(&omegas[i]);
            f.add_scaled(&omegas[i].multiply(&omegas[j]), &-lambda);
            checks.push(Verdict::zero(
                pres,
                format!("ω{}ω{} = λ ω{}ω{}", j + 1, i + 1, i + 1, j + 1),
                &f,
            ));
        }
    }
    Verdict::all(checks)
}

/// `f^k`, normalized after every factor.
pub fn wedge_power(presentation: &Presentation, f: &Polynomial, k: usize) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::Malformed("wedge power needs k >= 1".into()));
    }
    let f = presentation.normal_form(f)?;
    let mut acc = f.clone();
    for _ in 1..k {
        acc = presentation.product(&acc, &f)?;
    }
    Ok(acc)
}

/// Sum of the `a`/`b` prefixes of all terms whose exterior part is exactly
/// `top`.
pub fn top_coefficient(f: &Polynomial, top: &[Generator]) -> Polynomial {
    let mut out = Polynomial::zero();
    for (w, c) in f.terms() {
        let split = w
            .iter()
            .position(|g| matches!(g.family(), Family::X | Family::Y))
            .unwrap_or(w.len());
        if &w[split..] == top {
            out.add_term(Word::from_slice(&w[..split]), c);
        }
    }
    out
}

fn x_top(n: usize) -> Vec<Generator> {
    (1..=n).map(Generator::x).collect()
}

fn y_top(n: usize) -> Vec<Generator> {
    (1..=n).map(Generator::y).collect()
}

/// The determinant read off `μ_q(x_1⋯x_n)`, checked against `∧ⁿΦ / [n]_λ!`.
pub fn oracle_det(a: &QuantumMatrix) -> Result<Polynomial> {
    let space = FormSpace::new(a)?;
    let n = a.n();
    let all: Vec<usize> = (1..=n).collect();
    let via_coaction = top_coefficient(&coact_row(&space, &all)?, &x_top(n));
    let factorial = quantum_factorial(n, a.lambda());
    let inv = factorial
        .checked_recip()
        .ok_or_else(|| Error::OutOfDomain(format!("[{n}]_lambda! vanishes")))?;
    let phi_n = wedge_power(&space.presentation, &build_phi(&space)?, n)?;
    let top: Vec<Generator> = y_top(n).into_iter().chain(x_top(n)).collect();
    let via_phi = top_coefficient(&phi_n, &top).scale(&inv);
    let mut expected = Polynomial::zero();
    expected.add_sandwiched(&[], &via_coaction, &top, &factorial);
    if phi_n != expected || via_phi != via_coaction {
        return Err(Error::IdentityViolation {
            what: "∧ⁿΦ = [n]_λ! det (y-top)(x-top)".into(),
            witness: &phi_n - &expected,
        });
    }
    Ok(via_coaction)
}

/// The column determinant read off `μ′_p(y_1⋯y_n)`.
pub fn oracle_cdet(a: &QuantumMatrix) -> Result<Polynomial> {
    let space = FormSpace::new(a)?;
    let all: Vec<usize> = (1..=a.n()).collect();
    Ok(top_coefficient(&coact_col(&space, &all)?, &y_top(a.n())))
}

/// Top coefficient of `Ω^n` where `Ω = Σ_I b_I x_I` over sorted blocks, in
/// the exterior algebra of the given flavor.
fn omega_power_top(
    blocks: &[Vec<usize>],
    size: usize,
    n_blocks: usize,
    table: &ParameterTable,
    flavor: Flavor,
    b_presentation: &Arc<Presentation>,
) -> Result<Polynomial> {
    let gen: fn(usize) -> Generator = match flavor {
        Flavor::Q => Generator::x,
        Flavor::P => Generator::y,
    };
    let pres = tensor_presentation(&[
        b_presentation.clone(),
        Arc::new(exterior_presentation(size, table, flavor)?),
    ])?;
    let mut omega = Polynomial::zero();
    for block in blocks {
        let mut w = Word::from_slice(&[Generator::b(block)]);
        w.extend(block.iter().map(|&i| gen(i)));
        omega.add_term(w, &Rational::ONE);
    }
    if n_blocks == 0 {
        return Ok(Polynomial::one());
    }
    let power = wedge_power(&pres, &omega, n_blocks)?;
    let top: Vec<Generator> = (1..=size).map(gen).collect();
    Ok(top_coefficient(&power, &top))
}

/// `Pf(B)` as the top coefficient of `∧ⁿΩ`, `Ω = Σ_{i<j} b_ij x_i x_j`.
pub fn oracle_pf(b: &AntisymMatrix) -> Result<Polynomial> {
    let size = b.size();
    if !size.is_multiple_of(2) {
        return Err(Error::Malformed(format!("Pfaffian of odd size {size}")));
    }
    let blocks: Vec<Vec<usize>> = (1..=size)
        .flat_map(|i| (i + 1..=size).map(move |j| vec![i, j]))
        .collect();
    omega_power_top(
        &blocks,
        size,
        size / 2,
        b.table(),
        b.flavor().dual(),
        b.presentation(),
    )
}

/// Hyper-Pfaffian as the top coefficient of `∧ⁿΩ`, `Ω = Σ_I b_I x_{i1}⋯x_{im}`;
/// `Flavor::Q` uses `Λ_q(x)`, `Flavor::P` uses `Λ_p(y)`.
pub fn oracle_hyperpf(
    b: &HyperMatrix,
    table: &ParameterTable,
    flavor: Flavor,
) -> Result<Polynomial> {
    omega_power_top(
        &b.index_sets(),
        b.size(),
        b.blocks(),
        table,
        flavor,
        b.presentation(),
    )
}

/// Coassociativity of the row coaction on the top wedge:
/// `(Δ⊗id)μ_q = (id⊗μ_q)μ_q` on `x_1⋯x_n`, with both sides equal to
/// `rdet ⊗ rdet`.
pub fn comodule_check(a: &QuantumMatrix) -> Result<Verdict> {
    let n = a.n();
    let space = FormSpace::new(a)?;
    let all: Vec<usize> = (1..=n).collect();
    let rdet = top_coefficient(&coact_row(&space, &all)?, &x_top(n));
    let ts = TensorSquare::new(a.table().clone())?;
    let via_delta = coproduct(&ts, &rdet)?;
    let (l, r) = (ts.left(), ts.right());
    let pres = tensor_presentation(&[
        ts.presentation().clone(),
        Arc::new(exterior_presentation(n, a.table(), Flavor::Q)?),
    ])?;
    let mut acc = vec![(Word::new(), Rational::ONE)];
    for &i in &all {
        let mut next = Vec::with_capacity(acc.len() * n * n);
        for (w, c) in &acc {
            for j in 1..=n {
                for k in 1..=n {
                    let mut w = w.clone();
                    w.extend([l.gen(i, j), r.gen(j, k), Generator::x(k)]);
                    next.push((w, c.clone()));
                }
            }
        }
        acc = next;
    }
    let mut twice = Polynomial::zero();
    for (w, c) in acc {
        twice.add_term(w, &c);
    }
    let twice = top_coefficient(&pres.normal_form(&twice)?, &x_top(n));
    let grouplike = ts.tensor(&rdet, &rdet)?;
    Verdict::all([
        Verdict::compare(ts.presentation(), "(Δ⊗id)μ = (id⊗μ)μ", &via_delta, &twice),
        Verdict::compare(
            ts.presentation(),
            "(id⊗μ)μ = rdet ⊗ rdet",
            &twice,
            &grouplike,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::{hyper_pfaffian, pfaffian};
    use crate::qalgebras::{free_antisym_generators, hyper_generators};
    use crate::qlinalg::{cdet, rdet};

    fn matrix(n: usize, seed: u64) -> QuantumMatrix {
        let t = ParameterTable::seeded(n, ParameterTable::lambda_for_seed(seed), seed).unwrap();
        QuantumMatrix::new(Arc::new(t)).unwrap()
    }

    #[test]
    fn coactions() {
        let a = matrix(1, 0);
        let s = FormSpace::new(&a).unwrap();
        assert_eq!(
            coact_row(&s, &[1]).unwrap(),
            Polynomial::word(&[a.gen(1, 1), Generator::x(1)])
        );
        assert_eq!(
            build_phi(&s).unwrap(),
            Polynomial::word(&[a.gen(1, 1), Generator::y(1), Generator::x(1)])
        );
        let a = matrix(2, 1);
        let s = FormSpace::new(&a).unwrap();
        let mu = coact_row(&s, &[1, 2]).unwrap();
        let mut expect = Polynomial::zero();
        expect.add_sandwiched(&[], &rdet(&a).unwrap(), &x_top(2), &Rational::ONE);
        assert_eq!(mu, expect);
        assert!(coact_row(&s, &[1, 1]).is_err());
        let omega1 = build_omega_i(&s, 1).unwrap();
        assert_eq!(omega1.len(), 2);
        assert_eq!(
            omega1.coeff(&[a.gen(1, 2), Generator::y(1), Generator::x(2)]),
            Rational::ONE
        );
        let sum = &omega1 + &build_omega_i(&s, 2).unwrap();
        assert_eq!(sum, build_phi(&s).unwrap());
    }

    #[test]
    fn determinant_routes_agree() {
        for n in 1..=3 {
            let a = matrix(n, n as u64);
            let o = oracle_det(&a).unwrap();
            assert_eq!(o, rdet(&a).unwrap());
            assert_eq!(o, cdet(&a).unwrap());
            assert_eq!(oracle_cdet(&a).unwrap(), cdet(&a).unwrap());
        }
    }

    #[test]
    fn omega_relations() {
        for n in 2..=3 {
            assert!(
                omega_relations_check(&FormSpace::new(&matrix(n, 0)).unwrap())
                    .unwrap()
                    .pass()
            );
        }
    }

    #[test]
    fn top_of_zero() {
        assert!(top_coefficient(&Polynomial::zero(), &x_top(2)).is_zero());
    }

    #[test]
    fn pfaffian_oracle() {
        let t = Arc::new(ParameterTable::seeded(6, Rational::new(7, 2), 11).unwrap());
        for size in [2, 4, 6] {
            for flavor in [Flavor::P, Flavor::Q] {
                let b = free_antisym_generators(size, flavor, t.clone()).unwrap();
                assert_eq!(oracle_pf(&b).unwrap(), pfaffian(&b).unwrap(), "size={size}");
            }
        }
    }

    #[test]
    fn hyper_oracle() {
        let t = ParameterTable::seeded(6, Rational::from(3), 5).unwrap();
        for (m, n) in [(3, 1), (3, 2), (2, 2)] {
            let h = hyper_generators(m, n).unwrap();
            for flavor in [Flavor::P, Flavor::Q] {
                assert_eq!(
                    oracle_hyperpf(&h, &t, flavor).unwrap(),
                    hyper_pfaffian(&h, &t, flavor).unwrap()
                );
            }
        }
    }

    #[test]
    fn coassociative() {
        for n in 1..=2 {
            assert!(comodule_check(&matrix(n, 3)).unwrap().pass());
        }
    }
}
