//! Concrete presentations: the quantum matrix algebra, the two quantum
//! exterior algebras, free antisymmetric and hyper generator arrays, and
//! tensor products of these.

use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ncpoly::{Generator, Polynomial, Presentation, Rule, Word};
use crate::scalars::{ParamMatrix, ParameterTable, Rational};

/// Which parameter array a construction uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    P,
    Q,
}

impl Flavor {
    pub fn params(self, table: &ParameterTable) -> &ParamMatrix {
        match self {
            Flavor::P => table.p(),
            Flavor::Q => table.q(),
        }
    }

    pub fn dual(self) -> Flavor {
        match self {
            Flavor::P => Flavor::Q,
            Flavor::Q => Flavor::P,
        }
    }
}

/// The generator matrix `A = (a_ij)` bound to its presentation.
#[derive(Clone, Debug)]
pub struct QuantumMatrix {
    n: usize,
    copy: u8,
    table: Arc<ParameterTable>,
    presentation: Arc<Presentation>,
}

impl QuantumMatrix {
    /// Builds the quantum matrix algebra of size `table.n()`.
    pub fn new(table: Arc<ParameterTable>) -> Result<QuantumMatrix> {
        QuantumMatrix::with_copy(table, 0)
    }

    /// Same algebra on the `copy`-th tensor copy of the generators.
    pub fn with_copy(table: Arc<ParameterTable>, copy: u8) -> Result<QuantumMatrix> {
        table.validate()?;
        let presentation = Arc::new(quantum_matrix_presentation(&table, copy)?);
        Ok(QuantumMatrix {
            n: table.n(),
            copy,
            table,
            presentation,
        })
    }

    /// Builds the presentation without validating the table, so that
    /// precondition gates downstream can be exercised.
    #[doc(hidden)]
    pub fn new_unchecked(table: Arc<ParameterTable>) -> Result<QuantumMatrix> {
        let presentation = Arc::new(quantum_matrix_presentation(&table, 0)?);
        Ok(QuantumMatrix {
            n: table.n(),
            copy: 0,
            table,
            presentation,
        })
    }

    /// Same matrix with `delta` added to the leading coefficient of the
    /// rule for `lhs`. Used for mutation testing.
    #[doc(hidden)]
    pub fn with_perturbed_rule(
        &self,
        lhs: (Generator, Generator),
        delta: &Rational,
    ) -> Result<QuantumMatrix> {
        let presentation = Arc::new(self.presentation.perturbed(lhs, delta)?);
        Ok(QuantumMatrix {
            presentation,
            ..self.clone()
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn copy(&self) -> u8 {
        self.copy
    }

    pub fn table(&self) -> &Arc<ParameterTable> {
        &self.table
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn gen(&self, i: usize, j: usize) -> Generator {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        Generator::a_copy(self.copy, i, j)
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        Polynomial::generator(self.gen(i, j))
    }

    pub fn lambda(&self) -> &Rational {
        self.table.lambda()
    }

    pub fn q(&self, i: usize, j: usize) -> &Rational {
        self.table.q().get(i, j)
    }

    pub fn p(&self, i: usize, j: usize) -> &Rational {
        self.table.p().get(i, j)
    }
}

/// Solves `m · [x, y]ᵀ = rhs` where the right-hand side entries are
/// polynomials; `None` if `m` is singular.
fn solve_2x2(m: [[Rational; 2]; 2], rhs: [Polynomial; 2]) -> Option<[Polynomial; 2]> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let inv = det.checked_recip()?;
    let mut x = rhs[0].scale(&(&m[1][1] * &inv));
    x.add_scaled(&rhs[1], &-(&m[0][1] * &inv));
    let mut y = rhs[1].scale(&(&m[0][0] * &inv));
    y.add_scaled(&rhs[0], &-(&m[1][0] * &inv));
    Some([x, y])
}

/// The solved rewrite rules of the quantum matrix algebra:
///
/// * same row, `k<l`: `a_il a_ik → q_kl⁻¹ a_ik a_il`;
/// * same column, `i<j`: `a_jk a_ik → p_ij⁻¹ a_ik a_jk`;
/// * `i<j`, `k<l`: the two "crossing" products `a_jl a_ik` and `a_jk a_il`
///   expressed through `a_ik a_jl` and `a_il a_jk` by solving the two mixed
///   relations as a linear system. Its determinant is
///   `p_ij (1+λ) / (q_ij p_kl)`, so the system is solvable exactly when
///   `λ ≠ −1`.
pub fn quantum_matrix_presentation(table: &ParameterTable, copy: u8) -> Result<Presentation> {
    let n = table.n();
    let a = |i, j| Generator::a_copy(copy, i, j);
    let w = |g: Generator, h: Generator| Polynomial::word(&[g, h]);
    let (q, p) = (table.q(), table.p());
    let mut rules = Vec::new();
    for i in 1..=n {
        for k in 1..=n {
            for l in k + 1..=n {
                rules.push(Rule::commute(a(i, l), a(i, k), q.get(k, l).recip()));
            }
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in i + 1..=n {
                rules.push(Rule::commute(a(j, k), a(i, k), p.get(i, j).recip()));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                for l in k + 1..=n {
                    let u = w(a(i, k), a(j, l));
                    let v = w(a(i, l), a(j, k));
                    // unknowns X = a_jl a_ik, Y = a_jk a_il
                    let m = [
                        [-(q.get(k, l) / q.get(i, j)), q.get(i, j).recip()],
                        [-(p.get(i, j) / p.get(k, l)), -p.get(i, j).clone()],
                    ];
                    let mut r3 = u.scale(&-Rational::ONE);
                    r3.add_scaled(&v, q.get(k, l));
                    let mut r4 = u.scale(&-Rational::ONE);
                    r4.add_scaled(&v, &-p.get(k, l).recip());
                    let [x, y] = solve_2x2(m, [r3, r4]).ok_or_else(|| {
                        Error::SingularSystem(format!("rows {i},{j} columns {k},{l}"))
                    })?;
                    rules.push(Rule::new(a(j, l), a(i, k), x));
                    rules.push(Rule::new(a(j, k), a(i, l), y));
                }
            }
        }
    }
    let gens = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| a(i, j));
    let name = if copy == 0 {
        format!("A({n})")
    } else {
        format!("A{copy}({n})")
    };
    Presentation::atomic(name, gens, rules, false)
}

/// The defining relations as polynomials that must vanish, labelled by family.
pub fn defining_relations(a: &QuantumMatrix) -> Vec<(String, Polynomial)> {
    let n = a.n();
    let e = |i, j| a.gen(i, j);
    let w = |g: Generator, h: Generator| Polynomial::word(&[g, h]);
    let mut out = Vec::new();
    for i in 1..=n {
        for k in 1..=n {
            for l in k + 1..=n {
                let f = &w(e(i, k), e(i, l)) - &w(e(i, l), e(i, k)).scale(a.q(k, l));
                out.push((format!("row i={i} k={k} l={l}"), f));
            }
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in i + 1..=n {
                let f = &w(e(i, k), e(j, k)) - &w(e(j, k), e(i, k)).scale(a.p(i, j));
                out.push((format!("column k={k} i={i} j={j}"), f));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                for l in k + 1..=n {
                    let (qkl, qij, pij, pkl) = (a.q(k, l), a.q(i, j), a.p(i, j), a.p(k, l));
                    let mut f3 = w(e(i, k), e(j, l));
                    f3.add_scaled(&w(e(j, l), e(i, k)), &-(qkl / qij));
                    f3.add_scaled(&w(e(i, l), e(j, k)), &-qkl.clone());
                    f3.add_scaled(&w(e(j, k), e(i, l)), &qij.recip());
                    out.push((format!("q-mixed i={i} j={j} k={k} l={l}"), f3));
                    let mut f4 = w(e(i, k), e(j, l));
                    f4.add_scaled(&w(e(j, l), e(i, k)), &-(pij / pkl));
                    f4.add_scaled(&w(e(j, k), e(i, l)), &-pij.clone());
                    f4.add_scaled(&w(e(i, l), e(j, k)), &pkl.recip());
                    out.push((format!("p-mixed i={i} j={j} k={k} l={l}"), f4));
                }
            }
        }
    }
    out
}

/// Λ_q on `x_1..x_N` (flavor Q) or Λ_p on `y_1..y_N` (flavor P):
/// `x_j x_i → −q_ij x_i x_j` for `i<j` and `x_i x_i → 0`.
pub fn exterior_presentation(
    size: usize,
    table: &ParameterTable,
    flavor: Flavor,
) -> Result<Presentation> {
    if size > table.n() {
        return Err(Error::Malformed(format!(
            "exterior algebra of size {size} needs a table of size >= {size}"
        )));
    }
    let (gen, name): (fn(usize) -> Generator, _) = match flavor {
        Flavor::Q => (Generator::x, format!("Λq({size})")),
        Flavor::P => (Generator::y, format!("Λp({size})")),
    };
    let params = flavor.params(table);
    let mut rules = Vec::new();
    for j in 1..=size {
        rules.push(Rule::new(gen(j), gen(j), Polynomial::zero()));
        for i in 1..j {
            rules.push(Rule::commute(gen(j), gen(i), -params.get(i, j).clone()));
        }
    }
    Presentation::atomic(name, (1..=size).map(gen), rules, false)
}

/// A `size × size` matrix of free generators `b_ij` (`i<j`) read with the
/// antisymmetry `b_ji = −c_ij b_ij`, where `c` is the flavor's parameter array.
#[derive(Clone, Debug)]
pub struct AntisymMatrix {
    size: usize,
    flavor: Flavor,
    table: Arc<ParameterTable>,
    presentation: Arc<Presentation>,
}

impl AntisymMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn table(&self) -> &Arc<ParameterTable> {
        &self.table
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    /// The stored generator `b_ij`, `i<j`.
    pub fn gen(&self, i: usize, j: usize) -> Generator {
        assert!(i < j && j <= self.size);
        Generator::b(&[i, j])
    }

    /// Entry access with the antisymmetric substitution applied.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Polynomial::generator(self.gen(i, j)),
            std::cmp::Ordering::Equal => Polynomial::zero(),
            std::cmp::Ordering::Greater => Polynomial::monomial(
                Word::from_slice(&[self.gen(j, i)]),
                -self.flavor.params(&self.table).get(j, i).clone(),
            ),
        }
    }
}

/// Declares `b_ij` for `i<j ≤ size` as mutually free generators.
pub fn free_antisym_generators(
    size: usize,
    flavor: Flavor,
    table: Arc<ParameterTable>,
) -> Result<AntisymMatrix> {
    if size > table.n() {
        return Err(Error::Malformed(format!(
            "antisymmetric matrix of size {size} needs a table of size >= {size}"
        )));
    }
    let gens = (1..=size)
        .tuple_combinations()
        .map(|(i, j)| Generator::b(&[i, j]));
    let presentation = Arc::new(Presentation::atomic(
        format!("B({size})"),
        gens,
        vec![],
        true,
    )?);
    Ok(AntisymMatrix {
        size,
        flavor,
        table,
        presentation,
    })
}

/// Free generators `b_I` for strictly increasing `m`-tuples `I ⊂ {1..mn}`.
#[derive(Clone, Debug)]
pub struct HyperMatrix {
    arity: usize,
    blocks: usize,
    presentation: Arc<Presentation>,
}

impl HyperMatrix {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Total index range `m·n`.
    pub fn size(&self) -> usize {
        self.arity * self.blocks
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn gen(&self, index: &[usize]) -> Result<Generator> {
        let sorted = index.windows(2).all(|w| w[0] < w[1]);
        if index.len() != self.arity || !sorted || index.iter().any(|&i| i == 0 || i > self.size())
        {
            return Err(Error::Malformed(format!(
                "hypermatrix index {index:?} is not a strictly increasing {}-tuple in 1..={}",
                self.arity,
                self.size()
            )));
        }
        Ok(Generator::b(index))
    }

    pub fn entry(&self, index: &[usize]) -> Result<Polynomial> {
        self.gen(index).map(Polynomial::generator)
    }

    /// All sorted index tuples, lexicographically.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        (1..=self.size()).combinations(self.arity).collect()
    }
}

pub fn hyper_generators(arity: usize, blocks: usize) -> Result<HyperMatrix> {
    if arity == 0 || blocks == 0 || arity > crate::ncpoly::MAX_ARITY {
        return Err(Error::Malformed(format!(
            "hypermatrix needs 1 <= m <= {} and n >= 1 (got m={arity}, n={blocks})",
            crate::ncpoly::MAX_ARITY
        )));
    }
    let gens = (1..=arity * blocks)
        .combinations(arity)
        .map(|i| Generator::b(&i));
    let presentation = Arc::new(Presentation::atomic(
        format!("H({arity},{blocks})"),
        gens,
        vec![],
        true,
    )?);
    Ok(HyperMatrix {
        arity,
        blocks,
        presentation,
    })
}

/// Tensor product of presentations with disjoint generator sets.
pub fn tensor_presentation(parts: &[Arc<Presentation>]) -> Result<Arc<Presentation>> {
    Presentation::tensor(parts).map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::check_local_confluence;
    use crate::scalars::{q_inversion, Perm};

    fn table(n: usize, seed: u64) -> Arc<ParameterTable> {
        Arc::new(ParameterTable::seeded(n, ParameterTable::lambda_for_seed(seed), seed).unwrap())
    }

    fn w(gens: &[Generator]) -> Polynomial {
        Polynomial::word(gens)
    }

    #[test]
    fn n1_has_no_rules() {
        let a = QuantumMatrix::new(table(1, 0)).unwrap();
        assert_eq!(a.presentation().rule_count(), 0);
    }

    #[test]
    fn n2_rules_match_hand_solution() {
        let t = table(2, 3);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        let p = a.presentation();
        let (q12, lam) = (t.q().get(1, 2).clone(), t.lambda().clone());
        let nf = |g: &[Generator]| p.normal_form(&w(g)).unwrap();
        let (a11, a12, a21, a22) = (a.gen(1, 1), a.gen(1, 2), a.gen(2, 1), a.gen(2, 2));
        assert_eq!(nf(&[a12, a11]), w(&[a11, a12]).scale(&q12.recip()));
        assert_eq!(nf(&[a21, a12]), w(&[a12, a21]).scale(&(q12.pow(2) / &lam)));
        let mut expect = w(&[a11, a22]);
        expect.add_scaled(&w(&[a12, a21]), &(&q12 * &(lam.recip() - Rational::ONE)));
        assert_eq!(nf(&[a22, a11]), expect);
    }

    #[test]
    fn defining_relations_reduce_to_zero() {
        for (n, seed) in [(2, 1), (3, 2), (3, 5)] {
            let a = QuantumMatrix::new(table(n, seed)).unwrap();
            for (label, f) in defining_relations(&a) {
                assert!(a.presentation().equals_zero(&f).unwrap(), "{label}");
            }
        }
    }

    #[test]
    fn crossing_rules_back_substitute_into_mixed_relations() {
        // Replace each crossing product by its rule right-hand side without
        // any further rewriting; both mixed relations must cancel outright.
        let a = QuantumMatrix::new(table(3, 4)).unwrap();
        let p = a.presentation();
        for (label, f) in defining_relations(&a) {
            if !label.contains("mixed") {
                continue;
            }
            let mut sub = Polynomial::zero();
            for (word, c) in f.terms() {
                match p.rule(word[0], word[1]) {
                    Some(rhs) => {
                        for (rw, d) in rhs.iter() {
                            sub.add_term(rw.clone(), &(c * d));
                        }
                    }
                    None => sub.add_term(word.clone(), c),
                }
            }
            assert!(sub.is_zero(), "{label}: {sub}");
        }
    }

    #[test]
    fn exterior_rules() {
        let t = table(3, 7);
        let lq = exterior_presentation(3, &t, Flavor::Q).unwrap();
        let x = Generator::x;
        assert_eq!(
            lq.normal_form(&w(&[x(2), x(1)])).unwrap(),
            w(&[x(1), x(2)]).scale(&-t.q().get(1, 2).clone())
        );
        assert!(lq.normal_form(&w(&[x(1), x(1)])).unwrap().is_zero());
        let sigma = Perm::new(vec![3, 2, 1]).unwrap();
        let top = lq.normal_form(&w(&[x(3), x(2), x(1)])).unwrap();
        assert_eq!(
            top,
            w(&[x(1), x(2), x(3)]).scale(&q_inversion(&sigma, t.q()))
        );
        let lp = exterior_presentation(2, &t, Flavor::P).unwrap();
        let y = Generator::y;
        assert_eq!(
            lp.normal_form(&w(&[y(2), y(1)])).unwrap(),
            w(&[y(1), y(2)]).scale(&-t.p().get(1, 2).clone())
        );
    }

    #[test]
    fn antisymmetric_access() {
        let t = table(4, 1);
        let b = free_antisym_generators(4, Flavor::P, t.clone()).unwrap();
        assert_eq!(b.entry(1, 2), Polynomial::generator(Generator::b(&[1, 2])));
        assert!(b.entry(1, 1).is_zero());
        assert_eq!(
            b.entry(2, 1),
            Polynomial::generator(Generator::b(&[1, 2])).scale(&-t.p().get(1, 2).clone())
        );
        assert_eq!(b.presentation().generators().len(), 6);
    }

    #[test]
    fn hyper_generator_counts() {
        assert_eq!(
            hyper_generators(2, 2)
                .unwrap()
                .presentation()
                .generators()
                .len(),
            6
        );
        assert_eq!(
            hyper_generators(3, 1)
                .unwrap()
                .presentation()
                .generators()
                .len(),
            1
        );
        let h = hyper_generators(3, 2).unwrap();
        assert_eq!(h.presentation().generators().len(), 20);
        assert!(h.gen(&[1, 2, 3]).is_ok());
        assert!(h.gen(&[2, 1, 3]).is_err());
        assert!(h.gen(&[1, 1, 3]).is_err());
        assert!(h.gen(&[1, 2]).is_err());
    }

    #[test]
    fn tensor_factors_commute() {
        let t = table(2, 2);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        let lq = Arc::new(exterior_presentation(2, &t, Flavor::Q).unwrap());
        let b = free_antisym_generators(2, Flavor::P, t.clone()).unwrap();
        let ten =
            tensor_presentation(&[a.presentation().clone(), b.presentation().clone(), lq]).unwrap();
        let x1 = Generator::x(1);
        assert_eq!(
            ten.normal_form(&w(&[x1, a.gen(1, 1)])).unwrap(),
            w(&[a.gen(1, 1), x1])
        );
        let b12 = Generator::b(&[1, 2]);
        assert_eq!(
            ten.normal_form(&w(&[b12, a.gen(2, 1)])).unwrap(),
            w(&[a.gen(2, 1), b12])
        );
        assert!(check_local_confluence(&ten).unwrap().pass());
    }

    #[test]
    fn quantum_matrix_confluent_n2_n3() {
        for n in [2, 3] {
            let a = QuantumMatrix::new(table(n, n as u64)).unwrap();
            let report = check_local_confluence(a.presentation()).unwrap();
            assert!(report.pass(), "n={n}: {:?}", report.failures.first());
        }
    }

    #[test]
    fn degree_two_hilbert_function() {
        for n in 1..=3usize {
            let a = QuantumMatrix::new(table(n, 1)).unwrap();
            let m = n * n;
            assert_eq!(a.presentation().normal_words(2).len(), m * (m + 1) / 2);
        }
    }
}
