//! Quantum Pfaffians and hyper-Pfaffians, their Laplace expansions, and the
//! transformation rule under the quantum determinant.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::ncpoly::{Family, Generator, Polynomial, Presentation, Word};
use crate::qalgebras::{tensor_presentation, AntisymMatrix, Flavor, HyperMatrix, QuantumMatrix};
use crate::qlinalg::{det_q, row_minor};
use crate::scalars::{inv_factor, q_inversion_seq, ParamMatrix, ParameterTable, Rational};

/// The permutations of `mn` indices that increase inside each consecutive
/// block of `m` positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShuffleFamily {
    arity: usize,
    blocks: usize,
}

impl ShuffleFamily {
    pub fn new(arity: usize, blocks: usize) -> Result<ShuffleFamily> {
        if arity == 0 {
            return Err(Error::Malformed("block arity must be positive".into()));
        }
        Ok(ShuffleFamily { arity, blocks })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// `(mn)! / (m!)^n`.
    pub fn cardinality(&self) -> u128 {
        let fact = |k: usize| (1..=k as u128).product::<u128>();
        fact(self.arity * self.blocks) / fact(self.arity).pow(self.blocks as u32)
    }

    /// Every member as its image sequence over `1..=mn`.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (1..=self.arity * self.blocks).collect();
        block_sequences(&all, self.arity)
    }
}

/// All orderings of `indices` into consecutive sorted blocks of size `m`.
pub fn block_sequences(indices: &[usize], m: usize) -> Vec<Vec<usize>> {
    if indices.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for head in indices.iter().copied().combinations(m) {
        let rest: Vec<usize> = indices
            .iter()
            .copied()
            .filter(|i| !head.contains(i))
            .collect();
        for tail in block_sequences(&rest, m) {
            out.push(head.iter().copied().chain(tail).collect());
        }
    }
    out
}

/// `Σ_{σ∈Π} (−c)_σ b_{σ-block 1}⋯b_{σ-block n}` over the index set
/// `indices`, with free generators `b_I`.
pub fn free_block_pfaffian(
    indices: &[usize],
    m: usize,
    params: &ParamMatrix,
) -> Result<Polynomial> {
    if !indices.len().is_multiple_of(m) {
        return Err(Error::Malformed(format!(
            "{} indices do not split into blocks of {m}",
            indices.len()
        )));
    }
    let mut out = Polynomial::zero();
    for seq in block_sequences(indices, m) {
        let word: Word = seq.chunks(m).map(Generator::b).collect();
        out.add_term(word, &q_inversion_seq(&seq, params));
    }
    Ok(out)
}

fn pf_params(b: &AntisymMatrix) -> &ParamMatrix {
    b.flavor().dual().params(b.table())
}

/// `Pf(B)`. A p-antisymmetric `B` gives `Pf_q`, a q-antisymmetric one `Pf_p`.
pub fn pfaffian(b: &AntisymMatrix) -> Result<Polynomial> {
    pfaffian_on(b, &(1..=b.size()).collect::<Vec<_>>())
}

/// Pfaffian of the principal submatrix on `indices` (sorted).
pub fn pfaffian_on(b: &AntisymMatrix, indices: &[usize]) -> Result<Polynomial> {
    if !b.size().is_multiple_of(2) {
        return Err(Error::Malformed(format!(
            "Pfaffian of odd size {}",
            b.size()
        )));
    }
    free_block_pfaffian(indices, 2, pf_params(b))
}

/// Hyper-Pfaffian with `(−q)` weights for `Flavor::Q` and `(−p)` for `Flavor::P`.
pub fn hyper_pfaffian(
    b: &HyperMatrix,
    table: &ParameterTable,
    flavor: Flavor,
) -> Result<Polynomial> {
    hyper_pfaffian_on(b, table, flavor, &(1..=b.size()).collect::<Vec<_>>())
}

pub fn hyper_pfaffian_on(
    b: &HyperMatrix,
    table: &ParameterTable,
    flavor: Flavor,
    indices: &[usize],
) -> Result<Polynomial> {
    if table.n() < b.size() {
        return Err(Error::Malformed(format!(
            "hypermatrix of size {} needs a table of size >= {}",
            b.size(),
            b.size()
        )));
    }
    free_block_pfaffian(indices, b.arity(), flavor.params(table))
}

/// `Pf = Σ_{|I|=mt} inv(I, I^c) Pf(B_I) Pf(B_{I^c})` for free blocks of arity `m`.
fn block_laplace_check(size: usize, m: usize, params: &ParamMatrix, t: usize) -> Result<Verdict> {
    let n = size / m;
    if t > n {
        return Err(Error::Malformed(format!("split {t} exceeds {n} blocks")));
    }
    let all: Vec<usize> = (1..=size).collect();
    let lhs = free_block_pfaffian(&all, m, params)?;
    let mut rhs = Polynomial::zero();
    for head in all.iter().copied().combinations(m * t) {
        let tail: Vec<usize> = all.iter().copied().filter(|i| !head.contains(i)).collect();
        let c = inv_factor(&head, &tail, params)?;
        let f = free_block_pfaffian(&head, m, params)?;
        let g = free_block_pfaffian(&tail, m, params)?;
        rhs.add_scaled(&f.multiply(&g), &c);
    }
    Ok(if lhs == rhs {
        Verdict::Holds
    } else {
        Verdict::Fails {
            what: format!("Pfaffian Laplace, split {t}"),
            residue: &lhs - &rhs,
        }
    })
}

pub fn pf_laplace_check(b: &AntisymMatrix, t: usize) -> Result<Verdict> {
    if !b.size().is_multiple_of(2) {
        return Err(Error::Malformed(format!(
            "Pfaffian of odd size {}",
            b.size()
        )));
    }
    block_laplace_check(b.size(), 2, pf_params(b), t)
}

pub fn hyper_laplace_check(
    b: &HyperMatrix,
    table: &ParameterTable,
    flavor: Flavor,
    t: usize,
) -> Result<Verdict> {
    if table.n() < b.size() {
        return Err(Error::Malformed(format!(
            "table too small for size {}",
            b.size()
        )));
    }
    block_laplace_check(b.size(), b.arity(), flavor.params(table), t)
}

/// How the quantum matrix acts on the blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformForm {
    /// `c_I = Σ_J det_q(A^J_I) b_J`, the analog of `AᵀBA`.
    Row,
    /// `c_I = Σ_J det_q(A^I_J) b_J`, the analog of `ABAᵀ`.
    Column,
}

/// Transformed block array `c_I` over sorted `m`-tuples, living in the
/// tensor product of `A` with the free `b`-algebra.
#[derive(Clone, Debug)]
pub struct Transformed {
    arity: usize,
    size: usize,
    entries: BTreeMap<Vec<usize>, Polynomial>,
    presentation: Arc<Presentation>,
}

impl Transformed {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, index: &[usize]) -> Option<&Polynomial> {
        self.entries.get(index)
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Polynomial> {
        &self.entries
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    /// Pfaffian of the array with weights from `params`, expanded block by
    /// block and normalized after every product.
    pub fn pfaffian(&self, params: &ParamMatrix) -> Result<Polynomial> {
        block_pfaffian(self.size, self.arity, params, &self.presentation, |i| {
            &self.entries[i]
        })
    }
}

/// `Σ_{σ∈Π} (−c)_σ e(block 1)⋯e(block n)` for arbitrary entries, regrouped by
/// first block: `Pf(S) = Σ_{I⊂S} inv(I, S∖I) e(I) Pf(S∖I)`. Subsets of the
/// same size are evaluated in parallel.
pub fn block_pfaffian<'a>(
    size: usize,
    m: usize,
    params: &ParamMatrix,
    presentation: &Presentation,
    entry: impl Fn(&[usize]) -> &'a Polynomial + Sync,
) -> Result<Polynomial> {
    if m == 0 || !size.is_multiple_of(m) || size > 64 {
        return Err(Error::Malformed(format!(
            "cannot split {size} indices into blocks of {m}"
        )));
    }
    let mask = |s: &[usize]| s.iter().fold(0u64, |acc, &i| acc | 1 << (i - 1));
    let all: Vec<usize> = (1..=size).collect();
    let mut memo: FxHashMap<u64, Polynomial> = FxHashMap::default();
    memo.insert(0, Polynomial::one());
    for level in 1..=size / m {
        let subsets: Vec<Vec<usize>> = if level == size / m {
            vec![all.clone()]
        } else {
            all.iter().copied().combinations(level * m).collect()
        };
        let parallel_inner = subsets.len() == 1;
        let computed: Vec<Result<(u64, Polynomial)>> = subsets
            .par_iter()
            .map(|s| {
                let term = |head: &Vec<usize>| -> Result<Polynomial> {
                    let tail: Vec<usize> =
                        s.iter().copied().filter(|i| !head.contains(i)).collect();
                    let c = inv_factor(head, &tail, params)?;
                    let f = presentation.normal_form(&entry(head).multiply(&memo[&mask(&tail)]))?;
                    Ok(f.scale(&c))
                };
                let heads: Vec<Vec<usize>> = s.iter().copied().combinations(m).collect();
                let sum = if parallel_inner {
                    heads
                        .par_iter()
                        .map(term)
                        .try_reduce(Polynomial::zero, |mut x, y| {
                            x.add_scaled(&y, &Rational::ONE);
                            Ok(x)
                        })?
                } else {
                    let mut acc = Polynomial::zero();
                    for h in &heads {
                        acc.add_scaled(&term(h)?, &Rational::ONE);
                    }
                    acc
                };
                Ok((mask(s), sum))
            })
            .collect();
        for r in computed {
            let (k, v) = r?;
            memo.insert(k, v);
        }
    }
    Ok(memo.remove(&mask(&all)).expect("top level computed"))
}

fn transformed_entries(
    a: &QuantumMatrix,
    m: usize,
    form: TransformForm,
    b_entry: impl Fn(&[usize]) -> Generator + Sync,
    presentation: Arc<Presentation>,
) -> Result<Transformed> {
    let size = a.n();
    let tuples: Vec<Vec<usize>> = (1..=size).combinations(m).collect();
    let entries = tuples
        .par_iter()
        .map(|i| {
            let mut c = Polynomial::zero();
            for j in &tuples {
                let minor = match form {
                    TransformForm::Row => row_minor(a, j, i)?,
                    TransformForm::Column => row_minor(a, i, j)?,
                };
                c.add_sandwiched(&[], &minor, &[b_entry(j)], &Rational::ONE);
            }
            Ok((i.clone(), c))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Transformed {
        arity: m,
        size,
        entries,
        presentation,
    })
}

/// `C = AᵀBA` for p-antisymmetric `B`, `C = ABAᵀ` for q-antisymmetric `B`,
/// built from 2×2 minors. Fails if the minor form disagrees with the plain
/// matrix product, if a diagonal entry survives, or if `C` loses the
/// antisymmetry of `B`.
pub fn congruence_transform(a: &QuantumMatrix, b: &AntisymMatrix) -> Result<Transformed> {
    let size = a.n();
    if b.size() != size {
        return Err(Error::Malformed(format!(
            "A is {size}x{size} but B has size {}",
            b.size()
        )));
    }
    let pres = tensor_presentation(&[a.presentation().clone(), b.presentation().clone()])?;
    let form = match b.flavor() {
        Flavor::P => TransformForm::Row,
        Flavor::Q => TransformForm::Column,
    };
    let c = transformed_entries(a, 2, form, |j| b.gen(j[0], j[1]), pres.clone())?;
    let direct = |i: usize, j: usize| -> Result<Polynomial> {
        let mut f = Polynomial::zero();
        for k in 1..=size {
            for l in 1..=size {
                let (left, right) = match form {
                    TransformForm::Row => (a.entry(k, i), a.entry(l, j)),
                    TransformForm::Column => (a.entry(i, k), a.entry(j, l)),
                };
                f.add_scaled(
                    &left.multiply(&b.entry(k, l)).multiply(&right),
                    &Rational::ONE,
                );
            }
        }
        pres.normal_form(&f)
    };
    let params = b.flavor().params(b.table());
    let violation = |what: String, witness: Polynomial| Error::IdentityViolation { what, witness };
    for i in 1..=size {
        let d = direct(i, i)?;
        if !d.is_zero() {
            return Err(violation(format!("c[{i},{i}] = 0"), d));
        }
        for j in i + 1..=size {
            let cij = &c.entries[&vec![i, j]];
            let d = direct(i, j)?;
            if &d != cij {
                return Err(violation(format!("c[{i},{j}] by minors"), &d - cij));
            }
            let mut anti = direct(j, i)?;
            anti.add_scaled(cij, params.get(i, j));
            if !anti.is_zero() {
                return Err(violation(format!("c[{j},{i}] antisymmetry"), anti));
            }
        }
    }
    Ok(c)
}

/// `Pf(C) = det_q(A) Pf(B)` for the congruence transform of `B`.
pub fn pf_transform_check(a: &QuantumMatrix, b: &AntisymMatrix) -> Result<Verdict> {
    let c = congruence_transform(a, b)?;
    let pf_c = c.pfaffian(pf_params(b))?;
    let rhs = det_q(a)?.multiply(&pfaffian(b)?);
    Verdict::compare(c.presentation(), "Pf(C) = det_q(A) Pf(B)", &pf_c, &rhs)
}

/// Hyper-Pfaffian transform: `Pf_q(C) = det_q(A) Pf_q(B)` in row form,
/// `Pf_p(C) = det_q(A) Pf_p(B)` in column form.
pub fn hyper_transform(
    a: &QuantumMatrix,
    b: &HyperMatrix,
    form: TransformForm,
) -> Result<Transformed> {
    if b.size() != a.n() {
        return Err(Error::Malformed(format!(
            "A is {}x{} but the hypermatrix has size {}",
            a.n(),
            a.n(),
            b.size()
        )));
    }
    let pres = tensor_presentation(&[a.presentation().clone(), b.presentation().clone()])?;
    transformed_entries(a, b.arity(), form, Generator::b, pres)
}

pub fn hyper_transform_check(
    a: &QuantumMatrix,
    b: &HyperMatrix,
    form: TransformForm,
) -> Result<Verdict> {
    let c = hyper_transform(a, b, form)?;
    let flavor = match form {
        TransformForm::Row => Flavor::Q,
        TransformForm::Column => Flavor::P,
    };
    let params = flavor.params(a.table());
    let pf_c = c.pfaffian(params)?;
    let rhs = det_q(a)?.multiply(&hyper_pfaffian(b, a.table(), flavor)?);
    Verdict::compare(
        c.presentation(),
        "hyper Pf(C) = det_q(A) Pf(B)",
        &pf_c,
        &rhs,
    )
}

/// Replaces every `a_ij` by the scalar `value(i, j)`. Only meaningful on
/// normal forms when `value` respects the relations (e.g. the identity
/// matrix, or any values when all parameters are 1).
pub fn evaluate_a(f: &Polynomial, value: impl Fn(usize, usize) -> Rational) -> Polynomial {
    let mut out = Polynomial::zero();
    for (w, c) in f.terms() {
        let mut coeff = c.clone();
        let mut rest = Word::new();
        for g in w {
            if g.family() == Family::A {
                coeff = &coeff * &value(g.idx(0), g.idx(1));
            } else {
                rest.push(*g);
            }
        }
        out.add_term(rest, &coeff);
    }
    out
}

/// At `A = I` the transformed array is `B` itself and the determinant is 1.
pub fn identity_specialization_check(a: &QuantumMatrix, b: &AntisymMatrix) -> Result<Verdict> {
    let c = congruence_transform(a, b)?;
    let delta = |i: usize, j: usize| {
        if i == j {
            Rational::ONE
        } else {
            Rational::ZERO
        }
    };
    let pf_c = evaluate_a(&c.pfaffian(pf_params(b))?, delta);
    let det = evaluate_a(&det_q(a)?, delta);
    let rhs = det.multiply(&pfaffian(b)?);
    Ok(if pf_c == rhs {
        Verdict::Holds
    } else {
        Verdict::Fails {
            what: "Pf(C) at A = I".into(),
            residue: &pf_c - &rhs,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebras::{free_antisym_generators, hyper_generators};

    fn table(n: usize, seed: u64) -> Arc<ParameterTable> {
        Arc::new(ParameterTable::seeded(n, ParameterTable::lambda_for_seed(seed), seed).unwrap())
    }

    fn b(i: usize, j: usize) -> Generator {
        Generator::b(&[i, j])
    }

    #[test]
    fn shuffle_family_sizes() {
        for (m, n) in [
            (1, 4),
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (4, 2),
        ] {
            let f = ShuffleFamily::new(m, n).unwrap();
            let members = f.members();
            assert_eq!(members.len() as u128, f.cardinality(), "m={m} n={n}");
            for s in &members {
                assert!(s.chunks(m).all(|c| c.windows(2).all(|w| w[0] < w[1])));
            }
            assert_eq!(members.iter().unique().count(), members.len());
        }
        assert_eq!(ShuffleFamily::new(2, 3).unwrap().cardinality(), 90);
    }

    #[test]
    fn pfaffian_small() {
        let t = table(4, 0);
        let bm = free_antisym_generators(2, Flavor::P, t.clone()).unwrap();
        assert_eq!(pfaffian(&bm).unwrap(), Polynomial::generator(b(1, 2)));
        let bm = free_antisym_generators(4, Flavor::P, t.clone()).unwrap();
        let pf = pfaffian(&bm).unwrap();
        assert_eq!(pf.len(), 6);
        let q = t.q();
        let expect = q.get(1, 3) * q.get(2, 3) * q.get(1, 4) * q.get(2, 4);
        assert_eq!(pf.coeff(&[b(3, 4), b(1, 2)]), expect);
        assert!(free_antisym_generators(3, Flavor::P, t)
            .map(|b| pfaffian(&b))
            .unwrap()
            .is_err());
    }

    #[test]
    fn unit_parameters() {
        let t = Arc::new(ParameterTable::classical(4));
        let pf = pfaffian(&free_antisym_generators(4, Flavor::P, t).unwrap()).unwrap();
        let one = Rational::ONE;
        let expect = [
            ([b(1, 2), b(3, 4)], one.clone()),
            ([b(1, 3), b(2, 4)], -one.clone()),
            ([b(1, 4), b(2, 3)], one.clone()),
            ([b(2, 3), b(1, 4)], one.clone()),
            ([b(2, 4), b(1, 3)], -one.clone()),
            ([b(3, 4), b(1, 2)], one.clone()),
        ];
        assert_eq!(pf.len(), 6);
        for (w, c) in expect {
            assert_eq!(pf.coeff(&w), c);
        }
    }

    #[test]
    fn hyper_matches_pfaffian_at_arity_two() {
        let t = table(6, 3);
        for size in [2, 4, 6] {
            let bm = free_antisym_generators(size, Flavor::P, t.clone()).unwrap();
            let h = hyper_generators(2, size / 2).unwrap();
            assert_eq!(
                pfaffian(&bm).unwrap(),
                hyper_pfaffian(&h, &t, Flavor::Q).unwrap()
            );
        }
        let h = hyper_generators(3, 1).unwrap();
        assert_eq!(
            hyper_pfaffian(&h, &t, Flavor::Q).unwrap(),
            Polynomial::generator(Generator::b(&[1, 2, 3]))
        );
        let h = hyper_generators(3, 2).unwrap();
        assert_eq!(hyper_pfaffian(&h, &t, Flavor::Q).unwrap().len(), 20);
    }

    #[test]
    fn laplace_expansions() {
        let t = table(6, 1);
        for size in [2, 4, 6] {
            for flavor in [Flavor::P, Flavor::Q] {
                let bm = free_antisym_generators(size, flavor, t.clone()).unwrap();
                for split in 0..=size / 2 {
                    assert!(
                        pf_laplace_check(&bm, split).unwrap().pass(),
                        "size={size} t={split}"
                    );
                }
            }
        }
        let h = hyper_generators(3, 2).unwrap();
        for split in 0..=2 {
            assert!(hyper_laplace_check(&h, &t, Flavor::Q, split)
                .unwrap()
                .pass());
        }
    }

    #[test]
    fn recursive_matches_definition_on_free_entries() {
        let t = table(6, 2);
        let bm = free_antisym_generators(6, Flavor::P, t.clone()).unwrap();
        let entries: BTreeMap<Vec<usize>, Polynomial> = (1..=6)
            .combinations(2)
            .map(|i| (i.clone(), Polynomial::generator(Generator::b(&i))))
            .collect();
        let rec = block_pfaffian(6, 2, t.q(), bm.presentation(), |i| &entries[i]).unwrap();
        assert_eq!(rec, pfaffian(&bm).unwrap());
    }

    #[test]
    fn congruence_two_by_two() {
        let t = table(2, 0);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        let bm = free_antisym_generators(2, Flavor::P, t).unwrap();
        let c = congruence_transform(&a, &bm).unwrap();
        let expect = det_q(&a).unwrap().multiply(&Polynomial::generator(b(1, 2)));
        assert_eq!(c.entry(&[1, 2]).unwrap(), &expect);
        assert!(pf_transform_check(&a, &bm).unwrap().pass());
    }

    #[test]
    fn congruence_four_by_four() {
        let t = table(4, 1);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        for flavor in [Flavor::P, Flavor::Q] {
            let bm = free_antisym_generators(4, flavor, t.clone()).unwrap();
            assert!(pf_transform_check(&a, &bm).unwrap().pass(), "{flavor:?}");
        }
    }

    #[test]
    fn identity_specialization() {
        let t = table(4, 2);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        let bm = free_antisym_generators(4, Flavor::P, t).unwrap();
        assert!(identity_specialization_check(&a, &bm).unwrap().pass());
    }

    #[test]
    fn hyper_transform_trivial_block() {
        let t = table(3, 0);
        let a = QuantumMatrix::new(t).unwrap();
        let h = hyper_generators(3, 1).unwrap();
        for form in [TransformForm::Row, TransformForm::Column] {
            assert!(hyper_transform_check(&a, &h, form).unwrap().pass());
        }
    }

    #[test]
    fn hyper_transform_arity_two_agrees() {
        let t = table(4, 4);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        let h = hyper_generators(2, 2).unwrap();
        assert!(hyper_transform_check(&a, &h, TransformForm::Row)
            .unwrap()
            .pass());
        assert!(hyper_transform_check(&a, &h, TransformForm::Column)
            .unwrap()
            .pass());
        let bm = free_antisym_generators(4, Flavor::P, t).unwrap();
        let c1 = congruence_transform(&a, &bm).unwrap();
        let c2 = hyper_transform(&a, &h, TransformForm::Row).unwrap();
        assert_eq!(c1.entries(), c2.entries());
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let t = table(2, 0);
        let a = QuantumMatrix::new(t.clone()).unwrap();
        let bm = free_antisym_generators(
            3,
            Flavor::P,
            Arc::new(ParameterTable::seeded(3, Rational::from(2), 0).unwrap()),
        )
        .unwrap();
        assert!(congruence_transform(&a, &bm).is_err());
    }
}
