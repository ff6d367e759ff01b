//! Permutations and the parameter-weighted inversion statistics built on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{ParamMatrix, Rational};

/// A bijection of `{1..N}`, stored as its one-line image sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotAPermutation(images));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// σ(i) for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// Classical inversion number `l(σ)`.
    pub fn inversions(&self) -> usize {
        inversion_count(&self.images)
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Perm> {
        use itertools::Itertools;
        (1..=n).permutations(n).map(|images| Perm { images })
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

pub(crate) fn inversion_count(values: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                count += 1;
            }
        }
    }
    count
}

/// `(−params)_σ = (−1)^{l(σ)} ∏_{i<j, σ_i>σ_j} params[σ_j][σ_i]`.
///
/// Passing the q array gives `(−q)_σ`, the p array gives `(−p)_σ`.
pub fn q_inversion(sigma: &Perm, params: &ParamMatrix) -> Rational {
    q_inversion_seq(sigma.images(), params)
}

/// Same statistic for any sequence of distinct indices (not necessarily
/// `1..N`). Only the relative order of values matters for which pairs count;
/// the weights use the actual index values.
pub fn q_inversion_seq(values: &[usize], params: &ParamMatrix) -> Rational {
    let mut acc = Rational::ONE;
    let mut negative = false;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                acc *= params.get(values[j], values[i]);
                negative = !negative;
            }
        }
    }
    if negative {
        -acc
    } else {
        acc
    }
}

/// `[m]_v = 1 + v + ⋯ + v^{m−1}`.
pub fn quantum_number(m: usize, v: &Rational) -> Rational {
    let mut acc = Rational::ZERO;
    let mut power = Rational::ONE;
    for _ in 0..m {
        acc += &power;
        power = &power * v;
    }
    acc
}

/// `[k]_v! = [1]_v [2]_v ⋯ [k]_v`, with `[0]_v! = 1`.
pub fn quantum_factorial(k: usize, v: &Rational) -> Rational {
    (1..=k).map(|m| quantum_number(m, v)).product()
}

/// `inv(I, J) = ∏_{i∈I, j∈J, i>j} (−q_{ji})`, the reordering factor of
/// `x_I x_J` into increasing order.
pub fn inv_factor(i_set: &[usize], j_set: &[usize], q: &ParamMatrix) -> Result<Rational> {
    if i_set.iter().any(|i| j_set.contains(i)) {
        return Err(Error::OverlappingSets(i_set.to_vec(), j_set.to_vec()));
    }
    let mut acc = Rational::ONE;
    for &i in i_set {
        for &j in j_set {
            if i > j {
                acc = -(&acc * q.get(j, i));
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::ParameterTable;

    fn table3() -> ParameterTable {
        ParameterTable::seeded(5, Rational::from(2), 11).unwrap()
    }

    #[test]
    fn identity_has_weight_one() {
        let t = table3();
        assert_eq!(q_inversion(&Perm::identity(4), t.q()), Rational::ONE);
    }

    #[test]
    fn single_and_full_reversal() {
        let t = table3();
        let q = t.q();
        let s21 = Perm::new(vec![2, 1]).unwrap();
        assert_eq!(q_inversion(&s21, q), -q.get(1, 2).clone());
        let s321 = Perm::new(vec![3, 2, 1]).unwrap();
        let expect = -(q.get(2, 3) * q.get(1, 3) * q.get(1, 2));
        assert_eq!(q_inversion(&s321, q), expect);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Perm::new(vec![1, 1]).is_err());
        assert!(Perm::new(vec![0, 1]).is_err());
        assert!(Perm::new(vec![1, 3]).is_err());
    }

    /// Independent route: bubble-sort σ with adjacent swaps; each swap of an
    /// out-of-order neighbour pair (b, a), b > a, contributes −params[a][b].
    fn by_adjacent_swaps(images: &[usize], params: &ParamMatrix) -> Rational {
        let mut v = images.to_vec();
        let mut acc = Rational::ONE;
        loop {
            let mut swapped = false;
            for k in 0..v.len().saturating_sub(1) {
                if v[k] > v[k + 1] {
                    acc = -(&acc * params.get(v[k + 1], v[k]));
                    v.swap(k, k + 1);
                    swapped = true;
                }
            }
            if !swapped {
                return acc;
            }
        }
    }

    #[test]
    fn enumeration_matches_adjacent_swap_route() {
        let t = table3();
        for n in 0..=5 {
            for sigma in Perm::all(n) {
                assert_eq!(
                    q_inversion(&sigma, t.q()),
                    by_adjacent_swaps(sigma.images(), t.q()),
                    "{sigma:?}"
                );
                assert_eq!(
                    q_inversion(&sigma, t.p()),
                    by_adjacent_swaps(sigma.images(), t.p())
                );
            }
        }
    }

    #[test]
    fn quantum_factorials() {
        assert_eq!(quantum_factorial(0, &Rational::from(5)), Rational::ONE);
        assert_eq!(quantum_factorial(1, &Rational::from(5)), Rational::ONE);
        let lam = Rational::new(3, 7);
        assert_eq!(quantum_factorial(2, &lam), &Rational::ONE + &lam);
        assert_eq!(quantum_factorial(3, &Rational::from(2)), Rational::from(21));
        let mut fact = 1i64;
        for k in 1..=8 {
            fact *= k as i64;
            assert_eq!(quantum_factorial(k, &Rational::ONE), Rational::from(fact));
        }
    }

    #[test]
    fn lambda_length_generating_function() {
        // Σ_{σ∈S_n} λ^{l(σ)} = [n]_λ!
        let lam = Rational::new(-5, 3);
        for n in 0..=5 {
            let sum: Rational = Perm::all(n).map(|s| lam.pow(s.inversions() as i32)).sum();
            assert_eq!(sum, quantum_factorial(n, &lam), "n={n}");
        }
    }

    #[test]
    fn inv_factor_examples() {
        let t = table3();
        let q = t.q();
        assert_eq!(inv_factor(&[1, 2], &[3, 4], q).unwrap(), Rational::ONE);
        assert_eq!(inv_factor(&[2], &[1], q).unwrap(), -q.get(1, 2).clone());
        let expect = q.get(1, 3) * q.get(2, 3) * q.get(1, 4) * q.get(2, 4);
        assert_eq!(inv_factor(&[3, 4], &[1, 2], q).unwrap(), expect);
        assert!(inv_factor(&[1, 2], &[2, 3], q).is_err());
    }
}
