//! The `(p, λ)` parameter table.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalars::{quantum_number, Rational};

/// Square array of parameters with 1-based access.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl ParamMatrix {
    fn ones(n: usize) -> Self {
        ParamMatrix {
            n,
            data: vec![Rational::ONE; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "parameter index ({i},{j}) out of range 1..={}",
            self.n
        );
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[(i - 1) * self.n + (j - 1)] = v;
    }
}

/// Parameters `q_ij`, `p_ij` and `λ` subject to `q_ij q_ji = 1`,
/// `p_ij p_ji = 1`, unit diagonals and `p_ij q_ij = λ` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterTable {
    n: usize,
    lambda: Rational,
    q: ParamMatrix,
    p: ParamMatrix,
}

const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

impl ParameterTable {
    /// Builds the table from `λ` and the strictly upper q entries, filling
    /// in every derived entry.
    pub fn new(
        n: usize,
        lambda: Rational,
        upper_q: &BTreeMap<(usize, usize), Rational>,
    ) -> Result<ParameterTable> {
        check_lambda(&lambda, n)?;
        for i in 1..=n {
            for j in i + 1..=n {
                match upper_q.get(&(i, j)) {
                    None => return Err(Error::InvalidParameter(format!("missing q_{i}{j}"))),
                    Some(v) if v.is_zero() => {
                        return Err(Error::InvalidParameter(format!("q_{i}{j} is zero")))
                    }
                    Some(_) => {}
                }
            }
        }
        if let Some(&(i, j)) = upper_q.keys().find(|(i, j)| i >= j || *j > n || *i == 0) {
            return Err(Error::InvalidParameter(format!(
                "q_{i}{j} is not a strictly upper entry of a {n}x{n} table"
            )));
        }
        let table = Self::from_parts_unchecked(n, lambda, upper_q);
        table.validate()?;
        Ok(table)
    }

    /// Fills derived entries without validating anything. Exists so tests can
    /// feed deliberately broken tables into precondition gates.
    #[doc(hidden)]
    pub fn from_parts_unchecked(
        n: usize,
        lambda: Rational,
        upper_q: &BTreeMap<(usize, usize), Rational>,
    ) -> ParameterTable {
        let mut q = ParamMatrix::ones(n);
        let mut p = ParamMatrix::ones(n);
        for i in 1..=n {
            for j in i + 1..=n {
                let qij = upper_q.get(&(i, j)).cloned().unwrap_or(Rational::ONE);
                let pij = if qij.is_zero() {
                    Rational::ZERO
                } else {
                    &lambda / &qij
                };
                q.set(j, i, qij.checked_recip().unwrap_or(Rational::ZERO));
                p.set(j, i, pij.checked_recip().unwrap_or(Rational::ZERO));
                q.set(i, j, qij);
                p.set(i, j, pij);
            }
        }
        ParameterTable { n, lambda, q, p }
    }

    /// Replaces λ while keeping both parameter arrays, breaking `p_ij q_ij = λ`.
    #[doc(hidden)]
    pub fn with_lambda_unchecked(&self, lambda: Rational) -> ParameterTable {
        ParameterTable {
            lambda,
            ..self.clone()
        }
    }

    /// Generic table: each `q_ij` (i<j) is a ratio of two distinct small
    /// primes, drawn so that all off-diagonal q and p entries are pairwise
    /// distinct.
    pub fn seeded(n: usize, lambda: Rational, seed: u64) -> Result<ParameterTable> {
        if n == 0 {
            return Err(Error::InvalidParameter("seeded table needs n >= 1".into()));
        }
        check_lambda(&lambda, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut used: Vec<Rational> = vec![Rational::ONE, -Rational::ONE, lambda.clone()];
        let mut upper = BTreeMap::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let mut attempts = 0;
                let q = loop {
                    attempts += 1;
                    let num = *PRIMES.choose(&mut rng).unwrap();
                    let den = *PRIMES.choose(&mut rng).unwrap();
                    let sign = if attempts > 200 && rng.random_bool(0.5) {
                        -1
                    } else {
                        1
                    };
                    if num == den {
                        continue;
                    }
                    let q = Rational::new(sign * num, den);
                    let p = &lambda / &q;
                    let family = [q.clone(), q.recip(), p.clone(), p.recip()];
                    let collides = family
                        .iter()
                        .enumerate()
                        .any(|(k, v)| used.contains(v) || family[..k].contains(v));
                    if !collides {
                        used.extend(family);
                        break q;
                    }
                    if attempts > 10_000 {
                        return Err(Error::InvalidParameter(format!(
                            "could not draw distinct parameters for n={n}"
                        )));
                    }
                };
                upper.insert((i, j), q);
            }
        }
        ParameterTable::new(n, lambda, &upper)
    }

    /// Every `q_ij = q` for `i<j`.
    pub fn uniform(n: usize, q: Rational, lambda: Rational) -> Result<ParameterTable> {
        let upper = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .map(|k| (k, q.clone()))
            .collect();
        ParameterTable::new(n, lambda, &upper)
    }

    /// All parameters equal to 1: the commutative specialization.
    pub fn classical(n: usize) -> ParameterTable {
        ParameterTable::uniform(n, Rational::ONE, Rational::ONE).expect("classical table is valid")
    }

    /// λ used by seeded verification runs.
    pub fn lambda_for_seed(seed: u64) -> Rational {
        const CHOICES: [(i64, i64); 6] = [(2, 1), (3, 5), (-3, 1), (7, 2), (-2, 5), (5, 1)];
        let (n, d) = CHOICES[(seed % CHOICES.len() as u64) as usize];
        Rational::new(n, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn q(&self) -> &ParamMatrix {
        &self.q
    }

    pub fn p(&self) -> &ParamMatrix {
        &self.p
    }

    /// Checks every table invariant.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        check_lambda(&self.lambda, self.n)?;
        for i in 1..=self.n {
            if !self.q.get(i, i).is_one() || !self.p.get(i, i).is_one() {
                return bad(format!("diagonal entry {i} is not 1"));
            }
            for j in 1..=self.n {
                if self.q.get(i, j).is_zero() || self.p.get(i, j).is_zero() {
                    return bad(format!("zero parameter at ({i},{j})"));
                }
                if !(self.q.get(i, j) * self.q.get(j, i)).is_one() {
                    return bad(format!("q_{i}{j} q_{j}{i} != 1"));
                }
                if !(self.p.get(i, j) * self.p.get(j, i)).is_one() {
                    return bad(format!("p_{i}{j} p_{j}{i} != 1"));
                }
                if i < j && self.p.get(i, j) * self.q.get(i, j) != self.lambda {
                    return bad(format!("p_{i}{j} q_{i}{j} != lambda"));
                }
            }
        }
        Ok(())
    }

    /// Restriction to the leading `k×k` block.
    pub fn truncate(&self, k: usize) -> ParameterTable {
        assert!(k <= self.n);
        let upper = self
            .upper_q()
            .into_iter()
            .filter(|((_, j), _)| *j <= k)
            .collect();
        ParameterTable::from_parts_unchecked(k, self.lambda.clone(), &upper)
    }

    pub fn upper_q(&self) -> BTreeMap<(usize, usize), Rational> {
        let mut out = BTreeMap::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                out.insert((i, j), self.q.get(i, j).clone());
            }
        }
        out
    }

    /// `{"n":N,"lambda":"a/b","q_upper":{"1,2":"c/d",…}}`; p is never stored.
    pub fn to_json(&self) -> Value {
        let mut upper = Map::new();
        for ((i, j), v) in self.upper_q() {
            upper.insert(format!("{i},{j}"), Value::String(v.to_string()));
        }
        json!({
            "n": self.n,
            "lambda": self.lambda.to_string(),
            "q_upper": Value::Object(upper),
        })
    }

    pub fn from_json(value: &Value) -> Result<ParameterTable> {
        let schema = |msg: &str| Error::Parse(format!("parameter file: {msg}"));
        let obj = value
            .as_object()
            .ok_or_else(|| schema("expected an object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "n" | "lambda" | "q_upper") {
                return Err(schema(&format!("unknown field {key:?}")));
            }
        }
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("\"n\" must be a non-negative integer"))?
            as usize;
        let lambda: Rational = obj
            .get("lambda")
            .and_then(Value::as_str)
            .ok_or_else(|| schema("\"lambda\" must be a rational string"))?
            .parse()
            .map_err(|e| schema(&format!("{e}")))?;
        let upper_obj = obj
            .get("q_upper")
            .and_then(Value::as_object)
            .ok_or_else(|| schema("\"q_upper\" must be an object"))?;
        let mut upper = BTreeMap::new();
        for (key, v) in upper_obj {
            let (i, j) = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| schema(&format!("bad key {key:?}")))?;
            let v: Rational = v
                .as_str()
                .ok_or_else(|| schema(&format!("q_upper[{key}] must be a string")))?
                .parse()
                .map_err(|e| schema(&format!("{e}")))?;
            upper.insert((i, j), v);
        }
        ParameterTable::new(n, lambda, &upper)
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let bytes = Sha256::digest(self.to_json().to_string().as_bytes());
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn check_lambda(lambda: &Rational, n: usize) -> Result<()> {
    if lambda.is_zero() {
        return Err(Error::InvalidParameter("lambda must be nonzero".into()));
    }
    if *lambda == -Rational::ONE {
        return Err(Error::InvalidParameter("lambda must not be -1".into()));
    }
    for k in 1..=n {
        if quantum_number(k, lambda).is_zero() {
            return Err(Error::InvalidParameter(format!("[{k}]_lambda vanishes")));
        }
    }
    Ok(())
}
