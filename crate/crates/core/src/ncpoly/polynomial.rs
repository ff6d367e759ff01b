use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::generator::{graded_cmp, Generator, Word};
use crate::error::{Error, Result};
use crate::scalars::Rational;

/// A finitely supported linear combination of words with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: FxHashMap<Word, Rational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Polynomial {
        Polynomial::monomial(Word::new(), c)
    }

    pub fn monomial(word: Word, coeff: Rational) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(word, &coeff);
        p
    }

    pub fn generator(g: Generator) -> Polynomial {
        Polynomial::monomial(Word::from_slice(&[g]), Rational::ONE)
    }

    pub fn word(gens: &[Generator]) -> Polynomial {
        Polynomial::monomial(Word::from_slice(gens), Rational::ONE)
    }

    pub fn with_capacity(n: usize) -> Polynomial {
        Polynomial {
            terms: FxHashMap::with_capacity_and_hasher(n, Default::default()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[Generator]) -> Rational {
        self.terms.get(word).cloned().unwrap_or(Rational::ZERO)
    }

    /// Unordered term iteration.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    /// Terms in graded-lex word order.
    pub fn sorted_terms(&self) -> Vec<(&Word, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_cmp(a.0, b.0));
        v
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Rational)> {
        self.terms.into_iter()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Adds `coeff·word`, pruning the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(word) {
            Entry::Occupied(mut e) => {
                let sum = e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
        }
    }

    /// `self += scale · other`.
    pub fn add_scaled(&mut self, other: &Polynomial, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        self.terms.reserve(other.len());
        for (w, c) in &other.terms {
            if scale.is_one() {
                self.add_term(w.clone(), c);
            } else {
                self.add_term(w.clone(), &(c * scale));
            }
        }
    }

    /// `self += scale · prefix · other · suffix`.
    pub fn add_sandwiched(
        &mut self,
        prefix: &[Generator],
        other: &Polynomial,
        suffix: &[Generator],
        scale: &Rational,
    ) {
        for (w, c) in &other.terms {
            let mut word = Word::with_capacity(prefix.len() + w.len() + suffix.len());
            word.extend_from_slice(prefix);
            word.extend_from_slice(w);
            word.extend_from_slice(suffix);
            self.add_term(word, &(c * scale));
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = Polynomial::with_capacity(self.len());
        out.add_scaled(self, c);
        out
    }

    /// Concatenation product, distributed over terms. Not normalized.
    pub fn multiply(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::with_capacity(self.len() * other.len());
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                let mut w = Word::with_capacity(u.len() + v.len());
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                out.add_term(w, &(c * d));
            }
        }
        out
    }

    /// Applies `f` to every word and re-collects coefficients.
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> Word) -> Polynomial {
        let mut out = Polynomial::with_capacity(self.len());
        for (w, c) in &self.terms {
            out.add_term(f(w), c);
        }
        out
    }

    /// Every distinct generator occurring in the support.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.terms.keys().flatten().copied().collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// `{"terms":[{"coeff":"num/den","word":["a[1,2]",…]}]}`, graded-lex order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(w, c)| {
                json!({
                    "coeff": c.to_string(),
                    "word": w.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(value: &Value) -> Result<Polynomial> {
        let bad = |m: &str| Error::Parse(format!("polynomial: {m}"));
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"terms\" array"))?;
        let mut out = Polynomial::zero();
        for t in terms {
            let coeff: Rational = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("term without string coeff"))?
                .parse()
                .map_err(|e| bad(&format!("{e}")))?;
            let word = t
                .get("word")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without word array"))?
                .iter()
                .map(|g| {
                    g.as_str()
                        .ok_or_else(|| bad("non-string generator"))?
                        .parse()
                })
                .collect::<Result<Word>>()?;
            out.add_term(word, &coeff);
        }
        Ok(out)
    }

    /// Human-readable rendering, e.g. `a[1,1]a[2,2] - 3/2 a[1,2]a[2,1]`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let word: String = w.iter().map(|g| g.to_string()).collect();
            if w.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&word);
            } else {
                s.push_str(&format!("{abs} {word}"));
            }
        }
        s
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::ONE);
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::ONE);
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.multiply(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::ONE)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        Polynomial::from_json(&v).map_err(serde::de::Error::custom)
    }
}
