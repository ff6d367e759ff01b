//! Quadratic rewrite systems and normal-form reduction.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};

use super::generator::{graded_cmp, Generator, Word};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalars::Rational;

/// Right-hand side of a rewrite rule as `(word, coefficient)` pairs, sorted.
pub type RuleRhs = Arc<[(Word, Rational)]>;

/// A single rewrite `g·h → Σ c·w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: (Generator, Generator),
    pub rhs: Polynomial,
}

impl Rule {
    pub fn new(g: Generator, h: Generator, rhs: Polynomial) -> Rule {
        Rule { lhs: (g, h), rhs }
    }

    /// `g·h → c·h·g`.
    pub fn commute(g: Generator, h: Generator, c: Rational) -> Rule {
        Rule::new(g, h, Polynomial::monomial(Word::from_slice(&[h, g]), c))
    }
}

/// Polynomials above this many terms are normalized in parallel.
const PARALLEL_TERMS: usize = 4096;

/// A presentation by generators and degree-2 rewrite rules.
///
/// Atomic presentations carry their own rules. Tensor presentations are
/// built from parts whose generators pairwise commute; they hold the full
/// merged rule set (so the generic reducer and the confluence checker see
/// everything), and additionally normalize by splitting words into per-part
/// subwords when the parts occupy disjoint intervals of the generator order.
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    declared: FxHashSet<Generator>,
    rules: FxHashMap<(Generator, Generator), RuleRhs>,
    free: bool,
    parts: Vec<Arc<Presentation>>,
    part_of: FxHashMap<Generator, usize>,
    splittable: bool,
    cache: DashMap<Word, Arc<Polynomial>, FxBuildHasher>,
    cache_enabled: AtomicBool,
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("name", &self.name)
            .field("generators", &self.generators.len())
            .field("rules", &self.rules.len())
            .field("parts", &self.parts.len())
            .finish()
    }
}

fn compile_rhs(rhs: &Polynomial) -> RuleRhs {
    let mut v: Vec<(Word, Rational)> = rhs.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    v.sort_by(|a, b| graded_cmp(&a.0, &b.0));
    v.into()
}

impl Presentation {
    /// An atomic presentation. With `free = true` the generators need no
    /// rules among themselves (words in them are already normal); otherwise
    /// every descending pair must have exactly one rule.
    pub fn atomic(
        name: impl Into<String>,
        generators: impl IntoIterator<Item = Generator>,
        rules: Vec<Rule>,
        free: bool,
    ) -> Result<Presentation> {
        let name = name.into();
        let mut generators: Vec<Generator> = generators.into_iter().collect();
        generators.sort();
        generators.dedup();
        let declared: FxHashSet<Generator> = generators.iter().copied().collect();
        let mut table = FxHashMap::default();
        for rule in rules {
            let (g, h) = rule.lhs;
            let bad = |m: &str| Err(Error::Malformed(format!("{name}: rule {g}{h}: {m}")));
            if !declared.contains(&g) || !declared.contains(&h) {
                return bad("left side uses an undeclared generator");
            }
            if g < h {
                return bad("left side is already ascending");
            }
            if free {
                return bad("free presentations carry no rules");
            }
            for (w, _) in rule.rhs.terms() {
                if w.iter().any(|x| !declared.contains(x)) {
                    return bad("right side uses an undeclared generator");
                }
                if w.len() > 2 || graded_cmp(w, &[g, h]) != std::cmp::Ordering::Less {
                    return bad("right side is not strictly smaller");
                }
            }
            if table.insert((g, h), compile_rhs(&rule.rhs)).is_some() {
                return bad("duplicate rule");
            }
        }
        if !free {
            for (k, &h) in generators.iter().enumerate() {
                for &g in &generators[k + 1..] {
                    if !table.contains_key(&(g, h)) {
                        return Err(Error::Malformed(format!(
                            "{name}: no rule for descending pair {g}{h}"
                        )));
                    }
                }
            }
        }
        Ok(Presentation {
            name,
            generators,
            declared,
            rules: table,
            free,
            parts: Vec::new(),
            part_of: FxHashMap::default(),
            splittable: false,
            cache: DashMap::with_hasher(FxBuildHasher),
            cache_enabled: AtomicBool::new(true),
        })
    }

    /// Tensor product: the union of the parts' rules plus `g·h → h·g` for
    /// every descending pair drawn from different parts.
    pub fn tensor(parts: &[Arc<Presentation>]) -> Result<Presentation> {
        let mut flat: Vec<Arc<Presentation>> = Vec::new();
        for p in parts {
            if p.parts.is_empty() {
                flat.push(p.clone());
            } else {
                flat.extend(p.parts.iter().cloned());
            }
        }
        let mut part_of = FxHashMap::default();
        for (k, p) in flat.iter().enumerate() {
            for &g in &p.generators {
                if part_of.insert(g, k).is_some() {
                    return Err(Error::OverlappingFamilies(format!(
                        "{g} occurs in more than one factor"
                    )));
                }
            }
        }
        // Order parts by their smallest generator so split products come out
        // in global order.
        flat.sort_by_key(|p| p.generators.first().copied());
        part_of.clear();
        for (k, p) in flat.iter().enumerate() {
            for &g in &p.generators {
                part_of.insert(g, k);
            }
        }
        let mut generators: Vec<Generator> = part_of.keys().copied().collect();
        generators.sort();
        let splittable = generators
            .windows(2)
            .all(|w| part_of[&w[0]] <= part_of[&w[1]]);

        let mut rules = FxHashMap::default();
        for p in &flat {
            for (k, v) in &p.rules {
                rules.insert(*k, v.clone());
            }
        }
        for (k, &h) in generators.iter().enumerate() {
            for &g in &generators[k + 1..] {
                if part_of[&g] != part_of[&h] {
                    rules.insert((g, h), compile_rhs(&Rule::commute(g, h, Rational::ONE).rhs));
                }
            }
        }
        let name = flat
            .iter()
            .map(|p| p.name.as_str())
            .collect::<Vec<_>>()
            .join(" ⊗ ");
        Ok(Presentation {
            name,
            declared: generators.iter().copied().collect(),
            generators,
            rules,
            free: false,
            parts: flat,
            part_of,
            splittable,
            cache: DashMap::with_hasher(FxBuildHasher),
            cache_enabled: AtomicBool::new(true),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn declares(&self, g: Generator) -> bool {
        self.declared.contains(&g)
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn parts(&self) -> &[Arc<Presentation>] {
        &self.parts
    }

    pub fn rule(&self, g: Generator, h: Generator) -> Option<&RuleRhs> {
        self.rules.get(&(g, h))
    }

    /// All rules, ordered by left side.
    pub fn rules(&self) -> BTreeMap<(Generator, Generator), RuleRhs> {
        self.rules.iter().map(|(k, v)| (*k, v.clone())).collect()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Copy of an atomic presentation with `delta` added to the first
    /// coefficient of one rule. Used for mutation testing.
    pub fn perturbed(&self, lhs: (Generator, Generator), delta: &Rational) -> Result<Presentation> {
        if !self.parts.is_empty() {
            return Err(Error::Malformed("perturb a factor, then re-tensor".into()));
        }
        let rules = self
            .rules()
            .into_iter()
            .map(|(k, rhs)| {
                let mut poly = Polynomial::zero();
                for (idx, (w, c)) in rhs.iter().enumerate() {
                    let c = if k == lhs && idx == 0 {
                        c + delta
                    } else {
                        c.clone()
                    };
                    poly.add_term(w.clone(), &c);
                }
                Rule { lhs: k, rhs: poly }
            })
            .collect();
        if self.rule(lhs.0, lhs.1).is_none() {
            return Err(Error::Malformed(format!("no rule {}{}", lhs.0, lhs.1)));
        }
        Presentation::atomic(
            format!("{}~perturbed", self.name),
            self.generators.iter().copied(),
            rules,
            self.free,
        )
    }

    pub fn set_cache_enabled(&self, on: bool) {
        self.cache_enabled.store(on, AtomicOrdering::Relaxed);
        for p in &self.parts {
            p.set_cache_enabled(on);
        }
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
        for p in &self.parts {
            p.clear_cache();
        }
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len() + self.parts.iter().map(|p| p.cache_len()).sum::<usize>()
    }

    fn check_declared(&self, f: &Polynomial) -> Result<()> {
        for (w, _) in f.terms() {
            if let Some(g) = w.iter().find(|g| !self.declared.contains(g)) {
                return Err(Error::UndeclaredGenerator(*g, self.name.clone()));
            }
        }
        Ok(())
    }

    pub fn is_normal_word(&self, w: &[Generator]) -> bool {
        w.windows(2)
            .all(|p| !self.rules.contains_key(&(p[0], p[1])))
    }

    /// Reduces `f` to its unique normal form.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check_declared(f)?;
        Ok(self.normalize_unchecked(f))
    }

    /// Normal form of the product `f·g`.
    pub fn product(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.normal_form(&f.multiply(g))
    }

    /// Whether `f` vanishes in the algebra.
    pub fn equals_zero(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub(crate) fn normalize_unchecked(&self, f: &Polynomial) -> Polynomial {
        if f.len() < PARALLEL_TERMS {
            let mut out = Polynomial::with_capacity(f.len());
            for (w, c) in f.terms() {
                out.add_scaled(&self.nf_word(w), c);
            }
            return out;
        }
        let terms: Vec<(&Word, &Rational)> = f.terms().collect();
        terms
            .par_chunks(256)
            .map(|chunk| {
                let mut out = Polynomial::zero();
                for (w, c) in chunk {
                    out.add_scaled(&self.nf_word(w), c);
                }
                out
            })
            .reduce(Polynomial::zero, |mut a, b| {
                if a.len() < b.len() {
                    let mut b = b;
                    b.add_scaled(&a, &Rational::ONE);
                    return b;
                }
                a.add_scaled(&b, &Rational::ONE);
                a
            })
    }

    /// Normal form of a single word.
    pub(crate) fn nf_word(&self, w: &[Generator]) -> Arc<Polynomial> {
        if self.splittable && !self.parts.is_empty() {
            return self.nf_split(w);
        }
        self.nf_rewrite(w)
    }

    fn nf_split(&self, w: &[Generator]) -> Arc<Polynomial> {
        let mut sub: Vec<Word> = vec![Word::new(); self.parts.len()];
        for &g in w {
            sub[self.part_of[&g]].push(g);
        }
        let mut acc: Option<Polynomial> = None;
        let mut single: Option<Arc<Polynomial>> = None;
        for (k, s) in sub.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let nf = self.parts[k].nf_word(s);
            match (&acc, &single) {
                (None, None) => single = Some(nf),
                _ => {
                    let left = match acc.take() {
                        Some(a) => a,
                        None => (*single.take().unwrap()).clone(),
                    };
                    acc = Some(left.multiply(&nf));
                }
            }
        }
        match (acc, single) {
            (Some(a), _) => Arc::new(a),
            (None, Some(s)) => s,
            (None, None) => Arc::new(Polynomial::one()),
        }
    }

    fn nf_rewrite(&self, w: &[Generator]) -> Arc<Polynomial> {
        if self.is_normal_word(w) {
            return Arc::new(Polynomial::monomial(Word::from_slice(w), Rational::ONE));
        }
        let caching = self.cache_enabled.load(AtomicOrdering::Relaxed);
        if caching {
            if let Some(hit) = self.cache.get(w) {
                return hit.clone();
            }
        }
        let tail = self.nf_rewrite(&w[1..]);
        let mut out = Polynomial::with_capacity(tail.len());
        for (u, c) in tail.terms() {
            out.add_scaled(&self.insert(w[0], u), c);
        }
        let out = Arc::new(out);
        if caching {
            self.cache.insert(Word::from_slice(w), out.clone());
        }
        out
    }

    /// Normal form of `g·u` for a normal word `u`.
    fn insert(&self, g: Generator, u: &[Generator]) -> Arc<Polynomial> {
        let Some(rhs) = u.first().and_then(|&h| self.rules.get(&(g, h))) else {
            let mut w = Word::with_capacity(u.len() + 1);
            w.push(g);
            w.extend_from_slice(u);
            return Arc::new(Polynomial::monomial(w, Rational::ONE));
        };
        let caching = self.cache_enabled.load(AtomicOrdering::Relaxed);
        let mut key = Word::with_capacity(u.len() + 1);
        key.push(g);
        key.extend_from_slice(u);
        if caching {
            if let Some(hit) = self.cache.get(&key) {
                return hit.clone();
            }
        }
        let rest = &u[1..];
        let mut out = Polynomial::zero();
        for (rw, d) in rhs.iter() {
            let mut cur = Polynomial::monomial(Word::from_slice(rest), Rational::ONE);
            for &letter in rw.iter().rev() {
                let mut next = Polynomial::with_capacity(cur.len());
                for (v, c) in cur.terms() {
                    next.add_scaled(&self.insert(letter, v), c);
                }
                cur = next;
            }
            out.add_scaled(&cur, d);
        }
        let out = Arc::new(out);
        if caching {
            self.cache.insert(key, out.clone());
        }
        out
    }

    /// Leftmost-first rewriting with no cache and no factor splitting. Slow;
    /// serves as the independent reference reducer. Fails if more than
    /// `max_steps` rewrites are needed.
    pub fn normal_form_reference(&self, f: &Polynomial, max_steps: usize) -> Result<Polynomial> {
        self.check_declared(f)?;
        let mut done = Polynomial::zero();
        let mut pending = f.clone();
        let mut steps = 0usize;
        while !pending.is_empty() {
            let mut next = Polynomial::zero();
            for (w, c) in pending.into_terms() {
                let hit = (0..w.len().saturating_sub(1))
                    .find_map(|i| self.rules.get(&(w[i], w[i + 1])).map(|r| (i, r)));
                match hit {
                    None => done.add_term(w, &c),
                    Some((i, rhs)) => {
                        steps += 1;
                        if steps > max_steps {
                            return Err(Error::NonTermination(max_steps));
                        }
                        for (rw, d) in rhs.iter() {
                            let mut nw = Word::with_capacity(w.len());
                            nw.extend_from_slice(&w[..i]);
                            nw.extend_from_slice(rw);
                            nw.extend_from_slice(&w[i + 2..]);
                            next.add_term(nw, &(&c * d));
                        }
                    }
                }
            }
            pending = next;
        }
        Ok(done)
    }

    /// Every normal word of the given degree.
    pub fn normal_words(&self, degree: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Word::new();
        self.extend_normal(degree, &mut cur, &mut out);
        out
    }

    fn extend_normal(&self, degree: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == degree {
            out.push(cur.clone());
            return;
        }
        for &g in &self.generators {
            if let Some(&last) = cur.last() {
                if self.rules.contains_key(&(last, g)) {
                    continue;
                }
            }
            cur.push(g);
            self.extend_normal(degree, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Generator {
        Generator::x(i)
    }

    fn commutative(n: usize) -> Presentation {
        let gens: Vec<Generator> = (1..=n).map(x).collect();
        let mut rules = Vec::new();
        for j in 1..=n {
            for i in 1..j {
                rules.push(Rule::commute(x(j), x(i), Rational::ONE));
            }
        }
        Presentation::atomic("comm", gens, rules, false).unwrap()
    }

    #[test]
    fn commutative_sorts_words() {
        let p = commutative(3);
        let f = Polynomial::word(&[x(3), x(1), x(2), x(1)]);
        let nf = p.normal_form(&f).unwrap();
        assert_eq!(nf, Polynomial::word(&[x(1), x(1), x(2), x(3)]));
    }

    #[test]
    fn rejects_incomplete_or_non_decreasing_rules() {
        let gens = vec![x(1), x(2)];
        assert!(Presentation::atomic("p", gens.clone(), vec![], false).is_err());
        let up = Rule::new(x(1), x(2), Polynomial::word(&[x(1), x(1)]));
        assert!(Presentation::atomic("p", gens.clone(), vec![up], false).is_err());
        let grows = Rule::new(x(2), x(1), Polynomial::word(&[x(2), x(1)]));
        assert!(Presentation::atomic("p", gens, vec![grows], false).is_err());
    }

    #[test]
    fn undeclared_generator_is_an_error() {
        let p = commutative(2);
        let f = Polynomial::generator(Generator::a(1, 1));
        assert!(matches!(
            p.normal_form(&f),
            Err(Error::UndeclaredGenerator(..))
        ));
    }

    #[test]
    fn tensor_rejects_shared_generators() {
        let p = Arc::new(commutative(2));
        assert!(Presentation::tensor(&[p.clone(), p]).is_err());
    }

    #[test]
    fn reference_watchdog_trips() {
        let p = commutative(3);
        let f = Polynomial::word(&[x(3), x(2), x(1)]);
        assert!(matches!(
            p.normal_form_reference(&f, 1),
            Err(Error::NonTermination(1))
        ));
        assert_eq!(
            p.normal_form_reference(&f, 100).unwrap(),
            Polynomial::word(&[x(1), x(2), x(3)])
        );
    }

    #[test]
    fn normal_word_count_commutative() {
        // monomials of degree 2 in 3 commuting variables
        assert_eq!(commutative(3).normal_words(2).len(), 6);
    }
}
