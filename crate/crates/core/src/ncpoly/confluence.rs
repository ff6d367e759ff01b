//! Diamond-lemma check: every length-3 overlap must resolve.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::generator::{Generator, Word};
use super::polynomial::Polynomial;
use super::presentation::Presentation;
use crate::error::Result;

/// An overlap `g·h·f` whose two one-step reductions reach different normal
/// forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailedOverlap {
    pub word: Word,
    pub via_left: Polynomial,
    pub via_right: Polynomial,
}

impl FailedOverlap {
    pub fn witness(&self) -> Polynomial {
        &self.via_left - &self.via_right
    }
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub failures: Vec<FailedOverlap>,
}

impl ConfluenceReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "overlaps_checked": self.overlaps_checked,
            "pass": self.pass(),
            "failures": self.failures.iter().map(|f| json!({
                "word": f.word.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "via_left": f.via_left.to_json(),
                "via_right": f.via_right.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Rewrite budget per overlap for the reference reducer.
const OVERLAP_STEP_BUDGET: usize = 100_000;

/// Reduces every overlap `g·h·f` (both `g·h` and `h·f` reducible) through
/// both parenthesizations with the reference reducer and compares.
pub fn check_local_confluence(p: &Presentation) -> Result<ConfluenceReport> {
    let rules = p.rules();
    let mut by_first: std::collections::BTreeMap<Generator, Vec<Generator>> = Default::default();
    for &(g, h) in rules.keys() {
        by_first.entry(g).or_default().push(h);
    }
    let mut overlaps = Vec::new();
    for &(g, h) in rules.keys() {
        if let Some(fs) = by_first.get(&h) {
            for &f in fs {
                overlaps.push([g, h, f]);
            }
        }
    }
    let results: Vec<Result<Option<FailedOverlap>>> = overlaps
        .par_iter()
        .map(|&[g, h, f]| {
            let mut left = Polynomial::zero();
            for (w, c) in rules[&(g, h)].iter() {
                left.add_sandwiched(
                    &[],
                    &Polynomial::monomial(w.clone(), c.clone()),
                    &[f],
                    &1.into(),
                );
            }
            let mut right = Polynomial::zero();
            for (w, c) in rules[&(h, f)].iter() {
                right.add_sandwiched(
                    &[g],
                    &Polynomial::monomial(w.clone(), c.clone()),
                    &[],
                    &1.into(),
                );
            }
            let via_left = p.normal_form_reference(&left, OVERLAP_STEP_BUDGET)?;
            let via_right = p.normal_form_reference(&right, OVERLAP_STEP_BUDGET)?;
            Ok((via_left != via_right).then(|| FailedOverlap {
                word: Word::from_slice(&[g, h, f]),
                via_left,
                via_right,
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    failures.sort_by(|a, b| a.word.cmp(&b.word));
    Ok(ConfluenceReport {
        overlaps_checked: overlaps.len(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::Rule;
    use crate::scalars::Rational;

    #[test]
    fn commutative_presentation_is_confluent() {
        let gens: Vec<Generator> = (1..=4).map(Generator::x).collect();
        let mut rules = Vec::new();
        for j in 1..=4 {
            for i in 1..j {
                rules.push(Rule::commute(
                    Generator::x(j),
                    Generator::x(i),
                    Rational::ONE,
                ));
            }
        }
        let p = Presentation::atomic("comm", gens, rules, false).unwrap();
        let report = check_local_confluence(&p).unwrap();
        assert!(report.pass());
        assert_eq!(report.overlaps_checked, 4);
    }

    #[test]
    fn inconsistent_scalars_fail_with_witness() {
        // x2x2 → x1x3 with x2x1 → 2x1x2: x2x2x1 reduces to x1x1x3 one way
        // and 4·x1x1x3 the other.
        let x = Generator::x;
        let rules = vec![
            Rule::commute(x(2), x(1), Rational::from(2)),
            Rule::commute(x(3), x(2), Rational::ONE),
            Rule::commute(x(3), x(1), Rational::ONE),
            Rule::new(x(2), x(2), Polynomial::word(&[x(1), x(3)])),
        ];
        let p = Presentation::atomic("bad", (1..=3).map(x), rules, false).unwrap();
        let report = check_local_confluence(&p).unwrap();
        assert!(!report.pass());
        assert!(report.failures.iter().all(|f| !f.witness().is_zero()));
    }
}
