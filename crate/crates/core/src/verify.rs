//! Named suites of identity checks over seeded parameter tables, with a
//! JSON report.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::check::Verdict;
use crate::error::{Error, Result};
use crate::forms::{self, FormSpace};
use crate::ncpoly::{check_local_confluence, Generator, Polynomial, Presentation};
use crate::pfaffian::{self, TransformForm};
use crate::qalgebras::{
    exterior_presentation, free_antisym_generators, hyper_generators, tensor_presentation, Flavor,
    QuantumMatrix,
};
use crate::qlinalg::{self, TensorSquare};
use crate::scalars::{q_inversion_seq, quantum_factorial, ParameterTable, Perm, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Confluence,
    Det,
    Laplace,
    Central,
    Coproduct,
    Forms,
    Pf,
    Hyper,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "confluence",
        "det",
        "laplace",
        "central",
        "coproduct",
        "forms",
        "pf",
        "hyper",
        "all",
    ];

    fn members(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![
                Confluence, Det, Laplace, Central, Coproduct, Forms, Pf, Hyper,
            ],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Suite::NAMES[*self as usize])
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        use Suite::*;
        let all = [
            Confluence, Det, Laplace, Central, Coproduct, Forms, Pf, Hyper, All,
        ];
        all.into_iter().find(|x| x.to_string() == s).ok_or_else(|| {
            Error::Parse(format!(
                "unknown suite {s:?}; expected one of {:?}",
                Suite::NAMES
            ))
        })
    }
}

/// A deliberate defect, for checking that the suites notice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Shifts the coefficient of the column rule `a_22 a_12 → p_12⁻¹ a_12 a_22`.
    RewriteCoefficient,
    /// Flips the sign of one term of the row determinant.
    InversionSign,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Fault> {
        match s {
            "rewrite" => Ok(Fault::RewriteCoefficient),
            "sign" => Ok(Fault::InversionSign),
            _ => Err(Error::Parse(format!(
                "unknown fault {s:?}; expected rewrite or sign"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Quantum matrix size for the determinant-side suites.
    pub n: usize,
    /// Even matrix size for the Pfaffian suite.
    pub size: usize,
    /// Hyper-Pfaffian arity.
    pub arity: usize,
    /// Hyper-Pfaffian block count.
    pub blocks: usize,
    /// Seeds `0..seeds`.
    pub seeds: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: 3,
            size: 4,
            arity: 3,
            blocks: 1,
            seeds: 3,
            fault: None,
        }
    }
}

/// Largest sizes accepted; beyond these the suites do not finish in
/// reasonable time.
pub const MAX_N: usize = 5;
pub const MAX_PF_SIZE: usize = 8;
pub const MAX_HYPER_SIZE: usize = 6;

impl VerifyOptions {
    pub fn validate(&self, suite: Suite) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let members = suite.members();
        let uses = |s: Suite| members.contains(&s);
        if self.seeds == 0 {
            return bad("need at least one seed".into());
        }
        if members
            .iter()
            .any(|s| !matches!(s, Suite::Pf | Suite::Hyper))
            && !(1..=MAX_N).contains(&self.n)
        {
            return bad(format!("n must be in 1..={MAX_N}, got {}", self.n));
        }
        if uses(Suite::Pf)
            && (self.size == 0 || !self.size.is_multiple_of(2) || self.size > MAX_PF_SIZE)
        {
            return bad(format!(
                "size must be even in 2..={MAX_PF_SIZE}, got {}",
                self.size
            ));
        }
        if uses(Suite::Hyper) {
            let total = self.arity * self.blocks;
            if self.arity < 2 || self.blocks == 0 || total > MAX_HYPER_SIZE {
                return bad(format!(
                    "need m >= 2, blocks >= 1 and m*blocks <= {MAX_HYPER_SIZE} (got m={}, blocks={})",
                    self.arity, self.blocks
                ));
            }
        }
        Ok(())
    }
}

/// One executed check.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub check: String,
    pub params: Value,
    pub pass: bool,
    pub failed: Option<String>,
    pub witness: Option<Polynomial>,
    pub millis: u128,
}

impl CheckRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "params": self.params,
            "pass": self.pass,
        });
        if let Some(f) = &self.failed {
            v["failed"] = json!(f);
        }
        if let Some(w) = &self.witness {
            v["witness"] = w.to_json();
        }
        v["millis"] = json!(self.millis);
        v
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: Suite,
    pub tables: Vec<(String, String)>,
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Hash over the digests of every table used, in order.
    pub fn table_digest(&self) -> String {
        let mut h = Sha256::new();
        for (label, d) in &self.tables {
            h.update(label.as_bytes());
            h.update(b"=");
            h.update(d.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.to_string(),
            "version": VERSION,
            "table_digest": self.table_digest(),
            "tables": self.tables.iter().map(|(l, d)| json!({"table": l, "digest": d})).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

type CheckFn = Box<dyn Fn() -> Result<Verdict> + Send + Sync>;

struct Planned {
    check: String,
    params: Value,
    run: CheckFn,
}

#[derive(Default)]
struct Plan {
    checks: Vec<Planned>,
    tables: Vec<(String, String)>,
}

impl Plan {
    fn add(
        &mut self,
        check: &str,
        params: Value,
        run: impl Fn() -> Result<Verdict> + Send + Sync + 'static,
    ) {
        self.checks.push(Planned {
            check: check.into(),
            params,
            run: Box::new(run),
        });
    }

    fn table(&mut self, label: String, size: usize, seed: u64) -> Result<Arc<ParameterTable>> {
        let t = ParameterTable::seeded(size, ParameterTable::lambda_for_seed(seed), seed)?;
        self.tables.push((label, t.digest()));
        Ok(Arc::new(t))
    }
}

fn execute(p: &Planned) -> CheckRecord {
    let start = Instant::now();
    let outcome = (p.run)();
    let millis = start.elapsed().as_millis();
    let (pass, failed, witness) = match outcome {
        Ok(Verdict::Holds) => (true, None, None),
        Ok(Verdict::Fails { what, residue }) => (false, Some(what), Some(residue)),
        Err(Error::IdentityViolation { what, witness }) => (false, Some(what), Some(witness)),
        Err(e) => (false, Some(e.to_string()), None),
    };
    CheckRecord {
        check: p.check.clone(),
        params: p.params.clone(),
        pass,
        failed,
        witness,
        millis,
    }
}

/// Runs `suite` and reports every check in plan order.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    opts.validate(suite)?;
    let mut plan = Plan::default();
    for s in suite.members() {
        for seed in 0..opts.seeds {
            plan_suite(&mut plan, s, opts, seed)?;
        }
    }
    let checks = plan.checks.par_iter().map(execute).collect();
    Ok(VerifyReport {
        suite,
        tables: plan.tables,
        checks,
    })
}

fn matrix_for(table: Arc<ParameterTable>, fault: Option<Fault>) -> Result<QuantumMatrix> {
    let a = QuantumMatrix::new(table)?;
    match fault {
        Some(Fault::RewriteCoefficient) if a.n() >= 2 => {
            a.with_perturbed_rule((a.gen(2, 2), a.gen(1, 2)), &Rational::ONE)
        }
        _ => Ok(a),
    }
}

/// Row determinant, with one term's sign flipped under [`Fault::InversionSign`].
fn rdet_for(a: &QuantumMatrix, fault: Option<Fault>) -> Result<Polynomial> {
    let all: Vec<usize> = (1..=a.n()).collect();
    let q = a.table().q();
    let flipped: Vec<usize> = all.iter().rev().copied().collect();
    let flip = fault == Some(Fault::InversionSign) && a.n() >= 2;
    qlinalg::row_minor_weighted(a, &all, &all, &|order| {
        let c = q_inversion_seq(order, q);
        if flip && order == flipped.as_slice() {
            -c
        } else {
            c
        }
    })
}

fn plan_suite(plan: &mut Plan, suite: Suite, opts: &VerifyOptions, seed: u64) -> Result<()> {
    let fault = opts.fault;
    let n = opts.n;
    match suite {
        Suite::Confluence => {
            let t = plan.table(format!("confluence n={n} seed={seed}"), n, seed)?;
            let a = matrix_for(t.clone(), fault)?;
            let p = json!({"seed": seed, "n": n});
            let pres = a.presentation().clone();
            plan.add("confluence A", p.clone(), move || confluence(&pres));
            for flavor in [Flavor::Q, Flavor::P] {
                let ext = Arc::new(exterior_presentation(n, &t, flavor)?);
                plan.add(
                    &format!("confluence exterior {flavor:?}"),
                    p.clone(),
                    move || confluence(&ext),
                );
            }
            let space = FormSpace::new(&a)?;
            let fp = space.presentation().clone();
            plan.add("confluence A⊗Λp⊗Λq", p.clone(), move || {
                confluence(&fp)
            });
            let ts = TensorSquare::new(t.clone())?;
            let tp = ts.presentation().clone();
            plan.add("confluence A⊗A", p.clone(), move || confluence(&tp));
            let b = free_antisym_generators(n, Flavor::P, t.clone())?;
            let ab = tensor_presentation(&[a.presentation().clone(), b.presentation().clone()])?;
            plan.add("confluence A⊗B", p.clone(), move || confluence(&ab));
            let pres = a.presentation().clone();
            plan.add("degree-2 normal words", p, move || {
                let count = pres.normal_words(2).len();
                let m = n * n;
                scalar_check(
                    "normal word count",
                    Rational::from(count as i64),
                    Rational::from((m * (m + 1) / 2) as i64),
                )
            });
        }
        Suite::Det => {
            let t = plan.table(format!("det n={n} seed={seed}"), n, seed)?;
            for k in 1..=n {
                let a = matrix_for(Arc::new(t.truncate(k)), fault)?;
                plan.add("rdet = cdet", json!({"seed": seed, "n": k}), move || {
                    let r = rdet_for(&a, fault)?;
                    let c = qlinalg::cdet(&a)?;
                    Verdict::compare(a.presentation(), "rdet = cdet", &r, &c)
                });
            }
            let a = matrix_for(t, fault)?;
            for size in 1..=n {
                let a = a.clone();
                plan.add(
                    "row minor = column minor",
                    json!({"seed": seed, "n": n, "t": size}),
                    move || qlinalg::minor_agreement_check(&a, size),
                );
            }
        }
        Suite::Laplace => {
            let t = plan.table(format!("laplace n={n} seed={seed}"), n, seed)?;
            let a = matrix_for(t, fault)?;
            for split in 1..n.max(2) {
                let a = a.clone();
                plan.add(
                    "Laplace expansions",
                    json!({"seed": seed, "n": n, "t": split}),
                    move || qlinalg::laplace_check(&a, split.min(a.n())),
                );
            }
            for (i, k) in (1..=n).cartesian_product(1..=n) {
                let a = a.clone();
                plan.add(
                    "cofactor expansions",
                    json!({"seed": seed, "n": n, "i": i, "k": k}),
                    move || qlinalg::cofactor_check(&a, i, k),
                );
            }
        }
        Suite::Central => {
            let t = plan.table(format!("central n={n} seed={seed}"), n, seed)?;
            let a = matrix_for(t, fault)?;
            for (i, j) in (1..=n).cartesian_product(1..=n) {
                let a = a.clone();
                plan.add(
                    "quasi-centrality",
                    json!({"seed": seed, "n": n, "i": i, "j": j}),
                    move || qlinalg::quasi_central_check(&a, i, j),
                );
            }
            let b = a.clone();
            plan.add(
                "centrality predicate",
                json!({"seed": seed, "n": n}),
                move || centrality(&b),
            );
            let b = a.clone();
            plan.add(
                "cleared antipode",
                json!({"seed": seed, "n": n}),
                move || qlinalg::cleared_antipode_check(&b),
            );
            if n >= 2 {
                plan.add(
                    "nested principal minors",
                    json!({"seed": seed, "n": n}),
                    move || qlinalg::nested_minor_commute_check(&a),
                );
            }
        }
        Suite::Coproduct => {
            let t = plan.table(format!("coproduct n={n} seed={seed}"), n, seed)?;
            let a = matrix_for(t, fault)?;
            plan.add(
                "det_q is group-like",
                json!({"seed": seed, "n": n}),
                move || qlinalg::grouplike_check(&a),
            );
        }
        Suite::Forms => {
            let t = plan.table(format!("forms n={n} seed={seed}"), n, seed)?;
            let a = matrix_for(t, fault)?;
            let p = json!({"seed": seed, "n": n});
            let b = a.clone();
            plan.add("omega relations", p.clone(), move || {
                forms::omega_relations_check(&FormSpace::new(&b)?)
            });
            let b = a.clone();
            plan.add("det by three routes", p.clone(), move || {
                let o = forms::oracle_det(&b)?;
                let pres = b.presentation();
                Verdict::all([
                    Verdict::compare(pres, "oracle = rdet", &o, &rdet_for(&b, fault)?),
                    Verdict::compare(pres, "oracle = cdet", &o, &qlinalg::cdet(&b)?),
                    Verdict::compare(
                        pres,
                        "column oracle = cdet",
                        &forms::oracle_cdet(&b)?,
                        &qlinalg::cdet(&b)?,
                    ),
                ])
            });
            let lambda = a.lambda().clone();
            plan.add("lambda-weighted inversion sum", p.clone(), move || {
                let sum: Rational = Perm::all(n)
                    .map(|s| lambda.pow(s.inversions() as i32))
                    .sum();
                scalar_check("Σ λ^l(σ) = [n]_λ!", sum, quantum_factorial(n, &lambda))
            });
            plan.add("comodule coassociativity", p, move || {
                forms::comodule_check(&a)
            });
        }
        Suite::Pf => {
            let size = opts.size;
            let t = plan.table(format!("pf size={size} seed={seed}"), size, seed)?;
            let a = matrix_for(t.clone(), fault)?;
            for flavor in [Flavor::P, Flavor::Q] {
                let b = free_antisym_generators(size, flavor, t.clone())?;
                let p = json!({"seed": seed, "size": size, "antisymmetry": format!("{flavor:?}").to_lowercase()});
                let b1 = b.clone();
                plan.add("Pfaffian oracle", p.clone(), move || {
                    let o = forms::oracle_pf(&b1)?;
                    Verdict::compare(
                        b1.presentation(),
                        "wedge coefficient = Pf",
                        &o,
                        &pfaffian::pfaffian(&b1)?,
                    )
                });
                for split in 0..=size / 2 {
                    let b1 = b.clone();
                    let mut p = p.clone();
                    p["t"] = json!(split);
                    plan.add("Pfaffian Laplace", p, move || {
                        pfaffian::pf_laplace_check(&b1, split)
                    });
                }
                let a1 = a.clone();
                let name = match flavor {
                    Flavor::P => "Pf(AᵀBA) = det_q(A) Pf(B)",
                    Flavor::Q => "Pf(ABAᵀ) = det_q(A) Pf(B)",
                };
                plan.add(name, p, move || pfaffian::pf_transform_check(&a1, &b));
            }
            let b = free_antisym_generators(size, Flavor::P, t)?;
            plan.add(
                "transform at A = I",
                json!({"seed": seed, "size": size}),
                move || pfaffian::identity_specialization_check(&a, &b),
            );
        }
        Suite::Hyper => {
            let (m, blocks) = (opts.arity, opts.blocks);
            let size = m * blocks;
            let t = plan.table(
                format!("hyper m={m} blocks={blocks} seed={seed}"),
                size,
                seed,
            )?;
            let a = matrix_for(t.clone(), fault)?;
            let h = hyper_generators(m, blocks)?;
            let p = json!({"seed": seed, "m": m, "blocks": blocks});
            if size % 2 == 0 {
                let t1 = t.clone();
                plan.add(
                    "arity-2 hyper-Pfaffian = Pfaffian",
                    json!({"seed": seed, "size": size}),
                    move || {
                        let h2 = hyper_generators(2, size / 2)?;
                        let b = free_antisym_generators(size, Flavor::P, t1.clone())?;
                        let hp = pfaffian::hyper_pfaffian(&h2, &t1, Flavor::Q)?;
                        Verdict::compare(
                            b.presentation(),
                            "hyper = Pf",
                            &hp,
                            &pfaffian::pfaffian(&b)?,
                        )
                    },
                );
            }
            for flavor in [Flavor::Q, Flavor::P] {
                let (t1, h1) = (t.clone(), h.clone());
                let mut p = p.clone();
                p["weights"] = json!(format!("{flavor:?}").to_lowercase());
                plan.add("hyper-Pfaffian oracle", p.clone(), move || {
                    let o = forms::oracle_hyperpf(&h1, &t1, flavor)?;
                    let d = pfaffian::hyper_pfaffian(&h1, &t1, flavor)?;
                    Verdict::compare(h1.presentation(), "wedge coefficient = hyper-Pf", &o, &d)
                });
                for split in 0..=blocks {
                    let (t1, h1) = (t.clone(), h.clone());
                    let mut p = p.clone();
                    p["t"] = json!(split);
                    plan.add("hyper-Pfaffian Laplace", p, move || {
                        pfaffian::hyper_laplace_check(&h1, &t1, flavor, split)
                    });
                }
            }
            for form in [TransformForm::Row, TransformForm::Column] {
                let (a1, h1) = (a.clone(), h.clone());
                let mut p = p.clone();
                p["form"] = json!(format!("{form:?}").to_lowercase());
                plan.add("hyper-Pfaffian transform", p, move || {
                    pfaffian::hyper_transform_check(&a1, &h1, form)
                });
            }
        }
        Suite::All => unreachable!("expanded by members()"),
    }
    Ok(())
}

fn confluence(p: &Presentation) -> Result<Verdict> {
    let report = check_local_confluence(p)?;
    Ok(match report.failures.first() {
        None => Verdict::Holds,
        Some(f) => Verdict::Fails {
            what: format!(
                "overlap {} does not resolve ({} of {} fail)",
                f.word.iter().map(Generator::to_string).collect::<String>(),
                report.failures.len(),
                report.overlaps_checked
            ),
            residue: f.witness(),
        },
    })
}

fn scalar_check(what: &str, got: Rational, want: Rational) -> Result<Verdict> {
    Ok(if got == want {
        Verdict::Holds
    } else {
        Verdict::Fails {
            what: what.into(),
            residue: Polynomial::constant(got - want),
        }
    })
}

/// The predicate must agree with whether `det_q` commutes with every entry.
fn centrality(a: &QuantumMatrix) -> Result<Verdict> {
    let predicted = qlinalg::centrality_predicate(a.table());
    let det = qlinalg::det_q(a)?;
    let n = a.n();
    let mut witness = None;
    for (i, j) in (1..=n).cartesian_product(1..=n) {
        let g = a.entry(i, j);
        let f = a
            .presentation()
            .normal_form(&(&g.multiply(&det) - &det.multiply(&g)))?;
        if !f.is_zero() {
            witness = Some(f);
            break;
        }
    }
    Ok(match (predicted, witness) {
        (true, None) | (false, Some(_)) => Verdict::Holds,
        (true, Some(w)) => Verdict::Fails {
            what: "predicate says central, entry does not commute".into(),
            residue: w,
        },
        (false, None) => Verdict::Fails {
            what: "predicate says not central, every entry commutes".into(),
            residue: det,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n: usize, seeds: u64) -> VerifyOptions {
        VerifyOptions {
            n,
            seeds,
            ..Default::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in [
            Suite::Confluence,
            Suite::Det,
            Suite::Laplace,
            Suite::Central,
            Suite::Coproduct,
            Suite::Forms,
        ] {
            let r = run_suite(s, &opts(2, 2)).unwrap();
            assert!(r.pass(), "{s}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn usage_errors() {
        assert!(run_suite(Suite::All, &opts(0, 1)).is_err());
        assert!(run_suite(Suite::Det, &opts(2, 0)).is_err());
        let odd = VerifyOptions {
            size: 3,
            ..Default::default()
        };
        assert!(run_suite(Suite::Pf, &odd).is_err());
        let big = VerifyOptions {
            arity: 3,
            blocks: 3,
            ..Default::default()
        };
        assert!(run_suite(Suite::Hyper, &big).is_err());
    }

    #[test]
    fn faults_are_detected() {
        let o = VerifyOptions {
            fault: Some(Fault::InversionSign),
            ..opts(2, 1)
        };
        let r = run_suite(Suite::Det, &o).unwrap();
        assert!(!r.pass());
        assert!(r
            .failures()
            .all(|c| c.witness.as_ref().is_some_and(|w| !w.is_zero())));
        let o = VerifyOptions {
            fault: Some(Fault::RewriteCoefficient),
            ..opts(2, 1)
        };
        let r = run_suite(Suite::Confluence, &o).unwrap();
        assert!(!r.pass());
        assert!(r
            .failures()
            .all(|c| c.witness.as_ref().is_some_and(|w| !w.is_zero())));
    }

    #[test]
    fn report_is_deterministic() {
        let strip = |r: &VerifyReport| {
            let mut v = r.to_json();
            for c in v["checks"].as_array_mut().unwrap() {
                c.as_object_mut().unwrap().remove("millis");
            }
            v.to_string()
        };
        let a = run_suite(Suite::Det, &opts(3, 2)).unwrap();
        let b = run_suite(Suite::Det, &opts(3, 2)).unwrap();
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.table_digest().len(), 64);
    }
}
