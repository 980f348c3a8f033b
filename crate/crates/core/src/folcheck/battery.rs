//! Exhaustive transfer suite over the signature with one carrier `A` and one
//! binary relation `R`.
//!
//! The sentence battery is every sentence in the grammar
//!
//! ```text
//! φ ::= (R u v) | (= x y) | (not φ) | (and φ φ) | (or φ φ) | (implies φ φ)
//!     | (exists (v A) φ) | (forall (v A) φ)
//! ```
//!
//! with at most `max_connectives` propositional connectives and quantifier
//! depth at most `max_depth` (at most two variables, `x` then `y`, bound in
//! order). With three connectives this is tens of millions of sentences, so
//! the suite does not evaluate them one at a time. It runs the two
//! evaluators (standard model and ultrapower) in lockstep over the grammar
//! and groups formulas by their pair of denotations; each group is one
//! check covering all of its formulas. The count per group is tracked, and a
//! representative formula can be rebuilt for any group.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::formula::{Formula, Term};
use super::model::{tuples, FiniteModel};
use super::ultrapower::build_finite_ultrapower;
use super::FolError;

const VARS: [&str; 2] = ["x", "y"];

/// Atomic formulas with free variables among the first `scope` variables.
fn atoms(scope: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..scope {
        for j in 0..scope {
            out.push(Formula::rel("R", &[VARS[i], VARS[j]]));
        }
    }
    if scope == 2 {
        out.push(Formula::Eq(Term::Var("x".into()), Term::Var("y".into())));
    }
    out
}

/// Explicit enumeration of the battery with exactly `c` connectives and
/// depth at most `q`, over the given scope. Feasible for small `c` only.
pub fn formulas(scope: usize, c: usize, q: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    if c == 0 {
        out.extend(atoms(scope));
    } else {
        out.extend(formulas(scope, c - 1, q).into_iter().map(Formula::not));
        for c1 in 0..c {
            let left = formulas(scope, c1, q);
            let right = formulas(scope, c - 1 - c1, q);
            for op in 0..3 {
                for f in &left {
                    for g in &right {
                        out.push(combine(op, f.clone(), g.clone()));
                    }
                }
            }
        }
    }
    if q > 0 && scope < 2 {
        for f in formulas(scope + 1, c, q - 1) {
            out.push(Formula::exists(VARS[scope], "A", f.clone()));
            out.push(Formula::forall(VARS[scope], "A", f));
        }
    }
    out
}

fn combine(op: u8, f: Formula, g: Formula) -> Formula {
    match op {
        0 => Formula::And(vec![f, g]),
        1 => Formula::Or(vec![f, g]),
        _ => Formula::implies(f, g),
    }
}

/// All battery sentences with at most `max_connectives` connectives.
pub fn sentences(max_connectives: usize, max_depth: usize) -> Vec<Formula> {
    (0..=max_connectives)
        .flat_map(|c| formulas(0, c, max_depth))
        .collect()
}

/// A finite structure reduced to what the battery reads.
struct Sem {
    n: usize,
    rel: Vec<bool>,
}

impl Sem {
    fn of(m: &FiniteModel) -> Sem {
        let n = m.carriers()["A"].len();
        let r = &m.relations()["R"].tuples;
        let rel = tuples(&[n, n]).into_iter().map(|t| r.contains(&t)).collect();
        Sem { n, rel }
    }

    fn assignments(&self, scope: usize) -> usize {
        self.n.pow(scope as u32)
    }

    fn value(&self, idx: usize, var: usize) -> usize {
        (idx / self.n.pow(var as u32)) % self.n
    }

    fn mask(&self, scope: usize) -> u32 {
        ((1u64 << self.assignments(scope)) - 1) as u32
    }

    fn atom(&self, scope: usize, k: usize) -> u32 {
        let mut den = 0u32;
        for idx in 0..self.assignments(scope) {
            let holds = if k < scope * scope {
                let (i, j) = (k / scope, k % scope);
                self.rel[self.value(idx, i) * self.n + self.value(idx, j)]
            } else {
                self.value(idx, 0) == self.value(idx, 1)
            };
            if holds {
                den |= 1 << idx;
            }
        }
        den
    }

    /// Quantify away the last variable of `scope + 1`.
    fn project(&self, scope: usize, den: u32, exists: bool) -> u32 {
        let inner = self.assignments(scope);
        let mut out = 0u32;
        for idx in 0..inner {
            let mut vals = (0..self.n).map(|v| den >> (idx + v * inner) & 1 == 1);
            let b = if exists {
                vals.any(|x| x)
            } else {
                vals.all(|x| x)
            };
            if b {
                out |= 1 << idx;
            }
        }
        out
    }
}

type Key = (u32, u32);

#[derive(Clone, Copy, Debug)]
enum Deriv {
    Atom(usize),
    Not(Key),
    Bin(u8, usize, Key, Key),
    Quant(bool, Key),
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    count: u128,
    deriv: Deriv,
}

type Layer = BTreeMap<Key, Cell>;

struct Lockstep {
    std: Sem,
    star: Sem,
    memo: BTreeMap<(usize, usize, usize), Layer>,
}

fn add(layer: &mut Layer, key: Key, count: u128, deriv: Deriv) {
    layer
        .entry(key)
        .and_modify(|c| c.count += count)
        .or_insert(Cell { count, deriv });
}

impl Lockstep {
    fn layer(&mut self, s: usize, c: usize, q: usize) -> &Layer {
        if !self.memo.contains_key(&(s, c, q)) {
            let built = self.build(s, c, q);
            self.memo.insert((s, c, q), built);
        }
        &self.memo[&(s, c, q)]
    }

    fn build(&mut self, s: usize, c: usize, q: usize) -> Layer {
        let mut out = Layer::new();
        if c == 0 {
            for k in 0..atoms(s).len() {
                add(&mut out, (self.std.atom(s, k), self.star.atom(s, k)), 1, Deriv::Atom(k));
            }
        } else {
            let (m1, m2) = (self.std.mask(s), self.star.mask(s));
            let prev = self.layer(s, c - 1, q).clone();
            for (&(a, b), cell) in &prev {
                add(&mut out, (!a & m1, !b & m2), cell.count, Deriv::Not((a, b)));
            }
            for c1 in 0..c {
                let left = self.layer(s, c1, q).clone();
                let right = self.layer(s, c - 1 - c1, q).clone();
                for op in 0..3u8 {
                    for (&(a1, b1), l) in &left {
                        for (&(a2, b2), r) in &right {
                            let key = match op {
                                0 => (a1 & a2, b1 & b2),
                                1 => (a1 | a2, b1 | b2),
                                _ => ((!a1 | a2) & m1, (!b1 | b2) & m2),
                            };
                            add(
                                &mut out,
                                key,
                                l.count * r.count,
                                Deriv::Bin(op, c1, (a1, b1), (a2, b2)),
                            );
                        }
                    }
                }
            }
        }
        if q > 0 && s < 2 {
            let body = self.layer(s + 1, c, q - 1).clone();
            for (&(a, b), cell) in &body {
                for exists in [true, false] {
                    let key = (self.std.project(s, a, exists), self.star.project(s, b, exists));
                    add(&mut out, key, cell.count, Deriv::Quant(exists, (a, b)));
                }
            }
        }
        out
    }

    /// A formula in the group `key` of layer `(s, c, q)`.
    fn witness(&self, s: usize, c: usize, q: usize, key: Key) -> Formula {
        match self.memo[&(s, c, q)][&key].deriv {
            Deriv::Atom(k) => atoms(s)[k].clone(),
            Deriv::Not(k) => Formula::not(self.witness(s, c - 1, q, k)),
            Deriv::Bin(op, c1, k1, k2) => combine(
                op,
                self.witness(s, c1, q, k1),
                self.witness(s, c - 1 - c1, q, k2),
            ),
            Deriv::Quant(exists, k) => {
                let body = self.witness(s + 1, c, q - 1, k);
                if exists {
                    Formula::exists(VARS[s], "A", body)
                } else {
                    Formula::forall(VARS[s], "A", body)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferFailure {
    pub carrier: usize,
    pub relation: Vec<Vec<usize>>,
    pub index_size: usize,
    pub point: usize,
    pub sentence: String,
    pub standard: bool,
    pub star: bool,
}

#[derive(Clone, Debug, Default)]
pub struct TransferSuiteReport {
    /// Model and ultrafilter pairs checked.
    pub instances: usize,
    /// Battery sentences per instance.
    pub sentences: u128,
    /// Sentence evaluations covered in total.
    pub checks: u128,
    /// Denotation groups compared in total.
    pub groups: usize,
    /// Instances with an empty carrier.
    pub empty_instances: usize,
    pub failures: Vec<TransferFailure>,
}

#[derive(Clone, Copy, Debug)]
pub struct TransferSuiteConfig {
    pub max_carrier: usize,
    pub max_index: usize,
    pub max_connectives: usize,
    pub max_depth: usize,
}

impl Default for TransferSuiteConfig {
    fn default() -> Self {
        TransferSuiteConfig {
            max_carrier: 3,
            max_index: 3,
            max_connectives: 3,
            max_depth: 2,
        }
    }
}

struct InstanceResult {
    sentences: u128,
    groups: usize,
    failures: Vec<TransferFailure>,
}

fn run_instance(
    n: usize,
    rel: &[Vec<usize>],
    s: usize,
    s0: usize,
    cfg: &TransferSuiteConfig,
) -> Result<InstanceResult, FolError> {
    let mut m = FiniteModel::new();
    m.add_sized_carrier("A", n)?;
    m.add_relation("R", &["A", "A"], rel.iter().cloned())?;
    let u = build_finite_ultrapower(&m, s, s0)?;
    let mut ls = Lockstep {
        std: Sem::of(&m),
        star: Sem::of(&u.model),
        memo: BTreeMap::new(),
    };
    let mut res = InstanceResult {
        sentences: 0,
        groups: 0,
        failures: Vec::new(),
    };
    for c in 0..=cfg.max_connectives {
        let layer = ls.layer(0, c, cfg.max_depth).clone();
        for (&(a, b), cell) in &layer {
            res.sentences += cell.count;
            res.groups += 1;
            if a != b {
                res.failures.push(TransferFailure {
                    carrier: n,
                    relation: rel.to_vec(),
                    index_size: s,
                    point: s0,
                    sentence: ls.witness(0, c, cfg.max_depth, (a, b)).to_string(),
                    standard: a == 1,
                    star: b == 1,
                });
            }
        }
    }
    Ok(res)
}

/// Run the battery over every model with carrier size at most
/// `max_carrier`, every index set size `1..=max_index` and every point.
pub fn transfer_suite(cfg: &TransferSuiteConfig) -> Result<TransferSuiteReport, FolError> {
    let mut jobs = Vec::new();
    for n in 0..=cfg.max_carrier {
        let pairs = tuples(&[n, n]);
        for bits in 0..(1u64 << pairs.len()) {
            let rel: Vec<Vec<usize>> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect();
            for s in 1..=cfg.max_index {
                for s0 in 0..s {
                    jobs.push((n, rel.clone(), s, s0));
                }
            }
        }
    }
    let results: Vec<InstanceResult> = jobs
        .par_iter()
        .map(|(n, rel, s, s0)| run_instance(*n, rel, *s, *s0, cfg))
        .collect::<Result<_, _>>()?;
    let mut report = TransferSuiteReport {
        instances: jobs.len(),
        ..Default::default()
    };
    for ((n, ..), r) in jobs.iter().zip(results) {
        report.sentences = report.sentences.max(r.sentences);
        report.checks += r.sentences;
        report.groups += r.groups;
        if *n == 0 {
            report.empty_instances += 1;
        }
        report.failures.extend(r.failures);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folcheck::model::{eval_standard, Assignment};

    #[test]
    fn lockstep_matches_explicit_evaluation() {
        // Every explicitly enumerated sentence with at most one connective,
        // evaluated directly, against its group in the lockstep tables.
        let battery = sentences(1, 2);
        for (n, rel) in [(2usize, vec![vec![0, 1]]), (3, vec![vec![0, 0], vec![2, 1]]), (0, vec![])] {
            let cfg = TransferSuiteConfig {
                max_carrier: n,
                max_index: 2,
                max_connectives: 1,
                max_depth: 2,
            };
            let r = run_instance(n, &rel, 2, 1, &cfg).unwrap();
            assert_eq!(r.sentences, battery.len() as u128);
            assert!(r.failures.is_empty());
            let mut m = FiniteModel::new();
            m.add_sized_carrier("A", n).unwrap();
            m.add_relation("R", &["A", "A"], rel.clone()).unwrap();
            let u = build_finite_ultrapower(&m, 2, 1).unwrap();
            let env = Assignment::new();
            for phi in &battery {
                assert_eq!(
                    eval_standard(&m, phi, &env).unwrap(),
                    eval_standard(&u.model, phi, &env).unwrap(),
                    "{phi}"
                );
            }
        }
    }

    #[test]
    fn witnesses_evaluate_to_their_group() {
        let mut m = FiniteModel::new();
        m.add_sized_carrier("A", 2).unwrap();
        m.add_relation("R", &["A", "A"], vec![vec![0, 1], vec![1, 1]]).unwrap();
        let u = build_finite_ultrapower(&m, 3, 2).unwrap();
        let mut ls = Lockstep {
            std: Sem::of(&m),
            star: Sem::of(&u.model),
            memo: BTreeMap::new(),
        };
        let env = Assignment::new();
        for c in 0..=2 {
            let layer = ls.layer(0, c, 2).clone();
            for &(a, b) in layer.keys() {
                let phi = ls.witness(0, c, 2, (a, b));
                assert_eq!(phi.connective_count(), c);
                assert_eq!(eval_standard(&m, &phi, &env).unwrap(), a == 1);
                assert_eq!(eval_standard(&u.model, &phi, &env).unwrap(), b == 1);
            }
        }
    }
}
