//! Countable saturation on a definable chain of conditions.
//!
//! Given a family `c_k(x)` written with `Slot(0)` for `x` and `Slot(1)` for
//! `k`, the diagonal element has representative
//! `n ↦ least witness of c_0 ∧ … ∧ c_n`. Witnesses are found by search over
//! an enumeration of the base set and then fitted to a closed form, so that
//! the diagonal element is a term of the fragment and each condition can be
//! decided with the truth-set classifier.

use num::{Integer, One, Zero};

use crate::poly::Q;
use crate::seq::{classify_truth_set, BoolTerm, Expr, Pred, SeqTerm, Sort, Var, Verdict};

use super::{Hyper1, HyperError};

/// Stages searched before fitting a closed form.
pub const FIT_WINDOW: u64 = 16;

#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub element: Hyper1,
    /// Least witnesses of the first finite conjunctions.
    pub witnesses: Vec<Q>,
    /// Verdict of each verified condition `c_k(element)`.
    pub verdicts: Vec<Verdict>,
}

impl SaturationReport {
    pub fn all_true(&self) -> bool {
        self.verdicts.iter().all(|v| *v == Verdict::True)
    }
}

/// Candidates in search order. ℕ counts up; ℤ alternates by absolute value,
/// negatives first; ℚ runs through heights `max(|p|, q)` in ascending value.
fn candidates(sort: Sort, bound: u64) -> Box<dyn Iterator<Item = Q>> {
    let qi = |i: i64| Q::from_integer(i.into());
    match sort {
        Sort::Nat => Box::new((0..bound as i64).map(qi)),
        Sort::Int => Box::new((0..bound as i64).flat_map(move |a| {
            if a == 0 {
                vec![qi(0)]
            } else {
                vec![qi(-a), qi(a)]
            }
        })),
        Sort::Rat => Box::new((1..=bound as i64).flat_map(|h| {
            let mut level: Vec<Q> = Vec::new();
            for q in 1..=h {
                for p in -h..=h {
                    if p.abs().max(q) == h && p.gcd(&q) == 1 {
                        level.push(Q::new(p.into(), q.into()));
                    }
                }
            }
            level.sort();
            level.into_iter()
        })),
    }
}

fn holds(family: &Pred, x: &Q, k: u64) -> bool {
    let k = Q::from_integer(k.into());
    family
        .eval(&|v| match v {
            Var::Slot(0) => Some(x.clone()),
            Var::Slot(1) => Some(k.clone()),
            _ => None,
        })
        .unwrap_or(false)
}

fn affine(w: &[Q]) -> Option<(Q, Q)> {
    let a = w[0].clone();
    let b = &w[1] - &w[0];
    w.iter()
        .enumerate()
        .all(|(i, x)| *x == &a + &b * Q::from_integer((i as i64).into()))
        .then_some((a, b))
}

fn affine_expr(a: Q, b: Q) -> Expr {
    Expr::add(Expr::Const(a), Expr::mul(Expr::Const(b), Expr::inner()))
}

/// Closed form through the witnesses: affine, or reciprocal of affine.
fn fit(w: &[Q]) -> Option<Expr> {
    if let Some((a, b)) = affine(w) {
        return Some(affine_expr(a, b));
    }
    if w.iter().any(Zero::is_zero) {
        return None;
    }
    let inv: Vec<Q> = w.iter().map(|x| x.recip()).collect();
    let (a, b) = affine(&inv)?;
    Some(Expr::div(Expr::Const(Q::one()), affine_expr(a, b)))
}

/// Build the diagonal element of a chain and verify its first `conditions`
/// members. `bound` limits the search (largest value for ℕ and ℤ, largest
/// height for ℚ).
pub fn saturate_chain(
    family: &Pred,
    sort: Sort,
    conditions: u64,
    bound: u64,
) -> Result<SaturationReport, HyperError> {
    let mut witnesses = Vec::new();
    for n in 0..FIT_WINDOW.max(2) {
        let w = candidates(sort, bound)
            .find(|x| (0..=n).all(|k| holds(family, x, k)))
            .ok_or(HyperError::WitnessSearchExhausted { k: n, bound })?;
        witnesses.push(w);
    }
    let rep = fit(&witnesses).ok_or_else(|| {
        let shown: Vec<String> = witnesses.iter().map(ToString::to_string).collect();
        HyperError::NoClosedForm(shown.join(", "))
    })?;
    let element = Hyper1::new(SeqTerm::new(rep)?, sort)?;
    let verdicts = (0..conditions)
        .map(|k| {
            let c = family
                .subst(Var::Slot(1), &Expr::Const(Q::from_integer(k.into())))
                .subst(Var::Slot(0), element.expr());
            BoolTerm::new(c).map(|b| Verdict::from_class(classify_truth_set(&b)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SaturationReport {
        element,
        witnesses,
        verdicts,
    })
}
