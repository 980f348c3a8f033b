//! Level-1 and level-2 ultrapower elements over ℕ, ℤ and ℚ.
//!
//! A [`Hyper1`] is the class of a definable sequence in the inner index `n`.
//! A [`Hyper2`] is the class of a two-index term `t(m, n)`, read as an
//! outer sequence (index `m`) of inner classes (index `n`). The embedding
//! `ν` keeps the inner index; its functorial image `*ν` moves the sequence
//! to the outer index.

pub mod level2;
pub mod nunustar;
pub mod partition;
pub mod saturate;

use std::fmt;

use crate::normal::{normalize, Piecewise};
use crate::poly::Q;
use crate::seq::classify::class_from_parts;
use crate::seq::{
    classify_truth_set, compare_mod_frechet, BoolTerm, Expr, Pred, Rel, SeqError, SeqTerm, Sort,
    TruthSetClass, Var, Verdict,
};
pub use level2::decide2;
pub use nunustar::{nunustar_check, nunustar_direct};
pub use partition::{partition_level2, well_order_criterion, Level2Class, WellOrderReport, WellOrderStatus};
pub use saturate::{saturate_chain, SaturationReport};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HyperError {
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),
    #[error("partition undecided: {0}")]
    UndecidedPartition(String),
    #[error("no witness for condition {k} below bound {bound}")]
    WitnessSearchExhausted { k: u64, bound: u64 },
    #[error("witnesses {0} fit no closed form")]
    NoClosedForm(String),
    #[error("outer onset {0} exceeds the scan limit")]
    OnsetTooLarge(u64),
}

/// Class of a definable sequence modulo the cofinite filter.
#[derive(Clone, Debug)]
pub struct Hyper1 {
    rep: SeqTerm,
    base: Sort,
}

impl Hyper1 {
    /// Wrap a term; the base sort must be at least the term's sort.
    pub fn new(rep: SeqTerm, base: Sort) -> Result<Hyper1, HyperError> {
        let rep = rep.with_sort(base)?;
        Ok(Hyper1 {
            base: rep.sort(),
            rep,
        })
    }

    pub fn from_expr(e: Expr) -> Result<Hyper1, HyperError> {
        let rep = SeqTerm::new(e)?;
        Ok(Hyper1 {
            base: rep.sort(),
            rep,
        })
    }

    /// `ω = [n ↦ n]`.
    pub fn omega() -> Hyper1 {
        Hyper1::from_expr(Expr::inner()).expect("the index is a term")
    }

    /// `ε = [n ↦ 1/(n+1)]`.
    pub fn epsilon() -> Hyper1 {
        Hyper1::from_expr(Expr::div(
            Expr::int(1),
            Expr::add(Expr::inner(), Expr::int(1)),
        ))
        .expect("1/(n+1) is a term")
    }

    pub fn rep(&self) -> &SeqTerm {
        &self.rep
    }

    pub fn expr(&self) -> &Expr {
        self.rep.expr()
    }

    pub fn base(&self) -> Sort {
        self.base
    }

    /// Equality modulo the cofinite filter.
    pub fn eq_verdict(&self, o: &Hyper1) -> Verdict {
        compare_mod_frechet(&self.rep, &o.rep, Rel::Eq)
    }

    pub fn compare(&self, o: &Hyper1, rel: Rel) -> Verdict {
        compare_mod_frechet(&self.rep, &o.rep, rel)
    }

    /// Standard value, if the class is `ν(a)`.
    pub fn standard_value(&self) -> Option<Q> {
        self.rep.as_constant()
    }
}

impl fmt::Display for Hyper1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n ↦ {}]", self.rep)
    }
}

/// Class of a two-index term.
#[derive(Clone, Debug)]
pub struct Hyper2 {
    rep: Expr,
    normal: Piecewise,
    base: Sort,
}

impl Hyper2 {
    pub fn from_expr(e: Expr) -> Result<Hyper2, HyperError> {
        if has_slot(&e) {
            return Err(HyperError::UnsupportedTerm(format!("{e} has free slots")));
        }
        crate::seq::check_integral_operands(&e)?;
        let normal = normalize(&e).map_err(SeqError::from)?;
        Ok(Hyper2 {
            base: e.sort(Sort::Int),
            rep: e,
            normal,
        })
    }

    pub fn expr(&self) -> &Expr {
        &self.rep
    }

    pub fn normal(&self) -> &Piecewise {
        &self.normal
    }

    pub fn base(&self) -> Sort {
        self.base
    }

    /// Fragment equality of representatives.
    pub fn fragment_eq(&self, o: &Hyper2) -> bool {
        self.normal == o.normal
    }

    /// `Some(y)` when the term does not depend on `n`, so that it is `*ν(y)`.
    pub fn as_star_nu(&self) -> Option<Hyper1> {
        if !self.normal.is_free_of_inner() {
            return None;
        }
        let e = self.rep.map_vars(&|v| match v {
            Var::Outer => Some(Expr::inner()),
            Var::Inner => Some(Expr::int(0)),
            Var::Slot(_) => None,
        });
        Hyper1::from_expr(e).ok()
    }

    /// `Some(y)` when the term does not depend on `m`, so that it is `ν(y)`.
    pub fn as_nu2(&self) -> Option<Hyper1> {
        if !self.normal.is_free_of_outer() {
            return None;
        }
        Hyper1::from_expr(self.rep.subst(Var::Outer, &Expr::int(0))).ok()
    }
}

fn has_slot(e: &Expr) -> bool {
    matches!(e, Expr::Var(Var::Slot(_))) || e.children().into_iter().any(has_slot)
}

impl fmt::Display for Hyper2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[m, n ↦ {}]", self.rep)
    }
}

/// `*f(x)`: compose a standard function, written in `n`, with `x`.
pub fn star_map1(f: &SeqTerm, x: &Hyper1) -> Result<Hyper1, HyperError> {
    Hyper1::from_expr(f.expr().subst(Var::Inner, x.expr()))
}

pub fn nu1(a: Q) -> Hyper1 {
    Hyper1::from_expr(Expr::Const(a)).expect("constants are terms")
}

/// `ν(x)`: the constant outer family with value `x`.
pub fn nu2(x: &Hyper1) -> Hyper2 {
    Hyper2 {
        rep: x.expr().clone(),
        normal: x.rep.normal().clone(),
        base: x.base,
    }
}

/// `*ν(x)`: at outer position `m` the standard point `x(m)`.
pub fn star_nu(x: &Hyper1) -> Hyper2 {
    Hyper2::from_expr(x.expr().subst(Var::Inner, &Expr::outer()))
        .expect("renaming the index keeps a valid term")
}

/// Iterated comparison of two level-2 elements.
pub fn compare2(x: &Hyper2, y: &Hyper2, rel: Rel) -> Verdict {
    decide2(&Pred::cmp(rel, x.rep.clone(), y.rep.clone()))
}

/// Whether an element of `*ℕ` exceeds every standard natural.
///
/// True when every branch grows without bound, False when the class is
/// standard; bounded non-constant and mixed representatives are left
/// Undetermined, with the evidence attached.
pub fn is_unlimited(x: &Hyper1) -> Verdict {
    if x.standard_value().is_some() {
        return Verdict::False;
    }
    let normal = x.rep.normal();
    let unbounded: Vec<bool> = normal
        .branches()
        .iter()
        .map(|b| match b.to_inner() {
            Some((p, d)) => {
                p.degree().unwrap_or(0) > d.degree().unwrap_or(0)
                    && b.eventual_sign() == std::cmp::Ordering::Greater
            }
            None => false,
        })
        .collect();
    if unbounded.iter().all(|&u| u) {
        return Verdict::True;
    }
    if unbounded.iter().any(|&u| u) {
        return Verdict::Undetermined(class_from_parts(&[], &unbounded));
    }
    let evidence = normal.branches()[0]
        .as_constant()
        .map(|c| {
            let eq = BoolTerm::compare(&x.rep, Rel::Eq, &SeqTerm::constant(c));
            classify_truth_set(&eq)
        })
        .unwrap_or(TruthSetClass::Unknown);
    Verdict::Undetermined(evidence)
}

/// Whether `x` lies in `*S`, for `S` written in the slot variable `b`.
pub fn induced_uf_membership(x: &Hyper1, s: &Pred) -> Result<Verdict, HyperError> {
    let p = s.subst(Var::Slot(0), x.expr());
    let b = BoolTerm::new(p)?;
    Ok(Verdict::from_class(classify_truth_set(&b)))
}

/// A countable standard set whose star contains a given element.
#[derive(Clone, Debug, PartialEq)]
pub enum ConfiningSet {
    /// `{a}`, for a standard element.
    Singleton(Q),
    /// The whole base set.
    Whole(Sort),
    /// The range `{t(k) : k ∈ ℕ}` of a representative.
    Range(SeqTerm),
}

impl fmt::Display for ConfiningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfiningSet::Singleton(a) => write!(f, "{{{a}}}"),
            ConfiningSet::Whole(Sort::Nat) => write!(f, "ℕ"),
            ConfiningSet::Whole(Sort::Int) => write!(f, "ℤ"),
            ConfiningSet::Whole(Sort::Rat) => write!(f, "ℚ"),
            ConfiningSet::Range(t) => write!(f, "{{{} : n ∈ ℕ}}", t),
        }
    }
}

/// Range description of the representative, with its membership obligation
/// discharged: the result is returned only if the obligation verifies True.
pub fn confining_set(x: &Hyper1) -> Result<(ConfiningSet, Verdict), HyperError> {
    if let Some(a) = x.standard_value() {
        let v = induced_uf_membership(x, &Pred::cmp(Rel::Eq, Expr::slot(0), Expr::Const(a.clone())))?;
        return Ok((ConfiningSet::Singleton(a), v));
    }
    if x.rep.normal() == SeqTerm::index().normal() {
        let v = induced_uf_membership(x, &Pred::cmp(Rel::Ge, Expr::slot(0), Expr::int(0)))?;
        return Ok((ConfiningSet::Whole(Sort::Nat), v));
    }
    // x(n) = t(j(n)) for the witness map j = id.
    let image = SeqTerm::index().compose_into(&x.rep)?;
    let v = compare_mod_frechet(&x.rep, &image, Rel::Eq);
    Ok((ConfiningSet::Range(x.rep.clone()), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn star_map_examples() {
        let succ = SeqTerm::new(Expr::add(Expr::inner(), Expr::int(1))).unwrap();
        let w1 = star_map1(&succ, &Hyper1::omega()).unwrap();
        assert_eq!(w1.rep().normal(), SeqTerm::new(Expr::add(Expr::inner(), Expr::int(1))).unwrap().normal());
        let sq = SeqTerm::new(Expr::mul(Expr::inner(), Expr::inner())).unwrap();
        assert_eq!(star_map1(&sq, &nu1(q(3))).unwrap().standard_value(), Some(q(9)));
        let recip = SeqTerm::new(Expr::div(Expr::int(1), Expr::add(Expr::inner(), Expr::int(1)))).unwrap();
        let e = star_map1(&recip, &Hyper1::omega()).unwrap();
        assert_eq!(e.eq_verdict(&Hyper1::epsilon()), Verdict::True);
    }

    #[test]
    fn embeddings_agree_on_standard_points() {
        for a in [0, 1, 5, -3] {
            let x = nu1(q(a));
            assert!(nu2(&x).fragment_eq(&star_nu(&x)));
        }
        let w = Hyper1::omega();
        assert_eq!(compare2(&star_nu(&w), &nu2(&w), Rel::Lt), Verdict::True);
        assert_eq!(compare2(&star_nu(&w), &nu2(&w), Rel::Eq), Verdict::False);
        let e = Hyper1::epsilon();
        assert_eq!(compare2(&nu2(&e), &star_nu(&e), Rel::Lt), Verdict::True);
    }

    #[test]
    fn unlimited_examples() {
        assert_eq!(is_unlimited(&Hyper1::omega()), Verdict::True);
        assert_eq!(is_unlimited(&nu1(q(7))), Verdict::False);
        let par = Hyper1::from_expr(Expr::modulo(Expr::inner(), 2)).unwrap();
        assert!(matches!(
            is_unlimited(&par),
            Verdict::Undetermined(TruthSetClass::PeriodicTail { period: 2, .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let w = Hyper1::omega();
        let big = Pred::cmp(Rel::Gt, Expr::slot(0), Expr::int(100));
        assert_eq!(induced_uf_membership(&w, &big).unwrap(), Verdict::True);
        let even = Pred::cmp(Rel::Eq, Expr::modulo(Expr::slot(0), 2), Expr::int(0));
        assert!(!induced_uf_membership(&w, &even).unwrap().is_decided());
        assert_eq!(induced_uf_membership(&nu1(q(42)), &even).unwrap(), Verdict::True);
    }

    #[test]
    fn confining_sets() {
        assert_eq!(confining_set(&Hyper1::omega()).unwrap().0, ConfiningSet::Whole(Sort::Nat));
        assert_eq!(confining_set(&nu1(q(3))).unwrap(), (ConfiningSet::Singleton(q(3)), Verdict::True));
        let sq = Hyper1::from_expr(Expr::mul(Expr::inner(), Expr::inner())).unwrap();
        let (c, v) = confining_set(&sq).unwrap();
        assert!(matches!(c, ConfiningSet::Range(_)));
        assert_eq!(v, Verdict::True);
    }
}
