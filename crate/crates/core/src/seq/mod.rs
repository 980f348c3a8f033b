//! Definable sequences over a single index and the decidable comparison
//! fragment.
//!
//! A [`SeqTerm`] is a closed-form sequence `n ↦ t(n)` built from rational
//! constants, the index, field operations, remainder by a constant and
//! periodic case splits. Every term normalizes to a piecewise-periodic
//! rational function, so the truth set of a comparison is decidable up to a
//! finite prefix: it is finite, cofinite, or eventually periodic.

pub mod classify;
pub mod term;

use std::collections::BTreeSet;
use std::fmt;

use crate::normal::{normalize, NormalizeError, Piecewise};
use crate::poly::Q;
pub use classify::{classify_truth_set, compare_mod_frechet, MAX_ONSET};
pub use term::{EvalError, Expr, Pred, Rel, Sort, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("division by zero at index {0}")]
    DivisionByZeroAt(u64),
    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),
    #[error("denominator {0} is not eventually nonzero")]
    DenominatorNotEventuallyNonzero(String),
    #[error("sort error: {0}")]
    SortMismatch(String),
}

impl From<NormalizeError> for SeqError {
    fn from(e: NormalizeError) -> Self {
        match e {
            NormalizeError::DenominatorNotEventuallyNonzero(s) => {
                SeqError::DenominatorNotEventuallyNonzero(s)
            }
            NormalizeError::UnsupportedTerm(s) => SeqError::UnsupportedTerm(s),
        }
    }
}

/// A definable sequence in the inner index `n`.
#[derive(Clone, Debug)]
pub struct SeqTerm {
    expr: Expr,
    sort: Sort,
    normal: Piecewise,
}

impl PartialEq for SeqTerm {
    /// Fragment equality: the canonical forms agree on every branch.
    fn eq(&self, other: &Self) -> bool {
        self.normal == other.normal
    }
}

impl SeqTerm {
    pub fn new(expr: Expr) -> Result<SeqTerm, SeqError> {
        if expr.mentions(Var::Outer) {
            return Err(SeqError::UnsupportedTerm(format!(
                "{expr} uses the outer index"
            )));
        }
        check_integral_operands(&expr)?;
        let normal = normalize(&expr)?;
        let sort = expr.sort(Sort::Int);
        Ok(SeqTerm { expr, sort, normal })
    }

    pub fn constant(v: Q) -> SeqTerm {
        SeqTerm::new(Expr::Const(v)).expect("constants are valid terms")
    }

    pub fn index() -> SeqTerm {
        SeqTerm::new(Expr::inner()).expect("the index is a valid term")
    }

    /// Declare a narrower sort than the inferred one; checked eventually.
    pub fn with_sort(mut self, sort: Sort) -> Result<SeqTerm, SeqError> {
        if sort >= self.sort {
            self.sort = sort;
            return Ok(self);
        }
        if self.sort == Sort::Rat
            && !self
                .normal
                .branches()
                .iter()
                .all(|b| b.as_integer_poly().is_some())
        {
            return Err(SeqError::SortMismatch(format!(
                "{} is not integer-valued",
                self.expr
            )));
        }
        if sort == Sort::Nat
            && self
                .normal
                .branches()
                .iter()
                .any(|b| b.eventual_sign() == std::cmp::Ordering::Less)
        {
            return Err(SeqError::SortMismatch(format!(
                "{} is eventually negative",
                self.expr
            )));
        }
        self.sort = sort;
        Ok(self)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn normal(&self) -> &Piecewise {
        &self.normal
    }

    pub fn eval_at(&self, n: u64) -> Result<Q, SeqError> {
        self.expr.eval_at(n).map_err(|e| match e {
            EvalError::DivisionByZeroAt(_) => SeqError::DivisionByZeroAt(n),
            other => SeqError::UnsupportedTerm(other.to_string()),
        })
    }

    /// Constant value if the canonical form is a single constant branch.
    pub fn as_constant(&self) -> Option<Q> {
        self.normal.as_constant()
    }

    /// `f(self)`, where `f` is written in the index variable.
    pub fn compose_into(&self, f: &SeqTerm) -> Result<SeqTerm, SeqError> {
        SeqTerm::new(f.expr.subst(Var::Inner, &self.expr))
    }
}

impl fmt::Display for SeqTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

/// Remainder and case selectors need integer-sorted operands.
pub(crate) fn check_integral_operands(e: &Expr) -> Result<(), SeqError> {
    match e {
        Expr::Mod(a, _) if !a.sort(Sort::Int).is_integral() => Err(SeqError::UnsupportedTerm(
            format!("mod of rational-sorted {a}"),
        )),
        Expr::Cases { selector, .. } if !selector.sort(Sort::Int).is_integral() => Err(
            SeqError::UnsupportedTerm(format!("rational-sorted selector {selector}")),
        ),
        _ => e.children().into_iter().try_for_each(check_integral_operands),
    }
}

/// A predicate on the index built from comparisons of [`SeqTerm`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct BoolTerm {
    pred: Pred,
}

impl BoolTerm {
    pub fn new(pred: Pred) -> Result<BoolTerm, SeqError> {
        for (_, a, b) in pred.atoms() {
            SeqTerm::new(a.clone())?;
            SeqTerm::new(b.clone())?;
        }
        Ok(BoolTerm { pred })
    }

    pub fn compare(a: &SeqTerm, rel: Rel, b: &SeqTerm) -> BoolTerm {
        BoolTerm {
            pred: Pred::cmp(rel, a.expr.clone(), b.expr.clone()),
        }
    }

    pub fn pred(&self) -> &Pred {
        &self.pred
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(&self) -> BoolTerm {
        BoolTerm {
            pred: Pred::not(self.pred.clone()),
        }
    }

    pub fn and(&self, o: &BoolTerm) -> BoolTerm {
        BoolTerm {
            pred: Pred::And(vec![self.pred.clone(), o.pred.clone()]),
        }
    }

    pub fn or(&self, o: &BoolTerm) -> BoolTerm {
        BoolTerm {
            pred: Pred::Or(vec![self.pred.clone(), o.pred.clone()]),
        }
    }

    pub fn nnf(&self) -> BoolTerm {
        BoolTerm {
            pred: self.pred.nnf(),
        }
    }

    /// Truth at a single index; an undefined atom counts as false.
    pub fn holds_at(&self, n: u64) -> bool {
        let nq = Q::from_integer(n.into());
        self.pred
            .eval(&|v| (v == Var::Inner).then(|| nq.clone()))
            .unwrap_or(false)
    }
}

impl fmt::Display for BoolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)
    }
}

/// Shape of the set of indices at which a predicate holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TruthSetClass {
    Finite(BTreeSet<u64>),
    /// Carries the (finite) complement.
    Cofinite(BTreeSet<u64>),
    /// From `onset` on, membership is `n mod period ∈ residues`.
    PeriodicTail {
        period: u64,
        residues: BTreeSet<u64>,
        onset: u64,
    },
    Unknown,
}

impl TruthSetClass {
    pub fn complement(&self) -> TruthSetClass {
        match self {
            TruthSetClass::Finite(s) => TruthSetClass::Cofinite(s.clone()),
            TruthSetClass::Cofinite(s) => TruthSetClass::Finite(s.clone()),
            TruthSetClass::PeriodicTail {
                period,
                residues,
                onset,
            } => TruthSetClass::PeriodicTail {
                period: *period,
                residues: (0..*period).filter(|r| !residues.contains(r)).collect(),
                onset: *onset,
            },
            TruthSetClass::Unknown => TruthSetClass::Unknown,
        }
    }
}

impl fmt::Display for TruthSetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| -> String {
            if s.len() > 12 && s.iter().copied().eq(*s.first().unwrap()..=*s.last().unwrap()) {
                format!("{}..={}", s.first().unwrap(), s.last().unwrap())
            } else {
                s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            }
        };
        match self {
            TruthSetClass::Finite(s) => write!(f, "Finite({{{}}})", list(s)),
            TruthSetClass::Cofinite(s) => write!(f, "Cofinite(complement {{{}}})", list(s)),
            TruthSetClass::PeriodicTail {
                period,
                residues,
                onset,
            } => write!(
                f,
                "PeriodicTail(period {period}, residues {{{}}}, onset {onset})",
                list(residues)
            ),
            TruthSetClass::Unknown => write!(f, "Unknown"),
        }
    }
}

/// Outcome of a question asked modulo every ultrafilter extending the
/// cofinite filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undetermined(TruthSetClass),
}

impl Verdict {
    pub fn from_class(c: TruthSetClass) -> Verdict {
        match c {
            TruthSetClass::Cofinite(_) => Verdict::True,
            TruthSetClass::Finite(_) => Verdict::False,
            other => Verdict::Undetermined(other),
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn negate(&self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Undetermined(c) => Verdict::Undetermined(c.complement()),
        }
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, Verdict::Undetermined(_))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Undetermined(_) => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::Undetermined(_) => "Undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Undetermined(c) => write!(f, "Undetermined({c})"),
            other => f.write_str(other.label()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, q_frac};

    #[test]
    fn eval_at_reports_the_index() {
        let t = SeqTerm::new(Expr::div(Expr::int(1), Expr::sub(Expr::inner(), Expr::int(3))))
            .unwrap();
        assert_eq!(t.eval_at(3), Err(SeqError::DivisionByZeroAt(3)));
        assert_eq!(t.eval_at(5).unwrap(), q_frac(1, 2));
    }

    #[test]
    fn sorts_are_inferred_and_checked() {
        let n = SeqTerm::index();
        assert_eq!(n.sort(), Sort::Nat);
        let m1 = SeqTerm::new(Expr::sub(Expr::inner(), Expr::int(1))).unwrap();
        assert_eq!(m1.sort(), Sort::Int);
        assert_eq!(m1.clone().with_sort(Sort::Nat).unwrap().sort(), Sort::Nat);
        let neg = SeqTerm::new(Expr::sub(Expr::int(0), Expr::inner())).unwrap();
        assert!(neg.with_sort(Sort::Nat).is_err());
        let mod_rat = Expr::modulo(Expr::div(Expr::inner(), Expr::int(2)), 2);
        assert!(matches!(SeqTerm::new(mod_rat), Err(SeqError::UnsupportedTerm(_))));
    }

    #[test]
    fn outer_index_is_rejected() {
        assert!(SeqTerm::new(Expr::outer()).is_err());
    }

    #[test]
    fn constants_fold() {
        let t = SeqTerm::new(Expr::mul(Expr::int(3), Expr::int(3))).unwrap();
        assert_eq!(t.as_constant(), Some(q(9)));
    }
}
