//! Iterated decision procedure for predicates in two indices.
//!
//! A predicate `φ(m, n)` is decided inner index first: for each outer `m`
//! the slice `{n : φ(m, n)}` is classified, then the set of outer indices
//! whose slice is decided true (or false) is classified in turn.

use std::cmp::Ordering;

use crate::normal::normalize;
use crate::poly::{ceil_u64, lcm_u64, Q};
use crate::seq::classify::class_from_parts;
use crate::seq::{classify_truth_set, BoolTerm, Expr, Pred, Rel, SeqError, TruthSetClass, Var, Verdict};

use super::HyperError;

/// Largest outer onset scanned slice by slice.
pub const MAX_OUTER_ONSET: u64 = 5_000;

/// Per-slice outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slice {
    True,
    False,
    Undetermined,
}

impl Slice {
    fn of(v: &Verdict) -> Slice {
        match v {
            Verdict::True => Slice::True,
            Verdict::False => Slice::False,
            Verdict::Undetermined(_) => Slice::Undetermined,
        }
    }
}

/// Slice outcomes: exact below `prefix.len()`, then periodic in the outer
/// index with pattern `tail[m mod tail.len()]`.
#[derive(Clone, Debug)]
pub struct OuterPattern {
    pub prefix: Vec<Slice>,
    pub tail: Vec<Slice>,
}

impl OuterPattern {
    pub fn at(&self, m: u64) -> Slice {
        match self.prefix.get(m as usize) {
            Some(s) => *s,
            None => self.tail[(m % self.tail.len() as u64) as usize],
        }
    }

    /// Classification of `{m : slice m is s}`.
    pub fn class_of(&self, s: Slice) -> TruthSetClass {
        let p: Vec<bool> = self.prefix.iter().map(|x| *x == s).collect();
        let t: Vec<bool> = self.tail.iter().map(|x| *x == s).collect();
        class_from_parts(&p, &t)
    }

    pub fn verdict(&self) -> Verdict {
        let trues = self.class_of(Slice::True);
        if matches!(trues, TruthSetClass::Cofinite(_)) {
            return Verdict::True;
        }
        if matches!(self.class_of(Slice::False), TruthSetClass::Cofinite(_)) {
            return Verdict::False;
        }
        Verdict::Undetermined(trues)
    }
}

fn outer_onset_of(bound: &Q) -> u64 {
    ceil_u64(bound).saturating_add(1)
}

/// Outer bound and periods contributed by every divisor in `e`.
fn divisor_data(e: &Expr, onset: &mut u64, pm: &mut u64) -> Result<(), HyperError> {
    if let Expr::Div(_, b) = e {
        let nb = normalize(b).map_err(SeqError::from)?;
        *pm = lcm_u64(*pm, nb.outer_period());
        for br in nb.branches() {
            *onset = (*onset).max(outer_onset_of(&br.outer_bound()));
        }
    }
    for c in e.children() {
        divisor_data(c, onset, pm)?;
    }
    Ok(())
}

/// Decide the inner slice at a fixed outer index exactly.
pub fn slice_verdict(pred: &Pred, m: &Q) -> Result<Verdict, HyperError> {
    let fixed = pred.subst(Var::Outer, &Expr::Const(m.clone()));
    match BoolTerm::new(fixed) {
        Ok(b) => Ok(Verdict::from_class(classify_truth_set(&b))),
        // A divisor vanishing identically leaves the slice undefined everywhere.
        Err(SeqError::DenominatorNotEventuallyNonzero(_)) => Ok(Verdict::False),
        Err(e) => Err(e.into()),
    }
}

/// Compute the outer slice pattern of a two-index predicate.
pub fn outer_pattern(pred: &Pred) -> Result<OuterPattern, HyperError> {
    let mut onset = 0u64;
    let mut pm = 1u64;
    let mut pn = 1u64;
    let mut diffs = Vec::new();
    for (rel, a, b) in pred.atoms() {
        divisor_data(a, &mut onset, &mut pm)?;
        divisor_data(b, &mut onset, &mut pm)?;
        let d = normalize(&Expr::sub(a.clone(), b.clone())).map_err(SeqError::from)?;
        pm = lcm_u64(pm, d.outer_period());
        pn = lcm_u64(pn, d.inner_period());
        for br in d.branches() {
            onset = onset.max(outer_onset_of(&br.outer_bound()));
        }
        diffs.push((rel, d));
    }
    if onset > MAX_OUTER_ONSET || pm > MAX_OUTER_ONSET || pn > MAX_OUTER_ONSET {
        return Err(HyperError::OnsetTooLarge(onset.max(pm).max(pn)));
    }
    let tail = (0..pm)
        .map(|rm| {
            let mut seen = (false, false);
            for rn in 0..pn {
                let mut i = 0;
                let t = pred
                    .eval_with::<()>(&mut |_, _, _| {
                        let (rel, d): &(Rel, _) = &diffs[i];
                        i += 1;
                        Ok(rel.holds(d.branch(rm, rn).eventual_sign()))
                    })
                    .unwrap_or(false);
                if t {
                    seen.0 = true;
                } else {
                    seen.1 = true;
                }
            }
            match seen {
                (true, false) => Slice::True,
                (false, true) => Slice::False,
                _ => Slice::Undetermined,
            }
        })
        .collect();
    let prefix = (0..onset)
        .map(|m| slice_verdict(pred, &Q::from_integer(m.into())).map(|v| Slice::of(&v)))
        .collect::<Result<_, _>>()?;
    Ok(OuterPattern { prefix, tail })
}

/// Iterated verdict of a two-index predicate. A predicate without the outer
/// index is decided over the inner one alone.
pub fn decide2(pred: &Pred) -> Verdict {
    if !pred.mentions(Var::Outer) {
        return match BoolTerm::new(pred.clone()) {
            Ok(b) => Verdict::from_class(classify_truth_set(&b)),
            Err(_) => Verdict::Undetermined(TruthSetClass::Unknown),
        };
    }
    match outer_pattern(pred) {
        Ok(p) => p.verdict(),
        Err(_) => Verdict::Undetermined(TruthSetClass::Unknown),
    }
}

/// Sign of `a - b` along the diagonal-free iterated limit, when uniform.
pub fn iterated_sign(a: &Expr, b: &Expr) -> Option<Ordering> {
    for (rel, s) in [
        (Rel::Lt, Ordering::Less),
        (Rel::Eq, Ordering::Equal),
        (Rel::Gt, Ordering::Greater),
    ] {
        if decide2(&Pred::cmp(rel, a.clone(), b.clone())) == Verdict::True {
            return Some(s);
        }
    }
    None
}
