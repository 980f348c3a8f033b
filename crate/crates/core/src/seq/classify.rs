//! Truth-set classification for single-index predicates.

use std::collections::BTreeSet;

#[cfg(test)]
use num::Zero;

use super::{BoolTerm, Expr, Rel, SeqTerm, TruthSetClass, Verdict};
use crate::normal::normalize;
use crate::poly::{ceil_u64, lcm_u64, Q};

/// Largest onset the classifier is willing to scan explicitly.
pub const MAX_ONSET: u64 = 1_000_000;

/// Bound past which every divisor in `e` keeps its sign, with the period of
/// the divisor branches folded into `period`.
fn divisor_onset(e: &Expr, period: &mut u64) -> Option<u64> {
    let mut best = 0u64;
    if let Expr::Div(_, b) = e {
        let nb = normalize(b).ok()?;
        *period = lcm_u64(*period, nb.inner_period());
        for br in nb.branches() {
            best = best.max(onset_of(&br.inner_bound()?)?);
        }
    }
    for c in e.children() {
        best = best.max(divisor_onset(c, period)?);
    }
    Some(best)
}

fn onset_of(bound: &Q) -> Option<u64> {
    ceil_u64(bound).checked_add(1)
}

/// Sign pattern of one atom: eventual truth for each residue of its period.
struct AtomTail {
    period: u64,
    truth: Vec<bool>,
}

fn atom_tail(rel: Rel, a: &Expr, b: &Expr, onset: &mut u64) -> Option<AtomTail> {
    let diff = normalize(&Expr::sub(a.clone(), b.clone())).ok()?;
    let period = diff.inner_period();
    let mut truth = Vec::with_capacity(period as usize);
    for r in 0..period {
        let br = diff.branch(0, r);
        *onset = (*onset).max(onset_of(&br.inner_bound()?)?);
        truth.push(rel.holds(br.eventual_sign()));
    }
    Some(AtomTail { period, truth })
}

/// Build the class from an exact prefix `[0, onset)` and a tail pattern
/// indexed by `n mod tail.len()` that is exact for `n >= onset`.
pub(crate) fn class_from_parts(prefix: &[bool], tail: &[bool]) -> TruthSetClass {
    let onset = prefix.len() as u64;
    let members = |want: bool| -> BTreeSet<u64> {
        (0..onset).filter(|&i| prefix[i as usize] == want).collect()
    };
    if tail.iter().all(|&t| t) {
        return TruthSetClass::Cofinite(members(false));
    }
    if tail.iter().all(|&t| !t) {
        return TruthSetClass::Finite(members(true));
    }
    let t = tail.len();
    let d = (1..=t)
        .filter(|d| t % d == 0)
        .find(|&d| (0..t).all(|s| tail[s] == tail[s % d]))
        .unwrap_or(t);
    let mut start = onset;
    while start > 0 && prefix[(start - 1) as usize] == tail[((start - 1) % d as u64) as usize] {
        start -= 1;
    }
    TruthSetClass::PeriodicTail {
        period: d as u64,
        residues: (0..d as u64).filter(|&s| tail[s as usize]).collect(),
        onset: start,
    }
}

/// Classify the set `{n : b(n)}`. Indices where an atom is undefined count
/// as non-members; there are only finitely many of them.
pub fn classify_truth_set(b: &BoolTerm) -> TruthSetClass {
    classify_inner(b).unwrap_or(TruthSetClass::Unknown)
}

fn classify_inner(b: &BoolTerm) -> Option<TruthSetClass> {
    let pred = b.pred();
    let mut onset = 0u64;
    let mut period = 1u64;
    let mut tails = Vec::new();
    for (rel, x, y) in pred.atoms() {
        onset = onset.max(divisor_onset(x, &mut period)?);
        onset = onset.max(divisor_onset(y, &mut period)?);
        let t = atom_tail(rel, x, y, &mut onset)?;
        period = lcm_u64(period, t.period);
        tails.push(t);
    }
    if onset > MAX_ONSET || period > MAX_ONSET {
        return None;
    }
    let tail: Vec<bool> = (0..period)
        .map(|s| {
            let mut i = 0;
            pred.eval_with::<()>(&mut |_, _, _| {
                let t = &tails[i];
                i += 1;
                Ok(t.truth[(s % t.period) as usize])
            })
            .unwrap_or(false)
        })
        .collect();
    let prefix: Vec<bool> = (0..onset).map(|n| b.holds_at(n)).collect();
    Some(class_from_parts(&prefix, &tail))
}

/// Decide `a rel b` modulo the cofinite filter.
pub fn compare_mod_frechet(a: &SeqTerm, b: &SeqTerm, rel: Rel) -> Verdict {
    Verdict::from_class(classify_truth_set(&BoolTerm::compare(a, rel, b)))
}

/// Eventual value of a term as an exact rational, if it is eventually constant.
pub fn eventual_constant(t: &SeqTerm) -> Option<Q> {
    t.as_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Pred;

    fn n() -> Expr {
        Expr::inner()
    }

    fn classify(p: Pred) -> TruthSetClass {
        classify_truth_set(&BoolTerm::new(p).unwrap())
    }

    #[test]
    fn index_above_five_is_cofinite() {
        let c = classify(Pred::cmp(Rel::Gt, n(), Expr::int(5)));
        assert_eq!(c, TruthSetClass::Cofinite((0..=5).collect()));
    }

    #[test]
    fn even_indices_are_periodic() {
        let c = classify(Pred::cmp(Rel::Eq, Expr::modulo(n(), 2), Expr::int(0)));
        assert_eq!(
            c,
            TruthSetClass::PeriodicTail {
                period: 2,
                residues: [0].into(),
                onset: 0
            }
        );
    }

    #[test]
    fn square_beats_linear_after_a_thousand() {
        let sq = Expr::mul(n(), n());
        let lin = Expr::mul(Expr::int(1000), n());
        let c = classify(Pred::cmp(Rel::Gt, sq, lin));
        assert_eq!(c, TruthSetClass::Cofinite((0..=1000).collect()));
    }

    #[test]
    fn undefined_points_are_not_members() {
        // 1/(n-2) > 0 holds for n > 2 and is undefined at 2.
        let t = Expr::div(Expr::int(1), Expr::sub(n(), Expr::int(2)));
        let c = classify(Pred::cmp(Rel::Gt, t, Expr::int(0)));
        assert_eq!(c, TruthSetClass::Cofinite([0, 1, 2].into()));
    }

    #[test]
    fn finite_equality() {
        let c = classify(Pred::cmp(Rel::Eq, Expr::mul(n(), n()), Expr::int(9)));
        assert_eq!(c, TruthSetClass::Finite([3].into()));
    }

    #[test]
    fn verdicts() {
        let a = SeqTerm::index();
        let b = SeqTerm::constant(Q::from_integer(7.into()));
        assert_eq!(compare_mod_frechet(&a, &b, Rel::Gt), Verdict::True);
        assert_eq!(compare_mod_frechet(&a, &b, Rel::Eq), Verdict::False);
        let par = SeqTerm::new(Expr::modulo(n(), 2)).unwrap();
        let zero = SeqTerm::constant(Q::zero());
        assert!(!compare_mod_frechet(&par, &zero, Rel::Eq).is_decided());
    }
}
