//! Deciding `R(*ν(b), ν(a))` through the standard set `D = {k : R(k, a)}`.
//!
//! For a standard relation `R` and elements `a, b` of `*A`, the level-2
//! statement `R(*ν(b), ν(a))` holds iff `b` lies in `*D`, where `D` is the
//! standard set of `k` with `*R(k, a)`. [`nunustar_check`] computes `D`
//! explicitly (a finite prefix plus a periodic tail on each side of zero)
//! and then decides membership of `b`. [`nunustar_direct`] evaluates the
//! level-2 statement with the iterated procedure instead.

use crate::seq::{classify_truth_set, BoolTerm, Expr, Pred, Rel, Sort, TruthSetClass, Var, Verdict};

use super::level2::{decide2, outer_pattern, OuterPattern, Slice};
use super::{nu2, star_nu, Hyper1, HyperError};

/// Disjunction describing `{x : x ∈ D}` on one side of zero, where the
/// side's pattern is indexed by `|k|` and `x` is the signed value.
fn side_pred(x: &Expr, pattern: &OuterPattern, want: Slice, skip_zero: bool) -> Vec<Pred> {
    let mut out = Vec::new();
    let start = u64::from(skip_zero);
    let k0 = pattern.prefix.len() as u64;
    let mut k = start;
    while k < k0 {
        if pattern.at(k) != want {
            k += 1;
            continue;
        }
        let lo = k;
        while k < k0 && pattern.at(k) == want {
            k += 1;
        }
        out.push(Pred::And(vec![
            Pred::cmp(Rel::Ge, x.clone(), Expr::int(lo as i64)),
            Pred::cmp(Rel::Le, x.clone(), Expr::int(k as i64 - 1)),
        ]));
    }
    let period = pattern.tail.len() as u64;
    let residues: Vec<u64> = (0..period)
        .filter(|&r| pattern.tail[r as usize] == want)
        .collect();
    if !residues.is_empty() {
        let lower = Pred::cmp(Rel::Ge, x.clone(), Expr::int(k0.max(start) as i64));
        let res = if residues.len() as u64 == period {
            Pred::True
        } else {
            Pred::Or(
                residues
                    .iter()
                    .map(|&r| {
                        Pred::cmp(
                            Rel::Eq,
                            Expr::modulo(x.clone(), period),
                            Expr::int(r as i64),
                        )
                    })
                    .collect(),
            )
        };
        out.push(Pred::And(vec![lower, res]));
    }
    out
}

/// Decide `R(*ν(b), ν(a))` via membership of `b` in `*D`. `R` is written
/// with `Slot(0)` for its first argument and `Slot(1)` for its second.
pub fn nunustar_check(r: &Pred, a: &Hyper1, b: &Hyper1) -> Result<Verdict, HyperError> {
    if b.base() == Sort::Rat {
        return Err(HyperError::UnsupportedTerm(format!(
            "{b} is not integer-valued; the set D is enumerated over integers"
        )));
    }
    let with_a = r.subst(Var::Slot(1), a.expr());
    let pos = outer_pattern(&with_a.subst(Var::Slot(0), &Expr::outer()))?;
    let neg = if b.base() == Sort::Nat {
        None
    } else {
        let flipped = Expr::sub(Expr::int(0), Expr::outer());
        Some(outer_pattern(&with_a.subst(Var::Slot(0), &flipped))?)
    };
    let x = b.expr().clone();
    let minus_x = Expr::sub(Expr::int(0), x.clone());
    let member = |want: Slice| -> Result<TruthSetClass, HyperError> {
        let mut parts = side_pred(&x, &pos, want, false);
        if let Some(neg) = &neg {
            parts.extend(side_pred(&minus_x, neg, want, true));
        }
        let bt = BoolTerm::new(Pred::Or(parts))?;
        Ok(classify_truth_set(&bt))
    };
    let yes = member(Slice::True)?;
    if matches!(yes, TruthSetClass::Cofinite(_)) {
        return Ok(Verdict::True);
    }
    if matches!(member(Slice::False)?, TruthSetClass::Cofinite(_)) {
        return Ok(Verdict::False);
    }
    Ok(Verdict::Undetermined(yes))
}

/// The same statement evaluated directly on the level-2 pair.
pub fn nunustar_direct(r: &Pred, a: &Hyper1, b: &Hyper1) -> Verdict {
    let p = r
        .subst(Var::Slot(0), star_nu(b).expr())
        .subst(Var::Slot(1), nu2(a).expr());
    decide2(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::nu1;
    use crate::poly::q;

    fn rel(r: Rel) -> Pred {
        Pred::cmp(r, Expr::slot(0), Expr::slot(1))
    }

    #[test]
    fn examples() {
        let w = Hyper1::omega();
        assert_eq!(nunustar_check(&rel(Rel::Lt), &w, &w).unwrap(), Verdict::True);
        assert_eq!(nunustar_check(&rel(Rel::Eq), &w, &w).unwrap(), Verdict::False);
        assert_eq!(nunustar_check(&rel(Rel::Lt), &w, &nu1(q(7))).unwrap(), Verdict::True);
    }

    #[test]
    fn negative_side_is_covered() {
        let mw = Hyper1::from_expr(Expr::sub(Expr::int(0), Expr::inner())).unwrap();
        let le = rel(Rel::Le);
        assert_eq!(nunustar_check(&le, &mw, &mw).unwrap(), Verdict::False);
        assert_eq!(nunustar_direct(&le, &mw, &mw), Verdict::False);
        let ge = rel(Rel::Ge);
        assert_eq!(nunustar_check(&ge, &mw, &mw).unwrap(), Verdict::True);
    }

    #[test]
    fn agrees_with_direct_evaluation() {
        let w = Hyper1::omega();
        let w2 = Hyper1::from_expr(Expr::mul(Expr::int(2), Expr::inner())).unwrap();
        let par = Hyper1::from_expr(Expr::modulo(Expr::inner(), 3)).unwrap();
        for r in [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Gt, Rel::Ge] {
            for a in [&w, &w2, &par] {
                for b in [&w, &w2, &par] {
                    let c = nunustar_check(&rel(r), a, b).unwrap();
                    let d = nunustar_direct(&rel(r), a, b);
                    if c.is_decided() && d.is_decided() {
                        assert_eq!(c, d, "{r:?} {a} {b}");
                    }
                }
            }
        }
    }
}
