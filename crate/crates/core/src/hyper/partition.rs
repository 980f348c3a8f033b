//! The three-part partition of `**ℕ` and the well-order test.

use std::cmp::Ordering;
use std::fmt;

use crate::seq::{Expr, Pred, Rel, Sort, Verdict};

use super::{compare2, is_unlimited, nu2, nunustar_check, star_nu, Hyper1, Hyper2, HyperError};

/// Where a level-2 natural sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level2Class {
    /// `ν(ν(a))` for a standard `a`.
    StandardStandard,
    /// `*ν(y)` for an unlimited `y`: above every standard, below every
    /// `*`unlimited element.
    StarNuOfUnlimited,
    /// Above every `*ν(y)`; its inner slices are unlimited.
    StarUnlimited,
}

impl fmt::Display for Level2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level2Class::StandardStandard => "StandardStandard",
            Level2Class::StarNuOfUnlimited => "StarNuOfUnlimited",
            Level2Class::StarUnlimited => "StarUnlimited",
        })
    }
}

fn require_true(v: Verdict, what: impl FnOnce() -> String) -> Result<(), HyperError> {
    if v == Verdict::True {
        Ok(())
    } else {
        Err(HyperError::UndecidedPartition(format!("{} is {v}", what())))
    }
}

/// Classify `x ∈ **ℕ` against a probe battery of level-1 elements.
///
/// The class is read off the shape of the representative and then checked
/// with [`compare2`] against every probe, so a wrong shape analysis shows up
/// as an error rather than a wrong answer.
pub fn partition_level2(x: &Hyper2, battery: &[Hyper1]) -> Result<Level2Class, HyperError> {
    if x.base() != Sort::Nat {
        return Err(HyperError::UnsupportedTerm(format!("{x} is not ℕ-valued")));
    }
    if x.normal().as_constant().is_some() {
        return Ok(Level2Class::StandardStandard);
    }
    let standards: Vec<&Hyper1> = battery.iter().filter(|y| y.standard_value().is_some()).collect();
    let unlimited: Vec<&Hyper1> = battery
        .iter()
        .filter(|y| is_unlimited(y) == Verdict::True)
        .collect();
    if let Some(y) = x.as_star_nu() {
        if is_unlimited(&y) != Verdict::True {
            return Err(HyperError::UndecidedPartition(format!(
                "{x} is *ν of {y}, which is not known to be unlimited"
            )));
        }
        for s in &standards {
            require_true(compare2(x, &nu2(s), Rel::Gt), || format!("{x} > {s}"))?;
        }
        for z in &unlimited {
            require_true(compare2(x, &nu2(z), Rel::Lt), || format!("{x} < ν({z})"))?;
        }
        return Ok(Level2Class::StarNuOfUnlimited);
    }
    let slices_unlimited = x.normal().branches().iter().all(|b| {
        let dn = b.num().degree_inner().unwrap_or(0);
        let dd = b.den().degree_inner().unwrap_or(0);
        dn > dd && b.eventual_sign() == Ordering::Greater
    });
    if !slices_unlimited {
        return Err(HyperError::UndecidedPartition(format!(
            "{x} has slices that are not unlimited"
        )));
    }
    for y in battery {
        require_true(compare2(x, &star_nu(y), Rel::Gt), || format!("{x} > *ν({y})"))?;
    }
    Ok(Level2Class::StarUnlimited)
}

/// Base orders accepted by [`well_order_criterion`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseOrder {
    Nat,
    Int,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WellOrderStatus {
    ConsistentWithWellOrdered,
    WitnessedNonWellOrdered,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct WellOrderEntry {
    pub element: Hyper1,
    /// `*ν(a) ≤ ν(a)` by the iterated procedure.
    pub direct: Verdict,
    /// The same statement decided through the standard set of the relation.
    pub via_set: Verdict,
}

#[derive(Clone, Debug)]
pub struct WellOrderReport {
    pub order: BaseOrder,
    pub entries: Vec<WellOrderEntry>,
    pub status: WellOrderStatus,
}

/// Test `*ν(a) ≤ ν(a)` on each battery element.
pub fn well_order_criterion(
    order: BaseOrder,
    battery: &[Hyper1],
) -> Result<WellOrderReport, HyperError> {
    let le = Pred::cmp(Rel::Le, Expr::slot(0), Expr::slot(1));
    let mut entries = Vec::with_capacity(battery.len());
    for a in battery {
        if order == BaseOrder::Nat && a.base() != Sort::Nat {
            return Err(HyperError::UnsupportedTerm(format!("{a} is not ℕ-valued")));
        }
        if a.base() == Sort::Rat {
            return Err(HyperError::UnsupportedTerm(format!("{a} is not ℤ-valued")));
        }
        entries.push(WellOrderEntry {
            element: a.clone(),
            direct: compare2(&star_nu(a), &nu2(a), Rel::Le),
            via_set: nunustar_check(&le, a, a)?,
        });
    }
    let status = if entries.iter().any(|e| e.direct == Verdict::False) {
        WellOrderStatus::WitnessedNonWellOrdered
    } else if entries.iter().all(|e| e.direct == Verdict::True) {
        WellOrderStatus::ConsistentWithWellOrdered
    } else {
        WellOrderStatus::Inconclusive
    };
    Ok(WellOrderReport {
        order,
        entries,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::nu1;
    use crate::poly::q;

    fn battery() -> Vec<Hyper1> {
        vec![
            Hyper1::omega(),
            nu1(q(3)),
            Hyper1::from_expr(Expr::mul(Expr::int(2), Expr::inner())).unwrap(),
        ]
    }

    #[test]
    fn three_parts() {
        let w = Hyper1::omega();
        let b = battery();
        assert_eq!(partition_level2(&nu2(&nu1(q(5))), &b).unwrap(), Level2Class::StandardStandard);
        assert_eq!(partition_level2(&star_nu(&w), &b).unwrap(), Level2Class::StarNuOfUnlimited);
        assert_eq!(partition_level2(&nu2(&w), &b).unwrap(), Level2Class::StarUnlimited);
    }

    #[test]
    fn undecided_partition() {
        let par = Hyper1::from_expr(Expr::modulo(Expr::inner(), 2)).unwrap();
        assert!(matches!(
            partition_level2(&star_nu(&par), &battery()),
            Err(HyperError::UndecidedPartition(_))
        ));
    }

    #[test]
    fn naturals_pass_integers_fail() {
        let r = well_order_criterion(BaseOrder::Nat, &battery()).unwrap();
        assert_eq!(r.status, WellOrderStatus::ConsistentWithWellOrdered);
        let mw = Hyper1::from_expr(Expr::sub(Expr::int(0), Expr::inner())).unwrap();
        let r = well_order_criterion(BaseOrder::Int, &[mw]).unwrap();
        assert_eq!(r.status, WellOrderStatus::WitnessedNonWellOrdered);
        assert_eq!(r.entries[0].via_set, Verdict::False);
    }
}
