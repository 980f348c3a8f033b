//! Transfer of first-order sentences to finite ultrapowers.

use std::collections::BTreeSet;

use super::formula::Formula;
use super::model::{eval_standard, tuples, Assignment, FiniteModel};
use super::ultrapower::{build_finite_ultrapower, lift_function, lift_relation, PowerQuotient};
use super::FolError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub standard: bool,
    pub star: bool,
}

impl TransferReport {
    pub fn agrees(&self) -> bool {
        self.standard == self.star
    }
}

/// Evaluate a sentence in `M` and, with constants read through `ν`, in `M^S/U`.
pub fn check_transfer(
    m: &FiniteModel,
    s: usize,
    s0: usize,
    phi: &Formula,
) -> Result<TransferReport, FolError> {
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(FolError::Unbound(v));
    }
    let u = build_finite_ultrapower(m, s, s0)?;
    let env = Assignment::new();
    Ok(TransferReport {
        standard: eval_standard(m, phi, &env)?,
        star: eval_standard(&u.model, phi, &env)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistsReport {
    /// `*` of the projection `{(x2…xn) : ∃x1 f(x1…xn)}`.
    pub lhs: BTreeSet<Vec<usize>>,
    /// Projection of `*f` along the first coordinate, inside the ultrapower.
    pub rhs: BTreeSet<Vec<usize>>,
    /// Whether the lifted choice map picks a witness for every point of `lhs`.
    pub skolem_lifts: bool,
}

impl ExistsReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.skolem_lifts
    }
}

/// Check that `*` commutes with the existential projection of a relation.
pub fn check_exists_commutation(
    m: &FiniteModel,
    s: usize,
    s0: usize,
    rel: &str,
) -> Result<ExistsReport, FolError> {
    let r = m
        .relations()
        .get(rel)
        .ok_or_else(|| FolError::SignatureMismatch(format!("unknown relation {rel}")))?;
    if r.sig.is_empty() {
        return Err(FolError::SignatureMismatch(format!("{rel} has no coordinate to project")));
    }
    let u = build_finite_ultrapower(m, s, s0)?;
    let qs: Vec<&PowerQuotient> = r.sig.iter().map(|c| &u.quotients[c]).collect();
    let n1 = m.carrier_size(&r.sig[0])?;
    let rest_sizes: Vec<usize> = r.sig[1..].iter().map(|c| m.carrier_size(c)).collect::<Result<_, _>>()?;

    let witness = |p: &[usize]| -> Option<usize> {
        (0..n1).find(|&x| {
            let mut t = vec![x];
            t.extend_from_slice(p);
            r.tuples.contains(&t)
        })
    };
    let proj: BTreeSet<Vec<usize>> = tuples(&rest_sizes)
        .into_iter()
        .filter(|p| witness(p).is_some())
        .collect();
    let lhs = lift_relation(&qs[1..], |t| proj.contains(t), &u.uf)?;

    let star_r = &u.model.relations()[rel].tuples;
    let rest_star: Vec<usize> = qs[1..].iter().map(|q| q.len()).collect();
    let rhs: BTreeSet<Vec<usize>> = tuples(&rest_star)
        .into_iter()
        .filter(|p| {
            (0..qs[0].len()).any(|x| {
                let mut t = vec![x];
                t.extend_from_slice(p);
                star_r.contains(&t)
            })
        })
        .collect();

    // Skolem map j on the projection (defaulting off it), lifted pointwise.
    let skolem_lifts = if n1 == 0 {
        lhs.is_empty()
    } else {
        let star_j = lift_function(&qs[1..], qs[0], |p| witness(p).unwrap_or(0), &u.uf)?;
        lhs.iter().all(|p| {
            let mut t = vec![star_j[p]];
            t.extend_from_slice(p);
            star_r.contains(&t)
        })
    };
    Ok(ExistsReport {
        lhs,
        rhs,
        skolem_lifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folcheck::formula::parse_formula;

    fn model(n: usize, rel: impl Fn(&[usize]) -> bool) -> FiniteModel {
        let mut m = FiniteModel::new();
        m.add_sized_carrier("A", n).unwrap();
        let ts = tuples(&[n, n]).into_iter().filter(|t| rel(t));
        m.add_relation("R", &["A", "A"], ts).unwrap();
        m
    }

    #[test]
    fn constants_and_tautologies() {
        let one = model(1, |_| false);
        let phi = parse_formula("(exists (x A) (not (= x (nu a0))))").unwrap();
        let r = check_transfer(&one, 3, 1, &phi).unwrap();
        assert_eq!(r, TransferReport { standard: false, star: false });
        let taut = parse_formula("(forall (x A) (or (R x x) (not (R x x))))").unwrap();
        let r = check_transfer(&model(3, |t| t[0] < t[1]), 2, 0, &taut).unwrap();
        assert_eq!(r, TransferReport { standard: true, star: true });
    }

    #[test]
    fn diagonal_projects_onto() {
        let m = model(3, |t| t[0] == t[1]);
        let r = check_exists_commutation(&m, 3, 2, "R").unwrap();
        assert!(r.holds());
        assert_eq!(r.lhs.len(), 3);
    }

    #[test]
    fn empty_relation_projects_to_nothing() {
        let m = model(3, |_| false);
        let r = check_exists_commutation(&m, 2, 1, "R").unwrap();
        assert!(r.holds());
        assert!(r.lhs.is_empty() && r.rhs.is_empty());
    }
}
