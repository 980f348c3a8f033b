//! The equivalence between the cylindrical ultrapower and the analysis a
//! local relator induces, checked by building `α` and `γ` on finite classes.
//!
//! The induced analysis sends `X` to the cylindrical ultrapower `*X`. It
//! induces on `B` the relator `(E′, L′)` with `E′ = *B` and `D ∈ L′` iff the
//! cylinder `{ψ : (u₁(ψ), …, uₙ(ψ)) ∈ D}` is in `L`. Writing `*′X` for the
//! cylindrical ultrapower with respect to `(E′, L′)`:
//!
//! * `α(*′x) = (*f)(u₁, …, uₙ)` for a representative `ψ′ ↦ f(ψ′_{u₁}, …)`;
//! * `γ(x) = [ψ′ ↦ f(ψ′_u)]` for any `f: B → X` and `u ∈ *B` with `x = (*f)(u)`.

use super::cylinder::{Cylinder, Space};
use super::relator::{cyl_ultrapower, gamma_b, CylUltraElem, LocalRelator};
use super::uf::{uf_member, CylUF, MAX_TABLE_POINTS};
use super::LrError;
use crate::folcheck::model::tuples;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    /// Classes of `*X` for the given relator.
    pub star_classes: usize,
    /// Size of `E′ = *B`.
    pub induced_index: usize,
    /// Classes of `*′X` for the induced relator.
    pub induced_classes: usize,
    /// `L′` is the principal ultrafilter at its atom on every cylinder checked.
    pub induced_uf_valid: bool,
    /// Every choice of `(f, u)` gives the same `γ(x)`, and one exists.
    pub gamma_well_defined: bool,
    pub alpha_gamma_identity: bool,
    pub gamma_alpha_identity: bool,
    /// For `X = B`: `γ` sends each `γ_B(e)` to the projection at its class.
    pub projections_fixed: Option<bool>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.induced_uf_valid
            && self.gamma_well_defined
            && self.alpha_gamma_identity
            && self.gamma_alpha_identity
            && self.projections_fixed != Some(false)
    }
}

/// `ψ ↦ f(r₁(ψ), …, rₙ(ψ))`.
fn compose(nb: usize, rs: &[&CylUltraElem], nx: usize, f: impl Fn(&[usize]) -> usize) -> CylUltraElem {
    let es: Vec<usize> = rs.iter().flat_map(|r| r.support().iter().copied()).collect();
    let space = Space::new(nb, es);
    CylUltraElem::from_fn(nb, &space.coords.clone(), nx, |vals| {
        let at = |e: usize| vals[space.slot(e).unwrap()];
        f(&rs.iter().map(|r| r.eval(at)).collect::<Vec<_>>())
    })
}

fn class_index(reps: &[CylUltraElem], x: &CylUltraElem, lr: &LocalRelator) -> Result<Option<usize>, LrError> {
    for (i, r) in reps.iter().enumerate() {
        if r.equals(x, lr)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Build `α` and `γ` for the analysis induced by `lr` and check that both
/// composites are identities on `X = {0, …, nx-1}`.
pub fn alpha_gamma_roundtrip_check(lr: &LocalRelator, nx: usize) -> Result<RoundtripReport, LrError> {
    let nb = lr.nb();
    let star_x = cyl_ultrapower(lr, nx)?;
    let star_b = cyl_ultrapower(lr, nb)?;
    let k = star_b.len();

    // L′ through its definition, then as the principal ultrafilter at its atom.
    let induced_member = |c: &Cylinder| -> Result<bool, LrError> {
        let rs: Vec<&CylUltraElem> = c.support().iter().map(|&u| &star_b[u]).collect();
        let indicator = compose(nb, &rs, 2, |v| c.allowed().contains(v) as usize);
        let pulled = Cylinder::from_pred(nb, indicator.support(), |p| {
            let space = Space::new(nb, indicator.support().to_vec());
            indicator.table()[space.index(p)] == 1
        });
        uf_member(lr.uf(), &pulled)
    };
    let e_space = Space::new(nb, (0..k).collect());
    let mut atom = None;
    for i in 0..e_space.points() {
        let p = e_space.point(i);
        if induced_member(&Cylinder::new(nb, e_space.coords.clone(), [p.clone()]))? {
            atom.get_or_insert(p);
        }
    }
    let Some(atom) = atom else {
        return Err(LrError::InvalidUltrafilter("the induced relator has no atom".into()));
    };
    let l_prime = CylUF::PrincipalAt(atom);
    let mut induced_uf_valid = true;
    let n = e_space.points();
    if n <= MAX_TABLE_POINTS {
        for m in 0..1usize << n {
            let mask: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            let c = e_space.cylinder(&mask);
            induced_uf_valid &= induced_member(&c)? == uf_member(&l_prime, &c)?;
        }
    } else {
        for i in 0..n {
            let c = Cylinder::new(nb, e_space.coords.clone(), [e_space.point(i)]);
            induced_uf_valid &= induced_member(&c)? == uf_member(&l_prime, &c)?;
        }
    }
    let names = (0..k).map(|u| format!("u{u}")).collect();
    let lr_prime = LocalRelator::new(lr.base().to_vec(), names, l_prime)?;
    let star_prime = cyl_ultrapower(&lr_prime, nx)?;

    let alpha = |x: &CylUltraElem| -> Result<Option<usize>, LrError> {
        let rs: Vec<&CylUltraElem> = x.support().iter().map(|&u| &star_b[u]).collect();
        let sp = Space::new(nb, x.support().to_vec());
        let img = compose(nb, &rs, nx, |v| x.table()[sp.index(v)]);
        class_index(&star_x, &img, lr)
    };

    let maps = tuples(&vec![nx; nb]);
    let mut gamma_well_defined = true;
    let mut gamma: Vec<Option<usize>> = Vec::with_capacity(star_x.len());
    for x in &star_x {
        let mut value: Option<usize> = None;
        for f in &maps {
            for u in 0..k {
                let fu = compose(nb, &[&star_b[u]], nx, |v| f[v[0]]);
                if !fu.equals(x, lr)? {
                    continue;
                }
                let y = CylUltraElem::from_fn(nb, &[u], nx, |v| f[v[0]]);
                let c = class_index(&star_prime, &y, &lr_prime)?;
                match (value, c) {
                    (_, None) => gamma_well_defined = false,
                    (None, Some(c)) => value = Some(c),
                    (Some(v), Some(c)) => gamma_well_defined &= v == c,
                }
            }
        }
        gamma_well_defined &= value.is_some();
        gamma.push(value);
    }

    let mut alpha_gamma_identity = true;
    for (i, g) in gamma.iter().enumerate() {
        let back = match g {
            Some(j) => alpha(&star_prime[*j])?,
            None => None,
        };
        alpha_gamma_identity &= back == Some(i);
    }
    let mut gamma_alpha_identity = true;
    for (j, x) in star_prime.iter().enumerate() {
        let back = alpha(x)?.and_then(|i| gamma[i]);
        gamma_alpha_identity &= back == Some(j);
    }

    let projections_fixed = if nx == nb {
        let mut ok = true;
        for e in lr.coords() {
            let g = gamma_b(lr, e);
            let (Some(i), Some(u)) = (class_index(&star_x, &g, lr)?, class_index(&star_b, &g, lr)?) else {
                ok = false;
                continue;
            };
            let proj = CylUltraElem::from_fn(nb, &[u], nb, |v| v[0]);
            ok &= gamma[i].is_some() && gamma[i] == class_index(&star_prime, &proj, &lr_prime)?;
        }
        Some(ok)
    } else {
        None
    };

    Ok(RoundtripReport {
        star_classes: star_x.len(),
        induced_index: k,
        induced_classes: star_prime.len(),
        induced_uf_valid,
        gamma_well_defined,
        alpha_gamma_identity,
        gamma_alpha_identity,
        projections_fixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_two_by_two() {
        for p in tuples(&[2, 2]) {
            let lr = LocalRelator::sized(2, 2, CylUF::PrincipalAt(p)).unwrap();
            for nx in 1..=2 {
                let r = alpha_gamma_roundtrip_check(&lr, nx).unwrap();
                assert!(r.passed(), "{r:?}");
                assert_eq!(r.star_classes, nx);
                assert_eq!(r.induced_classes, nx);
            }
        }
    }

    #[test]
    fn table_backed_universe() {
        let uf = CylUF::table_at(2, vec![0, 2], &[1, 0]).unwrap();
        let lr = LocalRelator::sized(2, 3, uf).unwrap();
        let r = alpha_gamma_roundtrip_check(&lr, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.projections_fixed, Some(true));
    }
}
