//! Exactness checks and the single-step extension of a local relator.

use super::cylinder::{Cylinder, Space};
use super::relator::LocalRelator;
use super::uf::{agree_by, pushes_to, uf_agree, uf_member, CylUF};
use super::LrError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// The first index (in order) realizing the new coordinate.
    Found(usize),
    NotExact,
}

/// `U` restricted to `B^I` must equal `L` pushed along `η`.
fn check_compatible(lr: &LocalRelator, eta: &[usize], u: &CylUF) -> Result<(), LrError> {
    let ni = eta.len();
    u.check_over(lr.nb(), ni + 1)?;
    let inc: Vec<usize> = (0..ni).collect();
    let lhs = |c: &Cylinder| uf_member(u, c);
    let rhs = |c: &Cylinder| uf_member(lr.uf(), &c.pullback(eta));
    if agree_by(lr.nb(), &inc, lhs, rhs)? {
        Ok(())
    } else {
        Err(LrError::IncompatibleUltrafilters)
    }
}

/// Search `E` for an image of the new coordinate `i = η.len()` such that the
/// extended `η` pulls `L` back to `U`.
pub fn exactness_step_check(lr: &LocalRelator, eta: &[usize], u: &CylUF) -> Result<Exactness, LrError> {
    check_compatible(lr, eta, u)?;
    for e in lr.coords() {
        let mut ext = eta.to_vec();
        ext.push(e);
        if pushes_to(lr.uf(), &ext, u, lr.nb())? {
            return Ok(Exactness::Found(e));
        }
    }
    Ok(Exactness::NotExact)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub lr: LocalRelator,
    pub e_new: usize,
    /// `L′` restricted to cylinders over `E` is `L`.
    pub projection_ok: bool,
    /// `L′` pulled back along the extended `η` is `U`.
    pub pullback_ok: bool,
}

impl Extension {
    pub fn verified(&self) -> bool {
        self.projection_ok && self.pullback_ok
    }
}

/// Greedy completion of the filter whose kernel is `kernel`.
///
/// Cylinders are taken by support size and then lexicographically by allowed
/// set; each is added when it meets the current kernel and its complement is
/// added otherwise. Single-coordinate cylinders come first and already fix
/// every coordinate to its least value compatible with earlier choices, so
/// the result is the principal ultrafilter at the least kernel point.
pub(crate) fn greedy_point(space: &Space, kernel: &[bool]) -> Option<Vec<usize>> {
    let mut alive: Vec<usize> = (0..space.points()).filter(|&i| kernel[i]).collect();
    if alive.is_empty() {
        return None;
    }
    for k in 0..space.coords.len() {
        let b = alive.iter().map(|&i| space.point(i)[k]).min()?;
        alive.retain(|&i| space.point(i)[k] == b);
    }
    Some(space.point(alive[0]))
}

/// Adjoin a fresh index realizing `U`, where the new coordinate of `U` is the
/// last one (`η.len()`).
pub fn extend_ultrafilter_step(lr: &LocalRelator, eta: &[usize], u: &CylUF) -> Result<Extension, LrError> {
    check_compatible(lr, eta, u)?;
    let nb = lr.nb();
    let e_new = lr.ne();
    let mut counter = e_new;
    let name = loop {
        let n = format!("e{counter}");
        if !lr.index().contains(&n) {
            break n;
        }
        counter += 1;
    };

    let l_coords = lr.coords();
    let mut coords = l_coords.clone();
    coords.push(e_new);
    let space = Space::new(nb, coords);
    let l_atom = lr.uf().atom(nb, &l_coords)?;
    let i_coords: Vec<usize> = (0..=eta.len()).collect();
    let u_atom = u.atom(nb, &i_coords)?;
    let mut ext = eta.to_vec();
    ext.push(e_new);
    let slots: Vec<usize> = ext
        .iter()
        .map(|&e| space.slot(e))
        .collect::<Option<_>>()
        .ok_or_else(|| LrError::SupportOutOfUniverse(eta.to_vec()))?;

    // Kernel of the filter generated by L (lifted) and U (pulled back).
    let kernel: Vec<bool> = (0..space.points())
        .map(|i| {
            let p = space.point(i);
            p[..l_coords.len()] == l_atom[..] && slots.iter().map(|&s| p[s]).eq(u_atom.iter().copied())
        })
        .collect();
    let point = greedy_point(&space, &kernel).ok_or_else(|| {
        LrError::ExtensionInfeasible("the generated family has empty intersection".into())
    })?;

    let uf = match lr.uf() {
        CylUF::PrincipalAt(_) => CylUF::PrincipalAt(point),
        CylUF::TableBacked { .. } => CylUF::table_at(nb, space.coords.clone(), &point)?,
    };
    let mut index = lr.index().to_vec();
    index.push(name);
    let next = LocalRelator::new(lr.base().to_vec(), index, uf)?;
    let projection_ok = uf_agree(next.uf(), lr.uf(), nb, &l_coords)?;
    let pullback_ok = pushes_to(next.uf(), &ext, u, nb)?;
    Ok(Extension {
        lr: next,
        e_new,
        projection_ok,
        pullback_ok,
    })
}
