//! Ultrafilters on the cylinder algebra.

use super::cylinder::{Cylinder, Space};
use super::LrError;

/// Largest table-backed universe, in points of `B^U`.
pub const MAX_TABLE_POINTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CylUF {
    /// All cylinders containing the point `ψ₀`, given as a total map `E → B`.
    PrincipalAt(Vec<usize>),
    /// A decision table over subsets of `B^universe`, indexed by bitmask
    /// (bit `i` is the `i`-th point in [`Space`] order).
    TableBacked {
        nb: usize,
        universe: Vec<usize>,
        table: Vec<bool>,
    },
}

pub(crate) fn bits(mask: &[bool]) -> usize {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

impl CylUF {
    /// Build and validate a table-backed ultrafilter.
    pub fn table(nb: usize, universe: Vec<usize>, table: Vec<bool>) -> Result<CylUF, LrError> {
        let space = Space::new(nb, universe);
        let n = space.points();
        if n > MAX_TABLE_POINTS {
            return Err(LrError::TooLarge(format!("{n} points in the table universe")));
        }
        if table.len() != 1 << n {
            return Err(LrError::InvalidUltrafilter(format!(
                "table has {} entries, expected {}",
                table.len(),
                1usize << n
            )));
        }
        let full = (1usize << n) - 1;
        if table[0] || !table[full] {
            return Err(LrError::InvalidUltrafilter("not proper".into()));
        }
        if let Some(m) = (0..=full).find(|&m| table[m] == table[full ^ m]) {
            return Err(LrError::InvalidUltrafilter(format!(
                "exactly one of {m:#b} and its complement must belong"
            )));
        }
        let members: Vec<usize> = (0..=full).filter(|&m| table[m]).collect();
        for &a in &members {
            if let Some(&b) = members.iter().find(|&&b| !table[a & b]) {
                return Err(LrError::InvalidUltrafilter(format!(
                    "{a:#b} and {b:#b} belong but their intersection does not"
                )));
            }
        }
        Ok(CylUF::TableBacked {
            nb,
            universe: space.coords,
            table,
        })
    }

    /// The table of the principal ultrafilter at `point ∈ B^universe`.
    pub fn table_at(nb: usize, universe: Vec<usize>, point: &[usize]) -> Result<CylUF, LrError> {
        let space = Space::new(nb, universe);
        if point.len() != space.coords.len() || point.iter().any(|&b| b >= nb) {
            return Err(LrError::InvalidUltrafilter(format!("bad point {point:?}")));
        }
        let bit = space.index(point);
        let table = (0..1usize << space.points()).map(|m| m >> bit & 1 == 1).collect();
        CylUF::table(nb, space.coords, table)
    }

    /// Coordinates on which membership is decidable; `None` means all of `E`.
    pub fn universe(&self) -> Option<&[usize]> {
        match self {
            CylUF::PrincipalAt(_) => None,
            CylUF::TableBacked { universe, .. } => Some(universe),
        }
    }

    /// The point of `B^coords` whose singleton belongs to the ultrafilter.
    pub fn atom(&self, nb: usize, coords: &[usize]) -> Result<Vec<usize>, LrError> {
        let space = Space::new(nb, coords.to_vec());
        for i in 0..space.points() {
            let p = space.point(i);
            if uf_member(self, &Cylinder::new(nb, space.coords.clone(), [p.clone()]))? {
                return Ok(p);
            }
        }
        Err(LrError::InvalidUltrafilter("no atom".into()))
    }

    /// Check the ultrafilter against a base of size `nb` and index set of size `ne`.
    pub fn check_over(&self, nb: usize, ne: usize) -> Result<(), LrError> {
        match self {
            CylUF::PrincipalAt(p) => {
                if p.len() != ne || p.iter().any(|&b| b >= nb) {
                    return Err(LrError::InvalidUltrafilter(format!(
                        "point {p:?} is not a map from {ne} indices to {nb} values"
                    )));
                }
            }
            CylUF::TableBacked { nb: n, universe, .. } => {
                if *n != nb || universe.iter().any(|&e| e >= ne) {
                    return Err(LrError::InvalidUltrafilter(
                        "table universe does not fit the index set".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Membership of a cylinder.
pub fn uf_member(l: &CylUF, c: &Cylinder) -> Result<bool, LrError> {
    match l {
        CylUF::PrincipalAt(p) => {
            if c.support().iter().any(|&e| e >= p.len()) {
                return Err(LrError::SupportOutOfUniverse(c.support().to_vec()));
            }
            Ok(c.contains(|e| p[e]))
        }
        CylUF::TableBacked {
            nb,
            universe,
            table,
        } => {
            let space = Space {
                nb: *nb,
                coords: universe.clone(),
            };
            let mask = space
                .mask_of(c)
                .ok_or_else(|| LrError::SupportOutOfUniverse(c.support().to_vec()))?;
            Ok(table[bits(&mask)])
        }
    }
}

/// The image of `L` under `B^E → B^I`, `ψ ↦ ψ∘η`, with `I = 0..η.len()`.
pub fn push_forward(l: &CylUF, eta: &[usize]) -> Result<CylUF, LrError> {
    match l {
        CylUF::PrincipalAt(p) => eta
            .iter()
            .map(|&e| p.get(e).copied())
            .collect::<Option<Vec<_>>>()
            .map(CylUF::PrincipalAt)
            .ok_or_else(|| LrError::SupportOutOfUniverse(eta.to_vec())),
        CylUF::TableBacked {
            nb,
            universe,
            table,
        } => {
            let src = Space {
                nb: *nb,
                coords: universe.clone(),
            };
            let slots: Vec<usize> = eta
                .iter()
                .map(|&e| src.slot(e))
                .collect::<Option<_>>()
                .ok_or_else(|| LrError::SupportOutOfUniverse(eta.to_vec()))?;
            let dst = Space::new(*nb, (0..eta.len()).collect());
            if dst.points() > MAX_TABLE_POINTS {
                return Err(LrError::TooLarge(format!("{} points in B^I", dst.points())));
            }
            // Image of each source point in B^I.
            let image: Vec<usize> = (0..src.points())
                .map(|q| {
                    let p = src.point(q);
                    dst.index(&slots.iter().map(|&s| p[s]).collect::<Vec<_>>())
                })
                .collect();
            let out = (0..1usize << dst.points())
                .map(|d| {
                    let pre = image
                        .iter()
                        .enumerate()
                        .filter(|(_, &j)| d >> j & 1 == 1)
                        .fold(0, |acc, (q, _)| acc | 1 << q);
                    table[pre]
                })
                .collect();
            CylUF::table(*nb, dst.coords, out)
        }
    }
}

/// Whether two membership tests agree on the cylinders supported in
/// `coords`.
///
/// Every subset is compared when `B^coords` is small; otherwise the atoms
/// are, which determines an ultrafilter on a finite algebra.
pub fn agree_by(
    nb: usize,
    coords: &[usize],
    a: impl Fn(&Cylinder) -> Result<bool, LrError>,
    b: impl Fn(&Cylinder) -> Result<bool, LrError>,
) -> Result<bool, LrError> {
    let space = Space::new(nb, coords.to_vec());
    let n = space.points();
    if n <= MAX_TABLE_POINTS {
        for m in 0..1usize << n {
            let mask: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            let c = space.cylinder(&mask);
            if a(&c)? != b(&c)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for i in 0..n {
        let c = Cylinder::new(nb, space.coords.clone(), [space.point(i)]);
        if a(&c)? != b(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether two ultrafilters agree on the cylinders supported in `coords`.
pub fn uf_agree(a: &CylUF, b: &CylUF, nb: usize, coords: &[usize]) -> Result<bool, LrError> {
    agree_by(nb, coords, |c| uf_member(a, c), |c| uf_member(b, c))
}

/// Whether `L` pushed along `η` agrees with `U` on `B^{0..η.len()}`, without
/// materializing the pushforward.
pub fn pushes_to(l: &CylUF, eta: &[usize], u: &CylUF, nb: usize) -> Result<bool, LrError> {
    let coords: Vec<usize> = (0..eta.len()).collect();
    agree_by(nb, &coords, |c| uf_member(l, &c.pullback(eta)), |c| uf_member(u, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_membership() {
        let l = CylUF::PrincipalAt(vec![1, 0, 1]);
        assert!(uf_member(&l, &Cylinder::new(2, vec![0], [vec![1]])).unwrap());
        assert!(!uf_member(&l, &Cylinder::empty(2)).unwrap());
        assert!(uf_member(&l, &Cylinder::full(2)).unwrap());
        assert!(uf_member(&l, &Cylinder::new(2, vec![7], [vec![1]])).is_err());
    }

    #[test]
    fn table_axioms_rejected() {
        // Everything nonempty belongs: not complement-complete.
        let t: Vec<bool> = (0..16).map(|m| m != 0).collect();
        assert!(CylUF::table(2, vec![0, 1], t).is_err());
        assert!(CylUF::table(2, vec![0, 1], vec![false; 3]).is_err());
    }

    #[test]
    fn every_table_over_two_coordinates() {
        // Oracle: of all 2^16 tables on the 16 subsets of B^U (|B| = |U| = 2),
        // the valid ones are exactly the 4 principal ones.
        let mut valid = 0;
        for t in 0u32..1 << 16 {
            let table: Vec<bool> = (0..16).map(|m| t >> m & 1 == 1).collect();
            if let Ok(l) = CylUF::table(2, vec![0, 1], table) {
                valid += 1;
                let c = Cylinder::new(2, vec![0], [vec![0]]);
                assert_ne!(uf_member(&l, &c).unwrap(), uf_member(&l, &c.complement()).unwrap());
            }
        }
        assert_eq!(valid, 4);
    }

    #[test]
    fn push_forward_principal_and_constant() {
        let l = CylUF::PrincipalAt(vec![0, 1, 1]);
        assert_eq!(push_forward(&l, &[2, 0]).unwrap(), CylUF::PrincipalAt(vec![1, 0]));
        let t = CylUF::table_at(2, vec![0, 1], &[1, 0]).unwrap();
        let d = push_forward(&t, &[1, 1, 1]).unwrap();
        let diag = Cylinder::from_pred(2, &[0, 1, 2], |v| v[0] == v[1] && v[1] == v[2]);
        assert!(uf_member(&d, &diag).unwrap());
        assert!(uf_agree(&push_forward(&t, &[0, 1]).unwrap(), &t, 2, &[0, 1]).unwrap());
    }
}
