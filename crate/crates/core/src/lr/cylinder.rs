//! Cylinders: subsets of `B^E` that depend on finitely many coordinates.

use std::collections::BTreeSet;
use std::fmt;

use crate::folcheck::model::tuples;

/// The finite space `B^coords`, points in lexicographic order with the first
/// coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub nb: usize,
    pub coords: Vec<usize>,
}

impl Space {
    pub fn new(nb: usize, mut coords: Vec<usize>) -> Space {
        coords.sort_unstable();
        coords.dedup();
        Space { nb, coords }
    }

    pub fn points(&self) -> usize {
        self.nb.pow(self.coords.len() as u32)
    }

    pub fn point(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.coords.len()];
        let mut r = idx;
        for k in (0..self.coords.len()).rev() {
            out[k] = r % self.nb;
            r /= self.nb;
        }
        out
    }

    pub fn index(&self, p: &[usize]) -> usize {
        p.iter().fold(0, |acc, &b| acc * self.nb + b)
    }

    /// Position of coordinate `e`.
    pub fn slot(&self, e: usize) -> Option<usize> {
        self.coords.binary_search(&e).ok()
    }

    /// Mask of the points lying in `c`; `None` if `c` uses other coordinates.
    pub fn mask_of(&self, c: &Cylinder) -> Option<Vec<bool>> {
        let slots: Vec<usize> = c.support.iter().map(|&e| self.slot(e)).collect::<Option<_>>()?;
        Some(
            (0..self.points())
                .map(|i| {
                    let p = self.point(i);
                    c.allowed.contains(&slots.iter().map(|&s| p[s]).collect::<Vec<_>>())
                })
                .collect(),
        )
    }

    /// The cylinder whose points are the given mask.
    pub fn cylinder(&self, mask: &[bool]) -> Cylinder {
        let allowed = (0..self.points()).filter(|&i| mask[i]).map(|i| self.point(i));
        Cylinder::new(self.nb, self.coords.clone(), allowed)
    }
}

/// A subset of `B^E` given by a finite support and the allowed restrictions.
/// Always stored with minimal sorted support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    nb: usize,
    support: Vec<usize>,
    allowed: BTreeSet<Vec<usize>>,
}

impl Cylinder {
    /// `support` may be unsorted; `allowed` tuples follow its order.
    pub fn new(
        nb: usize,
        support: Vec<usize>,
        allowed: impl IntoIterator<Item = Vec<usize>>,
    ) -> Cylinder {
        let allowed: BTreeSet<Vec<usize>> = allowed.into_iter().collect();
        Cylinder::from_pred(nb, &support, |t| allowed.contains(t))
    }

    /// Cylinder of all `ψ` with `pred(ψ(e_1), …, ψ(e_k))`; repeated indices allowed.
    pub fn from_pred(nb: usize, es: &[usize], pred: impl Fn(&[usize]) -> bool) -> Cylinder {
        let space = Space::new(nb, es.to_vec());
        let slots: Vec<usize> = es.iter().map(|&e| space.slot(e).unwrap()).collect();
        let allowed = tuples(&vec![nb; space.coords.len()])
            .into_iter()
            .filter(|p| pred(&slots.iter().map(|&s| p[s]).collect::<Vec<_>>()))
            .collect();
        Cylinder {
            nb,
            support: space.coords,
            allowed,
        }
        .minimized()
    }

    pub fn full(nb: usize) -> Cylinder {
        Cylinder {
            nb,
            support: vec![],
            allowed: [vec![]].into(),
        }
    }

    pub fn empty(nb: usize) -> Cylinder {
        Cylinder {
            nb,
            support: vec![],
            allowed: BTreeSet::new(),
        }
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn allowed(&self) -> &BTreeSet<Vec<usize>> {
        &self.allowed
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.support.is_empty() && !self.allowed.is_empty()
    }

    /// Drop coordinates the allowed set does not depend on.
    fn minimized(mut self) -> Cylinder {
        loop {
            let k = self.support.len();
            let drop = (0..k).find(|&i| {
                self.allowed.iter().all(|t| {
                    (0..self.nb).all(|b| {
                        let mut u = t.clone();
                        u[i] = b;
                        self.allowed.contains(&u)
                    })
                })
            });
            let Some(i) = drop else { return self };
            self.support.remove(i);
            self.allowed = self
                .allowed
                .iter()
                .map(|t| {
                    let mut u = t.clone();
                    u.remove(i);
                    u
                })
                .collect();
        }
    }

    /// Whether the point `ψ` lies in the cylinder.
    pub fn contains(&self, psi: impl Fn(usize) -> usize) -> bool {
        self.allowed
            .contains(&self.support.iter().map(|&e| psi(e)).collect::<Vec<_>>())
    }

    fn combine(&self, o: &Cylinder, f: impl Fn(bool, bool) -> bool) -> Cylinder {
        let mut es = self.support.clone();
        es.extend_from_slice(&o.support);
        let space = Space::new(self.nb, es);
        let mask: Vec<bool> = (0..space.points())
            .map(|i| {
                let p = space.point(i);
                let at = |e: usize| p[space.slot(e).unwrap()];
                f(self.contains(at), o.contains(at))
            })
            .collect();
        space.cylinder(&mask)
    }

    pub fn complement(&self) -> Cylinder {
        let space = Space::new(self.nb, self.support.clone());
        let mask: Vec<bool> = (0..space.points())
            .map(|i| !self.allowed.contains(&space.point(i)))
            .collect();
        space.cylinder(&mask)
    }

    pub fn intersect(&self, o: &Cylinder) -> Cylinder {
        self.combine(o, |a, b| a && b)
    }

    pub fn union(&self, o: &Cylinder) -> Cylinder {
        self.combine(o, |a, b| a || b)
    }

    /// Preimage under `ψ ↦ ψ ∘ η`, where this cylinder lives in `B^I` and
    /// `eta[i]` is the image of `i`.
    pub fn pullback(&self, eta: &[usize]) -> Cylinder {
        let es: Vec<usize> = self.support.iter().map(|&i| eta[i]).collect();
        Cylinder::from_pred(self.nb, &es, |t| self.allowed.contains(t))
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(cyl {:?} {{", self.support)?;
        for (i, t) in self.allowed.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t:?}")?;
        }
        f.write_str("})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_support() {
        // ψ(0) = 1 written over coordinates {0, 2}.
        let c = Cylinder::new(2, vec![0, 2], vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(c.support(), &[0]);
        assert_eq!(c, Cylinder::new(2, vec![0], vec![vec![1]]));
        let all = Cylinder::from_pred(3, &[1, 4], |_| true);
        assert!(all.is_full());
    }

    #[test]
    fn boolean_operations() {
        let a = Cylinder::new(2, vec![0], vec![vec![1]]);
        let b = Cylinder::new(2, vec![1], vec![vec![0]]);
        let ab = a.intersect(&b);
        assert_eq!(ab.support(), &[0, 1]);
        assert_eq!(ab.allowed().len(), 1);
        assert_eq!(a.union(&a.complement()), Cylinder::full(2));
        assert_eq!(a.intersect(&a.complement()), Cylinder::empty(2));
    }

    #[test]
    fn pullback_along_a_constant_map() {
        // Diagonal of B^{0,1} pulled back along 0,1 ↦ 5 is everything.
        let diag = Cylinder::from_pred(3, &[0, 1], |t| t[0] == t[1]);
        assert!(diag.pullback(&[5, 5]).is_full());
        let off = diag.complement().pullback(&[5, 5]);
        assert!(off.is_empty());
    }

    #[test]
    fn space_indexing_round_trips() {
        let s = Space::new(3, vec![4, 1]);
        assert_eq!(s.coords, vec![1, 4]);
        for i in 0..s.points() {
            assert_eq!(s.index(&s.point(i)), i);
        }
    }
}
