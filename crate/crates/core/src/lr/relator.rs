//! Local relators, relation transfer and the cylindrical ultrapower.

use super::cylinder::{Cylinder, Space};
use super::uf::{push_forward, uf_member, CylUF};
use super::LrError;
use crate::folcheck::model::tuples;

/// Largest number of maps `B^U → X` enumerated when listing classes.
const MAX_MAPS: usize = 1 << 16;

/// An ultrafilter `L` on the cylinder algebra of `B^E`, with names for the
/// elements of `B` and `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRelator {
    base: Vec<String>,
    index: Vec<String>,
    uf: CylUF,
}

impl LocalRelator {
    pub fn new(base: Vec<String>, index: Vec<String>, uf: CylUF) -> Result<LocalRelator, LrError> {
        if base.is_empty() {
            return Err(LrError::Invalid("the base set is empty".into()));
        }
        for names in [&base, &index] {
            let mut sorted = names.clone();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(LrError::Invalid(format!("duplicate name {}", w[0])));
            }
        }
        uf.check_over(base.len(), index.len())?;
        Ok(LocalRelator { base, index, uf })
    }

    /// Base `{b0, …}` and indices `{e0, …}` with generated names.
    pub fn sized(nb: usize, ne: usize, uf: CylUF) -> Result<LocalRelator, LrError> {
        let names = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect();
        LocalRelator::new(names("b", nb), names("e", ne), uf)
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn index(&self) -> &[String] {
        &self.index
    }

    pub fn uf(&self) -> &CylUF {
        &self.uf
    }

    pub fn nb(&self) -> usize {
        self.base.len()
    }

    pub fn ne(&self) -> usize {
        self.index.len()
    }

    /// Indices on which membership is decidable.
    pub fn coords(&self) -> Vec<usize> {
        match self.uf.universe() {
            Some(u) => u.to_vec(),
            None => (0..self.ne()).collect(),
        }
    }

    pub fn is_separated(&self) -> Result<bool, LrError> {
        let cs = self.coords();
        for (i, &a) in cs.iter().enumerate() {
            for &b in &cs[i + 1..] {
                if transfer_relation(self, |t| t[0] == t[1], &[a, b])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Whether `(ψ_{e1}, …, ψ_{en}) ∈ R` holds modulo `L`.
pub fn transfer_relation(
    lr: &LocalRelator,
    r: impl Fn(&[usize]) -> bool,
    es: &[usize],
) -> Result<bool, LrError> {
    uf_member(&lr.uf, &Cylinder::from_pred(lr.nb(), es, r))
}

/// `E` modulo diagonal transfer, with `L` pushed to the least index of each
/// class. Indices outside a table-backed universe are dropped. Returns the
/// separated relator and the class of each original index.
pub fn separation_quotient(lr: &LocalRelator) -> Result<(LocalRelator, Vec<Option<usize>>), LrError> {
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![None; lr.ne()];
    for e in lr.coords() {
        let mut found = None;
        for (k, &r) in reps.iter().enumerate() {
            if transfer_relation(lr, |t| t[0] == t[1], &[r, e])? {
                found = Some(k);
                break;
            }
        }
        class_of[e] = Some(found.unwrap_or_else(|| {
            reps.push(e);
            reps.len() - 1
        }));
    }
    let uf = push_forward(&lr.uf, &reps)?;
    let index = reps.iter().map(|&r| lr.index[r].clone()).collect();
    Ok((LocalRelator::new(lr.base.clone(), index, uf)?, class_of))
}

/// A map `B^E → X` depending on `support`, stored as a table over
/// `B^support` in [`Space`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylUltraElem {
    nb: usize,
    support: Vec<usize>,
    table: Vec<usize>,
    nx: usize,
}

impl CylUltraElem {
    pub fn new(nb: usize, support: Vec<usize>, table: Vec<usize>, nx: usize) -> Result<CylUltraElem, LrError> {
        let space = Space::new(nb, support.clone());
        if space.coords != support {
            return Err(LrError::Invalid("support must be sorted and distinct".into()));
        }
        if table.len() != space.points() || table.iter().any(|&x| x >= nx) {
            return Err(LrError::Invalid(format!(
                "table of length {} does not map B^{:?} into {nx} values",
                table.len(),
                support
            )));
        }
        Ok(CylUltraElem {
            nb,
            support,
            table,
            nx,
        })
    }

    /// The element `ψ ↦ f(ψ_{e1}, …, ψ_{ek})`; indices may repeat.
    pub fn from_fn(nb: usize, es: &[usize], nx: usize, f: impl Fn(&[usize]) -> usize) -> CylUltraElem {
        let space = Space::new(nb, es.to_vec());
        let slots: Vec<usize> = es.iter().map(|&e| space.slot(e).unwrap()).collect();
        let table = (0..space.points())
            .map(|i| {
                let p = space.point(i);
                f(&slots.iter().map(|&s| p[s]).collect::<Vec<_>>())
            })
            .collect();
        CylUltraElem {
            nb,
            support: space.coords,
            table,
            nx,
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn eval(&self, psi: impl Fn(usize) -> usize) -> usize {
        let p: Vec<usize> = self.support.iter().map(|&e| psi(e)).collect();
        self.table[p.iter().fold(0, |acc, &b| acc * self.nb + b)]
    }

    /// The set where the two maps agree.
    pub fn agreement(&self, o: &CylUltraElem) -> Cylinder {
        let mut es = self.support.clone();
        es.extend_from_slice(&o.support);
        let space = Space::new(self.nb, es);
        Cylinder::from_pred(self.nb, &space.coords.clone(), |p| {
            let at = |e: usize| p[space.slot(e).unwrap()];
            self.eval(at) == o.eval(at)
        })
    }

    /// Equality in the cylindrical ultrapower.
    pub fn equals(&self, o: &CylUltraElem, lr: &LocalRelator) -> Result<bool, LrError> {
        uf_member(&lr.uf, &self.agreement(o))
    }
}

/// `γ_B(e)`: the class of the projection `ψ ↦ ψ_e`.
pub fn gamma_b(lr: &LocalRelator, e: usize) -> CylUltraElem {
    CylUltraElem::from_fn(lr.nb(), &[e], lr.nb(), |t| t[0])
}

/// `*f(x)`, the class of `f ∘ rep`.
pub fn cyl_ultrapower_star(f: &[usize], ny: usize, x: &CylUltraElem) -> Result<CylUltraElem, LrError> {
    if f.len() != x.nx || f.iter().any(|&y| y >= ny) {
        return Err(LrError::Invalid(format!("f is not a map from {} to {ny} values", x.nx)));
    }
    Ok(CylUltraElem {
        nb: x.nb,
        support: x.support.clone(),
        table: x.table.iter().map(|&v| f[v]).collect(),
        nx: ny,
    })
}

/// One representative per class of maps `B^coords → X`, in enumeration order.
pub fn cyl_ultrapower(lr: &LocalRelator, nx: usize) -> Result<Vec<CylUltraElem>, LrError> {
    let coords = lr.coords();
    let space = Space::new(lr.nb(), coords.clone());
    let count = (nx as f64).powi(space.points() as i32);
    if count > MAX_MAPS as f64 {
        return Err(LrError::TooLarge(format!("{count} maps B^U → X")));
    }
    let mut reps: Vec<CylUltraElem> = Vec::new();
    for t in tuples(&vec![nx; space.points()]) {
        let x = CylUltraElem::new(lr.nb(), space.coords.clone(), t, nx)?;
        let mut seen = false;
        for r in &reps {
            if r.equals(&x, lr)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(x);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn principal(nb: usize, p: Vec<usize>) -> LocalRelator {
        LocalRelator::sized(nb, p.len(), CylUF::PrincipalAt(p)).unwrap()
    }

    #[test]
    fn transfer_reads_the_point() {
        let lr = principal(3, vec![2, 0, 2]);
        assert!(transfer_relation(&lr, |t| t[0] > t[1], &[0, 1]).unwrap());
        assert!(transfer_relation(&lr, |_| true, &[]).unwrap());
        // A coincident pair: the lr is not separated.
        assert!(transfer_relation(&lr, |t| t[0] == t[1], &[0, 2]).unwrap());
        assert!(!lr.is_separated().unwrap());
    }

    #[test]
    fn quotients() {
        let lr = principal(3, vec![0, 1, 2]);
        let (q, cls) = separation_quotient(&lr).unwrap();
        assert_eq!(q.ne(), 3);
        assert_eq!(cls, vec![Some(0), Some(1), Some(2)]);
        let (q, _) = separation_quotient(&principal(2, vec![1, 1, 1])).unwrap();
        assert_eq!(q.ne(), 1);
        assert!(q.is_separated().unwrap());
    }

    #[test]
    fn gamma_identifies_equal_values() {
        let lr = principal(2, vec![0, 1, 0]);
        let g: Vec<CylUltraElem> = (0..3).map(|e| gamma_b(&lr, e)).collect();
        assert!(g[0].equals(&g[2], &lr).unwrap());
        assert!(!g[0].equals(&g[1], &lr).unwrap());
    }

    #[test]
    fn star_respects_classes() {
        let lr = principal(2, vec![1, 0]);
        let x = CylUltraElem::from_fn(2, &[0, 1], 3, |t| t[0] + t[1]);
        let y = CylUltraElem::from_fn(2, &[0], 3, |t| t[0]);
        assert!(x.equals(&y, &lr).unwrap());
        let f = [2, 0, 1];
        let (fx, fy) = (cyl_ultrapower_star(&f, 3, &x).unwrap(), cyl_ultrapower_star(&f, 3, &y).unwrap());
        assert!(fx.equals(&fy, &lr).unwrap());
        assert_eq!(cyl_ultrapower(&lr, 3).unwrap().len(), 3);
    }
}
