//! Ultrapowers of finite structures over a finite index set.
//!
//! Every ultrafilter on a finite set is principal, so the ultrapower is
//! isomorphic to the original structure through `ν`. The construction below
//! nevertheless follows the general definition (tuples in `A^S`, equality on
//! a set of indices in the ultrafilter, relations and functions lifted
//! pointwise) so that it checks the machinery rather than assuming the
//! collapse.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::model::{tuples, FiniteModel};
use super::FolError;

/// The principal ultrafilter on `{0, …, size-1}` at `point`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrincipalUf {
    size: usize,
    point: usize,
}

impl PrincipalUf {
    pub fn new(size: usize, point: usize) -> Result<PrincipalUf, FolError> {
        if point >= size {
            return Err(FolError::InvalidIndex(format!(
                "point {point} outside an index set of size {size}"
            )));
        }
        Ok(PrincipalUf { size, point })
    }

    /// All ultrafilters on an index set of the given size.
    pub fn all(size: usize) -> Vec<PrincipalUf> {
        (0..size).map(|point| PrincipalUf { size, point }).collect()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn contains(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.point)
    }

    /// Whether `{s : pred(s)}` belongs to the ultrafilter.
    pub fn holds(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.contains(&(0..self.size).filter(|&s| pred(s)).collect())
    }
}

/// `A^S` modulo the ultrafilter.
#[derive(Clone, Debug)]
pub struct PowerQuotient {
    /// Canonical (lexicographically least) representative of each class.
    pub reps: Vec<Vec<usize>>,
    /// Every tuple of each class.
    pub members: Vec<Vec<Vec<usize>>>,
    class_of: HashMap<Vec<usize>, usize>,
}

impl PowerQuotient {
    pub fn new(carrier: usize, uf: &PrincipalUf) -> PowerQuotient {
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut members: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut class_of = HashMap::new();
        for t in tuples(&vec![carrier; uf.size()]) {
            let c = reps
                .iter()
                .position(|r| uf.holds(|s| r[s] == t[s]))
                .unwrap_or_else(|| {
                    reps.push(t.clone());
                    members.push(Vec::new());
                    reps.len() - 1
                });
            members[c].push(t.clone());
            class_of.insert(t, c);
        }
        PowerQuotient {
            reps,
            members,
            class_of,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, t: &[usize]) -> usize {
        self.class_of[t]
    }

    /// `ν(a)`: the class of the constant tuple.
    pub fn nu(&self, a: usize, size: usize) -> usize {
        self.class_of(&vec![a; size])
    }
}

/// Pointwise lift of a relation to classes, checked on every representative.
pub fn lift_relation(
    sig: &[&PowerQuotient],
    holds: impl Fn(&[usize]) -> bool,
    uf: &PrincipalUf,
) -> Result<BTreeSet<Vec<usize>>, FolError> {
    let sizes: Vec<usize> = sig.iter().map(|q| q.len()).collect();
    let mut out = BTreeSet::new();
    for cls in tuples(&sizes) {
        let mut verdict = None;
        let choices: Vec<usize> = cls.iter().zip(sig).map(|(&c, q)| q.members[c].len()).collect();
        for pick in tuples(&choices) {
            let reps: Vec<&Vec<usize>> = pick
                .iter()
                .zip(&cls)
                .zip(sig)
                .map(|((&i, &c), q)| &q.members[c][i])
                .collect();
            let v = uf.holds(|s| holds(&reps.iter().map(|r| r[s]).collect::<Vec<_>>()));
            match verdict {
                None => verdict = Some(v),
                Some(w) if w != v => {
                    return Err(FolError::Internal(format!(
                        "lifted relation depends on the representative at classes {cls:?}"
                    )))
                }
                _ => {}
            }
        }
        if verdict.unwrap_or(false) {
            out.insert(cls);
        }
    }
    Ok(out)
}

/// Pointwise lift of a function to classes, checked on every representative.
pub fn lift_function(
    dom: &[&PowerQuotient],
    cod: &PowerQuotient,
    f: impl Fn(&[usize]) -> usize,
    uf: &PrincipalUf,
) -> Result<BTreeMap<Vec<usize>, usize>, FolError> {
    let sizes: Vec<usize> = dom.iter().map(|q| q.len()).collect();
    let mut out = BTreeMap::new();
    for cls in tuples(&sizes) {
        let mut value = None;
        let choices: Vec<usize> = cls.iter().zip(dom).map(|(&c, q)| q.members[c].len()).collect();
        for pick in tuples(&choices) {
            let reps: Vec<&Vec<usize>> = pick
                .iter()
                .zip(&cls)
                .zip(dom)
                .map(|((&i, &c), q)| &q.members[c][i])
                .collect();
            let image: Vec<usize> = (0..uf.size())
                .map(|s| f(&reps.iter().map(|r| r[s]).collect::<Vec<_>>()))
                .collect();
            let c = cod.class_of(&image);
            match value {
                None => value = Some(c),
                Some(d) if d != c => {
                    return Err(FolError::Internal(format!(
                        "lifted function depends on the representative at classes {cls:?}"
                    )))
                }
                _ => {}
            }
        }
        if let Some(v) = value {
            out.insert(cls, v);
        }
    }
    Ok(out)
}

/// The ultrapower structure together with its quotients and `ν` maps.
#[derive(Clone, Debug)]
pub struct FiniteUltrapower {
    pub model: FiniteModel,
    pub uf: PrincipalUf,
    pub quotients: BTreeMap<String, PowerQuotient>,
    /// Per carrier, `ν` as a map from standard elements to classes.
    pub nu: BTreeMap<String, Vec<usize>>,
}

impl FiniteUltrapower {
    /// Whether every `ν` is a bijection onto its ultrapower carrier.
    pub fn nu_is_bijective(&self) -> bool {
        self.nu.iter().all(|(c, map)| {
            let img: BTreeSet<usize> = map.iter().copied().collect();
            img.len() == map.len() && img.len() == self.quotients[c].len()
        })
    }
}

fn class_name(q: &PowerQuotient, c: usize, atoms: &[String]) -> String {
    let parts: Vec<&str> = q.reps[c].iter().map(|&a| atoms[a].as_str()).collect();
    format!("[{}]", parts.join("."))
}

/// Build `M^S/U` for the principal ultrafilter at `s0`.
pub fn build_finite_ultrapower(
    m: &FiniteModel,
    s: usize,
    s0: usize,
) -> Result<FiniteUltrapower, FolError> {
    let uf = PrincipalUf::new(s, s0)?;
    let mut model = FiniteModel::new();
    let mut quotients = BTreeMap::new();
    let mut nu = BTreeMap::new();
    for (name, atoms) in m.carriers() {
        let q = PowerQuotient::new(atoms.len(), &uf);
        let class_names: Vec<String> = (0..q.len()).map(|c| class_name(&q, c, atoms)).collect();
        let nu_map: Vec<usize> = (0..atoms.len()).map(|a| q.nu(a, s)).collect();
        let std_names = m
            .standard_names(name)
            .map(|names| names.iter().map(|(a, &i)| (a.clone(), nu_map[i])).collect())
            .unwrap_or_default();
        model.add_carrier_with_names(name, class_names, std_names)?;
        nu.insert(name.clone(), nu_map);
        quotients.insert(name.clone(), q);
    }
    for (name, rel) in m.relations() {
        let sig: Vec<&PowerQuotient> = rel.sig.iter().map(|c| &quotients[c]).collect();
        let lifted = lift_relation(&sig, |t| rel.tuples.contains(t), &uf)?;
        let sig_names: Vec<&str> = rel.sig.iter().map(String::as_str).collect();
        model.add_relation(name, &sig_names, lifted)?;
    }
    for (name, f) in m.functions() {
        let dom: Vec<&PowerQuotient> = f.dom.iter().map(|c| &quotients[c]).collect();
        let table = lift_function(&dom, &quotients[&f.cod], |t| f.table[t], &uf)?;
        let dom_names: Vec<&str> = f.dom.iter().map(String::as_str).collect();
        model.add_function(name, &dom_names, &f.cod, table)?;
    }
    Ok(FiniteUltrapower {
        model,
        uf,
        quotients,
        nu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_collapse_to_the_carrier() {
        // Oracle: group the 8 tuples of {0,1}^3 by their value at the point.
        for s0 in 0..3 {
            let uf = PrincipalUf::new(3, s0).unwrap();
            let q = PowerQuotient::new(2, &uf);
            assert_eq!(q.len(), 2);
            for t in tuples(&[2, 2, 2]) {
                let same_point: Vec<Vec<usize>> = tuples(&[2, 2, 2])
                    .into_iter()
                    .filter(|u| u[s0] == t[s0])
                    .collect();
                assert_eq!(q.members[q.class_of(&t)], same_point);
            }
        }
    }

    #[test]
    fn order_is_preserved_and_nu_is_onto() {
        let mut m = FiniteModel::new();
        m.add_sized_carrier("A", 3).unwrap();
        let le = tuples(&[3, 3]).into_iter().filter(|t| t[0] <= t[1]);
        m.add_relation("R", &["A", "A"], le).unwrap();
        for s0 in 0..3 {
            let u = build_finite_ultrapower(&m, 3, s0).unwrap();
            assert!(u.nu_is_bijective());
            let q = &u.quotients["A"];
            for c in 0..3 {
                for d in 0..3 {
                    let star = u.model.relations()["R"].tuples.contains(&vec![c, d]);
                    assert_eq!(star, q.reps[c][s0] <= q.reps[d][s0]);
                }
            }
        }
    }

    #[test]
    fn empty_index_set_has_no_ultrafilter() {
        assert!(PrincipalUf::new(0, 0).is_err());
    }
}
