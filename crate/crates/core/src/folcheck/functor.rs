//! Exhaustive checks that the finite ultrapower preserves finite limits.
//!
//! For every set size up to `k` and every pair of maps between such sets:
//! `ν` is a bijection `F → *F`, projections exhibit `*(A×B) ≅ *A × *B`,
//! equalizers are carried to equalizers, subsets to subsets and the diagonal
//! to the diagonal. All are computed from the quotient construction, never
//! from the known collapse.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::model::tuples;
use super::ultrapower::{lift_function, lift_relation, PowerQuotient, PrincipalUf};
use super::FolError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawTally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorReport {
    pub laws: BTreeMap<&'static str, LawTally>,
    pub failures: Vec<String>,
}

impl FunctorReport {
    pub fn instances(&self) -> u64 {
        self.laws.values().map(|t| t.checked).sum()
    }

    pub fn failure_count(&self) -> u64 {
        self.laws.values().map(|t| t.failed).sum()
    }

    fn record(&mut self, law: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.laws.entry(law).or_default();
        t.checked += 1;
        if !ok {
            t.failed += 1;
            self.failures.push(format!("{law}: {}", detail()));
        }
    }

    fn merge(&mut self, o: FunctorReport) {
        for (law, t) in o.laws {
            let e = self.laws.entry(law).or_default();
            e.checked += t.checked;
            e.failed += t.failed;
        }
        self.failures.extend(o.failures);
    }
}

fn injective<T: Ord>(xs: impl IntoIterator<Item = T>) -> (usize, usize) {
    let v: Vec<T> = xs.into_iter().collect();
    let n = v.len();
    let set: BTreeSet<T> = v.into_iter().collect();
    (n, set.len())
}

/// All laws for one ultrafilter and set sizes up to `k`.
pub fn check_functor_laws(s: usize, s0: usize, k: usize) -> Result<FunctorReport, FolError> {
    let uf = PrincipalUf::new(s, s0)?;
    let quot: Vec<PowerQuotient> = (0..=k * k).map(|n| PowerQuotient::new(n, &uf)).collect();
    let mut rep = FunctorReport::default();
    let tag = |what: String| format!("|S|={s}, point {s0}, {what}");

    for a in 0..=k {
        let q = &quot[a];
        let nu: Vec<usize> = (0..a).map(|x| q.nu(x, s)).collect();
        let (n, distinct) = injective(nu.iter().copied());
        rep.record("fin-equivalence", n == distinct && distinct == q.len(), || {
            tag(format!("ν on a set of size {a} is not bijective"))
        });
        rep.record("nonempty", (a == 0) == q.is_empty(), || {
            tag(format!("*A empty status wrong for |A|={a}"))
        });
    }

    for a in 0..=k {
        for b in 0..=k {
            let (qa, qb, qab) = (&quot[a], &quot[b], &quot[a * b]);
            let p1 = lift_function(&[qab], qa, |t| t[0] / b.max(1), &uf)?;
            let p2 = lift_function(&[qab], qb, |t| t[0] % b.max(1), &uf)?;
            let pairs: Vec<(usize, usize)> =
                (0..qab.len()).map(|c| (p1[&vec![c]], p2[&vec![c]])).collect();
            let (n, distinct) = injective(pairs.iter().copied());
            rep.record("product", n == distinct && distinct == qa.len() * qb.len(), || {
                tag(format!("*({a}×{b}) has {n} classes, {distinct} distinct images"))
            });
            if a == b {
                let diag = lift_relation(&[qab], |t| t[0] / a.max(1) == t[0] % a.max(1), &uf)?;
                let image: BTreeSet<(usize, usize)> = diag.iter().map(|c| pairs[c[0]]).collect();
                let want: BTreeSet<(usize, usize)> = (0..qa.len()).map(|x| (x, x)).collect();
                rep.record("diagonal", image == want, || tag(format!("diagonal of {a}")));
            }
        }
    }

    for c in 0..=k {
        let qc = &quot[c];
        for subset in 0..(1u32 << c) {
            let members: Vec<usize> = (0..c).filter(|x| subset >> x & 1 == 1).collect();
            let qe = &quot[members.len()];
            let incl = lift_function(&[qe], qc, |t| members[t[0]], &uf)?;
            let image: BTreeSet<usize> = incl.values().copied().collect();
            let pulled: BTreeSet<usize> = lift_relation(&[qc], |t| members.contains(&t[0]), &uf)?
                .into_iter()
                .map(|t| t[0])
                .collect();
            rep.record(
                "inclusion",
                image.len() == qe.len() && image == pulled,
                || tag(format!("subset {members:?} of {c}")),
            );
        }
        for d in 0..=k {
            let qd = &quot[d];
            let maps = tuples(&vec![d; c]);
            for f1 in &maps {
                for f2 in &maps {
                    let eq: Vec<usize> = (0..c).filter(|&x| f1[x] == f2[x]).collect();
                    let qe = &quot[eq.len()];
                    let incl = lift_function(&[qe], qc, |t| eq[t[0]], &uf)?;
                    let star_e: BTreeSet<usize> = incl.values().copied().collect();
                    let g1 = lift_function(&[qc], qd, |t| f1[t[0]], &uf)?;
                    let g2 = lift_function(&[qc], qd, |t| f2[t[0]], &uf)?;
                    let direct: BTreeSet<usize> =
                        (0..qc.len()).filter(|&x| g1[&vec![x]] == g2[&vec![x]]).collect();
                    rep.record(
                        "equalizer",
                        star_e.len() == qe.len() && star_e == direct,
                        || tag(format!("maps {f1:?}, {f2:?} from {c} to {d}")),
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// The laws for every index set size `1..=max_s` and every point.
pub fn functor_law_suite(max_s: usize, k: usize) -> Result<FunctorReport, FolError> {
    let jobs: Vec<(usize, usize)> = (1..=max_s).flat_map(|s| (0..s).map(move |p| (s, p))).collect();
    let parts: Vec<FunctorReport> = jobs
        .par_iter()
        .map(|&(s, p)| check_functor_laws(s, p, k))
        .collect::<Result<_, _>>()?;
    let mut rep = FunctorReport::default();
    for p in parts {
        rep.merge(p);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = functor_law_suite(2, 2).unwrap();
        assert_eq!(r.failure_count(), 0, "{:?}", r.failures);
        assert!(r.laws["equalizer"].checked > 0);
    }

    #[test]
    fn product_sizes() {
        let uf = PrincipalUf::new(2, 0).unwrap();
        let q2 = PowerQuotient::new(2, &uf);
        let q4 = PowerQuotient::new(4, &uf);
        assert_eq!(q4.len(), q2.len() * q2.len());
    }
}
