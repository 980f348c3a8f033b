//! Finite shadows of the ultrafilter functor and of the duality argument
//! that evaluations span the dual of `2^B`.
//!
//! On a finite set every ultrafilter is principal, `β(A×B) → βA×βB` is a
//! bijection, and the only surviving content of the duality argument is
//! linear algebra over GF(2): evaluations have full rank and a proper
//! subspace has a nonzero annihilator. Nothing here says anything about
//! the infinite case.

mod gf2;

pub use gf2::{annihilator_witness, GF2Matrix};

/// Default bound on `|B|` for [`dual_span_check`].
pub const DUAL_SPAN_BOUND: usize = 6;
/// Largest set whose power set is enumerated.
pub const MAX_SET: usize = 12;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StoneError {
    #[error("set of size {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
}

fn check_size(size: usize, bound: usize) -> Result<(), StoneError> {
    if size > bound {
        Err(StoneError::TooLarge { size, bound })
    } else {
        Ok(())
    }
}

/// An ultrafilter on `{0, …, n-1}` as the membership table of all subsets,
/// indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiniteUltrafilter {
    n: usize,
    members: Vec<bool>,
}

impl FiniteUltrafilter {
    pub fn principal(n: usize, a: usize) -> FiniteUltrafilter {
        FiniteUltrafilter {
            n,
            members: (0..1usize << n).map(|s| s >> a & 1 == 1).collect(),
        }
    }

    pub fn contains(&self, set: usize) -> bool {
        self.members[set]
    }

    /// The point whose singleton is a member.
    pub fn point(&self) -> Option<usize> {
        (0..self.n).find(|&a| self.members[1 << a])
    }

    /// Image under `f: {0..n} → {0..m}`: `S` belongs iff `f⁻¹(S)` does.
    pub fn push(&self, f: &[usize], m: usize) -> FiniteUltrafilter {
        let members = (0..1usize << m)
            .map(|s| {
                let pre = (0..self.n).filter(|&x| s >> f[x] & 1 == 1).fold(0, |acc, x| acc | 1 << x);
                self.members[pre]
            })
            .collect();
        FiniteUltrafilter { n: m, members }
    }
}

/// All ultrafilters on a set of size `n`, one per point.
pub fn enumerate_ultrafilters(n: usize) -> Result<Vec<FiniteUltrafilter>, StoneError> {
    check_size(n, MAX_SET)?;
    Ok((0..n).map(|a| FiniteUltrafilter::principal(n, a)).collect())
}

/// Maximal proper filters on a set of size `n ≤ 4`, found by testing every
/// family of subsets.
pub fn brute_force_ultrafilters(n: usize) -> Result<Vec<FiniteUltrafilter>, StoneError> {
    check_size(n, 4)?;
    let subsets = 1usize << n;
    let full = subsets - 1;
    let has = |fam: u32, s: usize| fam >> s & 1 == 1;
    let filters: Vec<u32> = (0..1u64 << subsets)
        .map(|f| f as u32)
        .filter(|&fam| {
            !has(fam, 0)
                && has(fam, full)
                && (0..subsets).all(|a| {
                    !has(fam, a)
                        || (0..subsets).all(|b| {
                            (!has(fam, b) || has(fam, a & b)) && (a & b != a || has(fam, b))
                        })
                })
        })
        .collect();
    let maximal = filters
        .iter()
        .filter(|&&f| !filters.iter().any(|&g| g != f && g & f == f))
        .map(|&fam| FiniteUltrafilter {
            n,
            members: (0..subsets).map(|s| has(fam, s)).collect(),
        });
    let mut out: Vec<FiniteUltrafilter> = maximal.collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaProductReport {
    pub domain: usize,
    pub codomain: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl BetaProductReport {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// The map `β(A×B) → βA × βB` induced by the two projections.
pub fn beta_product_compare(na: usize, nb: usize) -> Result<BetaProductReport, StoneError> {
    check_size(na * nb, MAX_SET)?;
    let pairs: Vec<(usize, usize)> = (0..na).flat_map(|a| (0..nb).map(move |b| (a, b))).collect();
    let p1: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let p2: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let (ba, bb) = (enumerate_ultrafilters(na)?, enumerate_ultrafilters(nb)?);
    let mut image = Vec::new();
    for u in enumerate_ultrafilters(pairs.len())? {
        let (ua, ub) = (u.push(&p1, na), u.push(&p2, nb));
        let ia = ba.iter().position(|v| *v == ua);
        let ib = bb.iter().position(|v| *v == ub);
        if let (Some(ia), Some(ib)) = (ia, ib) {
            image.push((ia, ib));
        }
    }
    let domain = pairs.len();
    let codomain = ba.len() * bb.len();
    let mut distinct = image.clone();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(BetaProductReport {
        domain,
        codomain,
        injective: image.len() == domain && distinct.len() == domain,
        surjective: distinct.len() == codomain,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpanReport {
    pub dim: usize,
    pub rank: usize,
}

impl DualSpanReport {
    pub fn full(&self) -> bool {
        self.rank == self.dim
    }
}

/// Rank of the evaluation functionals `e_b(S) = [b ∈ S]` on `2^B`, each
/// written in the basis of singleton indicators.
pub fn dual_span_check(nb: usize, bound: usize) -> Result<DualSpanReport, StoneError> {
    check_size(nb, bound.min(GF2Matrix::MAX_COLS))?;
    let basis: Vec<usize> = (0..nb).map(|c| 1 << c).collect();
    let rows: Vec<Vec<bool>> = (0..nb)
        .map(|b| basis.iter().map(|&s| s >> b & 1 == 1).collect())
        .collect();
    let m = GF2Matrix::from_rows(nb, &rows);
    Ok(DualSpanReport { dim: nb, rank: m.rank() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_enumeration() {
        assert_eq!(enumerate_ultrafilters(3).unwrap().len(), 3);
        assert_eq!(enumerate_ultrafilters(1).unwrap().len(), 1);
        assert_eq!(enumerate_ultrafilters(0).unwrap().len(), 0);
        for (a, u) in enumerate_ultrafilters(3).unwrap().iter().enumerate() {
            assert_eq!(u.point(), Some(a));
        }
    }

    #[test]
    fn products() {
        for (na, nb) in [(2, 2), (1, 3), (3, 2)] {
            let r = beta_product_compare(na, nb).unwrap();
            assert!(r.bijective());
            assert_eq!(r.domain, na * nb);
        }
    }

    #[test]
    fn evaluations_span() {
        assert_eq!(dual_span_check(3, DUAL_SPAN_BOUND).unwrap().rank, 3);
        assert!(dual_span_check(7, DUAL_SPAN_BOUND).is_err());
    }
}
