//! Normal forms of fragment terms: piecewise-periodic rational functions.
//!
//! A [`Piecewise`] has an outer period `pm` and an inner period `pn`; branch
//! `(rm, rn)` is the rational function valid for `m ≡ rm (mod pm)` and
//! `n ≡ rn (mod pn)`. Periods are always minimal after [`normalize`].

use std::cmp::Ordering;
use std::fmt;

use num::{Integer, One, Zero};

use crate::poly::{lcm_u64, Poly, Poly2, Q};
use crate::seq::term::{Expr, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("denominator {0} vanishes on a whole residue class")]
    DenominatorNotEventuallyNonzero(String),
    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),
}

/// Quotient of bivariate polynomials; the denominator is never zero.
#[derive(Clone, Debug)]
pub struct RatFunc2 {
    num: Poly2,
    den: Poly2,
}

impl PartialEq for RatFunc2 {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc2 {}

impl RatFunc2 {
    pub fn new(num: Poly2, den: Poly2) -> RatFunc2 {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc2 { num, den };
        r.tidy();
        r
    }

    pub fn poly(p: Poly2) -> RatFunc2 {
        RatFunc2::new(p, Poly2::constant(Q::one()))
    }

    pub fn constant(c: Q) -> RatFunc2 {
        RatFunc2::poly(Poly2::constant(c))
    }

    fn tidy(&mut self) {
        if self.num.is_zero() {
            self.den = Poly2::constant(Q::one());
            return;
        }
        if let (Some(n), Some(d)) = (self.num.to_inner_poly(), self.den.to_inner_poly()) {
            let g = n.gcd(&d);
            let (n, _) = n.div_rem(&g);
            let (d, _) = d.div_rem(&g);
            let l = d.lead().unwrap().clone();
            self.num = Poly2::from_inner_poly(&n.scale(&(Q::one() / &l)));
            self.den = Poly2::from_inner_poly(&d.monic());
            return;
        }
        // Scale so the denominator's largest monomial has coefficient 1.
        let l = self.den.terms().last().map(|(_, c)| c.clone()).unwrap();
        let inv = Q::one() / l;
        self.num = self.num.mul(&Poly2::constant(inv.clone()));
        self.den = self.den.mul(&Poly2::constant(inv));
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    /// The branch as an integer-coefficient polynomial, if it is one.
    pub fn as_integer_poly(&self) -> Option<Poly2> {
        let d = self.den.as_constant()?;
        let p = self.num.mul(&Poly2::constant(Q::one() / d));
        p.has_integer_coeffs().then_some(p)
    }

    pub fn add(&self, o: &RatFunc2) -> RatFunc2 {
        if self.den == o.den {
            return RatFunc2::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc2::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &RatFunc2) -> RatFunc2 {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc2 {
        RatFunc2 {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc2) -> RatFunc2 {
        RatFunc2::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// `None` when the divisor is identically zero.
    pub fn div(&self, o: &RatFunc2) -> Option<RatFunc2> {
        if o.num.is_zero() {
            return None;
        }
        Some(RatFunc2::new(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn fix_outer(&self, m: &Q) -> Option<RatFunc2> {
        let den = self.den.fix_outer(m);
        (!den.is_zero()).then(|| RatFunc2::new(self.num.fix_outer(m), den))
    }

    pub fn negate_outer(&self) -> RatFunc2 {
        RatFunc2::new(self.num.negate_outer(), self.den.negate_outer())
    }

    /// Univariate numerator and denominator; `None` if `m` occurs.
    pub fn to_inner(&self) -> Option<(Poly, Poly)> {
        Some((self.num.to_inner_poly()?, self.den.to_inner_poly()?))
    }

    /// Sign as `n → ∞` for every sufficiently large fixed `m`.
    pub fn eventual_sign(&self) -> Ordering {
        let s = |p: &Poly2| p.inner_lead().sign_at_pos_infinity();
        mul_sign(s(&self.num), s(&self.den))
    }

    /// Bound on `m` past which [`Self::eventual_sign`] is exact for each fixed `m`.
    pub fn outer_bound(&self) -> Q {
        let a = self.num.inner_lead().cauchy_bound();
        let b = self.den.inner_lead().cauchy_bound();
        a.max(b)
    }

    /// Bound on `n` past which numerator and denominator keep their sign
    /// (univariate branches only).
    pub fn inner_bound(&self) -> Option<Q> {
        let (n, d) = self.to_inner()?;
        Some(n.cauchy_bound().max(d.cauchy_bound()))
    }
}

pub fn mul_sign(a: Ordering, b: Ordering) -> Ordering {
    match (a, b) {
        (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
        (x, y) if x == y => Ordering::Greater,
        _ => Ordering::Less,
    }
}

impl fmt::Display for RatFunc2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_constant() {
            Some(d) if d.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piecewise {
    pm: u64,
    pn: u64,
    branches: Vec<RatFunc2>,
}

impl Piecewise {
    pub fn uniform(f: RatFunc2) -> Piecewise {
        Piecewise {
            pm: 1,
            pn: 1,
            branches: vec![f],
        }
    }

    pub fn from_fn(pm: u64, pn: u64, f: impl Fn(u64, u64) -> RatFunc2) -> Piecewise {
        let mut branches = Vec::with_capacity((pm * pn) as usize);
        for rm in 0..pm {
            for rn in 0..pn {
                branches.push(f(rm, rn));
            }
        }
        Piecewise { pm, pn, branches }
    }

    pub fn outer_period(&self) -> u64 {
        self.pm
    }

    pub fn inner_period(&self) -> u64 {
        self.pn
    }

    /// Branch for residues of arbitrary indices.
    pub fn branch(&self, m: u64, n: u64) -> &RatFunc2 {
        &self.branches[((m % self.pm) * self.pn + (n % self.pn)) as usize]
    }

    pub fn branches(&self) -> &[RatFunc2] {
        &self.branches
    }

    pub fn as_constant(&self) -> Option<Q> {
        (self.branches.len() == 1)
            .then(|| self.branches[0].as_constant())
            .flatten()
    }

    pub fn is_free_of_outer(&self) -> bool {
        self.pm == 1
            && self
                .branches
                .iter()
                .all(|b| b.num.is_free_of_outer() && b.den.is_free_of_outer())
    }

    pub fn is_free_of_inner(&self) -> bool {
        self.pn == 1
            && self
                .branches
                .iter()
                .all(|b| b.num.is_free_of_inner() && b.den.is_free_of_inner())
    }

    fn zip(
        &self,
        o: &Piecewise,
        f: impl Fn(&RatFunc2, &RatFunc2) -> Option<RatFunc2>,
    ) -> Option<Piecewise> {
        let pm = lcm_u64(self.pm, o.pm);
        let pn = lcm_u64(self.pn, o.pn);
        let mut branches = Vec::with_capacity((pm * pn) as usize);
        for rm in 0..pm {
            for rn in 0..pn {
                branches.push(f(self.branch(rm, rn), o.branch(rm, rn))?);
            }
        }
        Some(Piecewise { pm, pn, branches }.minimized())
    }

    pub fn add(&self, o: &Piecewise) -> Piecewise {
        self.zip(o, |a, b| Some(a.add(b))).unwrap()
    }

    pub fn sub(&self, o: &Piecewise) -> Piecewise {
        self.zip(o, |a, b| Some(a.sub(b))).unwrap()
    }

    pub fn mul(&self, o: &Piecewise) -> Piecewise {
        self.zip(o, |a, b| Some(a.mul(b))).unwrap()
    }

    pub fn div(&self, o: &Piecewise) -> Option<Piecewise> {
        self.zip(o, |a, b| a.div(b))
    }

    /// Euclidean remainder by `k`; every branch must be an integer polynomial.
    pub fn modulo(&self, k: u64) -> Result<Piecewise, NormalizeError> {
        let polys = self
            .branches
            .iter()
            .map(|b| {
                b.as_integer_poly().ok_or_else(|| {
                    NormalizeError::UnsupportedTerm(format!(
                        "mod {k} of non-integer-polynomial branch {b}"
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pm = if self.is_free_of_outer() { 1 } else { self.pm * k };
        let pn = if self.is_free_of_inner() { 1 } else { self.pn * k };
        let kk = Q::from_integer(k.into());
        let out = Piecewise::from_fn(pm, pn, |rm, rn| {
            let p = &polys[((rm % self.pm) * self.pn + (rn % self.pn)) as usize];
            let v = p.eval(&Q::from_integer(rm.into()), &Q::from_integer(rn.into()));
            let r = v.to_integer().mod_floor(kk.numer());
            RatFunc2::constant(Q::from_integer(r))
        });
        Ok(out.minimized())
    }

    /// Shrink both periods to their least values.
    pub fn minimized(mut self) -> Piecewise {
        for d in divisors(self.pn) {
            let ok = (0..self.pm).all(|rm| {
                (d..self.pn).all(|rn| self.branch(rm, rn) == self.branch(rm, rn % d))
            });
            if ok {
                self = Piecewise::from_fn(self.pm, d, |rm, rn| self.branch(rm, rn).clone());
                break;
            }
        }
        for d in divisors(self.pm) {
            let ok = (d..self.pm).all(|rm| {
                (0..self.pn).all(|rn| self.branch(rm, rn) == self.branch(rm % d, rn))
            });
            if ok {
                self = Piecewise::from_fn(d, self.pn, |rm, rn| self.branch(rm, rn).clone());
                break;
            }
        }
        self
    }

    /// Fix the outer index to a concrete value; `None` if a denominator
    /// vanishes identically there.
    pub fn fix_outer(&self, m: u64) -> Option<Piecewise> {
        let mq = Q::from_integer(m.into());
        let branches = (0..self.pn)
            .map(|rn| self.branch(m, rn).fix_outer(&mq))
            .collect::<Option<Vec<_>>>()?;
        Some(
            Piecewise {
                pm: 1,
                pn: self.pn,
                branches,
            }
            .minimized(),
        )
    }

    /// Replace `m` by `-m`: branch `r` of the result is branch `-r` of `self`.
    pub fn negate_outer(&self) -> Piecewise {
        Piecewise::from_fn(self.pm, self.pn, |rm, rn| {
            self.branch((self.pm - rm) % self.pm, rn).negate_outer()
        })
    }

    /// Value at a concrete index pair (no guard against vanishing denominators
    /// beyond returning `None`).
    pub fn eval(&self, m: u64, n: u64) -> Option<Q> {
        let b = self.branch(m, n);
        let (mq, nq) = (Q::from_integer(m.into()), Q::from_integer(n.into()));
        let d = b.den.eval(&mq, &nq);
        (!d.is_zero()).then(|| b.num.eval(&mq, &nq) / d)
    }
}

fn divisors(p: u64) -> Vec<u64> {
    (1..=p).filter(|d| p % d == 0).collect()
}

impl fmt::Display for Piecewise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.branches.len() == 1 {
            return write!(f, "{}", self.branches[0]);
        }
        write!(f, "piecewise[m mod {}, n mod {}](", self.pm, self.pn)?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Normal form of a term in the index variables `m` and `n`.
pub fn normalize(e: &Expr) -> Result<Piecewise, NormalizeError> {
    let bin = |a: &Expr, b: &Expr| Ok::<_, NormalizeError>((normalize(a)?, normalize(b)?));
    Ok(match e {
        Expr::Const(c) => Piecewise::uniform(RatFunc2::constant(c.clone())),
        Expr::Var(Var::Inner) => Piecewise::uniform(RatFunc2::poly(Poly2::inner())),
        Expr::Var(Var::Outer) => Piecewise::uniform(RatFunc2::poly(Poly2::outer())),
        Expr::Var(v @ Var::Slot(_)) => {
            return Err(NormalizeError::UnsupportedTerm(format!(
                "unsubstituted relation argument {v}"
            )))
        }
        Expr::Add(a, b) => {
            let (x, y) = bin(a, b)?;
            x.add(&y)
        }
        Expr::Sub(a, b) => {
            let (x, y) = bin(a, b)?;
            x.sub(&y)
        }
        Expr::Mul(a, b) => {
            let (x, y) = bin(a, b)?;
            x.mul(&y)
        }
        Expr::Div(a, b) => {
            let (x, y) = bin(a, b)?;
            x.div(&y)
                .ok_or_else(|| NormalizeError::DenominatorNotEventuallyNonzero(b.to_string()))?
        }
        Expr::Mod(a, k) => {
            if *k == 0 {
                return Err(NormalizeError::UnsupportedTerm("mod 0".into()));
            }
            normalize(a)?.modulo(*k)?
        }
        Expr::Cases { selector, branches } => {
            if branches.is_empty() {
                return Err(NormalizeError::UnsupportedTerm("empty cases".into()));
            }
            let sel = normalize(selector)?.modulo(branches.len() as u64)?;
            let arms = branches
                .iter()
                .map(normalize)
                .collect::<Result<Vec<_>, _>>()?;
            let pm = arms.iter().fold(sel.pm, |acc, a| lcm_u64(acc, a.pm));
            let pn = arms.iter().fold(sel.pn, |acc, a| lcm_u64(acc, a.pn));
            Piecewise::from_fn(pm, pn, |rm, rn| {
                let idx = sel.branch(rm, rn).as_constant().expect("selector residue");
                let idx = usize::try_from(idx.to_integer()).expect("residue index");
                arms[idx].branch(rm, rn).clone()
            })
            .minimized()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn n() -> Expr {
        Expr::inner()
    }

    #[test]
    fn cancellation_gives_fragment_equality() {
        // (n^2 - 1) / (n - 1) == n + 1
        let a = Expr::div(
            Expr::sub(Expr::mul(n(), n()), Expr::int(1)),
            Expr::sub(n(), Expr::int(1)),
        );
        let b = Expr::add(n(), Expr::int(1));
        assert_eq!(normalize(&a).unwrap(), normalize(&b).unwrap());
    }

    #[test]
    fn mod_gives_minimal_period() {
        let p = normalize(&Expr::modulo(n(), 2)).unwrap();
        assert_eq!(p.inner_period(), 2);
        assert_eq!(p.branch(0, 0).as_constant(), Some(q(0)));
        assert_eq!(p.branch(0, 1).as_constant(), Some(q(1)));
        // n*n mod 4 on even n is 0, odd n is 1: period 2
        let sq = normalize(&Expr::modulo(Expr::mul(n(), n()), 4)).unwrap();
        assert_eq!(sq.inner_period(), 2);
    }

    #[test]
    fn piecewise_with_equal_branches_collapses() {
        let p = normalize(&Expr::piecewise(vec![n(), n(), n()])).unwrap();
        assert_eq!(p.inner_period(), 1);
    }

    #[test]
    fn zero_divisor_is_rejected() {
        let e = Expr::div(Expr::int(1), Expr::sub(n(), n()));
        assert!(matches!(
            normalize(&e),
            Err(NormalizeError::DenominatorNotEventuallyNonzero(_))
        ));
        let half = Expr::div(Expr::int(1), Expr::modulo(n(), 2));
        assert!(normalize(&half).is_err());
    }

    #[test]
    fn mod_of_rational_is_unsupported() {
        let e = Expr::modulo(Expr::div(n(), Expr::int(2)), 3);
        assert!(matches!(normalize(&e), Err(NormalizeError::UnsupportedTerm(_))));
    }

    #[test]
    fn outer_negation_permutes_residues() {
        let p = normalize(&Expr::modulo(Expr::outer(), 3)).unwrap();
        let neg = p.negate_outer();
        // (-m) mod 3 at m = 1 is 2
        assert_eq!(neg.branch(1, 0).as_constant(), Some(q(2)));
    }
}
