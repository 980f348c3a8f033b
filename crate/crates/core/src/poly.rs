//! Exact polynomial arithmetic over the rationals.
//!
//! [`Poly`] is a dense univariate polynomial in the inner index; [`Poly2`] is a
//! sparse bivariate polynomial in the outer index `m` and the inner index `n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Smallest natural number `>= x` for a nonnegative rational, saturating.
pub fn ceil_u64(x: &Q) -> u64 {
    if !x.is_positive() {
        return 0;
    }
    let c = x.ceil().to_integer();
    u64::try_from(c).unwrap_or(u64::MAX)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Dense univariate polynomial; `coeffs[i]` multiplies `n^i`. No trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    pub fn index() -> Self {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Q::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &factor * c;
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&(Q::one() / l)),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Sign of the polynomial as the argument tends to `+∞`.
    pub fn sign_at_pos_infinity(&self) -> Ordering {
        match self.lead() {
            None => Ordering::Equal,
            Some(l) => l.cmp(&Q::zero()),
        }
    }

    /// Sign of the polynomial as the argument tends to `-∞`.
    pub fn sign_at_neg_infinity(&self) -> Ordering {
        let s = self.sign_at_pos_infinity();
        if self.degree().unwrap_or(0) % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }

    /// Cauchy bound: every real root `r` satisfies `|r| < 1 + max |a_i / a_d|`.
    /// Zero and constant polynomials return 0.
    pub fn cauchy_bound(&self) -> Q {
        let Some(d) = self.degree() else {
            return Q::zero();
        };
        if d == 0 {
            return Q::zero();
        }
        let lead = self.coeffs[d].abs();
        let max = self.coeffs[..d]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Q::zero);
        Q::one() + max
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(inner).add(&Poly::constant(c.clone())))
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().map(|(i, c)| (c, mono(&[("n", i)]))))
    }
}

fn mono(parts: &[(&str, usize)]) -> String {
    parts
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (&'a Q, String)>,
) -> fmt::Result {
    let mut first = true;
    for (c, m) in terms.rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        match (m.is_empty(), mag.is_one()) {
            (true, _) => write!(f, "{mag}")?,
            (false, true) => write!(f, "{m}")?,
            (false, false) => write!(f, "{mag}*{m}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Sparse bivariate polynomial keyed by `(deg_m, deg_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Q>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly2::zero();
        p.insert(0, 0, c);
        p
    }

    pub fn inner() -> Self {
        let mut p = Poly2::zero();
        p.insert(0, 1, Q::one());
        p
    }

    pub fn outer() -> Self {
        let mut p = Poly2::zero();
        p.insert(1, 0, Q::one());
        p
    }

    fn insert(&mut self, dm: u32, dn: u32, c: Q) {
        let e = self.terms.entry((dm, dn)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(dm, dn));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.insert(a, b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &other.terms {
                out.insert(a + x, b + y, c * d);
            }
        }
        out
    }

    pub fn eval(&self, m: &Q, n: &Q) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (&(a, b), c)| {
            acc + c * num::pow(m.clone(), a as usize) * num::pow(n.clone(), b as usize)
        })
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn is_free_of_outer(&self) -> bool {
        self.terms.keys().all(|&(a, _)| a == 0)
    }

    pub fn is_free_of_inner(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b == 0)
    }

    pub fn degree_inner(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).max()
    }

    /// Coefficient of `n^k`, as a polynomial in `m`.
    pub fn inner_coeff(&self, k: u32) -> Poly {
        let deg = self
            .terms
            .keys()
            .filter(|&&(_, b)| b == k)
            .map(|&(a, _)| a)
            .max();
        let Some(deg) = deg else {
            return Poly::zero();
        };
        let mut coeffs = vec![Q::zero(); deg as usize + 1];
        for (&(a, b), c) in &self.terms {
            if b == k {
                coeffs[a as usize] = c.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// Coefficient polynomial in `m` of the highest power of `n`.
    pub fn inner_lead(&self) -> Poly {
        match self.degree_inner() {
            Some(k) => self.inner_coeff(k),
            None => Poly::zero(),
        }
    }

    /// Univariate view in `n`; `None` if the outer index occurs.
    pub fn to_inner_poly(&self) -> Option<Poly> {
        if !self.is_free_of_outer() {
            return None;
        }
        let deg = self.degree_inner().unwrap_or(0) as usize;
        let mut coeffs = vec![Q::zero(); deg + 1];
        for (&(_, b), c) in &self.terms {
            coeffs[b as usize] = c.clone();
        }
        Some(Poly::new(coeffs))
    }

    pub fn from_inner_poly(p: &Poly) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.insert(0, i as u32, c.clone());
        }
        out
    }

    /// Substitute a concrete value for `m`.
    pub fn fix_outer(&self, m: &Q) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a, b), c) in &self.terms {
            out.insert(0, b, c * num::pow(m.clone(), a as usize));
        }
        out
    }

    /// Replace `m` by `-m`.
    pub fn negate_outer(&self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a, b), if a % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| (c, mono(&[("m", a as usize), ("n", b as usize)])))
            .collect();
        write_terms(f, terms.into_iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn gcd_cancels_common_factor() {
        // (n^2 - 1) and (n - 1)
        let g = p(&[-1, 0, 1]).gcd(&p(&[-1, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn cauchy_bound_dominates_roots() {
        // n^2 - 1000 n has roots 0 and 1000
        let b = p(&[0, -1000, 1]).cauchy_bound();
        assert_eq!(b, q(1001));
        assert!(p(&[0, -1000, 1]).eval(&q(1001)) > q(0));
    }

    #[test]
    fn signs_at_infinity() {
        let cube = p(&[0, 0, 0, -2]);
        assert_eq!(cube.sign_at_pos_infinity(), Ordering::Less);
        assert_eq!(cube.sign_at_neg_infinity(), Ordering::Greater);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[1, 0, -3]).to_string(), "-3*n^2 + 1");
        assert_eq!(Poly2::outer().sub(&Poly2::inner()).to_string(), "m - n");
    }
}
