use std::fmt;

use num::{Integer, Signed, Zero};

use crate::poly::Q;

/// Index and placeholder variables that may occur in a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The inner index `n`.
    Inner,
    /// The outer index `m` (level-2 terms only).
    Outer,
    /// A relation argument slot: `x` is slot 0, `y` is slot 1.
    Slot(u8),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Inner => write!(f, "n"),
            Var::Outer => write!(f, "m"),
            Var::Slot(0) => write!(f, "x"),
            Var::Slot(1) => write!(f, "y"),
            Var::Slot(k) => write!(f, "x{k}"),
        }
    }
}

/// Base sorts, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Nat,
    Int,
    Rat,
}

impl Sort {
    pub fn join(self, other: Sort) -> Sort {
        self.max(other)
    }

    pub fn is_integral(self) -> bool {
        self != Sort::Rat
    }

    pub fn of_value(v: &Q) -> Sort {
        if !v.is_integer() {
            Sort::Rat
        } else if v.is_negative() {
            Sort::Int
        } else {
            Sort::Nat
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Nat => "Nat",
            Sort::Int => "Int",
            Sort::Rat => "Rat",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Q),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Euclidean remainder by a positive integer constant.
    Mod(Box<Expr>, u64),
    /// `branches[selector mod branches.len()]`. With `selector = n` this is a
    /// piecewise-periodic term.
    Cases {
        selector: Box<Expr>,
        branches: Vec<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero at index {0}")]
    DivisionByZeroAt(String),
    #[error("non-integer operand of mod or cases at index {0}")]
    NonIntegerAt(String),
    #[error("unbound variable {0}")]
    Unbound(Var),
}

impl Expr {
    pub fn constant(v: Q) -> Expr {
        Expr::Const(v)
    }

    pub fn int(v: i64) -> Expr {
        Expr::Const(crate::poly::q(v))
    }

    pub fn inner() -> Expr {
        Expr::Var(Var::Inner)
    }

    pub fn outer() -> Expr {
        Expr::Var(Var::Outer)
    }

    pub fn slot(k: u8) -> Expr {
        Expr::Var(Var::Slot(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn modulo(a: Expr, k: u64) -> Expr {
        Expr::Mod(Box::new(a), k)
    }

    pub fn piecewise(branches: Vec<Expr>) -> Expr {
        Expr::Cases {
            selector: Box::new(Expr::inner()),
            branches,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::Var(_) => vec![],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                vec![a, b]
            }
            Expr::Mod(a, _) => vec![a],
            Expr::Cases { selector, branches } => {
                std::iter::once(&**selector).chain(branches.iter()).collect()
            }
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Var(w) => *w == v,
            _ => self.children().into_iter().any(|c| c.mentions(v)),
        }
    }

    /// Replace every occurrence of a variable.
    pub fn subst(&self, v: Var, by: &Expr) -> Expr {
        self.map_vars(&|w| if w == v { Some(by.clone()) } else { None })
    }

    pub fn map_vars(&self, f: &dyn Fn(Var) -> Option<Expr>) -> Expr {
        let bx = |e: &Expr| Box::new(e.map_vars(f));
        match self {
            Expr::Const(c) => Expr::Const(c.clone()),
            Expr::Var(w) => f(*w).unwrap_or(Expr::Var(*w)),
            Expr::Add(a, b) => Expr::Add(bx(a), bx(b)),
            Expr::Sub(a, b) => Expr::Sub(bx(a), bx(b)),
            Expr::Mul(a, b) => Expr::Mul(bx(a), bx(b)),
            Expr::Div(a, b) => Expr::Div(bx(a), bx(b)),
            Expr::Mod(a, k) => Expr::Mod(bx(a), *k),
            Expr::Cases { selector, branches } => Expr::Cases {
                selector: bx(selector),
                branches: branches.iter().map(|b| b.map_vars(f)).collect(),
            },
        }
    }

    /// Inferred sort; index variables are natural, slots take `slot_sort`.
    pub fn sort(&self, slot_sort: Sort) -> Sort {
        match self {
            Expr::Const(c) => Sort::of_value(c),
            Expr::Var(Var::Slot(_)) => slot_sort,
            Expr::Var(_) => Sort::Nat,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.sort(slot_sort).join(b.sort(slot_sort)),
            Expr::Sub(a, b) => a.sort(slot_sort).join(b.sort(slot_sort)).join(Sort::Int),
            Expr::Div(_, _) => Sort::Rat,
            Expr::Mod(_, _) => Sort::Nat,
            Expr::Cases { branches, .. } => branches
                .iter()
                .map(|b| b.sort(slot_sort))
                .fold(Sort::Nat, Sort::join),
        }
    }

    /// Exact evaluation under an assignment of the variables.
    pub fn eval(&self, env: &dyn Fn(Var) -> Option<Q>) -> Result<Q, EvalError> {
        let at = || describe_env(env);
        Ok(match self {
            Expr::Const(c) => c.clone(),
            Expr::Var(v) => env(*v).ok_or(EvalError::Unbound(*v))?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZeroAt(at()));
                }
                a.eval(env)? / d
            }
            Expr::Mod(a, k) => {
                let v = a.eval(env)?;
                if !v.is_integer() {
                    return Err(EvalError::NonIntegerAt(at()));
                }
                Q::from_integer(v.to_integer().mod_floor(&(*k).into()))
            }
            Expr::Cases { selector, branches } => {
                let s = selector.eval(env)?;
                if !s.is_integer() {
                    return Err(EvalError::NonIntegerAt(at()));
                }
                let len = num::BigInt::from(branches.len());
                let idx = s.to_integer().mod_floor(&len);
                let idx = usize::try_from(idx).expect("residue fits in usize");
                branches[idx].eval(env)?
            }
        })
    }

    /// Evaluate a single-index term at `n`.
    pub fn eval_at(&self, n: u64) -> Result<Q, EvalError> {
        let n = Q::from_integer(n.into());
        self.eval(&|v| (v == Var::Inner).then(|| n.clone()))
    }
}

fn describe_env(env: &dyn Fn(Var) -> Option<Q>) -> String {
    let parts: Vec<String> = [Var::Outer, Var::Inner]
        .into_iter()
        .filter_map(|v| env(v).map(|x| format!("{v}={x}")))
        .collect();
    parts.join(",")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "(+ {a} {b})"),
            Expr::Sub(a, b) => write!(f, "(- {a} {b})"),
            Expr::Mul(a, b) => write!(f, "(* {a} {b})"),
            Expr::Div(a, b) => write!(f, "(/ {a} {b})"),
            Expr::Mod(a, k) => write!(f, "(mod {a} {k})"),
            Expr::Cases { selector, branches } => {
                if **selector == Expr::inner() {
                    write!(f, "(piecewise")?;
                } else {
                    write!(f, "(cases {selector}")?;
                }
                for b in branches {
                    write!(f, " {b}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Comparison relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    /// Does `a rel b` hold, given the ordering of `a - b` against zero?
    pub fn holds(self, sign: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Rel::Eq => sign == Equal,
            Rel::Ne => sign != Equal,
            Rel::Lt => sign == Less,
            Rel::Le => sign != Greater,
            Rel::Gt => sign == Greater,
            Rel::Ge => sign != Less,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// Propositional combinations of comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pred {
    True,
    False,
    Cmp(Rel, Expr, Expr),
    Not(Box<Pred>),
    And(Vec<Pred>),
    Or(Vec<Pred>),
}

impl Pred {
    pub fn cmp(rel: Rel, a: Expr, b: Expr) -> Pred {
        Pred::Cmp(rel, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Pred) -> Pred {
        Pred::Not(Box::new(p))
    }

    /// Negation-normal form: negations pushed onto comparisons and absorbed.
    pub fn nnf(&self) -> Pred {
        self.nnf_signed(false)
    }

    fn nnf_signed(&self, negate: bool) -> Pred {
        match (self, negate) {
            (Pred::True, false) | (Pred::False, true) => Pred::True,
            (Pred::True, true) | (Pred::False, false) => Pred::False,
            (Pred::Cmp(r, a, b), neg) => {
                Pred::Cmp(if neg { r.negate() } else { *r }, a.clone(), b.clone())
            }
            (Pred::Not(p), neg) => p.nnf_signed(!neg),
            (Pred::And(ps), false) | (Pred::Or(ps), true) => {
                Pred::And(ps.iter().map(|p| p.nnf_signed(negate)).collect())
            }
            (Pred::Or(ps), false) | (Pred::And(ps), true) => {
                Pred::Or(ps.iter().map(|p| p.nnf_signed(negate)).collect())
            }
        }
    }

    /// All comparison atoms, in traversal order.
    pub fn atoms(&self) -> Vec<(Rel, &Expr, &Expr)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(Rel, &'a Expr, &'a Expr)>) {
        match self {
            Pred::True | Pred::False => {}
            Pred::Cmp(r, a, b) => out.push((*r, a, b)),
            Pred::Not(p) => p.collect_atoms(out),
            Pred::And(ps) | Pred::Or(ps) => ps.iter().for_each(|p| p.collect_atoms(out)),
        }
    }

    /// Evaluate, deciding each atom through `atom` (called in `atoms()` order).
    pub fn eval_with<E>(
        &self,
        atom: &mut dyn FnMut(Rel, &Expr, &Expr) -> Result<bool, E>,
    ) -> Result<bool, E> {
        Ok(match self {
            Pred::True => true,
            Pred::False => false,
            Pred::Cmp(r, a, b) => atom(*r, a, b)?,
            Pred::Not(p) => !p.eval_with(atom)?,
            Pred::And(ps) => {
                let mut all = true;
                for p in ps {
                    all &= p.eval_with(atom)?;
                }
                all
            }
            Pred::Or(ps) => {
                let mut any = false;
                for p in ps {
                    any |= p.eval_with(atom)?;
                }
                any
            }
        })
    }

    /// Exact truth under a variable assignment.
    pub fn eval(&self, env: &dyn Fn(Var) -> Option<Q>) -> Result<bool, EvalError> {
        self.eval_with(&mut |r, a, b| {
            let d = a.eval(env)? - b.eval(env)?;
            Ok(r.holds(d.cmp(&Q::zero())))
        })
    }

    pub fn map_exprs(&self, f: &dyn Fn(&Expr) -> Expr) -> Pred {
        match self {
            Pred::True => Pred::True,
            Pred::False => Pred::False,
            Pred::Cmp(r, a, b) => Pred::Cmp(*r, f(a), f(b)),
            Pred::Not(p) => Pred::not(p.map_exprs(f)),
            Pred::And(ps) => Pred::And(ps.iter().map(|p| p.map_exprs(f)).collect()),
            Pred::Or(ps) => Pred::Or(ps.iter().map(|p| p.map_exprs(f)).collect()),
        }
    }

    pub fn subst(&self, v: Var, by: &Expr) -> Pred {
        self.map_exprs(&|e| e.subst(v, by))
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.atoms()
            .iter()
            .any(|(_, a, b)| a.mentions(v) || b.mentions(v))
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::True => write!(f, "true"),
            Pred::False => write!(f, "false"),
            Pred::Cmp(r, a, b) => write!(f, "({} {a} {b})", r.symbol()),
            Pred::Not(p) => write!(f, "(not {p})"),
            Pred::And(ps) | Pred::Or(ps) => {
                write!(f, "({}", if matches!(self, Pred::And(_)) { "and" } else { "or" })?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, q_frac};

    #[test]
    fn eval_examples() {
        let sq1 = Expr::add(Expr::mul(Expr::inner(), Expr::inner()), Expr::int(1));
        assert_eq!(sq1.eval_at(3).unwrap(), q(10));
        assert_eq!(Expr::int(7).eval_at(100).unwrap(), q(7));
        let eps = Expr::div(Expr::int(1), Expr::add(Expr::inner(), Expr::int(1)));
        assert_eq!(eps.eval_at(4).unwrap(), q_frac(1, 5));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let t = Expr::div(Expr::int(1), Expr::sub(Expr::inner(), Expr::int(2)));
        assert!(matches!(t.eval_at(2), Err(EvalError::DivisionByZeroAt(_))));
    }

    #[test]
    fn mod_is_euclidean() {
        let t = Expr::modulo(Expr::sub(Expr::int(0), Expr::inner()), 3);
        assert_eq!(t.eval_at(1).unwrap(), q(2));
    }

    #[test]
    fn nnf_flips_relations() {
        let p = Pred::not(Pred::And(vec![
            Pred::cmp(Rel::Lt, Expr::inner(), Expr::int(3)),
            Pred::True,
        ]));
        assert_eq!(
            p.nnf(),
            Pred::Or(vec![
                Pred::cmp(Rel::Ge, Expr::inner(), Expr::int(3)),
                Pred::False
            ])
        );
    }
}
