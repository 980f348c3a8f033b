//! First-order formulas over a sorted signature and their s-expression syntax.
//!
//! ```text
//! φ ::= true | false | (= t t) | (R t …) | (not φ) | (and φ …) | (or φ …)
//!     | (implies φ φ) | (exists (x A) φ) | (forall (x A) φ)
//! t ::= x | (nu a) | (f t …)
//! ```
//! `(nu a)` names the standard element `a`; in an ultrapower it denotes `ν(a)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::sexpr::{parse_one, Sexp, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Nu(String),
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, String, Box<Formula>),
    Forall(String, String, Box<Formula>),
}

const RESERVED: [&str; 9] = [
    "true", "false", "=", "not", "and", "or", "implies", "exists", "forall",
];

impl Term {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Nu(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, sort: &str, body: Formula) -> Formula {
        Formula::Exists(v.into(), sort.into(), Box::new(body))
    }

    pub fn forall(v: &str, sort: &str, body: Formula) -> Formula {
        Formula::Forall(v.into(), sort.into(), Box::new(body))
    }

    pub fn rel(name: &str, args: &[&str]) -> Formula {
        Formula::Rel(
            name.into(),
            args.iter().map(|a| Term::Var((*a).into())).collect(),
        )
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_free(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(out)),
            Formula::Implies(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Exists(v, _, f) | Formula::Forall(v, _, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, _, f) | Formula::Forall(_, _, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Number of propositional connectives; an n-ary and/or counts n-1.
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => 1 + f.connective_count(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.len().saturating_sub(1) + fs.iter().map(Formula::connective_count).sum::<usize>()
            }
            Formula::Implies(a, b) => 1 + a.connective_count() + b.connective_count(),
            Formula::Exists(_, _, f) | Formula::Forall(_, _, f) => f.connective_count(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Nu(a) => write!(f, "(nu {a})"),
            Term::App(g, args) => {
                write!(f, "({g}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, fs: &[Formula]| {
            write!(f, "({head}")?;
            for x in fs {
                write!(f, " {x}")?;
            }
            f.write_str(")")
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Rel(r, ts) => {
                write!(f, "({r}")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Exists(v, s, b) => write!(f, "(exists ({v} {s}) {b})"),
            Formula::Forall(v, s, b) => write!(f, "(forall ({v} {s}) {b})"),
        }
    }
}

fn parse_term(s: &Sexp) -> Result<Term, SyntaxError> {
    match s {
        Sexp::Atom(a, p) => {
            if RESERVED.contains(&a.as_str()) {
                return Err(SyntaxError::new(*p, format!("'{a}' is not a term")));
            }
            Ok(Term::Var(a.clone()))
        }
        Sexp::List(items, p) => {
            let (head, args) = s
                .as_call()
                .ok_or_else(|| SyntaxError::new(*p, "expected a term"))?;
            if head == "nu" {
                return match args {
                    [a] => Ok(Term::Nu(a.expect_atom("an element name")?.to_string())),
                    _ => Err(SyntaxError::new(*p, "nu takes one element name")),
                };
            }
            if RESERVED.contains(&head) {
                return Err(SyntaxError::new(items[0].pos(), format!("'{head}' is not a function")));
            }
            Ok(Term::App(
                head.to_string(),
                args.iter().map(parse_term).collect::<Result<_, _>>()?,
            ))
        }
    }
}

fn parse_binder(s: &Sexp) -> Result<(String, String), SyntaxError> {
    match s.expect_list("a binder (x Sort)")? {
        [v, sort] => Ok((
            v.expect_atom("a variable")?.to_string(),
            sort.expect_atom("a sort")?.to_string(),
        )),
        _ => Err(SyntaxError::new(s.pos(), "binder must be (variable Sort)")),
    }
}

pub fn formula_from_sexp(s: &Sexp) -> Result<Formula, SyntaxError> {
    match s {
        Sexp::Atom(a, p) => match a.as_str() {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            _ => Err(SyntaxError::new(*p, format!("expected a formula, found '{a}'"))),
        },
        Sexp::List(_, p) => {
            let (head, args) = s
                .as_call()
                .ok_or_else(|| SyntaxError::new(*p, "expected a formula"))?;
            let arity = |n: usize| -> Result<(), SyntaxError> {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(SyntaxError::new(*p, format!("'{head}' takes {n} arguments")))
                }
            };
            match head {
                "=" => {
                    arity(2)?;
                    Ok(Formula::Eq(parse_term(&args[0])?, parse_term(&args[1])?))
                }
                "not" => {
                    arity(1)?;
                    Ok(Formula::not(formula_from_sexp(&args[0])?))
                }
                "and" | "or" => {
                    let fs = args.iter().map(formula_from_sexp).collect::<Result<Vec<_>, _>>()?;
                    Ok(if head == "and" {
                        Formula::And(fs)
                    } else {
                        Formula::Or(fs)
                    })
                }
                "implies" => {
                    arity(2)?;
                    Ok(Formula::implies(
                        formula_from_sexp(&args[0])?,
                        formula_from_sexp(&args[1])?,
                    ))
                }
                "exists" | "forall" => {
                    arity(2)?;
                    let (v, sort) = parse_binder(&args[0])?;
                    let body = Box::new(formula_from_sexp(&args[1])?);
                    Ok(if head == "exists" {
                        Formula::Exists(v, sort, body)
                    } else {
                        Formula::Forall(v, sort, body)
                    })
                }
                "true" | "false" | "nu" => Err(SyntaxError::new(*p, format!("'{head}' cannot be applied"))),
                r => Ok(Formula::Rel(
                    r.to_string(),
                    args.iter().map(parse_term).collect::<Result<_, _>>()?,
                )),
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    formula_from_sexp(&parse_one(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f = parse_formula("(exists (x A) (forall (y A) (<= x y)))").unwrap();
        assert_eq!(f.quantifier_depth(), 2);
        assert!(f.is_sentence());
        let g = parse_formula("(and (R x y) (not (= x y)))").unwrap();
        assert_eq!(g.free_vars(), ["x".to_string(), "y".to_string()].into());
        assert!(parse_formula("(exists (x A) (Q x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "(forall (x A) (implies (R x (nu a)) (or (= x (f x)) false)))",
            "(and true (not (exists (y B) (S y y y))))",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(f.to_string(), src);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn bad_shapes_are_rejected() {
        assert!(parse_formula("(exists x (R x))").is_err());
        assert!(parse_formula("(not a b)").is_err());
        assert!(parse_formula("(R (and x))").is_err());
        assert!(parse_formula("x").is_err());
    }
}
