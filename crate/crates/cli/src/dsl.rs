//! The term and predicate DSL.
//!
//! Reserved atoms: `n` (inner index), `m` (outer index), `x`, `y` and `x<k>`
//! (slots), `omega` (the inner index), `eps` (`1/(n+1)`), integers and exact
//! rationals `p/q`. Operators: `+ - * / mod piecewise cases nu1 nu2 starnu`.
//! Predicates: `= != < <= > >= not and or true false`.

use std::str::FromStr;

use nsa_core::poly::Q;
use nsa_core::seq::{Expr, Pred, Rel, Var};
use nsa_core::sexpr::{parse_one, Sexp, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Term(Expr),
    Pred(Pred),
}

/// Parse a term or a predicate, chosen by the head symbol.
pub fn parse_term_dsl(text: &str) -> Result<Parsed, SyntaxError> {
    let s = parse_one(text)?;
    if is_pred(&s) {
        pred(&s).map(Parsed::Pred)
    } else {
        expr(&s).map(Parsed::Term)
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    expr(&parse_one(text)?)
}

pub fn parse_pred(text: &str) -> Result<Pred, SyntaxError> {
    pred(&parse_one(text)?)
}

fn rel_of(head: &str) -> Option<Rel> {
    Some(match head {
        "=" => Rel::Eq,
        "!=" => Rel::Ne,
        "<" => Rel::Lt,
        "<=" => Rel::Le,
        ">" => Rel::Gt,
        ">=" => Rel::Ge,
        _ => return None,
    })
}

fn is_pred(s: &Sexp) -> bool {
    match s {
        Sexp::Atom(a, _) => a == "true" || a == "false",
        Sexp::List(..) => s
            .as_call()
            .is_some_and(|(h, _)| rel_of(h).is_some() || matches!(h, "not" | "and" | "or")),
    }
}

fn arity(s: &Sexp, head: &str, args: &[Sexp], min: usize, max: Option<usize>) -> Result<(), SyntaxError> {
    let n = args.len();
    if n < min || max.is_some_and(|m| n > m) {
        let want = match max {
            Some(m) if m == min => format!("{min}"),
            Some(m) => format!("{min} to {m}"),
            None => format!("at least {min}"),
        };
        return Err(SyntaxError::new(s.pos(), format!("'{head}' takes {want} arguments, got {n}")));
    }
    Ok(())
}

pub fn pred(s: &Sexp) -> Result<Pred, SyntaxError> {
    if let Some(a) = s.as_atom() {
        return match a {
            "true" => Ok(Pred::True),
            "false" => Ok(Pred::False),
            _ => Err(SyntaxError::new(s.pos(), format!("expected a predicate, found '{a}'"))),
        };
    }
    let (head, args) = s
        .as_call()
        .ok_or_else(|| SyntaxError::new(s.pos(), "expected a predicate"))?;
    if let Some(r) = rel_of(head) {
        arity(s, head, args, 2, Some(2))?;
        return Ok(Pred::cmp(r, expr(&args[0])?, expr(&args[1])?));
    }
    match head {
        "not" => {
            arity(s, head, args, 1, Some(1))?;
            Ok(Pred::not(pred(&args[0])?))
        }
        "and" | "or" => {
            let ps = args.iter().map(pred).collect::<Result<Vec<_>, _>>()?;
            Ok(if head == "and" { Pred::And(ps) } else { Pred::Or(ps) })
        }
        _ => Err(SyntaxError::new(s.pos(), format!("unknown predicate '{head}'"))),
    }
}

fn literal(a: &str) -> Option<Q> {
    if !a.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
        return None;
    }
    Q::from_str(a).ok()
}

fn atom(a: &str, pos: usize) -> Result<Expr, SyntaxError> {
    match a {
        "n" | "omega" => Ok(Expr::inner()),
        "m" => Ok(Expr::outer()),
        "x" => Ok(Expr::slot(0)),
        "y" => Ok(Expr::slot(1)),
        "eps" => Ok(Expr::div(Expr::int(1), Expr::add(Expr::inner(), Expr::int(1)))),
        _ => {
            if let Some(k) = a.strip_prefix('x').and_then(|k| k.parse::<u8>().ok()) {
                return Ok(Expr::slot(k));
            }
            literal(a).map(Expr::constant).ok_or_else(|| {
                SyntaxError::new(pos, format!("unknown atom '{a}'"))
            })
        }
    }
}

/// A level-1 operand: no outer index.
fn level1(s: &Sexp, head: &str) -> Result<Expr, SyntaxError> {
    let e = expr(s)?;
    if e.mentions(Var::Outer) {
        return Err(SyntaxError::new(s.pos(), format!("the argument of '{head}' uses the outer index")));
    }
    Ok(e)
}

pub fn expr(s: &Sexp) -> Result<Expr, SyntaxError> {
    if let Sexp::Atom(a, pos) = s {
        return atom(a, *pos);
    }
    let (head, args) = s
        .as_call()
        .ok_or_else(|| SyntaxError::new(s.pos(), "expected a term"))?;
    let sub = |i: usize| expr(&args[i]);
    match head {
        "+" | "*" => {
            arity(s, head, args, 2, None)?;
            let mut acc = sub(0)?;
            for a in &args[1..] {
                let b = expr(a)?;
                acc = if head == "+" { Expr::add(acc, b) } else { Expr::mul(acc, b) };
            }
            Ok(acc)
        }
        "-" => {
            arity(s, head, args, 1, Some(2))?;
            if args.len() == 1 {
                Ok(Expr::sub(Expr::int(0), sub(0)?))
            } else {
                Ok(Expr::sub(sub(0)?, sub(1)?))
            }
        }
        "/" => {
            arity(s, head, args, 2, Some(2))?;
            Ok(Expr::div(sub(0)?, sub(1)?))
        }
        "mod" => {
            arity(s, head, args, 2, Some(2))?;
            let k = args[1]
                .as_atom()
                .and_then(|a| a.parse::<u64>().ok())
                .filter(|&k| k > 0)
                .ok_or_else(|| SyntaxError::new(args[1].pos(), "the modulus must be a positive integer"))?;
            Ok(Expr::modulo(sub(0)?, k))
        }
        "piecewise" => {
            arity(s, head, args, 1, None)?;
            Ok(Expr::piecewise(args.iter().map(expr).collect::<Result<_, _>>()?))
        }
        "cases" => {
            arity(s, head, args, 2, None)?;
            Ok(Expr::Cases {
                selector: Box::new(sub(0)?),
                branches: args[1..].iter().map(expr).collect::<Result<_, _>>()?,
            })
        }
        "nu1" => {
            arity(s, head, args, 1, Some(1))?;
            let e = sub(0)?;
            let v = e
                .eval(&|_| None)
                .map_err(|_| SyntaxError::new(args[0].pos(), "the argument of 'nu1' must be a standard constant"))?;
            Ok(Expr::constant(v))
        }
        "nu2" => {
            arity(s, head, args, 1, Some(1))?;
            level1(&args[0], head)
        }
        "starnu" => {
            arity(s, head, args, 1, Some(1))?;
            Ok(level1(&args[0], head)?.subst(Var::Inner, &Expr::outer()))
        }
        _ => Err(SyntaxError::new(s.pos(), format!("unknown operator '{head}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nsa_core::hyper::{star_nu, Hyper1};

    #[test]
    fn epsilon_and_star() {
        assert_eq!(parse_expr("(/ 1 (+ n 1))").unwrap(), Hyper1::epsilon().expr().clone());
        assert_eq!(parse_expr("eps").unwrap(), Hyper1::epsilon().expr().clone());
        assert_eq!(parse_expr("(starnu n)").unwrap(), star_nu(&Hyper1::omega()).expr().clone());
        assert_eq!(parse_expr("(nu1 (+ 1/2 1/3))").unwrap(), Expr::constant(Q::new(5.into(), 6.into())));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(parse_expr("(+ n").is_err());
        assert_eq!(parse_expr("(+ n 1/0)").unwrap_err().pos, 5);
        assert_eq!(parse_expr("(mod n 0)").unwrap_err().pos, 7);
        assert_eq!(parse_expr("(nu2 m)").unwrap_err().pos, 5);
        assert_eq!(parse_expr("(frob n)").unwrap_err().pos, 0);
    }

    #[test]
    fn head_selects_the_kind() {
        assert!(matches!(parse_term_dsl("(< n m)").unwrap(), Parsed::Pred(_)));
        assert!(matches!(parse_term_dsl("(mod n 2)").unwrap(), Parsed::Term(_)));
        assert_eq!(parse_term_dsl("true").unwrap(), Parsed::Pred(Pred::True));
    }
}
