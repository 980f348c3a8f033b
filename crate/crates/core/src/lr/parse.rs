//! Reader for relator descriptions.
//!
//! ```text
//! (lr (base b0 b1) (index e0 e1 e2)
//!     (principal ((e0 b1) (e1 b0) (e2 b1))))
//! (lr (base b0 b1) (index e0 e1)
//!     (table (universe e0) (members ((b1)) ((b0) (b1)))))
//! ```
//!
//! A table lists every member subset of `B^universe`, each as a list of
//! points; the remaining subsets are non-members.

use super::cylinder::Space;
use super::relator::LocalRelator;
use super::uf::{CylUF, MAX_TABLE_POINTS};
use super::LrError;
use crate::sexpr::{parse_one, Sexp, SyntaxError};

fn names(s: &Sexp, head: &str) -> Result<Vec<String>, LrError> {
    match s.as_call() {
        Some((h, args)) if h == head => Ok(args
            .iter()
            .map(|a| a.expect_atom(head).map(str::to_string))
            .collect::<Result<_, _>>()?),
        _ => Err(SyntaxError::new(s.pos(), format!("expected ({head} …)")).into()),
    }
}

fn lookup(names: &[String], s: &Sexp, what: &str) -> Result<usize, LrError> {
    let a = s.expect_atom(what)?;
    names
        .iter()
        .position(|n| n == a)
        .ok_or_else(|| SyntaxError::new(s.pos(), format!("unknown {what} {a}")).into())
}

/// An ultrafilter clause, `(principal …)` or `(table …)`, over the given names.
pub fn parse_uf(s: &Sexp, base: &[String], index: &[String]) -> Result<CylUF, LrError> {
    let Some((head, args)) = s.as_call() else {
        return Err(SyntaxError::new(s.pos(), "expected an ultrafilter clause").into());
    };
    match (head, args) {
        ("principal", [pairs]) => {
            let mut point = vec![None; index.len()];
            for p in pairs.expect_list("assignment list")? {
                let [e, b] = p.expect_list("(index value)")? else {
                    return Err(SyntaxError::new(p.pos(), "expected (index value)").into());
                };
                let e = lookup(index, e, "index")?;
                if point[e].replace(lookup(base, b, "base element")?).is_some() {
                    return Err(SyntaxError::new(p.pos(), format!("{} assigned twice", index[e])).into());
                }
            }
            let point: Option<Vec<usize>> = point.into_iter().collect();
            point
                .map(CylUF::PrincipalAt)
                .ok_or_else(|| SyntaxError::new(s.pos(), "every index needs a value").into())
        }
        ("table", [universe, members]) => {
            let coords: Vec<usize> = names(universe, "universe")?
                .iter()
                .map(|n| {
                    index
                        .iter()
                        .position(|i| i == n)
                        .ok_or_else(|| SyntaxError::new(universe.pos(), format!("unknown index {n}")))
                })
                .collect::<Result<_, _>>()?;
            let space = Space::new(base.len(), coords.clone());
            if space.coords != coords {
                return Err(SyntaxError::new(universe.pos(), "universe must be listed in index order without repeats").into());
            }
            if space.points() > MAX_TABLE_POINTS {
                return Err(LrError::TooLarge(format!("{} points in the table universe", space.points())));
            }
            let Some(("members", sets)) = members.as_call() else {
                return Err(SyntaxError::new(members.pos(), "expected (members …)").into());
            };
            let mut table = vec![false; 1 << space.points()];
            for set in sets {
                let mut mask = 0usize;
                for p in set.expect_list("subset")? {
                    let vals = p.expect_list("point")?;
                    if vals.len() != coords.len() {
                        return Err(SyntaxError::new(p.pos(), "point has the wrong length").into());
                    }
                    let pt: Vec<usize> = vals.iter().map(|v| lookup(base, v, "base element")).collect::<Result<_, _>>()?;
                    mask |= 1 << space.index(&pt);
                }
                table[mask] = true;
            }
            CylUF::table(base.len(), coords, table)
        }
        _ => Err(SyntaxError::new(s.pos(), format!("malformed ultrafilter clause {head}")).into()),
    }
}

/// Parse an `(lr (base …) (index …) L)` description.
pub fn parse_lr(text: &str) -> Result<LocalRelator, LrError> {
    lr_from_sexp(&parse_one(text)?)
}

/// The relator described by an already-read `(lr …)` form.
pub fn lr_from_sexp(s: &Sexp) -> Result<LocalRelator, LrError> {
    let Some(("lr", [base, index, uf])) = s.as_call() else {
        return Err(SyntaxError::new(s.pos(), "expected (lr (base …) (index …) ultrafilter)").into());
    };
    let base = names(base, "base")?;
    let index = names(index, "index")?;
    let uf = parse_uf(uf, &base, &index)?;
    LocalRelator::new(base, index, uf)
}
