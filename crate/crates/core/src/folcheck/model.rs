//! Finite many-sorted structures, their s-expression syntax and exhaustive
//! satisfaction.
//!
//! ```text
//! (model
//!   (carrier A a0 a1)
//!   (relation R (A A) (a0 a0) (a0 a1))
//!   (function f (A) A ((a0) a1) ((a1) a0)))
//! ```

use std::collections::{BTreeMap, BTreeSet};

use super::formula::{Formula, Term};
use super::FolError;
use crate::sexpr::{parse_one, Sexp, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub sig: Vec<String>,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub dom: Vec<String>,
    pub cod: String,
    pub table: BTreeMap<Vec<usize>, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteModel {
    carriers: BTreeMap<String, Vec<String>>,
    /// Per carrier, the element each standard name `(nu a)` denotes.
    standard: BTreeMap<String, BTreeMap<String, usize>>,
    relations: BTreeMap<String, Relation>,
    functions: BTreeMap<String, Function>,
}

/// Variable assignment: name ↦ (sort, element).
pub type Assignment = BTreeMap<String, (String, usize)>;

/// All tuples over the given carrier sizes, in lexicographic order.
pub fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for v in 0..n {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

impl FiniteModel {
    pub fn new() -> FiniteModel {
        FiniteModel::default()
    }

    /// Declare a carrier whose elements are also the standard names.
    pub fn add_carrier(&mut self, name: &str, atoms: &[String]) -> Result<(), FolError> {
        let names: BTreeMap<String, usize> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        if names.len() != atoms.len() {
            return Err(FolError::SignatureMismatch(format!(
                "carrier {name} repeats an element"
            )));
        }
        self.add_carrier_with_names(name, atoms.to_vec(), names)
    }

    pub(crate) fn add_carrier_with_names(
        &mut self,
        name: &str,
        atoms: Vec<String>,
        names: BTreeMap<String, usize>,
    ) -> Result<(), FolError> {
        if self.carriers.contains_key(name) {
            return Err(FolError::SignatureMismatch(format!("carrier {name} declared twice")));
        }
        self.carriers.insert(name.to_string(), atoms);
        self.standard.insert(name.to_string(), names);
        Ok(())
    }

    /// Convenience: carrier with elements named `prefix0, prefix1, …`.
    pub fn add_sized_carrier(&mut self, name: &str, size: usize) -> Result<(), FolError> {
        let atoms: Vec<String> = (0..size).map(|i| format!("{}{i}", name.to_lowercase())).collect();
        self.add_carrier(name, &atoms)
    }

    pub fn add_relation(
        &mut self,
        name: &str,
        sig: &[&str],
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<(), FolError> {
        let sig: Vec<String> = sig.iter().map(|s| s.to_string()).collect();
        let sizes = self.sizes_of(&sig)?;
        let tuples: BTreeSet<Vec<usize>> = tuples.into_iter().collect();
        for t in &tuples {
            if t.len() != sizes.len() || t.iter().zip(&sizes).any(|(v, n)| v >= n) {
                return Err(FolError::SignatureMismatch(format!(
                    "tuple {t:?} does not fit relation {name}"
                )));
            }
        }
        if self.relations.contains_key(name) || self.functions.contains_key(name) {
            return Err(FolError::SignatureMismatch(format!("symbol {name} declared twice")));
        }
        self.relations.insert(name.to_string(), Relation { sig, tuples });
        Ok(())
    }

    pub fn add_function(
        &mut self,
        name: &str,
        dom: &[&str],
        cod: &str,
        table: BTreeMap<Vec<usize>, usize>,
    ) -> Result<(), FolError> {
        let dom: Vec<String> = dom.iter().map(|s| s.to_string()).collect();
        let sizes = self.sizes_of(&dom)?;
        let cod_size = self.carrier_size(cod)?;
        for t in tuples(&sizes) {
            match table.get(&t) {
                Some(&v) if v < cod_size => {}
                _ => {
                    return Err(FolError::SignatureMismatch(format!(
                        "function {name} is not total with values in {cod} at {t:?}"
                    )))
                }
            }
        }
        if table.len() != tuples(&sizes).len() {
            return Err(FolError::SignatureMismatch(format!(
                "function {name} has entries outside its domain"
            )));
        }
        if self.relations.contains_key(name) || self.functions.contains_key(name) {
            return Err(FolError::SignatureMismatch(format!("symbol {name} declared twice")));
        }
        self.functions.insert(
            name.to_string(),
            Function {
                dom,
                cod: cod.to_string(),
                table,
            },
        );
        Ok(())
    }

    pub fn carriers(&self) -> &BTreeMap<String, Vec<String>> {
        &self.carriers
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn functions(&self) -> &BTreeMap<String, Function> {
        &self.functions
    }

    pub fn standard_names(&self, carrier: &str) -> Option<&BTreeMap<String, usize>> {
        self.standard.get(carrier)
    }

    pub fn carrier_size(&self, name: &str) -> Result<usize, FolError> {
        self.carriers
            .get(name)
            .map(Vec::len)
            .ok_or_else(|| FolError::SignatureMismatch(format!("unknown carrier {name}")))
    }

    fn sizes_of(&self, sorts: &[String]) -> Result<Vec<usize>, FolError> {
        sorts.iter().map(|s| self.carrier_size(s)).collect()
    }

    fn sort_of_name(&self, a: &str) -> Result<String, FolError> {
        let hits: Vec<&String> = self
            .standard
            .iter()
            .filter(|(_, names)| names.contains_key(a))
            .map(|(c, _)| c)
            .collect();
        match hits.as_slice() {
            [c] => Ok((*c).clone()),
            [] => Err(FolError::SignatureMismatch(format!("unknown element {a}"))),
            _ => Err(FolError::SortError(format!("element {a} is ambiguous"))),
        }
    }

    fn eval_term(
        &self,
        t: &Term,
        expected: Option<&str>,
        env: &Assignment,
    ) -> Result<(String, usize), FolError> {
        let out = match t {
            Term::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| FolError::Unbound(v.clone()))?,
            Term::Nu(a) => {
                let sort = match expected {
                    Some(s) => s.to_string(),
                    None => self.sort_of_name(a)?,
                };
                let v = self
                    .standard
                    .get(&sort)
                    .and_then(|m| m.get(a))
                    .ok_or_else(|| FolError::SortError(format!("{a} is not an element of {sort}")))?;
                (sort, *v)
            }
            Term::App(fname, args) => {
                let f = self.functions.get(fname).ok_or_else(|| {
                    FolError::SignatureMismatch(format!("unknown function {fname}"))
                })?;
                if args.len() != f.dom.len() {
                    return Err(FolError::SignatureMismatch(format!(
                        "{fname} takes {} arguments",
                        f.dom.len()
                    )));
                }
                let mut vals = Vec::with_capacity(args.len());
                for (a, s) in args.iter().zip(&f.dom) {
                    vals.push(self.eval_term(a, Some(s), env)?.1);
                }
                (f.cod.clone(), f.table[&vals])
            }
        };
        if let Some(s) = expected {
            if out.0 != s {
                return Err(FolError::SortError(format!("{t} has sort {}, expected {s}", out.0)));
            }
        }
        Ok(out)
    }

    /// Classical satisfaction by exhaustive expansion of quantifiers.
    pub fn eval(&self, phi: &Formula, env: &Assignment) -> Result<bool, FolError> {
        Ok(match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(r, args) => {
                let rel = self
                    .relations
                    .get(r)
                    .ok_or_else(|| FolError::SignatureMismatch(format!("unknown relation {r}")))?;
                if args.len() != rel.sig.len() {
                    return Err(FolError::SignatureMismatch(format!(
                        "{r} takes {} arguments",
                        rel.sig.len()
                    )));
                }
                let mut vals = Vec::with_capacity(args.len());
                for (a, s) in args.iter().zip(&rel.sig) {
                    vals.push(self.eval_term(a, Some(s), env)?.1);
                }
                rel.tuples.contains(&vals)
            }
            Formula::Eq(a, b) => {
                let (sa, va) = match a {
                    Term::Nu(_) => {
                        let (sb, _) = self.eval_term(b, None, env)?;
                        self.eval_term(a, Some(&sb), env)?
                    }
                    _ => self.eval_term(a, None, env)?,
                };
                let (_, vb) = self.eval_term(b, Some(&sa), env)?;
                va == vb
            }
            Formula::Not(f) => !self.eval(f, env)?,
            Formula::And(fs) => {
                let mut all = true;
                for f in fs {
                    all &= self.eval(f, env)?;
                }
                all
            }
            Formula::Or(fs) => {
                let mut any = false;
                for f in fs {
                    any |= self.eval(f, env)?;
                }
                any
            }
            Formula::Implies(a, b) => {
                let a = self.eval(a, env)?;
                let b = self.eval(b, env)?;
                !a || b
            }
            Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
                let n = self.carrier_size(s)?;
                let exists = matches!(phi, Formula::Exists(..));
                let mut env2 = env.clone();
                // Evaluate once on an empty carrier too, so signature errors surface.
                let mut acc = !exists;
                for x in 0..n {
                    env2.insert(v.clone(), (s.clone(), x));
                    let b = self.eval(body, &env2)?;
                    if exists {
                        acc |= b;
                    } else {
                        acc &= b;
                    }
                }
                acc
            }
        })
    }
}

/// Satisfaction of `phi` in `m` under `env`.
pub fn eval_standard(m: &FiniteModel, phi: &Formula, env: &Assignment) -> Result<bool, FolError> {
    let free = phi.free_vars();
    if let Some(v) = free.iter().find(|v| !env.contains_key(*v)) {
        return Err(FolError::Unbound(v.clone()));
    }
    m.eval(phi, env)
}

fn atom_index(m: &FiniteModel, sort: &str, s: &Sexp) -> Result<usize, FolError> {
    let a = s.expect_atom("an element")?;
    m.standard_names(sort)
        .and_then(|names| names.get(a))
        .copied()
        .ok_or_else(|| FolError::Syntax(SyntaxError::new(s.pos(), format!("{a} is not in {sort}"))))
}

fn sort_list(s: &Sexp) -> Result<Vec<String>, FolError> {
    Ok(s.expect_list("a sort list")?
        .iter()
        .map(|x| x.expect_atom("a sort").map(str::to_string))
        .collect::<Result<_, _>>()?)
}

/// Parse a model description.
pub fn parse_model(text: &str) -> Result<FiniteModel, FolError> {
    let top = parse_one(text)?;
    let (head, decls) = top
        .as_call()
        .ok_or_else(|| SyntaxError::new(top.pos(), "expected (model …)"))?;
    if head != "model" {
        return Err(SyntaxError::new(top.pos(), "expected (model …)").into());
    }
    let mut m = FiniteModel::new();
    for d in decls {
        let (kind, args) = d
            .as_call()
            .ok_or_else(|| SyntaxError::new(d.pos(), "expected a declaration"))?;
        let name = args
            .first()
            .ok_or_else(|| SyntaxError::new(d.pos(), "declaration needs a name"))?
            .expect_atom("a name")?;
        match kind {
            "carrier" => {
                let atoms = args[1..]
                    .iter()
                    .map(|a| a.expect_atom("an element").map(str::to_string))
                    .collect::<Result<Vec<_>, _>>()?;
                m.add_carrier(name, &atoms)?;
            }
            "relation" => {
                let sig = sort_list(args.get(1).ok_or_else(|| {
                    SyntaxError::new(d.pos(), "relation needs a signature")
                })?)?;
                let mut ts = Vec::new();
                for t in &args[2..] {
                    let items = t.expect_list("a tuple")?;
                    if items.len() != sig.len() {
                        return Err(SyntaxError::new(t.pos(), "tuple arity mismatch").into());
                    }
                    ts.push(
                        items
                            .iter()
                            .zip(&sig)
                            .map(|(x, s)| atom_index(&m, s, x))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                let sig_ref: Vec<&str> = sig.iter().map(String::as_str).collect();
                m.add_relation(name, &sig_ref, ts)?;
            }
            "function" => {
                let dom = sort_list(args.get(1).ok_or_else(|| {
                    SyntaxError::new(d.pos(), "function needs a domain")
                })?)?;
                let cod = args
                    .get(2)
                    .ok_or_else(|| SyntaxError::new(d.pos(), "function needs a codomain"))?
                    .expect_atom("a sort")?
                    .to_string();
                let mut table = BTreeMap::new();
                for e in &args[3..] {
                    let pair = e.expect_list("an entry ((args…) value)")?;
                    let [xs, y] = pair else {
                        return Err(SyntaxError::new(e.pos(), "entry must be ((args…) value)").into());
                    };
                    let xs = xs.expect_list("an argument tuple")?;
                    if xs.len() != dom.len() {
                        return Err(SyntaxError::new(e.pos(), "entry arity mismatch").into());
                    }
                    let key = xs
                        .iter()
                        .zip(&dom)
                        .map(|(x, s)| atom_index(&m, s, x))
                        .collect::<Result<Vec<_>, _>>()?;
                    table.insert(key, atom_index(&m, &cod, y)?);
                }
                let dom_ref: Vec<&str> = dom.iter().map(String::as_str).collect();
                m.add_function(name, &dom_ref, &cod, table)?;
            }
            other => {
                return Err(SyntaxError::new(d.pos(), format!("unknown declaration {other}")).into())
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folcheck::formula::parse_formula;

    fn le_model(strict: bool) -> FiniteModel {
        let mut m = FiniteModel::new();
        m.add_sized_carrier("A", 2).unwrap();
        let ts = tuples(&[2, 2])
            .into_iter()
            .filter(|t| if strict { t[0] < t[1] } else { t[0] <= t[1] });
        m.add_relation("R", &["A", "A"], ts).unwrap();
        m
    }

    #[test]
    fn satisfaction_examples() {
        let env = Assignment::new();
        let least = parse_formula("(exists (x A) (forall (y A) (R x y)))").unwrap();
        assert!(eval_standard(&le_model(false), &least, &env).unwrap());
        let refl = parse_formula("(exists (x A) (R x x))").unwrap();
        assert!(!eval_standard(&le_model(true), &refl, &env).unwrap());
        let mut empty = FiniteModel::new();
        empty.add_sized_carrier("A", 0).unwrap();
        let ex = parse_formula("(exists (x A) true)").unwrap();
        assert!(!eval_standard(&empty, &ex, &env).unwrap());
    }

    #[test]
    fn signature_errors() {
        let env = Assignment::new();
        let m = le_model(false);
        let bad = parse_formula("(exists (x A) (S x))").unwrap();
        assert!(matches!(eval_standard(&m, &bad, &env), Err(FolError::SignatureMismatch(_))));
        let arity = parse_formula("(exists (x A) (R x))").unwrap();
        assert!(matches!(eval_standard(&m, &arity, &env), Err(FolError::SignatureMismatch(_))));
        let free = parse_formula("(R x x)").unwrap();
        assert!(matches!(eval_standard(&m, &free, &env), Err(FolError::Unbound(_))));
    }

    #[test]
    fn model_dsl() {
        let m = parse_model(
            "(model (carrier A a0 a1) (relation R (A A) (a0 a1)) \
             (function f (A) A ((a0) a1) ((a1) a0)))",
        )
        .unwrap();
        let env = Assignment::new();
        let phi = parse_formula("(forall (x A) (not (= (f x) x)))").unwrap();
        assert!(eval_standard(&m, &phi, &env).unwrap());
        let psi = parse_formula("(R (nu a0) (f (nu a0)))").unwrap();
        assert!(eval_standard(&m, &psi, &env).unwrap());
        assert!(parse_model("(model (carrier A a0) (relation R (A) (a1)))").is_err());
        assert!(parse_model("(model (carrier A a0 a1) (function f (A) A ((a0) a1)))").is_err());
    }
}
