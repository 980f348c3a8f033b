//! Minimal s-expression reader with byte positions for diagnostics.
//!
//! Atoms are maximal runs of characters other than whitespace, parentheses
//! and `;`. A `;` starts a comment that runs to the end of the line.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(pos: usize, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    pub fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v, _) => Some(v),
            Sexp::Atom(..) => None,
        }
    }

    /// The list's head symbol and its arguments.
    pub fn as_call(&self) -> Option<(&str, &[Sexp])> {
        let l = self.as_list()?;
        let (h, rest) = l.split_first()?;
        Some((h.as_atom()?, rest))
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, SyntaxError> {
        self.as_atom()
            .ok_or_else(|| SyntaxError::new(self.pos(), format!("expected {what}")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[Sexp], SyntaxError> {
        self.as_list()
            .ok_or_else(|| SyntaxError::new(self.pos(), format!("expected {what}")))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(v, _) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => Err(SyntaxError::new(start, "unexpected end of input")),
            Some(b')') => Err(SyntaxError::new(start, "unexpected ')'")),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        None => {
                            return Err(SyntaxError::new(
                                self.pos,
                                format!("unclosed '(' opened at {start}"),
                            ))
                        }
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b';' {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(Sexp::Atom(self.text[start..self.pos].to_string(), start))
            }
        }
    }
}

/// Read every top-level expression.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut r = Reader {
        src: text.as_bytes(),
        text,
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        r.skip_ws();
        if r.pos >= r.src.len() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Read exactly one expression.
pub fn parse_one(text: &str) -> Result<Sexp, SyntaxError> {
    let all = parse_all(text)?;
    match all.len() {
        0 => Err(SyntaxError::new(0, "empty input")),
        1 => Ok(all.into_iter().next().unwrap()),
        _ => Err(SyntaxError::new(all[1].pos(), "trailing input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_positions() {
        let s = parse_one("(a (b c) ; note\n d)").unwrap();
        let l = s.as_list().unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l[1].pos(), 3);
        assert_eq!(l[2].as_atom(), Some("d"));
        assert_eq!(s.to_string(), "(a (b c) d)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_one("(exists (x A) (Q x").unwrap_err();
        assert_eq!(e.pos, 18);
        assert_eq!(parse_one("a)").unwrap_err().pos, 1);
        assert_eq!(parse_one(")").unwrap_err().pos, 0);
    }
}
