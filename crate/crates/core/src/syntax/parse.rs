//! Prefix formula grammar:
//!
//! ```text
//! formula := var | conn "(" formula ("," formula)* ")" | conn
//! var     := "x" digits
//! ```
//!
//! `¬ ∨ ∧ → ↔ ⊤ ⊥` are accepted as connective tokens and normalised to
//! their ASCII names.

use super::signature::{canonical_name, is_var_name};
use super::{Formula, Signature, SyntaxError};

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula(sig)?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.malformed("trailing input"));
    }
    Ok(f)
}

/// Parses a bracketed, comma-separated list `[f1, f2, ...]`.
pub fn parse_formula_list(text: &str, sig: &Signature) -> Result<Vec<Formula>, SyntaxError> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    p.expect('[')?;
    let mut out = Vec::new();
    p.skip_ws();
    if p.peek() == Some(']') {
        p.bump();
    } else {
        loop {
            out.push(p.formula(sig)?);
            p.skip_ws();
            match p.peek() {
                Some(',') => p.bump(),
                Some(']') => {
                    p.bump();
                    break;
                }
                _ => return Err(p.malformed("expected ',' or ']'")),
            }
        }
    }
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.malformed("trailing input"));
    }
    Ok(out)
}

pub(crate) struct Parser<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.malformed(&format!("expected '{c}'")))
        }
    }

    pub(crate) fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn malformed(&self, msg: &str) -> SyntaxError {
        SyntaxError::Malformed {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn token(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let c = self.peek()?;
        if "¬∨∧→↔⊤⊥".contains(c) {
            self.bump();
            return Some((start, &self.src[start..self.pos]));
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        {
            self.bump();
        }
        if self.pos == start {
            None
        } else {
            Some((start, &self.src[start..self.pos]))
        }
    }

    pub(crate) fn formula(&mut self, sig: &Signature) -> Result<Formula, SyntaxError> {
        let (start, tok) = self
            .token()
            .ok_or_else(|| self.malformed("expected a variable or connective"))?;
        if is_var_name(tok) {
            let idx: u32 = tok[1..]
                .parse()
                .map_err(|_| SyntaxError::Malformed {
                    pos: start,
                    msg: format!("variable index out of range in '{tok}'"),
                })?;
            return Ok(Formula::Var(idx));
        }
        let name = canonical_name(tok);
        let arity = sig.arity(name).ok_or_else(|| SyntaxError::UnknownConnective {
            name: name.to_string(),
            signature: sig.name().to_string(),
            pos: Some(start),
        })?;
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            loop {
                args.push(self.formula(sig)?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.bump(),
                    Some(')') => {
                        self.bump();
                        break;
                    }
                    _ => return Err(self.malformed("expected ',' or ')'")),
                }
            }
        }
        if args.len() != arity {
            return Err(SyntaxError::ArityMismatch {
                name: name.to_string(),
                expected: arity,
                found: args.len(),
                pos: Some(start),
            });
        }
        Ok(Formula::app(name, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new("s", [("neg", 1), ("or", 2), ("top", 0)]).unwrap()
    }

    #[test]
    fn variable() {
        assert_eq!(parse_formula("x0", &sig()).unwrap(), Formula::Var(0));
        assert_eq!(parse_formula("  x17 ", &sig()).unwrap(), Formula::Var(17));
    }

    #[test]
    fn nested_application() {
        let f = parse_formula("neg(or(x0,x1))", &sig()).unwrap();
        let expected = Formula::app(
            "neg",
            vec![Formula::app("or", vec![Formula::Var(0), Formula::Var(1)])],
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn unicode_tokens() {
        let f = parse_formula("¬(∨(x0, ⊤))", &sig()).unwrap();
        assert_eq!(f.to_string(), "neg(or(x0,top))");
    }

    #[test]
    fn arity_mismatch_reports_position() {
        let err = parse_formula("neg(or(x0))", &sig()).unwrap_err();
        match err {
            SyntaxError::ArityMismatch {
                name,
                expected,
                found,
                pos,
            } => {
                assert_eq!((name.as_str(), expected, found, pos), ("or", 2, 1, Some(4)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_connective() {
        let err = parse_formula("imp(x0,x1)", &sig()).unwrap_err();
        assert!(matches!(err, SyntaxError::UnknownConnective { pos: Some(0), .. }));
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "or(x0,", "or(x0 x1)", "x0 x1", "neg()", "(x0)"] {
            assert!(parse_formula(bad, &sig()).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn constant_with_or_without_parens() {
        assert_eq!(parse_formula("top", &sig()).unwrap(), Formula::constant("top"));
        assert!(parse_formula("top()", &sig()).is_err());
    }

    #[test]
    fn lists() {
        let v = parse_formula_list("[x0, neg(x1)]", &sig()).unwrap();
        assert_eq!(v.len(), 2);
        assert!(parse_formula_list("[]", &sig()).unwrap().is_empty());
        assert!(parse_formula_list("[x0", &sig()).is_err());
    }
}
