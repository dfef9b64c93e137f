use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::SyntaxError;

/// Interned connective name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Conn(Arc<str>);

impl Conn {
    pub fn new(name: &str) -> Self {
        Conn(Arc::from(canonical_name(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Conn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Conn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Conn {
    fn from(s: &str) -> Self {
        Conn::new(s)
    }
}

/// Maps the accepted Unicode spellings onto their ASCII connective names.
pub fn canonical_name(name: &str) -> &str {
    match name {
        "¬" => "neg",
        "∨" => "or",
        "∧" => "and",
        "→" => "imp",
        "↔" => "iff",
        "⊤" => "top",
        "⊥" => "bot",
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Connective {
    pub name: Conn,
    pub arity: usize,
}

/// An arity-indexed family of connective names.
///
/// Connectives are kept sorted by arity, preserving declaration order within
/// one arity. That order is the "connective order" used by formula
/// enumeration and by the table layout of finite algebras.
#[derive(Debug, Clone)]
pub struct Signature {
    name: String,
    conns: Vec<Connective>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.conns == other.conns
    }
}

impl Eq for Signature {}

impl std::hash::Hash for Signature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.conns.hash(state);
    }
}

impl Signature {
    pub fn new<'a, I>(name: &str, conns: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut list: Vec<Connective> = Vec::new();
        for (raw, arity) in conns {
            let conn = Conn::new(raw);
            if !is_identifier(conn.as_str()) || is_var_name(conn.as_str()) {
                return Err(SyntaxError::BadConnectiveName(conn.to_string()));
            }
            if list.iter().any(|c| c.name == conn) {
                return Err(SyntaxError::DuplicateConnective(conn.to_string()));
            }
            list.push(Connective { name: conn, arity });
        }
        // stable: keeps declaration order inside an arity
        list.sort_by_key(|c| c.arity);
        Ok(Signature {
            name: name.to_string(),
            conns: list,
        })
    }

    /// Parses compact `name/arity` declarations such as `["neg/1", "or/2"]`.
    pub fn from_decls(name: &str, decls: &[String]) -> Result<Self, SyntaxError> {
        let mut pairs = Vec::new();
        for d in decls {
            let (n, a) = d
                .rsplit_once('/')
                .ok_or_else(|| SyntaxError::BadDeclaration(d.clone()))?;
            let arity: usize = a
                .trim()
                .parse()
                .map_err(|_| SyntaxError::BadDeclaration(d.clone()))?;
            pairs.push((n.trim().to_string(), arity));
        }
        Signature::new(name, pairs.iter().map(|(n, a)| (n.as_str(), *a)))
    }

    pub fn empty(name: &str) -> Self {
        Signature {
            name: name.to_string(),
            conns: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.conns
    }

    pub fn len(&self) -> usize {
        self.conns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conns.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        let name = canonical_name(name);
        self.conns.iter().position(|c| c.name.as_str() == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.conns[i].arity)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn of_arity(&self, n: usize) -> impl Iterator<Item = &Connective> {
        self.conns.iter().filter(move |c| c.arity == n)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Connective> {
        self.of_arity(0)
    }

    pub fn max_arity(&self) -> usize {
        self.conns.iter().map(|c| c.arity).max().unwrap_or(0)
    }

    /// Same connectives under a different name.
    pub fn renamed(&self, name: &str) -> Self {
        Signature {
            name: name.to_string(),
            conns: self.conns.clone(),
        }
    }

    /// `name/arity` declarations in connective order.
    pub fn decls(&self) -> Vec<String> {
        self.conns
            .iter()
            .map(|c| format!("{}/{}", c.name, c.arity))
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.name, self.decls().join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_var_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('x') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_by_arity_then_declaration() {
        let s = Signature::new("s", [("or", 2), ("neg", 1), ("and", 2), ("top", 0)]).unwrap();
        let names: Vec<_> = s.connectives().iter().map(|c| c.name.to_string()).collect();
        assert_eq!(names, ["top", "neg", "or", "and"]);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Signature::new("s", [("neg", 1), ("neg", 2)]).unwrap_err();
        assert!(matches!(err, SyntaxError::DuplicateConnective(_)));
    }

    #[test]
    fn unicode_aliases_normalise() {
        let s = Signature::new("s", [("¬", 1), ("∨", 2)]).unwrap();
        assert_eq!(s.arity("neg"), Some(1));
        assert_eq!(s.arity("∨"), Some(2));
        assert_eq!(s.decls(), ["neg/1", "or/2"]);
    }

    #[test]
    fn variable_names_are_not_connectives() {
        assert!(Signature::new("s", [("x3", 1)]).is_err());
        assert!(Signature::new("s", [("x", 1)]).is_ok());
    }

    #[test]
    fn declarations_parse() {
        let s = Signature::from_decls("s", &["neg/1".into(), "imp/2".into()]).unwrap();
        assert_eq!(s.arity("imp"), Some(2));
        assert!(Signature::from_decls("s", &["neg".into()]).is_err());
    }
}
