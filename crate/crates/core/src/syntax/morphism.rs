use std::fmt;

use super::{Conn, Formula, Signature, SyntaxError};

/// A flexible signature morphism: each n-ary source connective is sent to a
/// target formula in the variables `x0..x_{n-1}`.
///
/// Strict morphisms (connective to connective) are the special case where
/// every schema is `c'(x0, ..., x_{n-1})`; `is_strict` records it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexMorphism {
    name: String,
    source: Signature,
    target: Signature,
    /// Aligned with `source.connectives()`.
    schemas: Vec<Formula>,
    strict: bool,
}

impl FlexMorphism {
    pub fn new<I, S>(
        name: &str,
        source: &Signature,
        target: &Signature,
        map: I,
    ) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = (S, Formula)>,
        S: AsRef<str>,
    {
        let mut schemas: Vec<Option<Formula>> = vec![None; source.len()];
        for (conn, schema) in map {
            let idx = source.index_of(conn.as_ref()).ok_or_else(|| {
                SyntaxError::UnknownConnective {
                    name: conn.as_ref().to_string(),
                    signature: source.name().to_string(),
                    pos: None,
                }
            })?;
            schemas[idx] = Some(schema);
        }
        let mut out = Vec::with_capacity(schemas.len());
        for (c, s) in source.connectives().iter().zip(schemas) {
            let s = s.ok_or_else(|| SyntaxError::MissingSchema(c.name.to_string()))?;
            s.check_over(target)?;
            if s.var_bound() as usize > c.arity {
                return Err(SyntaxError::SchemaVariables {
                    conn: c.name.to_string(),
                    arity: c.arity,
                    schema: s.to_string(),
                });
            }
            out.push(s);
        }
        let strict = source
            .connectives()
            .iter()
            .zip(&out)
            .all(|(c, s)| is_generic_application(s, c.arity));
        Ok(FlexMorphism {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            schemas: out,
            strict,
        })
    }

    /// Like [`FlexMorphism::new`] with schemas given as text over `target`.
    pub fn parse<'a, I>(
        name: &str,
        source: &Signature,
        target: &Signature,
        map: I,
    ) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let pairs = map
            .into_iter()
            .map(|(c, s)| Ok((c, super::parse_formula(s, target)?)))
            .collect::<Result<Vec<_>, SyntaxError>>()?;
        FlexMorphism::new(name, source, target, pairs)
    }

    /// Strict morphism from a connective-to-connective map.
    pub fn strict<I, S, T>(
        name: &str,
        source: &Signature,
        target: &Signature,
        map: I,
    ) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut pairs = Vec::new();
        for (s, t) in map {
            let sa = source
                .arity(s.as_ref())
                .ok_or_else(|| SyntaxError::UnknownConnective {
                    name: s.as_ref().to_string(),
                    signature: source.name().to_string(),
                    pos: None,
                })?;
            let ta = target
                .arity(t.as_ref())
                .ok_or_else(|| SyntaxError::UnknownConnective {
                    name: t.as_ref().to_string(),
                    signature: target.name().to_string(),
                    pos: None,
                })?;
            if sa != ta {
                return Err(SyntaxError::ArityMismatch {
                    name: t.as_ref().to_string(),
                    expected: sa,
                    found: ta,
                    pos: None,
                });
            }
            pairs.push((s.as_ref().to_string(), Formula::generic(t.as_ref(), ta)));
        }
        FlexMorphism::new(name, source, target, pairs)
    }

    pub fn identity(sig: &Signature) -> Self {
        FlexMorphism {
            name: format!("id_{}", sig.name()),
            source: sig.clone(),
            target: sig.clone(),
            schemas: sig
                .connectives()
                .iter()
                .map(|c| Formula::generic(c.name.clone(), c.arity))
                .collect(),
            strict: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn schemas(&self) -> &[Formula] {
        &self.schemas
    }

    pub fn schema(&self, conn: &str) -> Option<&Formula> {
        self.source.index_of(conn).map(|i| &self.schemas[i])
    }

    /// `(source connective, schema)` pairs in connective order.
    pub fn entries(&self) -> impl Iterator<Item = (&Conn, &Formula)> {
        self.source
            .connectives()
            .iter()
            .map(|c| &c.name)
            .zip(&self.schemas)
    }

    /// The connective-to-connective map, when strict.
    pub fn strict_map(&self) -> Option<Vec<(Conn, Conn)>> {
        if !self.strict {
            return None;
        }
        Some(
            self.entries()
                .map(|(c, s)| (c.clone(), s.conn().cloned().expect("strict schema")))
                .collect(),
        )
    }

    /// The induced map on formulas (homomorphic extension).
    pub fn lift(&self, phi: &Formula) -> Result<Formula, SyntaxError> {
        phi.check_over(&self.source)?;
        Ok(self.lift_unchecked(phi))
    }

    pub(crate) fn lift_unchecked(&self, phi: &Formula) -> Formula {
        match phi {
            Formula::Var(_) => phi.clone(),
            Formula::App(n) => {
                let idx = self
                    .source
                    .index_of(n.conn.as_str())
                    .expect("formula checked against source");
                let args: Vec<Formula> =
                    n.args.iter().map(|a| self.lift_unchecked(a)).collect();
                self.schemas[idx].instantiate(&args)
            }
        }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &FlexMorphism) -> Result<FlexMorphism, SyntaxError> {
        compose_flex(self, first)
    }
}

/// `g ∘ f`, defined when `f.target == g.source`.
pub fn compose_flex(g: &FlexMorphism, f: &FlexMorphism) -> Result<FlexMorphism, SyntaxError> {
    if f.target != g.source {
        return Err(SyntaxError::SignatureMismatch {
            expected: g.source.to_string(),
            found: f.target.to_string(),
        });
    }
    let schemas: Vec<Formula> = f.schemas.iter().map(|s| g.lift_unchecked(s)).collect();
    let strict = f
        .source
        .connectives()
        .iter()
        .zip(&schemas)
        .all(|(c, s)| is_generic_application(s, c.arity));
    Ok(FlexMorphism {
        name: format!("{}∘{}", g.name, f.name),
        source: f.source.clone(),
        target: g.target.clone(),
        schemas,
        strict,
    })
}

fn is_generic_application(s: &Formula, arity: usize) -> bool {
    match s {
        Formula::Var(_) => false,
        Formula::App(n) => {
            n.args.len() == arity
                && n
                    .args
                    .iter()
                    .enumerate()
                    .all(|(i, a)| *a == Formula::Var(i as u32))
        }
    }
}

impl fmt::Display for FlexMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {} [", self.name, self.source.name(), self.target.name())?;
        for (k, (c, s)) in self.entries().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c} ↦ {s}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    fn neg_imp() -> Signature {
        Signature::new("neg_imp", [("neg", 1), ("imp", 2)]).unwrap()
    }

    fn t() -> FlexMorphism {
        let (s, tg) = (neg_imp(), neg_or());
        FlexMorphism::new(
            "t",
            &s,
            &tg,
            [
                ("neg", parse_formula("neg(x0)", &tg).unwrap()),
                ("imp", parse_formula("or(neg(x0),x1)", &tg).unwrap()),
            ],
        )
        .unwrap()
    }

    fn t_prime() -> FlexMorphism {
        let (s, tg) = (neg_or(), neg_imp());
        FlexMorphism::new(
            "t'",
            &s,
            &tg,
            [
                ("neg", parse_formula("neg(x0)", &tg).unwrap()),
                ("or", parse_formula("imp(neg(x0),x1)", &tg).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_lift() {
        let s = neg_or();
        let phi = parse_formula("or(neg(x0),or(x1,x0))", &s).unwrap();
        assert_eq!(FlexMorphism::identity(&s).lift(&phi).unwrap(), phi);
    }

    #[test]
    fn interdefinition_lift() {
        let phi = parse_formula("or(x0,x1)", &neg_or()).unwrap();
        let image = t_prime().lift(&phi).unwrap();
        assert_eq!(image.to_string(), "imp(neg(x0),x1)");
    }

    #[test]
    fn composite_is_syntactically_distinct() {
        let phi = parse_formula("imp(x0,x1)", &neg_imp()).unwrap();
        let round = t_prime().lift(&t().lift(&phi).unwrap()).unwrap();
        assert_eq!(round.to_string(), "imp(neg(neg(x0)),x1)");
        assert_ne!(round, phi);
        let comp = compose_flex(&t_prime(), &t()).unwrap();
        assert_eq!(comp.schema("imp").unwrap().to_string(), "imp(neg(neg(x0)),x1)");
        assert!(!comp.is_strict());
    }

    #[test]
    fn identities_are_units() {
        let f = t();
        let left = compose_flex(&FlexMorphism::identity(&neg_or()), &f).unwrap();
        let right = compose_flex(&f, &FlexMorphism::identity(&neg_imp())).unwrap();
        assert_eq!(left.schemas(), f.schemas());
        assert_eq!(right.schemas(), f.schemas());
    }

    #[test]
    fn composition_requires_matching_signatures() {
        assert!(matches!(
            compose_flex(&t(), &t()),
            Err(SyntaxError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn schemas_must_stay_within_arity() {
        let (s, tg) = (neg_or(), neg_or());
        let err = FlexMorphism::new(
            "bad",
            &s,
            &tg,
            [("neg", Formula::Var(1)), ("or", Formula::Var(0))],
        )
        .unwrap_err();
        assert!(matches!(err, SyntaxError::SchemaVariables { .. }));
    }

    #[test]
    fn strict_morphisms_detected() {
        let f = FlexMorphism::strict("f", &neg_or(), &neg_imp(), [("neg", "neg"), ("or", "imp")])
            .unwrap();
        assert!(f.is_strict());
        assert!(!t().is_strict());
        let phi = parse_formula("or(x0,neg(x1))", &neg_or()).unwrap();
        assert_eq!(f.lift(&phi).unwrap().to_string(), "imp(x0,neg(x1))");
    }

    #[test]
    fn lift_rejects_foreign_formula() {
        let phi = parse_formula("or(x0,x1)", &neg_or()).unwrap();
        assert!(t().lift(&phi).is_err());
    }
}
