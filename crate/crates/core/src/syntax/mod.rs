//! Signatures, the formula term algebra, and signature morphisms.

mod enumerate;
mod formula;
mod morphism;
mod parse;
mod signature;

pub use enumerate::{count_formulas, enumerate_formulas, formulas_up_to, FormulaEnumeration};
pub use formula::{Formula, Node, Substitution};
pub use morphism::{compose_flex, FlexMorphism};
pub use parse::{parse_formula, parse_formula_list};
pub(crate) use parse::Parser;
pub use signature::{canonical_name, Conn, Connective, Signature};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unknown connective '{name}' in signature {signature}{}", at(*pos))]
    UnknownConnective {
        name: String,
        signature: String,
        pos: Option<usize>,
    },
    #[error("connective '{name}' expects {expected} argument(s), found {found}{}", at(*pos))]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        pos: Option<usize>,
    },
    #[error("malformed formula at position {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
    #[error("duplicate connective '{0}'")]
    DuplicateConnective(String),
    #[error("invalid connective name '{0}'")]
    BadConnectiveName(String),
    #[error("invalid connective declaration '{0}' (expected name/arity)")]
    BadDeclaration(String),
    #[error("no schema given for connective '{0}'")]
    MissingSchema(String),
    #[error("schema {schema} for {arity}-ary connective '{conn}' uses variables beyond x{}", arity.saturating_sub(1))]
    SchemaVariables {
        conn: String,
        arity: usize,
        schema: String,
    },
    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: String, found: String },
}

fn at(pos: Option<usize>) -> String {
    pos.map(|p| format!(" at position {p}")).unwrap_or_default()
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn sig() -> Signature {
        Signature::new("s", [("top", 0), ("neg", 1), ("or", 2), ("imp", 2)]).unwrap()
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0u32..3).prop_map(Formula::Var),
            Just(Formula::constant("top")),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Formula::app("neg", vec![a])),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::app("or", vec![a, b])),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::app("imp", vec![a, b])),
            ]
        })
    }

    fn morphism() -> impl Strategy<Value = FlexMorphism> {
        // schemas drawn from formulas over the right variable prefix
        let s = sig();
        (formula(), formula(), formula(), formula()).prop_map(move |(a, b, c, d)| {
            let clamp = |f: Formula, n: u32| {
                f.substitute_with(&|i| Some(if n == 0 { Formula::constant("top") } else { Formula::Var(i % n) }))
            };
            FlexMorphism::new(
                "m",
                &s,
                &s,
                [
                    ("top", clamp(a, 0)),
                    ("neg", clamp(b, 1)),
                    ("or", clamp(c, 2)),
                    ("imp", clamp(d, 2)),
                ],
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(f in formula()) {
            let back = parse_formula(&f.to_string(), &sig()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn lift_commutes_with_substitution(m in morphism(), f in formula(), a in formula(), b in formula()) {
            let env = Substitution::from([(0, a), (1, b)]);
            let lifted_env: Substitution = env.iter().map(|(k, v)| (*k, m.lift(v).unwrap())).collect();
            prop_assert_eq!(
                m.lift(&f.substitute(&env)).unwrap(),
                m.lift(&f).unwrap().substitute(&lifted_env)
            );
        }

        #[test]
        fn lift_never_introduces_variables(m in morphism(), f in formula()) {
            prop_assert!(m.lift(&f).unwrap().vars().is_subset(&f.vars()));
        }

        #[test]
        fn composition_is_associative_and_pointwise(
            f in morphism(), g in morphism(), h in morphism(), phi in formula()
        ) {
            let hg_f = compose_flex(&compose_flex(&h, &g).unwrap(), &f).unwrap();
            let h_gf = compose_flex(&h, &compose_flex(&g, &f).unwrap()).unwrap();
            prop_assert_eq!(hg_f.schemas(), h_gf.schemas());
            let gf = compose_flex(&g, &f).unwrap();
            prop_assert_eq!(gf.lift(&phi).unwrap(), g.lift(&f.lift(&phi).unwrap()).unwrap());
        }
    }
}
