//! Ready-made signatures, logics and translations used by the demos,
//! fixtures and tests: classical logic over several signatures, IPC, and the
//! interdefinitions of disjunction and implication.

use crate::algebra::{catalog, QuasivarietySpec};
use crate::consequence::{ConsequenceError, Logic, LogicalMatrix};
use crate::syntax::{FlexMorphism, Signature};

fn sig(name: &str, conns: &[(&str, usize)]) -> Signature {
    Signature::new(name, conns.iter().copied()).expect("valid built-in signature")
}

pub fn neg_or() -> Signature {
    sig("neg_or", &[("neg", 1), ("or", 2)])
}

pub fn neg_imp() -> Signature {
    sig("neg_imp", &[("neg", 1), ("imp", 2)])
}

pub fn neg_only() -> Signature {
    sig("neg", &[("neg", 1)])
}

pub fn neg_or_and() -> Signature {
    sig("neg_or_and", &[("neg", 1), ("and", 2), ("or", 2)])
}

pub fn ipc_sig() -> Signature {
    sig("ipc", &[("neg", 1), ("and", 2), ("or", 2), ("imp", 2)])
}

/// Classical logic over any Boolean-definable signature: the two-element
/// algebra with `1` designated.
pub fn cpl(sig: &Signature) -> Result<Logic, ConsequenceError> {
    let two = catalog::boolean_powerset(sig, 1)?;
    Logic::matrix(
        &format!("CPL({})", sig.name()),
        sig,
        vec![LogicalMatrix::new(two, &[1])?],
    )
}

pub fn ipc() -> Logic {
    Logic::ipc("IPC", &ipc_sig()).expect("IPC signature")
}

/// `imp ↦ or(neg(x0), x1)`.
pub fn t() -> FlexMorphism {
    FlexMorphism::parse(
        "t",
        &neg_imp(),
        &neg_or(),
        [("neg", "neg(x0)"), ("imp", "or(neg(x0),x1)")],
    )
    .expect("built-in morphism")
}

/// `or ↦ imp(neg(x0), x1)`.
pub fn t_prime() -> FlexMorphism {
    FlexMorphism::parse(
        "t'",
        &neg_or(),
        &neg_imp(),
        [("neg", "neg(x0)"), ("or", "imp(neg(x0),x1)")],
    )
    .expect("built-in morphism")
}

/// `or ↦ x0`: not a translation of classical logic.
pub fn collapse() -> FlexMorphism {
    FlexMorphism::parse("collapse", &neg_or(), &neg_or(), [("neg", "neg(x0)"), ("or", "x0")])
        .expect("built-in morphism")
}

/// Inclusion of a signature into a larger one.
pub fn inclusion(small: &Signature, big: &Signature) -> Result<FlexMorphism, ConsequenceError> {
    let pairs: Vec<(String, String)> = small
        .connectives()
        .iter()
        .map(|c| (c.name.to_string(), c.name.to_string()))
        .collect();
    Ok(FlexMorphism::strict(
        &format!("{}->{}", small.name(), big.name()),
        small,
        big,
        pairs,
    )?)
}

/// Boolean algebras over `sig`, presented by laws and by the two-element
/// generator.
pub fn boolean_algebras(sig: &Signature) -> Result<QuasivarietySpec, ConsequenceError> {
    Ok(catalog::boolean_laws(sig)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_construct() {
        for s in [neg_or(), neg_imp(), neg_or_and()] {
            cpl(&s).unwrap();
            boolean_algebras(&s).unwrap();
        }
        cpl(&neg_only()).unwrap();
        let round = t_prime().compose(&t()).unwrap();
        assert_eq!(round.schema("imp").unwrap().to_string(), "imp(neg(neg(x0)),x1)");
        assert!(inclusion(&neg_or(), &neg_or_and()).unwrap().is_strict());
        assert_eq!(ipc().sig, ipc_sig());
    }
}
