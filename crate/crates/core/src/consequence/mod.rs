//! Consequence oracles and the translation-property checkers.
//!
//! A [`Logic`] pairs a signature with a decidable (or semi-decidable)
//! entailment backend. Checks enumerate formulas within a bound, reduce them
//! to interderivability classes, and test the property on class
//! representatives.

pub mod axiom;
mod checks;
pub(crate) mod classes;
pub mod ipc;
pub mod matrix;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{reduct, AlgebraError};
use crate::syntax::{FlexMorphism, Formula, Signature, SyntaxError};

pub use axiom::{AxiomSystem, Rule};
pub use checks::{
    canonical_sample, check_congruential, check_conservative, check_dense, check_tarskian,
    check_translation, congruence_precheck, morphisms_equivalent, DenseMode, DenseResult,
    DenseVerdict,
};
pub use ipc::{heyting_models, Prover};
pub use matrix::{matrix_entails, Bits, LogicalMatrix, Semantics, Values};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsequenceError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Unsupported(String),
    #[error("oracle could not decide {instance}")]
    Undecided { instance: String },
    #[error("logic {0} is not congruential at the pre-check bound; use full-formula mode")]
    NotCongruential(String),
    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: String, found: String },
}

pub(crate) fn same_sig(expected: &Signature, found: &Signature) -> Result<(), ConsequenceError> {
    if expected == found {
        Ok(())
    } else {
        Err(ConsequenceError::SignatureMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

/// An entailment backend.
#[derive(Debug, Clone)]
pub enum ConsequenceOracle {
    MatrixFamily(Vec<LogicalMatrix>),
    Ipc(Arc<Prover>),
    AxiomSearch(AxiomSystem),
    /// `Γ ⊢ ψ` iff `h[Γ] ⊢′ h(ψ)` in the inner logic.
    Pullback {
        morphism: FlexMorphism,
        inner: Arc<Logic>,
    },
}

#[derive(Debug, Clone)]
pub struct Logic {
    pub name: String,
    pub sig: Signature,
    pub oracle: ConsequenceOracle,
}

impl Logic {
    pub fn matrix(
        name: &str,
        sig: &Signature,
        matrices: Vec<LogicalMatrix>,
    ) -> Result<Self, ConsequenceError> {
        for m in &matrices {
            same_sig(sig, m.sig())?;
        }
        Ok(Logic {
            name: name.to_string(),
            sig: sig.clone(),
            oracle: ConsequenceOracle::MatrixFamily(matrices),
        })
    }

    pub fn ipc(name: &str, sig: &Signature) -> Result<Self, ConsequenceError> {
        ipc::check_ipc_signature(sig)?;
        Ok(Logic {
            name: name.to_string(),
            sig: sig.clone(),
            oracle: ConsequenceOracle::Ipc(Arc::new(Prover::new())),
        })
    }

    pub fn axiomatic(name: &str, system: AxiomSystem) -> Self {
        Logic {
            name: name.to_string(),
            sig: system.sig.clone(),
            oracle: ConsequenceOracle::AxiomSearch(system),
        }
    }

    /// The logic on `h.source()` induced by `inner` along `h`. Over a matrix
    /// family this is again a matrix family (the `h`-reducts).
    pub fn pullback(name: &str, h: &FlexMorphism, inner: &Logic) -> Result<Self, ConsequenceError> {
        same_sig(h.target(), &inner.sig)?;
        let oracle = match &inner.oracle {
            ConsequenceOracle::MatrixFamily(ms) => ConsequenceOracle::MatrixFamily(
                ms.iter()
                    .map(|m| Ok(m.with_algebra(reduct(h, &m.algebra)?)))
                    .collect::<Result<_, AlgebraError>>()?,
            ),
            _ => ConsequenceOracle::Pullback {
                morphism: h.clone(),
                inner: Arc::new(inner.clone()),
            },
        };
        Ok(Logic {
            name: name.to_string(),
            sig: h.source().clone(),
            oracle,
        })
    }

    pub fn entails(&self, gamma: &[Formula], psi: &Formula) -> Result<Verdict, ConsequenceError> {
        for f in gamma.iter().chain([psi]) {
            f.check_over(&self.sig)?;
        }
        self.entails_unchecked(gamma, psi)
    }

    fn entails_unchecked(&self, gamma: &[Formula], psi: &Formula) -> Result<Verdict, ConsequenceError> {
        Ok(match &self.oracle {
            ConsequenceOracle::MatrixFamily(ms) => matrix_entails(ms, gamma, psi)?.into(),
            ConsequenceOracle::Ipc(p) => p.entails(gamma, psi)?.into(),
            ConsequenceOracle::AxiomSearch(s) => s.search(gamma, psi),
            ConsequenceOracle::Pullback { morphism, inner } => {
                let g = gamma
                    .iter()
                    .map(|f| morphism.lift(f))
                    .collect::<Result<Vec<_>, _>>()?;
                inner.entails_unchecked(&g, &morphism.lift(psi)?)?
            }
        })
    }

    /// `φ ⊣⊢ ψ`; an error if either direction is undecided.
    pub fn interderivable(&self, phi: &Formula, psi: &Formula) -> Result<bool, ConsequenceError> {
        let one = |a: &Formula, b: &Formula| match self.entails(std::slice::from_ref(a), b)? {
            Verdict::Unknown => Err(ConsequenceError::Undecided {
                instance: format!("{a} |- {b} in {}", self.name),
            }),
            v => Ok(v == Verdict::Yes),
        };
        Ok(one(phi, psi)? && one(psi, phi)?)
    }

    /// Sound matrices: anything they refute is not entailed.
    pub fn models(&self) -> Result<Vec<LogicalMatrix>, ConsequenceError> {
        Ok(match &self.oracle {
            ConsequenceOracle::MatrixFamily(ms) => ms.clone(),
            ConsequenceOracle::Ipc(_) => heyting_models(&self.sig)?,
            ConsequenceOracle::AxiomSearch(_) => Vec::new(),
            ConsequenceOracle::Pullback { morphism, inner } => inner
                .models()?
                .iter()
                .map(|m| Ok(m.with_algebra(reduct(morphism, &m.algebra)?)))
                .collect::<Result<_, AlgebraError>>()?,
        })
    }

    /// Whether [`Logic::models`] is also complete.
    pub fn models_exact(&self) -> bool {
        matches!(self.oracle, ConsequenceOracle::MatrixFamily(_))
    }

    /// Whether every query gets a yes or no.
    pub fn is_decidable(&self) -> bool {
        match &self.oracle {
            ConsequenceOracle::MatrixFamily(_) | ConsequenceOracle::Ipc(_) => true,
            ConsequenceOracle::AxiomSearch(_) => false,
            ConsequenceOracle::Pullback { inner, .. } => inner.is_decidable(),
        }
    }
}

pub fn interderivable(l: &Logic, phi: &Formula, psi: &Formula) -> Result<bool, ConsequenceError> {
    l.interderivable(phi, psi)
}

pub fn entails(l: &Logic, gamma: &[Formula], psi: &Formula) -> Result<Verdict, ConsequenceError> {
    l.entails(gamma, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::syntax::parse_formula;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    fn cpl() -> Logic {
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        Logic::matrix("cpl", &neg_or(), vec![LogicalMatrix::new(ba, &[1]).unwrap()]).unwrap()
    }

    fn ipc() -> Logic {
        let s = Signature::new("ipc", [("neg", 1), ("and", 2), ("or", 2), ("imp", 2)]).unwrap();
        Logic::ipc("ipc", &s).unwrap()
    }

    #[test]
    fn matrix_entailment() {
        let l = cpl();
        let p = |s| parse_formula(s, &l.sig).unwrap();
        assert_eq!(l.entails(&[p("x0")], &p("or(x0,x1)")).unwrap(), Verdict::Yes);
        assert_eq!(l.entails(&[], &p("x0")).unwrap(), Verdict::No);
    }

    #[test]
    fn ipc_interderivability() {
        let l = ipc();
        let p = |s| parse_formula(s, &l.sig).unwrap();
        assert!(!l.interderivable(&p("x0"), &p("neg(neg(x0))")).unwrap());
        assert!(l.interderivable(&p("neg(x0)"), &p("neg(neg(neg(x0)))")).unwrap());
        assert_eq!(
            l.entails(&[], &p("imp(imp(imp(x0,x1),x0),x0)")).unwrap(),
            Verdict::No
        );
    }

    #[test]
    fn foreign_formula_is_an_error() {
        let l = cpl();
        let s = Signature::new("imp", [("imp", 2)]).unwrap();
        let f = parse_formula("imp(x0,x1)", &s).unwrap();
        assert!(matches!(l.entails(&[], &f), Err(ConsequenceError::Syntax(_))));
    }

    #[test]
    fn heyting_models_are_sound_for_ipc() {
        let l = ipc();
        let models = l.models().unwrap();
        assert_eq!(models.len(), 5);
        let p = |s| parse_formula(s, &l.sig).unwrap();
        for thm in ["imp(x0,neg(neg(x0)))", "neg(neg(or(x0,neg(x0))))", "imp(and(x0,x1),x1)"] {
            assert!(matrix_entails(&models, &[], &p(thm)).unwrap(), "{thm}");
        }
        assert!(!matrix_entails(&models, &[], &p("or(x0,neg(x0))")).unwrap());
    }

    #[test]
    fn pullback_of_matrix_family_is_a_matrix_family() {
        let imp_sig = Signature::new("neg_imp", [("neg", 1), ("imp", 2)]).unwrap();
        let t = FlexMorphism::parse(
            "t",
            &imp_sig,
            &neg_or(),
            [("neg", "neg(x0)"), ("imp", "or(neg(x0),x1)")],
        )
        .unwrap();
        let l = Logic::pullback("cpl_imp", &t, &cpl()).unwrap();
        assert!(l.models_exact());
        let p = |s| parse_formula(s, &imp_sig).unwrap();
        assert!(l.interderivable(&p("imp(x0,x1)"), &p("imp(neg(neg(x0)),x1)")).unwrap());
        let via_ipc = Logic::pullback("ipc_pull", &FlexMorphism::identity(&ipc().sig), &ipc()).unwrap();
        assert!(!via_ipc.models_exact());
        assert!(via_ipc.is_decidable());
    }
}
