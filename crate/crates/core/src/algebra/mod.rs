//! Finite universal algebra: structures, homomorphisms, congruences,
//! quasivarieties and their reflector, free algebras, and a catalog of
//! Boolean and Heyting algebras.

pub mod catalog;
mod congruence;
mod free;
mod homs;
mod quasivariety;
mod reduct;
mod structure;

pub use congruence::{
    all_congruences, congruence_generated, extend_congruence, quotient_algebra, Congruence,
};
pub use free::{free_algebra, size_cap_from_env, FreeAlgebra, DEFAULT_SIZE_CAP};
pub use homs::{
    enumerate_homs, find_isomorphism, homs_extending, is_hom, is_isomorphic, is_surjective,
    Construction, Hom,
};
pub use quasivariety::{
    extract_identities, hom_kernel_meet, in_quasivariety, presentations_disagree, reflect,
    satisfies_laws, separated_by, Equation, Membership, MembershipWitness, QuasiIdentity,
    QuasivarietySpec, Reflection,
};
pub use reduct::reduct;
pub use structure::{for_each_tuple, CompiledTerm, Elem, FiniteAlgebra, Structure, TermAlgebra};

use thiserror::Error;

use crate::syntax::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("variable x{0} is unassigned")]
    UnboundVariable(u32),
    #[error("term {0} is not over the algebra's signature")]
    ForeignTerm(String),
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("table given for unknown connective '{0}'")]
    UnknownTable(String),
    #[error("no table for connective '{0}'")]
    MissingTable(String),
    #[error("table for '{conn}' has {found} entries, expected {expected}")]
    TableShape {
        conn: String,
        expected: usize,
        found: usize,
    },
    #[error("table for '{conn}' contains {value}, outside carrier of size {size}")]
    ElementOutOfRange { conn: String, value: u32, size: usize },
    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: String, found: String },
    #[error("congruence is on {found} elements, algebra has {expected}")]
    CongruenceSize { expected: usize, found: usize },
    #[error("partition {0} is not compatible with the operations")]
    NotCompatible(String),
    #[error("quasivariety '{0}' has neither laws nor generators")]
    EmptyPresentation(String),
    #[error("quasivariety '{0}' has no generating algebras")]
    NoGenerators(String),
    #[error("no generators and no constants: the generated subalgebra would be empty")]
    EmptyGeneration,
    #[error("size cap {cap} exceeded while generating")]
    SizeCap { cap: usize },
    #[error("connective '{conn}' has no interpretation in {structure}")]
    UnsupportedConnective { conn: String, structure: String },
    #[error("bad catalog recipe '{0}'")]
    BadRecipe(String),
    #[error("{0}")]
    Invalid(String),
}
