use crate::syntax::FlexMorphism;

use super::structure::{for_each_tuple, CompiledTerm};
use super::{AlgebraError, FiniteAlgebra};

/// The reduct of a target-signature algebra along `t`: same carrier, each
/// source connective interpreted by its schema.
pub fn reduct(t: &FlexMorphism, m: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
    if m.sig() != t.target() {
        return Err(AlgebraError::SignatureMismatch {
            expected: t.target().to_string(),
            found: m.sig().to_string(),
        });
    }
    let mut tables = Vec::with_capacity(t.source().len());
    let mut stack = Vec::new();
    for (c, schema) in t.source().connectives().iter().zip(t.schemas()) {
        let code = CompiledTerm::new(m.sig(), schema)?;
        let mut table = Vec::with_capacity(m.size().pow(c.arity as u32));
        for_each_tuple(m.size(), c.arity, |args| table.push(code.eval(m, args, &mut stack)));
        tables.push(table);
    }
    Ok(FiniteAlgebra::from_raw(t.source().clone(), m.size(), tables))
}
