use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{Formula, Signature};

use super::AlgebraError;

pub type Elem = u32;

/// A Σ-structure, finite or not. Operations are addressed by connective
/// position in `signature()`.
pub trait Structure {
    type Elem: Clone;

    fn signature(&self) -> &Signature;

    fn apply(&self, conn: usize, args: &[Self::Elem]) -> Self::Elem;

    /// Interprets `t` under a variable assignment.
    fn interpret(
        &self,
        t: &Formula,
        env: &dyn Fn(u32) -> Option<Self::Elem>,
    ) -> Result<Self::Elem, AlgebraError> {
        match t {
            Formula::Var(i) => env(*i).ok_or(AlgebraError::UnboundVariable(*i)),
            Formula::App(n) => {
                let idx = self
                    .signature()
                    .index_of(n.conn.as_str())
                    .ok_or_else(|| AlgebraError::ForeignTerm(t.to_string()))?;
                let args = n
                    .args
                    .iter()
                    .map(|a| self.interpret(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(self.apply(idx, &args))
            }
        }
    }
}

/// A finite Σ-structure on `0..size` with one total table per connective.
///
/// Tables are row-major: the entry for `c(a0, ..., a_{n-1})` sits at
/// `a0 * k^(n-1) + ... + a_{n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<Elem>>,
}

impl FiniteAlgebra {
    /// Builds an algebra from named tables; every connective needs one.
    pub fn new(
        sig: &Signature,
        size: usize,
        tables: &BTreeMap<String, Vec<Elem>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        for name in tables.keys() {
            if !sig.contains(name) {
                return Err(AlgebraError::UnknownTable(name.clone()));
            }
        }
        let mut out = Vec::with_capacity(sig.len());
        for c in sig.connectives() {
            let t = tables
                .get(c.name.as_str())
                .ok_or_else(|| AlgebraError::MissingTable(c.name.to_string()))?;
            let expected = size.pow(c.arity as u32);
            if t.len() != expected {
                return Err(AlgebraError::TableShape {
                    conn: c.name.to_string(),
                    expected,
                    found: t.len(),
                });
            }
            if let Some(&bad) = t.iter().find(|&&v| v as usize >= size) {
                return Err(AlgebraError::ElementOutOfRange {
                    conn: c.name.to_string(),
                    value: bad,
                    size,
                });
            }
            out.push(t.clone());
        }
        Ok(FiniteAlgebra {
            sig: sig.clone(),
            size,
            tables: out,
        })
    }

    /// Builds an algebra by evaluating `f(connective index, args)` everywhere.
    pub fn from_fn(
        sig: &Signature,
        size: usize,
        mut f: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        let mut tables = Vec::with_capacity(sig.len());
        for (ci, c) in sig.connectives().iter().enumerate() {
            let mut t = Vec::with_capacity(size.pow(c.arity as u32));
            for_each_tuple(size, c.arity, |args| t.push(f(ci, args)));
            if let Some(&bad) = t.iter().find(|&&v| v as usize >= size) {
                return Err(AlgebraError::ElementOutOfRange {
                    conn: c.name.to_string(),
                    value: bad,
                    size,
                });
            }
            tables.push(t);
        }
        Ok(FiniteAlgebra {
            sig: sig.clone(),
            size,
            tables,
        })
    }

    pub(crate) fn from_raw(sig: Signature, size: usize, tables: Vec<Vec<Elem>>) -> Self {
        debug_assert_eq!(tables.len(), sig.len());
        FiniteAlgebra { sig, size, tables }
    }

    pub fn trivial(sig: &Signature) -> Self {
        FiniteAlgebra::from_fn(sig, 1, |_, _| 0).expect("one-element algebra")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    pub fn table(&self, conn: &str) -> Option<&[Elem]> {
        self.sig.index_of(conn).map(|i| self.tables[i].as_slice())
    }

    /// Tables keyed by connective name.
    pub fn named_tables(&self) -> BTreeMap<String, Vec<Elem>> {
        self.sig
            .connectives()
            .iter()
            .zip(&self.tables)
            .map(|(c, t)| (c.name.to_string(), t.clone()))
            .collect()
    }

    #[inline]
    pub fn op(&self, conn: usize, args: &[Elem]) -> Elem {
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.size + a as usize;
        }
        self.tables[conn][idx]
    }

    pub fn op_named(&self, conn: &str, args: &[Elem]) -> Option<Elem> {
        self.sig.index_of(conn).map(|i| self.op(i, args))
    }

    /// Evaluates `t` with `x_i ↦ env[i]`.
    pub fn eval(&self, t: &Formula, env: &[Elem]) -> Result<Elem, AlgebraError> {
        self.interpret(t, &|i| env.get(i as usize).copied())
    }

    /// Evaluates with an explicit partial assignment.
    pub fn eval_map(&self, t: &Formula, env: &BTreeMap<u32, Elem>) -> Result<Elem, AlgebraError> {
        self.interpret(t, &|i| env.get(&i).copied())
    }

    pub fn compile(&self, t: &Formula) -> Result<CompiledTerm, AlgebraError> {
        CompiledTerm::new(&self.sig, t)
    }

    /// Same tables under a relabelled signature object (connectives must match).
    pub fn with_signature(&self, sig: &Signature) -> Result<Self, AlgebraError> {
        if *sig != self.sig {
            return Err(AlgebraError::SignatureMismatch {
                expected: sig.to_string(),
                found: self.sig.to_string(),
            });
        }
        Ok(FiniteAlgebra {
            sig: sig.clone(),
            ..self.clone()
        })
    }
}

impl Structure for FiniteAlgebra {
    type Elem = Elem;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, conn: usize, args: &[Elem]) -> Elem {
        self.op(conn, args)
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra<{}; {}>", self.sig.name(), self.size)?;
        let mut m = f.debug_map();
        for (c, t) in self.sig.connectives().iter().zip(&self.tables) {
            m.entry(&c.name, t);
        }
        m.finish()
    }
}

/// Calls `f` on every tuple in `0..size` of the given length, lexicographically.
pub fn for_each_tuple(size: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    let mut tuple = vec![0 as Elem; arity];
    if arity == 0 {
        f(&tuple);
        return;
    }
    if size == 0 {
        return;
    }
    loop {
        f(&tuple);
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            tuple[k] += 1;
            if (tuple[k] as usize) < size {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// A term flattened into postfix form against a fixed signature.
#[derive(Debug, Clone)]
pub struct CompiledTerm {
    code: Vec<Instr>,
    var_bound: u32,
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Var(u32),
    Apply(usize, usize),
}

impl CompiledTerm {
    pub fn new(sig: &Signature, t: &Formula) -> Result<Self, AlgebraError> {
        let mut code = Vec::new();
        compile_into(sig, t, &mut code)?;
        Ok(CompiledTerm {
            code,
            var_bound: t.var_bound(),
        })
    }

    pub fn var_bound(&self) -> u32 {
        self.var_bound
    }

    /// Evaluates with `x_i ↦ env[i]`; `env` must cover `var_bound`.
    pub fn eval(&self, alg: &FiniteAlgebra, env: &[Elem], stack: &mut Vec<Elem>) -> Elem {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Var(i) => stack.push(env[i as usize]),
                Instr::Apply(c, n) => {
                    let at = stack.len() - n;
                    let v = alg.op(c, &stack[at..]);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}

fn compile_into(sig: &Signature, t: &Formula, code: &mut Vec<Instr>) -> Result<(), AlgebraError> {
    match t {
        Formula::Var(i) => code.push(Instr::Var(*i)),
        Formula::App(n) => {
            let idx = sig
                .index_of(n.conn.as_str())
                .ok_or_else(|| AlgebraError::ForeignTerm(t.to_string()))?;
            if sig.connectives()[idx].arity != n.args.len() {
                return Err(AlgebraError::ForeignTerm(t.to_string()));
            }
            for a in &n.args {
                compile_into(sig, a, code)?;
            }
            code.push(Instr::Apply(idx, n.args.len()));
        }
    }
    Ok(())
}

/// The term algebra `F(Σ)` as a (lazy, infinite) structure.
#[derive(Debug, Clone)]
pub struct TermAlgebra {
    sig: Signature,
}

impl TermAlgebra {
    pub fn new(sig: &Signature) -> Self {
        TermAlgebra { sig: sig.clone() }
    }
}

impl Structure for TermAlgebra {
    type Elem = Formula;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, conn: usize, args: &[Formula]) -> Formula {
        Formula::app(self.sig.connectives()[conn].name.clone(), args.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::syntax::parse_formula;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    #[test]
    fn excluded_middle_in_two_element_ba() {
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        let t = parse_formula("or(x0,neg(x0))", &neg_or()).unwrap();
        assert_eq!(ba.eval(&t, &[0]).unwrap(), 1);
        assert_eq!(ba.eval(&t, &[1]).unwrap(), 1);
    }

    #[test]
    fn variable_evaluates_to_assignment() {
        let ba = catalog::boolean_powerset(&neg_or(), 2).unwrap();
        for a in ba.elements() {
            assert_eq!(ba.eval(&Formula::Var(0), &[a]).unwrap(), a);
        }
    }

    #[test]
    fn trivial_algebra_collapses_everything() {
        let one = FiniteAlgebra::trivial(&neg_or());
        let t = parse_formula("neg(or(x0,neg(x1)))", &neg_or()).unwrap();
        assert_eq!(one.eval(&t, &[0, 0]).unwrap(), 0);
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        let t = parse_formula("or(x0,x3)", &neg_or()).unwrap();
        assert_eq!(ba.eval(&t, &[0]), Err(AlgebraError::UnboundVariable(3)));
    }

    #[test]
    fn compiled_matches_interpreted() {
        let ba = catalog::boolean_powerset(&neg_or(), 2).unwrap();
        let t = parse_formula("or(neg(x1),or(x0,neg(x0)))", &neg_or()).unwrap();
        let c = ba.compile(&t).unwrap();
        let mut stack = Vec::new();
        for a in ba.elements() {
            for b in ba.elements() {
                assert_eq!(c.eval(&ba, &[a, b], &mut stack), ba.eval(&t, &[a, b]).unwrap());
            }
        }
    }

    #[test]
    fn table_validation() {
        let mut tables = BTreeMap::new();
        tables.insert("neg".to_string(), vec![1, 0]);
        assert!(matches!(
            FiniteAlgebra::new(&neg_or(), 2, &tables),
            Err(AlgebraError::MissingTable(_))
        ));
        tables.insert("or".to_string(), vec![0, 1, 1]);
        assert!(matches!(
            FiniteAlgebra::new(&neg_or(), 2, &tables),
            Err(AlgebraError::TableShape { .. })
        ));
        tables.insert("or".to_string(), vec![0, 1, 1, 2]);
        assert!(matches!(
            FiniteAlgebra::new(&neg_or(), 2, &tables),
            Err(AlgebraError::ElementOutOfRange { .. })
        ));
        tables.insert("or".to_string(), vec![0, 1, 1, 1]);
        assert!(FiniteAlgebra::new(&neg_or(), 2, &tables).is_ok());
        assert!(matches!(
            FiniteAlgebra::new(&neg_or(), 0, &tables),
            Err(AlgebraError::EmptyCarrier)
        ));
    }
}
