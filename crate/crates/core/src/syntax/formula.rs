use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Conn, Signature, SyntaxError};

/// A formula over the fixed variable list `x0, x1, ...`.
///
/// Subtrees are shared, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(u32),
    App(Arc<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub conn: Conn,
    pub args: Vec<Formula>,
}

/// Simultaneous substitution: variable index to replacement formula.
pub type Substitution = BTreeMap<u32, Formula>;

impl Formula {
    pub fn var(i: u32) -> Self {
        Formula::Var(i)
    }

    pub fn app(conn: impl Into<Conn>, args: Vec<Formula>) -> Self {
        Formula::App(Arc::new(Node {
            conn: conn.into(),
            args,
        }))
    }

    pub fn constant(conn: impl Into<Conn>) -> Self {
        Formula::app(conn, Vec::new())
    }

    /// `c(x0, ..., x_{n-1})`
    pub fn generic(conn: impl Into<Conn>, arity: usize) -> Self {
        Formula::app(conn, (0..arity as u32).map(Formula::Var).collect())
    }

    pub fn conn(&self) -> Option<&Conn> {
        match self {
            Formula::Var(_) => None,
            Formula::App(n) => Some(&n.conn),
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self {
            Formula::Var(_) => &[],
            Formula::App(n) => &n.args,
        }
    }

    pub fn as_var(&self) -> Option<u32> {
        match self {
            Formula::Var(i) => Some(*i),
            Formula::App(_) => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(n) => 1 + n.args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::App(n) => 1 + n.args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Var(i) => {
                out.insert(*i);
            }
            Formula::App(n) => n.args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// One past the largest variable index, i.e. the least `n` with the
    /// formula in `F(Σ)[n]`.
    pub fn var_bound(&self) -> u32 {
        match self {
            Formula::Var(i) => i + 1,
            Formula::App(n) => n.args.iter().map(Formula::var_bound).max().unwrap_or(0),
        }
    }

    /// Checks that every connective occurs in `sig` with its declared arity.
    pub fn check_over(&self, sig: &Signature) -> Result<(), SyntaxError> {
        match self {
            Formula::Var(_) => Ok(()),
            Formula::App(n) => {
                let arity = sig.arity(n.conn.as_str()).ok_or_else(|| {
                    SyntaxError::UnknownConnective {
                        name: n.conn.to_string(),
                        signature: sig.name().to_string(),
                        pos: None,
                    }
                })?;
                if arity != n.args.len() {
                    return Err(SyntaxError::ArityMismatch {
                        name: n.conn.to_string(),
                        expected: arity,
                        found: n.args.len(),
                        pos: None,
                    });
                }
                n.args.iter().try_for_each(|a| a.check_over(sig))
            }
        }
    }

    pub fn is_over(&self, sig: &Signature) -> bool {
        self.check_over(sig).is_ok()
    }

    /// Simultaneous substitution; variables outside `env` stay fixed.
    pub fn substitute(&self, env: &Substitution) -> Formula {
        self.substitute_with(&|i| env.get(&i).cloned())
    }

    /// Replaces `x_i` by `args[i]`; variables beyond `args` stay fixed.
    pub fn instantiate(&self, args: &[Formula]) -> Formula {
        self.substitute_with(&|i| args.get(i as usize).cloned())
    }

    pub fn substitute_with(&self, env: &dyn Fn(u32) -> Option<Formula>) -> Formula {
        match self {
            Formula::Var(i) => env(*i).unwrap_or_else(|| self.clone()),
            Formula::App(n) => {
                if n.args.is_empty() {
                    return self.clone();
                }
                Formula::app(
                    n.conn.clone(),
                    n.args.iter().map(|a| a.substitute_with(env)).collect(),
                )
            }
        }
    }

    /// All subformulas, each listed once, children before parents.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        self.collect_subformulas(&mut out, &mut seen);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>, seen: &mut BTreeSet<Formula>) {
        for a in self.args() {
            a.collect_subformulas(out, seen);
        }
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::App(n) => {
                write!(f, "{}", n.conn)?;
                if !n.args.is_empty() {
                    f.write_str("(")?;
                    for (k, a) in n.args.iter().enumerate() {
                        if k > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn or(a: Formula, b: Formula) -> Formula {
        Formula::app("or", vec![a, b])
    }

    #[test]
    fn substitute_variable() {
        let psi = Formula::app("neg", vec![Formula::var(3)]);
        let env = Substitution::from([(0, psi.clone())]);
        assert_eq!(Formula::var(0).substitute(&env), psi);
    }

    #[test]
    fn substitute_swap_is_simultaneous() {
        let f = or(Formula::var(0), Formula::var(1));
        let env = Substitution::from([(0, Formula::var(1)), (1, Formula::var(0))]);
        assert_eq!(f.substitute(&env), or(Formula::var(1), Formula::var(0)));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let f = or(Formula::var(0), Formula::app("neg", vec![Formula::var(1)]));
        assert_eq!(f.substitute(&Substitution::new()), f);
    }

    #[test]
    fn depth_vars_and_bound() {
        let f = or(Formula::var(0), Formula::app("neg", vec![Formula::var(4)]));
        assert_eq!(f.depth(), 2);
        assert_eq!(f.vars().into_iter().collect::<Vec<_>>(), [0, 4]);
        assert_eq!(f.var_bound(), 5);
        assert_eq!(Formula::constant("top").var_bound(), 0);
    }

    #[test]
    fn display_is_prefix_ascii() {
        let f = Formula::app("¬", vec![or(Formula::var(0), Formula::var(1))]);
        assert_eq!(f.to_string(), "neg(or(x0,x1))");
    }
}
