//! Intuitionistic propositional logic, decided by the contraction-free
//! sequent calculus G4ip. Every rule lowers the multiset weight of the
//! sequent, so proof search terminates without loop checking.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::catalog::{heyting_from_lattice, Lattice};
use crate::algebra::Elem;
use crate::syntax::{Formula, Signature};

use super::matrix::LogicalMatrix;
use super::ConsequenceError;

/// Connectives the prover understands.
pub const IPC_CONNECTIVES: [(&str, usize); 7] = [
    ("top", 0),
    ("bot", 0),
    ("neg", 1),
    ("and", 2),
    ("or", 2),
    ("imp", 2),
    ("iff", 2),
];

pub fn check_ipc_signature(sig: &Signature) -> Result<(), ConsequenceError> {
    for c in sig.connectives() {
        if !IPC_CONNECTIVES.contains(&(c.name.as_str(), c.arity)) {
            return Err(ConsequenceError::Unsupported(format!(
                "connective {}/{} is not intuitionistic",
                c.name, c.arity
            )));
        }
    }
    Ok(())
}

/// Small Heyting algebras with designated top. Sound for IPC; used to
/// refute cheaply before calling the prover.
pub fn heyting_models(sig: &Signature) -> Result<Vec<LogicalMatrix>, ConsequenceError> {
    check_ipc_signature(sig)?;
    let one = Lattice::chain(1);
    let square = Lattice::chain(2).product(&Lattice::chain(2));
    let lats = [
        Lattice::chain(3),
        Lattice::chain(4),
        one.ordinal_sum(&square),
        Lattice::chain(2).product(&Lattice::chain(3)),
        one.ordinal_sum(&square).ordinal_sum(&one),
    ];
    lats.iter()
        .map(|lat| {
            let alg = heyting_from_lattice(sig, lat)?;
            let top = lat.top().expect("finite lattice") as Elem;
            Ok(LogicalMatrix::new(alg, &[top])?)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum P {
    Bot,
    Atom(u32),
    And(Arc<P>, Arc<P>),
    Or(Arc<P>, Arc<P>),
    Imp(Arc<P>, Arc<P>),
}

fn imp(a: Arc<P>, b: Arc<P>) -> Arc<P> {
    Arc::new(P::Imp(a, b))
}

fn translate(f: &Formula) -> Result<Arc<P>, ConsequenceError> {
    if let Some(i) = f.as_var() {
        return Ok(Arc::new(P::Atom(i)));
    }
    let c = f.conn().expect("application");
    let args = f
        .args()
        .iter()
        .map(translate)
        .collect::<Result<Vec<_>, _>>()?;
    let bot = || Arc::new(P::Bot);
    Ok(match (c.as_str(), args.as_slice()) {
        ("bot", []) => bot(),
        ("top", []) => imp(bot(), bot()),
        ("neg", [a]) => imp(a.clone(), bot()),
        ("and", [a, b]) => Arc::new(P::And(a.clone(), b.clone())),
        ("or", [a, b]) => Arc::new(P::Or(a.clone(), b.clone())),
        ("imp", [a, b]) => imp(a.clone(), b.clone()),
        ("iff", [a, b]) => Arc::new(P::And(imp(a.clone(), b.clone()), imp(b.clone(), a.clone()))),
        _ => {
            return Err(ConsequenceError::Unsupported(format!(
                "cannot read {f} intuitionistically"
            )))
        }
    })
}

type Sequent = (Vec<Arc<P>>, Arc<P>);

const MEMO_LIMIT: usize = 1 << 20;

/// A G4ip prover with a memo table shared across queries.
#[derive(Debug, Default)]
pub struct Prover {
    memo: Mutex<HashMap<Sequent, bool>>,
}

impl Prover {
    pub fn new() -> Self {
        Prover::default()
    }

    /// Intuitionistic derivability of `psi` from `gamma`.
    pub fn entails(&self, gamma: &[Formula], psi: &Formula) -> Result<bool, ConsequenceError> {
        let ctx = gamma.iter().map(translate).collect::<Result<Vec<_>, _>>()?;
        let goal = translate(psi)?;
        Ok(self.prove(ctx, goal))
    }

    fn prove(&self, mut ctx: Vec<Arc<P>>, goal: Arc<P>) -> bool {
        ctx.sort();
        ctx.dedup();
        let key = (ctx, goal);
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            return v;
        }
        let v = self.search(&key.0, &key.1);
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, v);
        v
    }

    fn search(&self, ctx: &[Arc<P>], goal: &Arc<P>) -> bool {
        if ctx.iter().any(|f| **f == P::Bot) {
            return true;
        }
        if matches!(**goal, P::Atom(_)) && ctx.contains(goal) {
            return true;
        }
        let has_atom = |p: &P| ctx.iter().any(|f| **f == *p);

        // invertible left rules
        for (i, f) in ctx.iter().enumerate() {
            let rest = || {
                let mut r = ctx.to_vec();
                r.remove(i);
                r
            };
            match &**f {
                P::And(a, b) => {
                    let mut r = rest();
                    r.push(a.clone());
                    r.push(b.clone());
                    return self.prove(r, goal.clone());
                }
                P::Or(a, b) => {
                    let mut l = rest();
                    l.push(a.clone());
                    let mut r = rest();
                    r.push(b.clone());
                    return self.prove(l, goal.clone()) && self.prove(r, goal.clone());
                }
                P::Imp(a, b) => match &**a {
                    P::Atom(_) if has_atom(a) => {
                        let mut r = rest();
                        r.push(b.clone());
                        return self.prove(r, goal.clone());
                    }
                    P::Bot => return self.prove(rest(), goal.clone()),
                    P::And(c, d) => {
                        let mut r = rest();
                        r.push(imp(c.clone(), imp(d.clone(), b.clone())));
                        return self.prove(r, goal.clone());
                    }
                    P::Or(c, d) => {
                        let mut r = rest();
                        r.push(imp(c.clone(), b.clone()));
                        r.push(imp(d.clone(), b.clone()));
                        return self.prove(r, goal.clone());
                    }
                    _ => {}
                },
                _ => {}
            }
        }

        // invertible right rules
        match &**goal {
            P::And(a, b) => {
                return self.prove(ctx.to_vec(), a.clone()) && self.prove(ctx.to_vec(), b.clone())
            }
            P::Imp(a, b) => {
                let mut r = ctx.to_vec();
                r.push(a.clone());
                return self.prove(r, b.clone());
            }
            _ => {}
        }

        // non-invertible choices
        if let P::Or(a, b) = &**goal {
            if self.prove(ctx.to_vec(), a.clone()) || self.prove(ctx.to_vec(), b.clone()) {
                return true;
            }
        }
        for (i, f) in ctx.iter().enumerate() {
            if let P::Imp(ab, d) = &**f {
                if let P::Imp(_, b) = &**ab {
                    let mut rest = ctx.to_vec();
                    rest.remove(i);
                    let mut left = rest.clone();
                    left.push(imp(b.clone(), d.clone()));
                    if !self.prove(left, ab.clone()) {
                        continue;
                    }
                    let mut right = rest;
                    right.push(d.clone());
                    if self.prove(right, goal.clone()) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn sig() -> Signature {
        Signature::new("ipc", [("neg", 1), ("and", 2), ("or", 2), ("imp", 2)]).unwrap()
    }

    fn thm(s: &str) -> bool {
        Prover::new().entails(&[], &parse_formula(s, &sig()).unwrap()).unwrap()
    }

    #[test]
    fn intuitionistic_theorems() {
        for s in [
            "imp(x0,x0)",
            "imp(x0,imp(x1,x0))",
            "imp(imp(x0,imp(x1,x2)),imp(imp(x0,x1),imp(x0,x2)))",
            "imp(x0,neg(neg(x0)))",
            "neg(neg(or(x0,neg(x0))))",
            "imp(neg(neg(neg(x0))),neg(x0))",
            "imp(and(x0,x1),or(x1,x2))",
            "neg(neg(imp(imp(imp(x0,x1),x0),x0)))",
            "imp(or(x0,x1),or(x1,x0))",
        ] {
            assert!(thm(s), "{s}");
        }
    }

    #[test]
    fn classical_non_theorems() {
        for s in [
            "or(x0,neg(x0))",
            "imp(neg(neg(x0)),x0)",
            "imp(imp(imp(x0,x1),x0),x0)",
            "or(imp(x0,x1),imp(x1,x0))",
            "or(neg(x0),neg(neg(x0)))",
            "x0",
        ] {
            assert!(!thm(s), "{s}");
        }
    }

    #[test]
    fn entailment_with_premises() {
        let p = |s| parse_formula(s, &sig()).unwrap();
        let pr = Prover::new();
        assert!(pr.entails(&[p("x0"), p("imp(x0,x1)")], &p("x1")).unwrap());
        assert!(pr.entails(&[p("neg(neg(x0))"), p("or(x0,neg(x0))")], &p("x0")).unwrap());
        assert!(!pr.entails(&[p("neg(neg(x0))")], &p("x0")).unwrap());
    }

    #[test]
    fn bot_signature_and_unsupported() {
        let s = Signature::new("ipc_bot", [("bot", 0), ("and", 2), ("or", 2), ("imp", 2)]).unwrap();
        let f = parse_formula("imp(imp(x0,bot),imp(x0,x1))", &s).unwrap();
        assert!(Prover::new().entails(&[], &f).unwrap());
        let bad = Signature::new("bad", [("maj", 3)]).unwrap();
        assert!(check_ipc_signature(&bad).is_err());
    }
}
