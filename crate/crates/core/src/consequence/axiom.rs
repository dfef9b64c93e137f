use std::collections::{BTreeSet, HashMap};

use crate::syntax::{Formula, Signature, Substitution};

use super::{ConsequenceError, Verdict};

/// An inference rule schema: from instances of `premises` infer the
/// matching instance of `conclusion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

/// A Hilbert-style presentation searched backwards up to a depth budget.
/// Sound, never complete: failure to find a derivation is `Unknown`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSystem {
    pub sig: Signature,
    pub axioms: Vec<Formula>,
    pub rules: Vec<Rule>,
    pub depth: usize,
}

/// Cap on the candidate pool for metavariables not fixed by the goal.
const POOL_LIMIT: usize = 512;

impl AxiomSystem {
    pub fn new(
        sig: &Signature,
        axioms: Vec<Formula>,
        rules: Vec<Rule>,
        depth: usize,
    ) -> Result<Self, ConsequenceError> {
        for f in axioms
            .iter()
            .chain(rules.iter().flat_map(|r| r.premises.iter().chain([&r.conclusion])))
        {
            f.check_over(sig)?;
        }
        Ok(AxiomSystem {
            sig: sig.clone(),
            axioms,
            rules,
            depth,
        })
    }

    /// Modus ponens for `imp`.
    pub fn modus_ponens() -> Rule {
        Rule {
            premises: vec![Formula::Var(0), Formula::app("imp", vec![Formula::Var(0), Formula::Var(1)])],
            conclusion: Formula::Var(1),
        }
    }

    pub fn search(&self, gamma: &[Formula], psi: &Formula) -> Verdict {
        let mut seeds: BTreeSet<Formula> = gamma.iter().flat_map(|g| g.subformulas()).collect();
        seeds.extend(psi.subformulas());
        let mut pool: Vec<Formula> = seeds.iter().cloned().collect();
        'grow: for c in self.sig.connectives().iter().filter(|c| c.arity == 2) {
            for a in &seeds {
                for b in &seeds {
                    if pool.len() >= POOL_LIMIT {
                        break 'grow;
                    }
                    pool.push(Formula::app(c.name.clone(), vec![a.clone(), b.clone()]));
                }
            }
        }
        let mut s = Search {
            sys: self,
            gamma,
            pool,
            failed: HashMap::new(),
        };
        if s.derive(psi, self.depth) {
            Verdict::Yes
        } else {
            Verdict::Unknown
        }
    }
}

struct Search<'a> {
    sys: &'a AxiomSystem,
    gamma: &'a [Formula],
    pool: Vec<Formula>,
    /// Largest budget at which a goal is known to fail.
    failed: HashMap<Formula, usize>,
}

impl Search<'_> {
    fn derive(&mut self, goal: &Formula, depth: usize) -> bool {
        if self.gamma.contains(goal) {
            return true;
        }
        if self
            .sys
            .axioms
            .iter()
            .any(|ax| matches(ax, goal, &mut Substitution::new()))
        {
            return true;
        }
        if depth == 0 || self.failed.get(goal).is_some_and(|&d| d >= depth) {
            return false;
        }
        for rule in &self.sys.rules {
            let mut sigma = Substitution::new();
            if !matches(&rule.conclusion, goal, &mut sigma) {
                continue;
            }
            let free: Vec<u32> = rule
                .premises
                .iter()
                .flat_map(|p| p.vars())
                .filter(|v| !sigma.contains_key(v))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if self.try_assignments(rule, &mut sigma, &free, depth) {
                return true;
            }
        }
        self.failed.insert(goal.clone(), depth);
        false
    }

    fn try_assignments(
        &mut self,
        rule: &Rule,
        sigma: &mut Substitution,
        free: &[u32],
        depth: usize,
    ) -> bool {
        match free.split_first() {
            None => rule
                .premises
                .iter()
                .all(|p| self.derive(&p.substitute(sigma), depth - 1)),
            Some((&v, rest)) => {
                let mut candidates = self.directed_candidates(rule, sigma, v);
                for f in &self.pool {
                    if !candidates.contains(f) {
                        candidates.push(f.clone());
                    }
                }
                for c in candidates {
                    sigma.insert(v, c);
                    if self.try_assignments(rule, sigma, rest, depth) {
                        return true;
                    }
                }
                sigma.remove(&v);
                false
            }
        }
    }
}

impl Search<'_> {
    /// Values for metavariable `v` that make some premise unify with an
    /// axiom schema or a hypothesis.
    fn directed_candidates(&self, rule: &Rule, sigma: &Substitution, v: u32) -> Vec<Formula> {
        let mut out = Vec::new();
        let sources = self
            .sys
            .axioms
            .iter()
            .map(|a| U::schema(a))
            .chain(self.gamma.iter().map(U::object));
        let sources: Vec<U> = sources.collect();
        for p in rule.premises.iter().filter(|p| p.vars().contains(&v)) {
            let pat = U::pattern(p, sigma);
            for src in &sources {
                let mut b = HashMap::new();
                if unify(&pat, src, &mut b) {
                    if let Some(f) = resolve(&U::Meta(v), &b).and_then(|u| u.ground()) {
                        if !out.contains(&f) {
                            out.push(f);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Terms with metavariables, for unifying premises against axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
enum U {
    Meta(u32),
    Obj(u32),
    App(crate::syntax::Conn, Vec<U>),
}

/// Offset separating axiom metavariables from rule metavariables.
const AXIOM_META: u32 = 1 << 20;

impl U {
    fn schema(f: &Formula) -> U {
        match f.as_var() {
            Some(i) => U::Meta(AXIOM_META + i),
            None => U::App(f.conn().expect("app").clone(), f.args().iter().map(U::schema).collect()),
        }
    }

    fn object(f: &Formula) -> U {
        match f.as_var() {
            Some(i) => U::Obj(i),
            None => U::App(f.conn().expect("app").clone(), f.args().iter().map(U::object).collect()),
        }
    }

    /// A rule premise: bound metavariables become object terms.
    fn pattern(f: &Formula, sigma: &Substitution) -> U {
        match f.as_var() {
            Some(i) => sigma.get(&i).map(U::object).unwrap_or(U::Meta(i)),
            None => U::App(
                f.conn().expect("app").clone(),
                f.args().iter().map(|a| U::pattern(a, sigma)).collect(),
            ),
        }
    }

    fn ground(&self) -> Option<Formula> {
        match self {
            U::Meta(_) => None,
            U::Obj(i) => Some(Formula::Var(*i)),
            U::App(c, args) => Some(Formula::app(
                c.clone(),
                args.iter().map(U::ground).collect::<Option<Vec<_>>>()?,
            )),
        }
    }
}

fn walk<'a>(mut t: &'a U, b: &'a HashMap<u32, U>) -> &'a U {
    while let U::Meta(m) = t {
        match b.get(m) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

fn occurs(m: u32, t: &U, b: &HashMap<u32, U>) -> bool {
    match walk(t, b) {
        U::Meta(n) => *n == m,
        U::Obj(_) => false,
        U::App(_, args) => args.iter().any(|a| occurs(m, a, b)),
    }
}

fn unify(x: &U, y: &U, b: &mut HashMap<u32, U>) -> bool {
    let (x, y) = (walk(x, b).clone(), walk(y, b).clone());
    match (&x, &y) {
        (U::Meta(m), U::Meta(n)) if m == n => true,
        (U::Meta(m), t) | (t, U::Meta(m)) => {
            if occurs(*m, t, b) {
                return false;
            }
            b.insert(*m, t.clone());
            true
        }
        (U::Obj(i), U::Obj(j)) => i == j,
        (U::App(c, xs), U::App(d, ys)) => {
            c == d && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| unify(s, t, b))
        }
        _ => false,
    }
}

fn resolve(t: &U, b: &HashMap<u32, U>) -> Option<U> {
    Some(match walk(t, b) {
        U::App(c, args) => U::App(
            c.clone(),
            args.iter().map(|a| resolve(a, b)).collect::<Option<Vec<_>>>()?,
        ),
        other => other.clone(),
    })
}

/// One-way matching of `schema` against `target`, extending `sigma`.
pub fn matches(schema: &Formula, target: &Formula, sigma: &mut Substitution) -> bool {
    match schema.as_var() {
        Some(i) => match sigma.get(&i) {
            Some(bound) => bound == target,
            None => {
                sigma.insert(i, target.clone());
                true
            }
        },
        None => {
            schema.conn() == target.conn()
                && schema.args().len() == target.args().len()
                && schema
                    .args()
                    .iter()
                    .zip(target.args())
                    .all(|(s, t)| matches(s, t, sigma))
        }
    }
}
