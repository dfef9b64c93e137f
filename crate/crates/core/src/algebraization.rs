//! Algebraizing pairs `((δ ≡ ε), Δ)`, their four defining conditions,
//! Lindenbaum algebraizability, and finite Lindenbaum–Tarski quotients.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::algebra::{
    enumerate_homs, for_each_tuple, free_algebra, homs_extending, in_quasivariety, AlgebraError,
    Elem, FiniteAlgebra, QuasivarietySpec,
};
use crate::consequence::classes::{for_each_subset, partition, Classifier, Decider, Item};
use crate::consequence::{
    congruence_precheck, check_congruential, Bits, ConsequenceError, Logic, LogicalMatrix,
    Semantics, Values, Verdict,
};
use crate::report::{Bounds, Outcome, Report};
use crate::syntax::{formulas_up_to, parse_formula, Formula, Signature, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraizationError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Consequence(#[from] ConsequenceError),
    #[error("invalid algebraizing pair: {0}")]
    InvalidPair(String),
    #[error("logic {0} is not congruential at the pre-check bound")]
    NotCongruential(String),
    #[error("no formulas: no variables and no constants")]
    NoFormulas,
    #[error("quasivariety {0} has no generators to evaluate |=_K over")]
    NoGenerators(String),
}

/// `δ_r, ε_r` in one variable (equal length), `Δ_u` in two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraizingPair {
    pub delta: Vec<Formula>,
    pub epsilon: Vec<Formula>,
    pub big_delta: Vec<Formula>,
}

impl AlgebraizingPair {
    pub fn new(
        delta: Vec<Formula>,
        epsilon: Vec<Formula>,
        big_delta: Vec<Formula>,
    ) -> Result<Self, AlgebraizationError> {
        if delta.len() != epsilon.len() {
            return Err(AlgebraizationError::InvalidPair(format!(
                "{} delta terms but {} epsilon terms",
                delta.len(),
                epsilon.len()
            )));
        }
        if big_delta.is_empty() {
            return Err(AlgebraizationError::InvalidPair("Delta is empty".into()));
        }
        if let Some(f) = delta.iter().chain(&epsilon).find(|f| f.var_bound() > 1) {
            return Err(AlgebraizationError::InvalidPair(format!("{f} is not in x0 alone")));
        }
        if let Some(f) = big_delta.iter().find(|f| f.var_bound() > 2) {
            return Err(AlgebraizationError::InvalidPair(format!("{f} is not in x0, x1")));
        }
        Ok(AlgebraizingPair {
            delta,
            epsilon,
            big_delta,
        })
    }

    pub fn parse(
        sig: &Signature,
        delta: &[&str],
        epsilon: &[&str],
        big_delta: &[&str],
    ) -> Result<Self, AlgebraizationError> {
        let p = |xs: &[&str]| {
            xs.iter()
                .map(|s| parse_formula(s, sig))
                .collect::<Result<Vec<_>, _>>()
        };
        AlgebraizingPair::new(p(delta)?, p(epsilon)?, p(big_delta)?)
    }

    pub fn check_over(&self, sig: &Signature) -> Result<(), SyntaxError> {
        for f in self.delta.iter().chain(&self.epsilon).chain(&self.big_delta) {
            f.check_over(sig)?;
        }
        Ok(())
    }

    /// `δ_r(φ) ≡ ε_r(φ)` for each `r`.
    pub fn equations(&self, phi: &Formula) -> Vec<(Formula, Formula)> {
        let arg = std::slice::from_ref(phi);
        self.delta
            .iter()
            .zip(&self.epsilon)
            .map(|(d, e)| (d.instantiate(arg), e.instantiate(arg)))
            .collect()
    }

    /// `φ Δ ψ`, the set of `Δ_u(φ, ψ)`.
    pub fn delta_set(&self, phi: &Formula, psi: &Formula) -> Vec<Formula> {
        let args = [phi.clone(), psi.clone()];
        self.big_delta.iter().map(|d| d.instantiate(&args)).collect()
    }

    /// Two-variable schemas `δ_r(Δ_u)` and `ε_r(Δ_u)`, paired.
    fn equations_of_delta(&self) -> Vec<(Formula, Formula)> {
        let mut out = Vec::new();
        for bd in &self.big_delta {
            let arg = std::slice::from_ref(bd);
            for (d, e) in self.delta.iter().zip(&self.epsilon) {
                out.push((d.instantiate(arg), e.instantiate(arg)));
            }
        }
        out
    }

    /// One-variable schemas `Δ_u(δ_r, ε_r)`.
    fn delta_of_equations(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        for (d, e) in self.delta.iter().zip(&self.epsilon) {
            let args = [d.clone(), e.clone()];
            for bd in &self.big_delta {
                out.push(bd.instantiate(&args));
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct AlgebraizableLogic {
    pub logic: Logic,
    pub pair: AlgebraizingPair,
    pub qv: QuasivarietySpec,
}

impl AlgebraizableLogic {
    pub fn new(logic: Logic, pair: AlgebraizingPair, qv: QuasivarietySpec) -> Result<Self, AlgebraizationError> {
        pair.check_over(&logic.sig)?;
        if qv.sig != logic.sig {
            return Err(ConsequenceError::SignatureMismatch {
                expected: logic.sig.to_string(),
                found: qv.sig.to_string(),
            }
            .into());
        }
        Ok(AlgebraizableLogic { logic, pair, qv })
    }
}

/// Values over every (generator, valuation) point of `K`.
struct KSemantics {
    sem: Semantics,
}

impl KSemantics {
    fn new(qv: &QuasivarietySpec, nvars: usize) -> Result<Self, AlgebraizationError> {
        let gens = qv
            .generators
            .as_ref()
            .ok_or_else(|| AlgebraizationError::NoGenerators(qv.name.clone()))?;
        let ms = gens
            .iter()
            .map(|g| LogicalMatrix::new(g.clone(), &[]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KSemantics {
            sem: Semantics::new(ms, nvars),
        })
    }

    fn eq_bits(a: &Values, b: &Values) -> Bits {
        Bits::from_fn(a.len(), |p| a[p] == b[p])
    }

    /// Points where every `lhs_i(args) = rhs_i(args)`.
    fn eqs_bits(&self, eqs: &[(Formula, Formula)], args: &[&Values]) -> Result<Bits, AlgebraError> {
        let mut acc = Bits::from_fn(self.sem.num_points(), |_| true);
        for (l, r) in eqs {
            let b = Self::eq_bits(&self.sem.apply(l, args)?, &self.sem.apply(r, args)?);
            acc = acc.and(&b);
        }
        Ok(acc)
    }
}

/// First fail, else first undecided, across a condition's instances.
#[derive(Default)]
struct Tally {
    fail: Option<String>,
    unknown: Option<String>,
    instances: usize,
}

impl Tally {
    fn record(&mut self, outcome: Outcome, what: impl FnOnce() -> String) -> bool {
        self.instances += 1;
        match outcome {
            Outcome::Fail => {
                self.fail = Some(what());
                false
            }
            Outcome::Inconclusive => {
                self.unknown.get_or_insert_with(what);
                true
            }
            Outcome::Pass => true,
        }
    }

    fn emit(self, report: &mut Report, check: &str) {
        let instance = format!("{} instance(s)", self.instances);
        match (self.fail, self.unknown) {
            (Some(w), _) => report.push_as(check, instance, Outcome::Fail, Some(w)),
            (None, Some(w)) => report.push_as(check, instance, Outcome::Inconclusive, Some(w)),
            _ => report.push_as(check, instance, Outcome::Pass, None),
        }
    }
}

fn iff(v1: Verdict, v2: bool) -> Outcome {
    match v1 {
        Verdict::Unknown => Outcome::Inconclusive,
        v => (v == Verdict::Yes && v2 || v == Verdict::No && !v2).into(),
    }
}

fn all_of(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut acc = Verdict::Yes;
    for v in vs {
        match v {
            Verdict::No => return Verdict::No,
            Verdict::Unknown => acc = Verdict::Unknown,
            Verdict::Yes => {}
        }
    }
    acc
}

fn set_text<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> String {
    let parts: Vec<String> = fs.into_iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Conditions (i), (ii), (i)′ and (ii)′ over formulas within `bound`;
/// `⊨_K` is evaluated over the generators of the quasivariety.
pub fn check_bp_conditions(a: &AlgebraizableLogic, bound: Bounds) -> Result<Report, AlgebraizationError> {
    let mut report = Report::new("bp-conditions").with_bounds(bound);
    let n = bound.nvars;
    let pair = &a.pair;
    let formulas = formulas_up_to(&a.logic.sig, n, bound.depth);
    if formulas.is_empty() {
        return Err(AlgebraizationError::NoFormulas);
    }
    let dec = Decider::new(&a.logic, n)?;
    let ksem = KSemantics::new(&a.qv, n)?;
    let items = dec.items(formulas.clone())?;
    let kv = formulas
        .iter()
        .map(|f| ksem.sem.values(f))
        .collect::<Result<Vec<_>, _>>()?;
    let eqs: Vec<(Formula, Formula)> = pair.delta.iter().cloned().zip(pair.epsilon.iter().cloned()).collect();

    let classes = match partition(&dec, &items) {
        Ok(p) => Some(p),
        Err(ConsequenceError::Undecided { instance }) => {
            for c in ["(i)", "(i)'"] {
                report.push_as(c, "classes", Outcome::Inconclusive, Some(format!("undecided: {instance}")));
            }
            None
        }
        Err(e) => return Err(e.into()),
    };

    // (i): Γ ⊢ φ ⇔ δ[Γ] ≡ ε[Γ] ⊨_K δ(φ) ≡ ε(φ)
    if let Some(p) = &classes {
        let profile = kv
            .iter()
            .map(|v| ksem.eqs_bits(&eqs, &[v]))
            .collect::<Result<Vec<_>, _>>()?;
        let mut joint: HashMap<(usize, &Bits), usize> = HashMap::new();
        let mut reps = Vec::new();
        for i in 0..items.len() {
            joint.entry((p.class_of[i], &profile[i])).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            });
        }
        let mut tally = Tally::default();
        let mut err = None;
        'outer: for &psi in &reps {
            let mut go = true;
            for_each_subset(reps.len(), bound.premises, |gamma| {
                let g: Vec<&Item> = gamma.iter().map(|&j| &items[reps[j]]).collect();
                let gk: Vec<&Bits> = gamma.iter().map(|&j| &profile[reps[j]]).collect();
                let v1 = match dec.entails(&g, &items[psi]) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                };
                let v2 = profile[psi].covers_meet(&gk);
                go = tally.record(iff(v1, v2), || {
                    format!(
                        "Gamma = {}, phi = {}: {} in the logic, {} in K",
                        set_text(g.iter().map(|i| &i.formula)),
                        items[psi].formula,
                        v1,
                        if v2 { "holds" } else { "fails" }
                    )
                });
                go
            });
            if let Some(e) = err.take() {
                return Err(e.into());
            }
            if !go {
                break 'outer;
            }
        }
        tally.emit(&mut report, "(i)");
    }

    // (ii): φ ≡ ψ  =||=_K  δ(φΔψ) ≡ ε(φΔψ)
    {
        let mut distinct: HashMap<&Values, usize> = HashMap::new();
        let mut vecs: Vec<usize> = Vec::new();
        for (i, v) in kv.iter().enumerate() {
            distinct.entry(v).or_insert_with(|| {
                vecs.push(i);
                vecs.len()
            });
        }
        let composite = pair.equations_of_delta();
        let mut tally = Tally::default();
        'pairs: for &i in &vecs {
            for &j in &vecs {
                let lhs = KSemantics::eq_bits(&kv[i], &kv[j]);
                let rhs = ksem.eqs_bits(&composite, &[&kv[i], &kv[j]])?;
                let go = tally.record((lhs == rhs).into(), || {
                    format!(
                        "{} = {} and its Delta-translation differ on K",
                        formulas[i], formulas[j]
                    )
                });
                if !go {
                    break 'pairs;
                }
            }
        }
        tally.emit(&mut report, "(ii)");
    }

    // (i)': Θ ⊨_K φ ≡ ψ ⇔ Δ[Θ] ⊢ φΔψ
    if let Some(p) = &classes {
        let mut cl = Classifier::new(&dec);
        for &r in &p.reps {
            cl.classify(&items[r])?;
        }
        struct Eq {
            lhs: usize,
            rhs: usize,
            k: Bits,
            deltas: Vec<Item>,
        }
        let mut eq_classes: Vec<Eq> = Vec::new();
        let mut seen: HashMap<(Bits, Vec<usize>), ()> = HashMap::new();
        for i in 0..items.len() {
            for j in 0..items.len() {
                let k = KSemantics::eq_bits(&kv[i], &kv[j]);
                let deltas = pair
                    .big_delta
                    .iter()
                    .map(|d| dec.apply(d, &[&items[i], &items[j]]))
                    .collect::<Result<Vec<_>, _>>()?;
                let ids = match deltas.iter().map(|d| cl.classify(d).map(|x| x.0)).collect() {
                    Ok(ids) => ids,
                    Err(ConsequenceError::Undecided { instance }) => {
                        report.push_as("(i)'", "classes", Outcome::Inconclusive, Some(instance));
                        eq_classes.clear();
                        break;
                    }
                    Err(e) => return Err(e.into()),
                };
                if seen.insert((k.clone(), ids), ()).is_none() {
                    eq_classes.push(Eq {
                        lhs: i,
                        rhs: j,
                        k,
                        deltas,
                    });
                }
            }
        }
        if !eq_classes.is_empty() {
            let mut tally = Tally::default();
            let mut err = None;
            for e in &eq_classes {
                let mut go = true;
                for_each_subset(eq_classes.len(), bound.premises, |theta| {
                    let ks: Vec<&Bits> = theta.iter().map(|&t| &eq_classes[t].k).collect();
                    let gamma: Vec<&Item> = theta.iter().flat_map(|&t| &eq_classes[t].deltas).collect();
                    let v1 = e.k.covers_meet(&ks);
                    let verdicts: Result<Vec<Verdict>, _> =
                        e.deltas.iter().map(|d| dec.entails(&gamma, d)).collect();
                    let v2 = match verdicts {
                        Ok(vs) => all_of(vs),
                        Err(x) => {
                            err = Some(x);
                            return false;
                        }
                    };
                    go = tally.record(iff(v2, v1), || {
                        let th: Vec<String> = theta
                            .iter()
                            .map(|&t| format!("{} = {}", formulas[eq_classes[t].lhs], formulas[eq_classes[t].rhs]))
                            .collect();
                        format!(
                            "Theta = {{{}}}, {} = {}: {} in K, Delta side {}",
                            th.join(", "),
                            formulas[e.lhs],
                            formulas[e.rhs],
                            if v1 { "holds" } else { "fails" },
                            v2
                        )
                    });
                    go
                });
                if let Some(x) = err.take() {
                    return Err(x.into());
                }
                if !go {
                    break;
                }
            }
            report.note(format!("(i)': {} equation classes", eq_classes.len()));
            tally.emit(&mut report, "(i)'");
        }
    }

    // (ii)': ϑ ⊣⊢ δ(ϑ) Δ ε(ϑ)
    {
        let schemas = pair.delta_of_equations();
        let mut tally = Tally::default();
        for it in &items {
            let set = schemas
                .iter()
                .map(|s| dec.apply(s, &[it]))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&Item> = set.iter().collect();
            let forward = all_of(
                set.iter()
                    .map(|s| dec.entails(&[it], s))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            let backward = dec.entails(&refs, it)?;
            let v = all_of([forward, backward]);
            let outcome = match v {
                Verdict::Yes => Outcome::Pass,
                Verdict::No => Outcome::Fail,
                Verdict::Unknown => Outcome::Inconclusive,
            };
            let go = tally.record(outcome, || {
                format!(
                    "theta = {}: {} -| {}; {} |- {}: {}",
                    it.formula,
                    it.formula,
                    forward,
                    set_text(set.iter().map(|s| &s.formula)),
                    it.formula,
                    backward
                )
            });
            if !go {
                break;
            }
        }
        tally.emit(&mut report, "(ii)'");
    }
    Ok(report.sorted())
}

/// `φ ⊣⊢ ψ ⇔ ⊢ φΔψ` for formulas within `bound` (nvars, depth).
pub fn check_lindenbaum(a: &AlgebraizableLogic, bound: Bounds) -> Result<Report, AlgebraizationError> {
    let mut report = Report::new("lindenbaum").with_bounds(bound);
    let dec = Decider::new(&a.logic, bound.nvars)?;
    let items = dec.items(formulas_up_to(&a.logic.sig, bound.nvars, bound.depth))?;
    let congruential = check_congruential(&a.logic, congruence_precheck(&a.logic))?.passed();
    let p = match partition(&dec, &items) {
        Ok(p) => p,
        Err(ConsequenceError::Undecided { instance }) => {
            report.inconclusive("classes", format!("undecided: {instance}"));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    // class pairs suffice when equivalent arguments give equivalent Δ-instances
    let candidates: Vec<usize> = if congruential {
        p.reps.clone()
    } else {
        report.note("not congruential at the pre-check bound: all formula pairs");
        (0..items.len()).collect()
    };
    let mut tally = Tally::default();
    'all: for &i in &candidates {
        for &j in &candidates {
            let same = p.class_of[i] == p.class_of[j];
            let deltas = a
                .pair
                .big_delta
                .iter()
                .map(|d| dec.apply(d, &[&items[i], &items[j]]))
                .collect::<Result<Vec<_>, _>>()?;
            let v = all_of(
                deltas
                    .iter()
                    .map(|d| dec.entails(&[], d))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            let go = tally.record(iff(v, same), || {
                format!(
                    "{} and {}: interderivable {}, |- Delta {}",
                    items[i].formula, items[j].formula, same, v
                )
            });
            if !go {
                break 'all;
            }
        }
    }
    report.note(format!(
        "{} formulas in {} classes",
        items.len(),
        p.len()
    ));
    tally.emit(&mut report, "lindenbaum");
    Ok(report)
}

#[derive(Debug, Clone)]
pub enum QuotientOutcome {
    Saturated(FiniteAlgebra),
    /// Applying connectives to the representatives found up to `depth`
    /// still produced new classes.
    Unsaturated { depth: usize },
}

#[derive(Debug, Clone)]
pub struct LindenbaumQuotient {
    pub outcome: QuotientOutcome,
    /// One representative per class, in discovery order.
    pub reps: Vec<Formula>,
    /// Class of each variable `x_i`.
    pub generators: Vec<Elem>,
}

impl LindenbaumQuotient {
    pub fn algebra(&self) -> Option<&FiniteAlgebra> {
        match &self.outcome {
            QuotientOutcome::Saturated(a) => Some(a),
            QuotientOutcome::Unsaturated { .. } => None,
        }
    }
}

/// `F(Σ)[n] / ⊣⊢`, built level by level from class representatives: level
/// `k + 1` applies every connective to the representatives of level `≤ k`.
/// Saturated when one more application yields no new class. A `seed`
/// shuffles which member of a new class becomes its representative.
pub fn lindenbaum_quotient(
    l: &Logic,
    n: usize,
    depth: usize,
    seed: Option<u64>,
) -> Result<LindenbaumQuotient, AlgebraizationError> {
    if n == 0 && l.sig.constants().next().is_none() {
        return Err(AlgebraizationError::NoFormulas);
    }
    if !check_congruential(l, congruence_precheck(l))?.passed() {
        return Err(AlgebraizationError::NotCongruential(l.name.clone()));
    }
    let dec = Decider::new(l, n)?;
    let mut cl = Classifier::new(&dec);
    let mut rng = seed.map(rand::rngs::StdRng::seed_from_u64);
    let mut level: Vec<Formula> = (0..n as u32).map(Formula::Var).collect();
    level.extend(l.sig.constants().map(|c| Formula::constant(c.name.clone())));
    if let Some(r) = rng.as_mut() {
        level.shuffle(r);
    }
    for f in level {
        cl.classify(&dec.item(f)?)?;
    }
    let generators = (0..n as u32)
        .map(|i| Ok(cl.find(&dec.item(Formula::Var(i))?)?.expect("classified") as Elem))
        .collect::<Result<Vec<_>, ConsequenceError>>()?;

    let applications = |cl: &Classifier| -> Vec<(usize, Vec<Elem>)> {
        let mut out = Vec::new();
        for (ci, c) in l.sig.connectives().iter().enumerate().filter(|(_, c)| c.arity > 0) {
            for_each_tuple(cl.reps.len(), c.arity, |args| out.push((ci, args.to_vec())));
        }
        out
    };
    let schemas: Vec<Formula> = l
        .sig
        .connectives()
        .iter()
        .map(|c| Formula::generic(c.name.clone(), c.arity))
        .collect();
    for _ in 0..depth {
        let mut apps = applications(&cl);
        if let Some(r) = rng.as_mut() {
            apps.shuffle(r);
        }
        let snapshot: Vec<Item> = cl.reps.clone();
        for (ci, args) in apps {
            let refs: Vec<&Item> = args.iter().map(|&a| &snapshot[a as usize]).collect();
            cl.classify(&dec.apply(&schemas[ci], &refs)?)?;
        }
    }
    // saturation: every application lands in a known class
    let mut table: HashMap<(usize, Vec<Elem>), Elem> = HashMap::new();
    let mut saturated = true;
    for (ci, args) in applications(&cl) {
        let refs: Vec<&Item> = args.iter().map(|&a| &cl.reps[a as usize]).collect();
        match cl.find(&dec.apply(&schemas[ci], &refs)?)? {
            Some(c) => {
                table.insert((ci, args), c as Elem);
            }
            None => {
                saturated = false;
                break;
            }
        }
    }
    for (ci, c) in l.sig.connectives().iter().enumerate().filter(|(_, c)| c.arity == 0) {
        let k = cl.find(&dec.item(Formula::constant(c.name.clone()))?)?.expect("classified");
        table.insert((ci, Vec::new()), k as Elem);
    }
    let reps: Vec<Formula> = cl.reps.iter().map(|i| i.formula.clone()).collect();
    let outcome = if saturated {
        QuotientOutcome::Saturated(FiniteAlgebra::from_fn(&l.sig, reps.len(), |ci, args| {
            table[&(ci, args.to_vec())]
        })?)
    } else {
        QuotientOutcome::Unsaturated { depth }
    };
    Ok(LindenbaumQuotient {
        outcome,
        reps,
        generators,
    })
}

/// Freeness of a saturated quotient: membership in `qv`, unique extension
/// of every generator assignment into each catalog algebra, and an
/// isomorphism with `free_algebra(qv, n)` matching generators.
pub fn verify_free_object(
    q: &LindenbaumQuotient,
    qv: &QuasivarietySpec,
    catalog: &[FiniteAlgebra],
    size_cap: usize,
) -> Result<Report, AlgebraizationError> {
    let mut report = Report::new("free-object");
    let Some(alg) = q.algebra() else {
        report.inconclusive("saturation", "quotient is not saturated at this depth; no finite algebra");
        return Ok(report);
    };
    let m = in_quasivariety(alg, qv)?;
    report.push(
        "quotient lies in the quasivariety",
        m.member.into(),
        m.witness.map(|w| w.to_string()),
    );
    let n = q.generators.len();
    for (k, b) in catalog.iter().enumerate() {
        let instance = format!("catalog #{k} (size {})", b.size());
        let mb = in_quasivariety(b, qv)?;
        if !mb.member {
            report.fail(instance, "catalog algebra is not in the quasivariety");
            continue;
        }
        let mut counts: HashMap<Vec<Elem>, usize> = HashMap::new();
        for h in enumerate_homs(alg, b)? {
            let key: Vec<Elem> = q.generators.iter().map(|&g| h[g as usize]).collect();
            *counts.entry(key).or_default() += 1;
        }
        let mut bad = None;
        for_each_tuple(b.size(), n, |assign| {
            if bad.is_none() {
                let c = counts.get(assign).copied().unwrap_or(0);
                if c != 1 {
                    bad = Some(format!("assignment {assign:?} extends in {c} ways"));
                }
            }
        });
        match bad {
            Some(w) => report.fail(instance, w),
            None => report.pass(format!("{instance}: {} assignment(s)", b.size().pow(n as u32))),
        }
    }
    let free = free_algebra(qv, n, size_cap)?;
    let fixed: Vec<(Elem, Elem)> = q.generators.iter().copied().zip(free.generators.iter().copied()).collect();
    let iso = alg.size() == free.algebra.size()
        && homs_extending(alg, &free.algebra, &fixed)?
            .iter()
            .any(|h| crate::algebra::is_surjective(h, free.algebra.size()));
    report.push(
        format!("isomorphic to the free algebra on {n} generator(s)"),
        iso.into(),
        (!iso).then(|| format!("quotient size {}, free algebra size {}", alg.size(), free.algebra.size())),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, is_isomorphic, DEFAULT_SIZE_CAP};
    use crate::standard;

    fn cpl_pair(big_delta: &[&str]) -> AlgebraizableLogic {
        let sig = standard::neg_or();
        AlgebraizableLogic::new(
            standard::cpl(&sig).unwrap(),
            AlgebraizingPair::parse(&sig, &["x0"], &["or(x0,neg(x0))"], big_delta).unwrap(),
            standard::boolean_algebras(&sig).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn classical_pair_passes_all_conditions() {
        let r = check_bp_conditions(&cpl_pair(&["or(neg(x0),x1)", "or(neg(x1),x0)"]), Bounds::new(2, 2, 2)).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.verdicts.len(), 4);
    }

    #[test]
    fn one_sided_delta_fails_ii_prime_at_x0() {
        let r = check_bp_conditions(&cpl_pair(&["or(neg(x0),x1)"]), Bounds::new(2, 2, 2)).unwrap();
        let e = r.entries_for("(ii)'").next().unwrap();
        assert_eq!(e.verdict, Outcome::Fail);
        assert!(e.witness.as_ref().unwrap().starts_with("theta = x0:"), "{e:?}");
    }

    #[test]
    fn classical_lindenbaum() {
        let r = check_lindenbaum(&cpl_pair(&["or(neg(x0),x1)", "or(neg(x1),x0)"]), Bounds::new(2, 3, 0)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn quotient_of_cpl_in_one_variable() {
        let q = lindenbaum_quotient(&standard::cpl(&standard::neg_or()).unwrap(), 1, 3, None).unwrap();
        let reps: Vec<String> = q.reps.iter().map(|f| f.to_string()).collect();
        assert_eq!(reps, ["x0", "neg(x0)", "or(x0,neg(x0))", "neg(or(x0,neg(x0)))"]);
        assert!(q.algebra().is_some());
        assert_eq!(q.generators, vec![0]);
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let l = standard::cpl(&standard::neg_or()).unwrap();
        let a = lindenbaum_quotient(&l, 2, 4, None).unwrap();
        let b = lindenbaum_quotient(&l, 2, 4, Some(7)).unwrap();
        assert_eq!(a.reps.len(), 16);
        assert_ne!(a.reps, b.reps);
        // relabel b's classes via interderivability with a's representatives
        let map: Vec<Elem> = b
            .reps
            .iter()
            .map(|f| a.reps.iter().position(|g| l.interderivable(f, g).unwrap()).unwrap() as Elem)
            .collect();
        assert!(crate::algebra::is_hom(b.algebra().unwrap(), a.algebra().unwrap(), &map));
    }

    #[test]
    fn free_object_and_refusals() {
        let sig = standard::neg_or();
        let l = standard::cpl(&sig).unwrap();
        let q = lindenbaum_quotient(&l, 1, 3, None).unwrap();
        let ba = standard::boolean_algebras(&sig).unwrap();
        let cat = catalog::recipe("powerset_BA(sizes=[1,2,4,8])", &sig).unwrap();
        let r = verify_free_object(&q, &ba, &cat, DEFAULT_SIZE_CAP).unwrap();
        assert!(r.passed(), "{r}");
        assert!(matches!(lindenbaum_quotient(&l, 0, 3, None), Err(AlgebraizationError::NoFormulas)));
        let free = free_algebra(&ba, 1, DEFAULT_SIZE_CAP).unwrap();
        assert!(is_isomorphic(q.algebra().unwrap(), &free.algebra));
    }

    #[test]
    fn ipc_is_unsaturated() {
        let q = lindenbaum_quotient(&standard::ipc(), 1, 3, None).unwrap();
        assert!(matches!(q.outcome, QuotientOutcome::Unsaturated { depth: 3 }));
    }
}
