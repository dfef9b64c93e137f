use std::collections::HashMap;

use crate::report::{Bounds, Outcome, Report};
use crate::syntax::{formulas_up_to, FlexMorphism, Formula, Signature, Substitution};

use super::classes::{for_each_subset, partition, Decider, Item, Partition};
use super::{same_sig, ConsequenceError, Logic, Verdict};

fn set_text(fs: &[&Formula]) -> String {
    let parts: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn generic(sig: &Signature, name: &str) -> Formula {
    Formula::generic(name, sig.arity(name).expect("connective of sig"))
}

/// Partitions, or reports the undecided instance as inconclusive.
fn classes_or_report(
    dec: &Decider,
    items: &[Item],
    report: &mut Report,
) -> Result<Option<Partition>, ConsequenceError> {
    match partition(dec, items) {
        Ok(p) => Ok(Some(p)),
        Err(ConsequenceError::Undecided { instance }) => {
            report.inconclusive(
                format!("interderivability classes of {}", dec.logic.name),
                format!("undecided: {instance}"),
            );
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// `Γ ⊢ ψ ⇒ ť[Γ] ⊢′ ť(ψ)` for every `Γ ∪ {ψ}` within `bound`.
pub fn check_translation(
    t: &FlexMorphism,
    l: &Logic,
    l2: &Logic,
    bound: Bounds,
) -> Result<Report, ConsequenceError> {
    translation_report("translation", t, l, l2, bound, false)
}

/// `Γ ⊢ ψ ⇔ ť[Γ] ⊢′ ť(ψ)` for every `Γ ∪ {ψ}` within `bound`.
pub fn check_conservative(
    t: &FlexMorphism,
    l: &Logic,
    l2: &Logic,
    bound: Bounds,
) -> Result<Report, ConsequenceError> {
    translation_report("conservative", t, l, l2, bound, true)
}

/// Entailment in either logic depends only on the classes of premises and
/// conclusion, so instances are drawn from joint classes: pairs (class of φ,
/// class of ť(φ)). Per conclusion class, premise sets are visited by size and
/// then lexicographically by first occurrence; the first violation is kept.
fn translation_report(
    check: &str,
    t: &FlexMorphism,
    l: &Logic,
    l2: &Logic,
    bound: Bounds,
    both_ways: bool,
) -> Result<Report, ConsequenceError> {
    same_sig(&l.sig, t.source())?;
    same_sig(&l2.sig, t.target())?;
    let mut report = Report::new(check).with_bounds(bound);
    let formulas = formulas_up_to(&l.sig, bound.nvars, bound.depth);
    let images = formulas
        .iter()
        .map(|f| t.lift(f))
        .collect::<Result<Vec<_>, _>>()?;
    let d1 = Decider::new(l, bound.nvars)?;
    let d2 = Decider::new(l2, bound.nvars)?;
    let items1 = d1.items(formulas)?;
    let items2 = d2.items(images)?;
    let Some(p1) = classes_or_report(&d1, &items1, &mut report)? else {
        return Ok(report);
    };
    let Some(p2) = classes_or_report(&d2, &items2, &mut report)? else {
        return Ok(report);
    };

    let mut joint_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut joint_reps: Vec<usize> = Vec::new();
    let mut joint_sizes: Vec<usize> = Vec::new();
    for i in 0..items1.len() {
        let key = (p1.class_of[i], p2.class_of[i]);
        let j = *joint_index.entry(key).or_insert_with(|| {
            joint_reps.push(i);
            joint_sizes.push(0);
            joint_reps.len() - 1
        });
        joint_sizes[j] += 1;
    }

    let mut instances = 0usize;
    for (j, &psi) in joint_reps.iter().enumerate() {
        let mut first_fail: Option<String> = None;
        let mut first_unknown: Option<String> = None;
        let mut err = None;
        for_each_subset(joint_reps.len(), bound.premises, |gamma| {
            instances += 1;
            let g1: Vec<&Item> = gamma.iter().map(|&g| &items1[joint_reps[g]]).collect();
            let g2: Vec<&Item> = gamma.iter().map(|&g| &items2[joint_reps[g]]).collect();
            let verdicts = d1
                .entails(&g1, &items1[psi])
                .and_then(|v1| Ok((v1, d2.entails(&g2, &items2[psi])?)));
            let (v1, v2) = match verdicts {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            };
            use Verdict::*;
            let outcome = match (v1, v2) {
                (Yes, No) => Outcome::Fail,
                (No, Yes) if both_ways => Outcome::Fail,
                (No, _) if !both_ways => Outcome::Pass,
                (_, Yes) if !both_ways => Outcome::Pass,
                (Yes, Yes) | (No, No) => Outcome::Pass,
                _ => Outcome::Inconclusive,
            };
            let describe = || {
                let s1: Vec<&Formula> = g1.iter().map(|i| &i.formula).collect();
                let s2: Vec<&Formula> = g2.iter().map(|i| &i.formula).collect();
                format!(
                    "Gamma = {}, psi = {}: {} in {}; images {} / {}: {} in {}",
                    set_text(&s1),
                    items1[psi].formula,
                    v1,
                    l.name,
                    set_text(&s2),
                    items2[psi].formula,
                    v2,
                    l2.name
                )
            };
            match outcome {
                Outcome::Fail => {
                    first_fail = Some(describe());
                    false
                }
                Outcome::Inconclusive => {
                    first_unknown.get_or_insert_with(describe);
                    true
                }
                Outcome::Pass => true,
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let instance = format!(
            "psi ~ {} ({} formula(s))",
            items1[psi].formula, joint_sizes[j]
        );
        match (first_fail, first_unknown) {
            (Some(w), _) => report.fail(instance, w),
            (None, Some(w)) => report.inconclusive(instance, w),
            (None, None) => report.pass(instance),
        }
    }
    report.note(format!(
        "{} formulas; {} classes in {}, {} in {}, {} joint; {} instances",
        items1.len(),
        p1.len(),
        l.name,
        p2.len(),
        l2.name,
        joint_reps.len(),
        instances
    ));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseMode {
    PerConnective,
    FullFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DenseVerdict {
    Dense,
    NotDenseUpToDepth(usize),
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct DenseResult {
    pub verdict: DenseVerdict,
    pub mode: DenseMode,
    /// Target formula and a source formula whose image is equivalent to it.
    pub witnesses: Vec<(Formula, Formula)>,
    pub report: Report,
}

/// The bound at which congruentiality is tested before relying on it.
pub fn congruence_precheck(l: &Logic) -> Bounds {
    if l.models_exact() {
        Bounds::new(2, 2, 0)
    } else {
        Bounds::new(1, 2, 0)
    }
}

fn is_congruential(l: &Logic) -> Result<bool, ConsequenceError> {
    Ok(check_congruential(l, congruence_precheck(l))?.passed())
}

/// Searches source formulas up to `search_depth` whose images are
/// equivalent to each target connective (congruential `l2`) or to each
/// target formula up to the same depth, capped at 3 (otherwise).
pub fn check_dense(
    t: &FlexMorphism,
    l: &Logic,
    l2: &Logic,
    search_depth: usize,
) -> Result<DenseResult, ConsequenceError> {
    same_sig(&l.sig, t.source())?;
    same_sig(&l2.sig, t.target())?;
    let mut report = Report::new("dense");
    let mode = if is_congruential(l2)? {
        DenseMode::PerConnective
    } else {
        report.note(format!(
            "{} failed the congruence pre-check; quantifying over formulas",
            l2.name
        ));
        DenseMode::FullFormula
    };
    let groups: Vec<(usize, Vec<Formula>)> = match mode {
        DenseMode::PerConnective => l2
            .sig
            .connectives()
            .iter()
            .map(|c| (c.arity, vec![generic(&l2.sig, c.name.as_str())]))
            .collect(),
        DenseMode::FullFormula => {
            let n = l2.sig.max_arity().max(1);
            vec![(n, formulas_up_to(&l2.sig, n, search_depth.min(3)))]
        }
    };
    let mut witnesses = Vec::new();
    let mut missing = false;
    let mut unknown = false;
    for (n, targets) in groups {
        let dec = Decider::new(l2, n)?;
        let sources = formulas_up_to(&l.sig, n, search_depth);
        let images = sources
            .iter()
            .map(|f| Ok(dec.item(t.lift(f)?)?))
            .collect::<Result<Vec<_>, ConsequenceError>>()?;
        let mut by_bits: HashMap<_, Vec<usize>> = HashMap::new();
        for (i, im) in images.iter().enumerate() {
            by_bits.entry(im.bits.clone()).or_default().push(i);
        }
        for target in targets {
            let goal = dec.item(target.clone())?;
            let mut found = None;
            let mut undecided = false;
            for &i in by_bits.get(&goal.bits).map(Vec::as_slice).unwrap_or(&[]) {
                match dec.equivalent(&images[i], &goal)? {
                    Verdict::Yes => {
                        found = Some(i);
                        break;
                    }
                    Verdict::Unknown => undecided = true,
                    Verdict::No => {}
                }
            }
            let instance = format!("{target}");
            match found {
                Some(i) => {
                    report.push(
                        instance,
                        Outcome::Pass,
                        Some(format!("{} |-> {}", sources[i], images[i].formula)),
                    );
                    witnesses.push((target, sources[i].clone()));
                }
                None if undecided => {
                    unknown = true;
                    report.inconclusive(instance, "oracle undecided on a candidate");
                }
                None => {
                    missing = true;
                    report.fail(
                        instance,
                        format!("no equivalent image up to depth {search_depth}"),
                    );
                }
            }
        }
    }
    let verdict = if missing {
        DenseVerdict::NotDenseUpToDepth(search_depth)
    } else if unknown {
        DenseVerdict::Inconclusive
    } else {
        DenseVerdict::Dense
    };
    Ok(DenseResult {
        verdict,
        mode,
        witnesses,
        report,
    })
}

/// Above this many argument tuples per connective, only contexts built
/// from class representatives are tried.
const FULL_TUPLE_LIMIT: usize = 250_000;

/// `φ_i ⊣⊢ ψ_i ⇒ c(φ⃗) ⊣⊢ c(ψ⃗)` over formulas within `bound` (nvars, depth).
pub fn check_congruential(l: &Logic, bound: Bounds) -> Result<Report, ConsequenceError> {
    let mut report = Report::new("congruential").with_bounds(bound);
    let dec = Decider::new(l, bound.nvars)?;
    let items = dec.items(formulas_up_to(&l.sig, bound.nvars, bound.depth))?;
    if dec.exact() {
        congruential_exact(&dec, &items, &mut report)?;
    } else if let Some(p) = classes_or_report(&dec, &items, &mut report)? {
        congruential_by_oracle(&dec, &items, &p, &mut report)?;
    }
    Ok(report)
}

/// Designation profiles are the classes and values determine the values of
/// any compound, so it suffices to try one formula per value vector.
fn congruential_exact(dec: &Decider, items: &[Item], report: &mut Report) -> Result<(), ConsequenceError> {
    let mut seen = HashMap::new();
    let mut distinct: Vec<&Item> = Vec::new();
    for it in items {
        seen.entry(&it.values).or_insert_with(|| {
            distinct.push(it);
        });
    }
    let mut class_ids = HashMap::new();
    let class: Vec<usize> = distinct
        .iter()
        .map(|it| {
            let n = class_ids.len();
            *class_ids.entry(&it.bits).or_insert(n)
        })
        .collect();
    for c in dec.logic.sig.connectives() {
        let schema = generic(&dec.logic.sig, c.name.as_str());
        let mut first: HashMap<Vec<usize>, (Vec<usize>, Item)> = HashMap::new();
        let mut witness = None;
        crate::algebra::for_each_tuple(distinct.len(), c.arity, |tuple| {
            if witness.is_some() {
                return;
            }
            let args: Vec<usize> = tuple.iter().map(|&a| a as usize).collect();
            let key: Vec<usize> = args.iter().map(|&a| class[a]).collect();
            let refs: Vec<&Item> = args.iter().map(|&a| distinct[a]).collect();
            let out = match dec.apply(&schema, &refs) {
                Ok(o) => o,
                Err(e) => {
                    witness = Some(Err(e));
                    return;
                }
            };
            match first.get(&key) {
                Some((_, prev)) if prev.bits != out.bits => {
                    witness = Some(Ok(format!(
                        "arguments pairwise equivalent but {} and {} are not",
                        prev.formula, out.formula
                    )));
                }
                Some(_) => {}
                None => {
                    first.insert(key, (args, out));
                }
            }
        });
        let instance = format!("{}/{}", c.name, c.arity);
        match witness {
            Some(Err(e)) => return Err(e),
            Some(Ok(w)) => report.fail(instance, w),
            None => report.pass(instance),
        }
    }
    report.note(format!(
        "{} formulas, {} value vectors, {} classes",
        items.len(),
        distinct.len(),
        class_ids.len()
    ));
    Ok(())
}

fn congruential_by_oracle(
    dec: &Decider,
    items: &[Item],
    p: &Partition,
    report: &mut Report,
) -> Result<(), ConsequenceError> {
    for c in dec.logic.sig.connectives() {
        let schema = generic(&dec.logic.sig, c.name.as_str());
        let full = items.len().checked_pow(c.arity as u32).is_some_and(|n| n <= FULL_TUPLE_LIMIT);
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        if full {
            crate::algebra::for_each_tuple(items.len(), c.arity, |t| {
                tuples.push(t.iter().map(|&a| a as usize).collect())
            });
        } else {
            // vary one position over all members, the rest fixed to representatives
            let reps = &p.reps;
            crate::algebra::for_each_tuple(reps.len(), c.arity, |t| {
                let base: Vec<usize> = t.iter().map(|&a| reps[a as usize]).collect();
                tuples.push(base.clone());
                for pos in 0..base.len() {
                    for (i, &cl) in p.class_of.iter().enumerate() {
                        if cl == p.class_of[base[pos]] && i != base[pos] {
                            let mut v = base.clone();
                            v[pos] = i;
                            tuples.push(v);
                        }
                    }
                }
            });
            report.note(format!(
                "{}: {} tuples exceed the limit; tried representative contexts",
                c.name,
                items.len().saturating_pow(c.arity as u32)
            ));
        }
        let mut first: HashMap<Vec<usize>, Item> = HashMap::new();
        let mut fail = None;
        let mut unknown = None;
        for args in tuples {
            let key: Vec<usize> = args.iter().map(|&a| p.class_of[a]).collect();
            let refs: Vec<&Item> = args.iter().map(|&a| &items[a]).collect();
            let out = dec.apply(&schema, &refs)?;
            match first.get(&key) {
                None => {
                    first.insert(key, out);
                }
                Some(prev) => match dec.equivalent(prev, &out)? {
                    Verdict::Yes => {}
                    Verdict::No => {
                        fail = Some(format!(
                            "arguments pairwise equivalent but {} and {} are not",
                            prev.formula, out.formula
                        ));
                        break;
                    }
                    Verdict::Unknown => {
                        unknown.get_or_insert_with(|| {
                            format!("undecided: {} -||- {}", prev.formula, out.formula)
                        });
                    }
                },
            }
        }
        let instance = format!("{}/{}", c.name, c.arity);
        match (fail, unknown) {
            (Some(w), _) => report.fail(instance, w),
            (None, Some(w)) => report.inconclusive(instance, w),
            _ => report.pass(instance),
        }
    }
    report.note(format!("{} formulas, {} classes", items.len(), p.len()));
    Ok(())
}

/// `f ∼ g`: images of every source connective are interderivable in `l2`.
/// Refuses when `l2` fails the congruence pre-check.
pub fn morphisms_equivalent(
    f: &FlexMorphism,
    g: &FlexMorphism,
    l2: &Logic,
) -> Result<bool, ConsequenceError> {
    same_sig(f.source(), g.source())?;
    same_sig(f.target(), g.target())?;
    same_sig(&l2.sig, f.target())?;
    if !is_congruential(l2)? {
        return Err(ConsequenceError::NotCongruential(l2.name.clone()));
    }
    for c in f.source().connectives() {
        let x = generic(f.source(), c.name.as_str());
        if !l2.interderivable(&f.lift(&x)?, &g.lift(&x)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Premise sets of size at most `bound.premises` drawn from formulas of
/// depth at most 1, against conclusions of depth at most 1.
pub fn canonical_sample(sig: &Signature, bound: Bounds) -> Vec<(Vec<Formula>, Formula)> {
    let pool = formulas_up_to(sig, bound.nvars, bound.depth.min(1));
    let mut out = Vec::new();
    for_each_subset(pool.len(), bound.premises, |gamma| {
        let g: Vec<Formula> = gamma.iter().map(|&i| pool[i].clone()).collect();
        for psi in &pool {
            out.push((g.clone(), psi.clone()));
        }
        true
    });
    out
}

#[derive(Default)]
struct Property {
    fail: Option<String>,
    unknown: Option<String>,
}

impl Property {
    /// Records that `antecedent` should force `consequent`.
    fn expect(&mut self, antecedent: Verdict, consequent: Verdict, what: impl FnOnce() -> String) {
        if self.fail.is_some() || antecedent == Verdict::No {
            return;
        }
        match (antecedent, consequent) {
            (Verdict::Yes, Verdict::No) => self.fail = Some(what()),
            (_, Verdict::Yes) => {}
            _ => {
                self.unknown.get_or_insert_with(what);
            }
        }
    }

    fn emit(self, report: &mut Report, name: &str) {
        match (self.fail, self.unknown) {
            (Some(w), _) => report.fail(name, w),
            (None, Some(w)) => report.inconclusive(name, w),
            _ => report.pass(name),
        }
    }
}

/// Reflexivity, monotonicity, cut and structurality on `sample`.
pub fn check_tarskian(l: &Logic, sample: &[(Vec<Formula>, Formula)]) -> Result<Report, ConsequenceError> {
    let mut report = Report::new("tarskian");
    let mut pool: Vec<Formula> = Vec::new();
    for (g, p) in sample {
        for f in g.iter().chain([p]) {
            if !pool.contains(f) {
                pool.push(f.clone());
            }
        }
    }
    let nvars = pool.iter().map(|f| f.var_bound()).max().unwrap_or(0);
    let substitutions: Vec<Substitution> = {
        let mut subs = Vec::new();
        if nvars >= 2 {
            subs.push(Substitution::from([(0, Formula::Var(1)), (1, Formula::Var(0))]));
        }
        for f in pool.iter().take(8) {
            subs.push(Substitution::from([(0, f.clone())]));
        }
        subs
    };
    let text = |g: &[Formula], p: &Formula| {
        let refs: Vec<&Formula> = g.iter().collect();
        format!("{} |- {}", set_text(&refs), p)
    };

    let mut refl = Property::default();
    let mut mono = Property::default();
    let mut cut = Property::default();
    let mut structural = Property::default();
    for (gamma, psi) in sample {
        let base = l.entails(gamma, psi)?;

        let mut with_psi = gamma.clone();
        if !with_psi.contains(psi) {
            with_psi.push(psi.clone());
        }
        refl.expect(Verdict::Yes, l.entails(&with_psi, psi)?, || text(&with_psi, psi));

        if base != Verdict::No {
            for extra in &pool {
                let mut bigger = gamma.clone();
                bigger.push(extra.clone());
                mono.expect(base, l.entails(&bigger, psi)?, || text(&bigger, psi));
            }
            for sigma in &substitutions {
                let g: Vec<Formula> = gamma.iter().map(|f| f.substitute(sigma)).collect();
                let p = psi.substitute(sigma);
                structural.expect(base, l.entails(&g, &p)?, || text(&g, &p));
            }
            // Γ ⊢ ψ and Γ, ψ ⊢ χ give Γ ⊢ χ
            for chi in &pool {
                let via = l.entails(&with_psi, chi)?;
                if via == Verdict::No {
                    continue;
                }
                let both = if base == Verdict::Yes { via } else { Verdict::Unknown };
                cut.expect(both, l.entails(gamma, chi)?, || {
                    format!("{} and {} but not {}", text(gamma, psi), text(&with_psi, chi), text(gamma, chi))
                });
            }
        }
    }
    refl.emit(&mut report, "reflexivity");
    mono.emit(&mut report, "monotonicity");
    cut.emit(&mut report, "cut");
    structural.emit(&mut report, "structurality");
    report.note(format!("{} sample instances", sample.len()));
    Ok(report)
}
