//! Reduct functors and what they preserve: quasivariety restriction, the
//! natural epimorphism between reflections, fullness along dense morphisms,
//! recovering a translation from its reduct functor, the quotient-logic
//! construction, the Glivenko reflection of Heyting onto Boolean algebras,
//! and stable Morita witnesses checked on finite catalogs.

use std::collections::HashSet;

use thiserror::Error;

use crate::algebra::{
    congruence_generated, enumerate_homs, in_quasivariety, is_hom, is_isomorphic, is_surjective,
    quotient_algebra, reduct, reflect, AlgebraError, Elem, FiniteAlgebra, Hom, QuasivarietySpec,
    Structure, TermAlgebra,
};
use crate::algebraization::{check_lindenbaum, AlgebraizableLogic, AlgebraizationError, AlgebraizingPair};
use crate::consequence::classes::Decider;
use crate::consequence::{
    check_conservative, check_dense, congruence_precheck, check_congruential, morphisms_equivalent,
    ConsequenceError, DenseVerdict, Logic,
};
use crate::report::{Bounds, Outcome, Report};
use crate::syntax::{compose_flex, formulas_up_to, FlexMorphism, Formula, Signature, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Consequence(#[from] ConsequenceError),
    #[error(transparent)]
    Algebraization(#[from] AlgebraizationError),
    #[error("reflection kernels do not refine: {0}")]
    Refinement(String),
    #[error("not a Heyting algebra: {0}")]
    NotHeyting(String),
    #[error("variable preservation fails: {0}")]
    VariablePreservation(String),
    #[error("induced morphism is not unique: {0}")]
    NotUnique(String),
    #[error("catalog algebra #{index} is not in {qv}: {witness}")]
    CatalogMembership {
        index: usize,
        qv: String,
        witness: String,
    },
    #[error("no source formula up to depth {depth} translates to {target}")]
    NoPreimage { target: String, depth: usize },
}

/// `t*`: Σ′-structures to Σ-structures, same carrier, identity on maps.
#[derive(Debug, Clone)]
pub struct ReductFunctor {
    pub t: FlexMorphism,
}

/// A structure seen through a reduct functor.
pub struct Reduced<'a, S> {
    t: &'a FlexMorphism,
    inner: &'a S,
}

impl<S: Structure> Structure for Reduced<'_, S> {
    type Elem = S::Elem;

    fn signature(&self) -> &Signature {
        self.t.source()
    }

    fn apply(&self, conn: usize, args: &[S::Elem]) -> S::Elem {
        self.inner
            .interpret(&self.t.schemas()[conn], &|i| args.get(i as usize).cloned())
            .expect("schema is over the target with variables below its arity")
    }
}

impl ReductFunctor {
    pub fn new(t: &FlexMorphism) -> Self {
        ReductFunctor { t: t.clone() }
    }

    pub fn on_algebra(&self, m: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
        reduct(&self.t, m)
    }

    /// Homomorphisms keep their underlying maps.
    pub fn on_hom(&self, h: &Hom) -> Hom {
        h.clone()
    }

    pub fn on_structure<'a, S: Structure>(&'a self, inner: &'a S) -> Reduced<'a, S> {
        Reduced { t: &self.t, inner }
    }

    /// `(g ∘ f)* = f* ∘ g*`.
    pub fn then(&self, later: &ReductFunctor) -> Result<ReductFunctor, SyntaxError> {
        Ok(ReductFunctor::new(&compose_flex(&later.t, &self.t)?))
    }
}

fn member_or_err(m: &FiniteAlgebra, q: &QuasivarietySpec, index: usize) -> Result<(), RepresentationError> {
    let mb = in_quasivariety(m, q)?;
    if mb.member {
        Ok(())
    } else {
        Err(RepresentationError::CatalogMembership {
            index,
            qv: q.name.clone(),
            witness: mb.witness.map(|w| w.to_string()).unwrap_or_default(),
        })
    }
}

/// Every reduct of a `qv_tgt` catalog member lies in `qv_src`.
pub fn check_qv_restriction(
    t: &FlexMorphism,
    qv_src: &QuasivarietySpec,
    qv_tgt: &QuasivarietySpec,
    catalog_tgt: &[FiniteAlgebra],
) -> Result<Report, RepresentationError> {
    let mut report = Report::new("qv-restriction");
    for (i, m) in catalog_tgt.iter().enumerate() {
        member_or_err(m, qv_tgt, i)?;
        let r = reduct(t, m)?;
        let mb = in_quasivariety(&r, qv_src)?;
        report.push(
            format!("catalog #{i} (size {})", m.size()),
            mb.member.into(),
            mb.witness.map(|w| format!("reduct along {}: {w}", t.name())),
        );
    }
    Ok(report)
}

/// The component `L(h*M′) → h*(L′M′)` at one algebra.
#[derive(Debug, Clone)]
pub struct NaturalEpi {
    /// `L(h*M′)`.
    pub source: FiniteAlgebra,
    /// `h*(L′M′)`.
    pub target: FiniteAlgebra,
    pub map: Hom,
    /// `M′ → source` and `M′ → target`.
    pub proj_source: Vec<Elem>,
    pub proj_target: Vec<Elem>,
    pub report: Report,
}

pub fn natural_epi_component(
    t: &FlexMorphism,
    qv: &QuasivarietySpec,
    qv2: &QuasivarietySpec,
    m2: &FiniteAlgebra,
) -> Result<NaturalEpi, RepresentationError> {
    let left = reflect(&reduct(t, m2)?, qv)?;
    let right = reflect(m2, qv2)?;
    if !left.congruence.refines(&right.congruence) {
        return Err(RepresentationError::Refinement(format!(
            "{} on the reduct is not inside {} on the algebra",
            left.congruence, right.congruence
        )));
    }
    let target = reduct(t, &right.algebra)?;
    let mut map = vec![0; left.algebra.size()];
    for (x, &a) in left.projection.iter().enumerate() {
        map[a as usize] = right.projection[x];
    }
    let mut report = Report::new("natural-epi");
    let inst = format!("component at size {}", m2.size());
    report.push(
        format!("{inst}: homomorphism"),
        is_hom(&left.algebra, &target, &map).into(),
        None,
    );
    report.push(
        format!("{inst}: surjective"),
        is_surjective(&map, target.size()).into(),
        None,
    );
    Ok(NaturalEpi {
        source: left.algebra,
        target,
        map,
        proj_source: left.projection,
        proj_target: right.projection,
        report,
    })
}

/// The map induced on quotients by `g`, if `g` respects the projections.
fn induced(g: &[Elem], from: &[Elem], to: &[Elem], size: usize) -> Option<Vec<Elem>> {
    let mut out: Vec<Option<Elem>> = vec![None; size];
    for (x, &gx) in g.iter().enumerate() {
        let slot = &mut out[from[x] as usize];
        let img = to[gx as usize];
        match slot {
            Some(y) if *y != img => return None,
            _ => *slot = Some(img),
        }
    }
    out.into_iter().collect()
}

/// Naturality of `h̃` along a `Σ′`-homomorphism `g: M′ → N′`:
/// `h̃_N ∘ L(h*g) = h*(L′g) ∘ h̃_M`, computed on tables.
pub fn check_naturality(
    t: &FlexMorphism,
    qv: &QuasivarietySpec,
    qv2: &QuasivarietySpec,
    m2: &FiniteAlgebra,
    n2: &FiniteAlgebra,
    g: &Hom,
) -> Result<Report, RepresentationError> {
    let mut report = Report::new("naturality");
    if !is_hom(m2, n2, g) {
        report.fail("supplied map", "not a homomorphism");
        return Ok(report);
    }
    let em = natural_epi_component(t, qv, qv2, m2)?;
    let en = natural_epi_component(t, qv, qv2, n2)?;
    let lg = induced(g, &em.proj_source, &en.proj_source, em.source.size());
    let rg = induced(g, &em.proj_target, &en.proj_target, em.target.size());
    let (Some(lg), Some(rg)) = (lg, rg) else {
        report.fail("induced maps", "g does not respect the reflection kernels");
        return Ok(report);
    };
    report.push("L(h*g) is a homomorphism", is_hom(&em.source, &en.source, &lg).into(), None);
    report.push("h*(L'g) is a homomorphism", is_hom(&em.target, &en.target, &rg).into(), None);
    let bad = (0..em.source.size()).find(|&a| en.map[lg[a] as usize] != rg[em.map[a] as usize]);
    report.push(
        "square commutes",
        bad.is_none().into(),
        bad.map(|a| format!("differs at class {a}")),
    );
    Ok(report)
}

/// Faithfulness, fullness and injectivity on objects of `t*` on a catalog
/// of target-signature algebras.
pub fn check_full_faithful(t: &FlexMorphism, catalog: &[FiniteAlgebra]) -> Result<Report, RepresentationError> {
    let mut report = Report::new("full-faithful");
    let reducts = catalog.iter().map(|m| reduct(t, m)).collect::<Result<Vec<_>, _>>()?;
    let same_carriers = catalog.iter().zip(&reducts).all(|(m, r)| m.size() == r.size());
    report.push("faithful: carriers and maps unchanged", same_carriers.into(), None);
    let mut full = None;
    'pairs: for (i, a) in catalog.iter().enumerate() {
        for (j, b) in catalog.iter().enumerate() {
            for h in enumerate_homs(&reducts[i], &reducts[j])? {
                if !is_hom(a, b, &h) {
                    full = Some(format!("catalog #{i} -> #{j}: {h:?} preserves the reducts only"));
                    break 'pairs;
                }
            }
        }
    }
    let n = catalog.len();
    match full {
        Some(w) => report.fail(format!("full on {n} algebras"), w),
        None => report.pass(format!("full on {n} algebras")),
    }
    let mut clash = None;
    for i in 0..n {
        for j in i + 1..n {
            if catalog[i] != catalog[j] && reducts[i] == reducts[j] {
                clash.get_or_insert(format!("catalog #{i} and #{j} share a reduct"));
            }
        }
    }
    report.push("injective on objects", clash.is_none().into(), clash);
    Ok(report)
}

/// `m_H` for `H = t*`: each `c(x0..)` evaluated in `H` applied to the term
/// algebra. Checks that the result uses only the variables it was given,
/// and that no enumerated formula gains variables under the lift.
pub fn extract_translation(h: &ReductFunctor, nmax: usize) -> Result<FlexMorphism, RepresentationError> {
    let terms = TermAlgebra::new(h.t.target());
    let reduced = h.on_structure(&terms);
    let mut map = Vec::new();
    for (ci, c) in h.t.source().connectives().iter().enumerate() {
        if c.arity > nmax {
            return Err(RepresentationError::VariablePreservation(format!(
                "{} has arity {} above {nmax}",
                c.name, c.arity
            )));
        }
        let vars: Vec<Formula> = (0..c.arity as u32).map(Formula::Var).collect();
        let image = reduced.apply(ci, &vars);
        if image.var_bound() as usize > c.arity {
            return Err(RepresentationError::VariablePreservation(format!("{}: {image}", c.name)));
        }
        map.push((c.name.to_string(), image));
    }
    for psi in formulas_up_to(h.t.source(), 2, 2) {
        let lifted = h.t.lift(&psi)?;
        if !lifted.vars().is_subset(&psi.vars()) {
            return Err(RepresentationError::VariablePreservation(format!("{psi} lifts to {lifted}")));
        }
    }
    Ok(FlexMorphism::new(
        &format!("m({})", h.t.name()),
        h.t.source(),
        h.t.target(),
        map,
    )?)
}

/// `m_{h*}` against `h`: syntactically for strict `h`, up to `⊣⊢` in `l2`
/// otherwise.
pub fn roundtrip_check(h: &FlexMorphism, l2: &Logic) -> Result<Report, RepresentationError> {
    let mut report = Report::new("roundtrip");
    let nmax = h.source().max_arity();
    let m = extract_translation(&ReductFunctor::new(h), nmax)?;
    let equal = m.schemas() == h.schemas();
    if h.is_strict() {
        report.push(
            format!("{}: strict, syntactic equality", h.name()),
            equal.into(),
            (!equal).then(|| format!("extracted {m:?}")),
        );
    } else {
        if equal {
            report.note(format!("{}: extracted schemas equal on the nose", h.name()));
        }
        let same = morphisms_equivalent(&m, h, l2)?;
        report.push(format!("{}: same class in {}", h.name(), l2.name), same.into(), None);
    }
    Ok(report)
}

/// Two morphisms in one `⊣⊢` class have equal reducts on every algebra of
/// a catalog of models of `l2`.
pub fn compare_classes(
    h: &FlexMorphism,
    h2: &FlexMorphism,
    l2: &Logic,
    catalog: &[FiniteAlgebra],
) -> Result<Report, RepresentationError> {
    let mut report = Report::new("class-comparison");
    let same = morphisms_equivalent(h, h2, l2)?;
    report.push(format!("{} ~ {}", h.name(), h2.name()), same.into(), None);
    for (i, m) in catalog.iter().enumerate() {
        let eq = reduct(h, m)? == reduct(h2, m)?;
        report.push(format!("reducts on catalog #{i}"), eq.into(), None);
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct QuotientLogic {
    pub alpha: Signature,
    /// Strict, onto `alpha`.
    pub f: FlexMorphism,
    /// `alpha` into the algebraizable logic's signature.
    pub h: FlexMorphism,
    /// The `h`-pullback, with a pair pulled back along `h`.
    pub logic: AlgebraizableLogic,
    pub report: Report,
}

/// First formula over `h.source()` whose image is interderivable with `target`.
fn preimage(
    h: &FlexMorphism,
    a2: &Logic,
    dec: &Decider,
    target: &Formula,
    nvars: usize,
    depth: usize,
) -> Result<Formula, RepresentationError> {
    let goal = dec.item(target.clone())?;
    for f in formulas_up_to(h.source(), nvars, depth) {
        let it = dec.item(h.lift(&f)?)?;
        if it.bits == goal.bits && a2.interderivable(&it.formula, target)? {
            return Ok(f);
        }
    }
    Err(RepresentationError::NoPreimage {
        target: target.to_string(),
        depth,
    })
}

const PREIMAGE_DEPTH: usize = 3;

/// Collapses source connectives whose images `f̂′(ť(c(x⃗)))` coincide
/// syntactically; `f` is the collapse, `h` sends each class to the common
/// image and `a` is the `h`-pullback of `a2`.
pub fn construct_quotient_logic(
    t: &FlexMorphism,
    l: &Logic,
    l2: &Logic,
    fprime: &FlexMorphism,
    a2: &AlgebraizableLogic,
    bound: Bounds,
) -> Result<QuotientLogic, RepresentationError> {
    let mut report = Report::new("quotient-logic").with_bounds(bound);
    report.absorb(rename(check_conservative(t, l, l2, bound)?, "pre: t conservative"));
    let fd = check_dense(fprime, l2, &a2.logic, bound.depth)?;
    report.push_as(
        "pre: f' dense",
        fprime.name(),
        (fd.verdict == DenseVerdict::Dense).into(),
        None,
    );

    let g = compose_flex(fprime, t)?;
    let source = t.source();
    let mut classes: Vec<(String, usize, Formula)> = Vec::new();
    let mut f_map = Vec::new();
    for (c, image) in g.entries() {
        let arity = source.arity(c.as_str()).expect("own connective");
        let rep = match classes.iter().find(|(_, n, im)| *n == arity && im == image) {
            Some((rep, ..)) => rep.clone(),
            None => {
                classes.push((c.to_string(), arity, image.clone()));
                c.to_string()
            }
        };
        f_map.push((c.to_string(), rep));
    }
    let alpha = Signature::new(
        &format!("{}/~", source.name()),
        classes.iter().map(|(n, a, _)| (n.as_str(), *a)),
    )?;
    let f = FlexMorphism::strict("f", source, &alpha, f_map)?;
    let h = FlexMorphism::new(
        "h",
        &alpha,
        g.target(),
        classes.iter().map(|(n, _, im)| (n.as_str(), im.clone())),
    )?;
    for (c, image) in g.entries() {
        let via = h.lift(f.schema(c.as_str()).expect("total"))?;
        if &via != image {
            return Err(RepresentationError::NotUnique(format!("{c}: {via} vs {image}")));
        }
    }
    report.note(format!(
        "{} connective(s) collapse to {}",
        source.len(),
        alpha.len()
    ));

    let a = Logic::pullback(&format!("a({})", a2.logic.name), &h, &a2.logic)?;
    let dec = Decider::new(&a2.logic, 2)?;
    let back = |fs: &[Formula], n| {
        fs.iter()
            .map(|x| preimage(&h, &a2.logic, &dec, x, n, PREIMAGE_DEPTH))
            .collect::<Result<Vec<_>, _>>()
    };
    let pair = AlgebraizingPair::new(
        back(&a2.pair.delta, 1)?,
        back(&a2.pair.epsilon, 1)?,
        back(&a2.pair.big_delta, 2)?,
    )?;
    let gens = a2
        .qv
        .generators
        .as_ref()
        .ok_or_else(|| AlgebraizationError::NoGenerators(a2.qv.name.clone()))?
        .iter()
        .map(|m| reduct(&h, m))
        .collect::<Result<Vec<_>, _>>()?;
    let qv = QuasivarietySpec::from_generators(&format!("h*{}", a2.qv.name), &alpha, gens)?;
    let logic = AlgebraizableLogic::new(a, pair, qv)?;

    report.absorb(rename(
        check_lindenbaum(&logic, Bounds::new(bound.nvars, bound.depth, 0))?,
        "a: lindenbaum",
    ));
    let hd = check_dense(&h, &logic.logic, &a2.logic, bound.depth)?;
    report.push_as("h: dense", "h", (hd.verdict == DenseVerdict::Dense).into(), None);
    report.absorb(rename(
        check_conservative(&h, &logic.logic, &a2.logic, bound)?,
        "h: conservative",
    ));
    for n in 0..=source.max_arity() {
        let hit: HashSet<&str> = source
            .of_arity(n)
            .map(|c| f.schema(c.name.as_str()).and_then(Formula::conn).expect("strict").as_str())
            .collect();
        let ok = alpha.of_arity(n).all(|c| hit.contains(c.name.as_str()));
        report.push_as("f: surjective", format!("arity {n}"), ok.into(), None);
    }
    for d in 0..=bound.depth {
        let images: HashSet<Formula> = formulas_up_to(source, bound.nvars, d)
            .iter()
            .map(|x| f.lift(x))
            .collect::<Result<_, _>>()?;
        let all = formulas_up_to(&alpha, bound.nvars, d);
        let ok = all.iter().all(|x| images.contains(x));
        report.push_as("f: surjective", format!("formulas of depth <= {d}"), ok.into(), None);
    }
    Ok(QuotientLogic {
        alpha,
        f,
        h,
        logic,
        report,
    })
}

fn rename(r: Report, check: &str) -> Report {
    let mut out = Report::new(check);
    for e in r.verdicts {
        out.push(e.instance, e.verdict, e.witness);
    }
    out
}

#[derive(Debug, Clone)]
pub struct GlivenkoReflection {
    pub algebra: FiniteAlgebra,
    pub projection: Vec<Elem>,
    /// The filter generated by `{a ↔ ¬¬a}`, sorted.
    pub filter: Vec<Elem>,
    /// `{d : ¬¬d = 1}`, sorted.
    pub dense: Vec<Elem>,
    pub report: Report,
}

struct HeytingOps<'a> {
    h: &'a FiniteAlgebra,
    top: Elem,
}

impl<'a> HeytingOps<'a> {
    fn new(h: &'a FiniteAlgebra) -> Result<Self, RepresentationError> {
        for c in ["and", "imp"] {
            if h.table(c).is_none() {
                return Err(RepresentationError::NotHeyting(format!("no `{c}`")));
            }
        }
        if h.table("neg").is_none() && h.table("bot").is_none() {
            return Err(RepresentationError::NotHeyting("no `neg` or `bot`".into()));
        }
        let top = h.op_named("imp", &[0, 0]).expect("imp");
        Ok(HeytingOps { h, top })
    }

    fn op(&self, c: &str, args: &[Elem]) -> Elem {
        self.h.op_named(c, args).expect("checked")
    }

    fn neg(&self, a: Elem) -> Elem {
        match self.h.op_named("neg", &[a]) {
            Some(x) => x,
            None => self.op("imp", &[a, self.op("bot", &[])]),
        }
    }

    fn iff(&self, a: Elem, b: Elem) -> Elem {
        self.op("and", &[self.op("imp", &[a, b]), self.op("imp", &[b, a])])
    }

    fn le(&self, a: Elem, b: Elem) -> bool {
        self.op("imp", &[a, b]) == self.top
    }
}

/// `H ↦ H / F_H` with `F_H` the filter generated by `{a ↔ ¬¬a : a ∈ H}`.
/// The report checks `F_H` against the dense elements, that the quotient
/// is Boolean, and that `a θ b` exactly when `a ↔ b ∈ F_H`.
pub fn glivenko_reflect(h: &FiniteAlgebra) -> Result<GlivenkoReflection, RepresentationError> {
    let laws = crate::algebra::catalog::heyting_laws(h.sig())?;
    let mb = in_quasivariety(h, &laws)?;
    if !mb.member {
        return Err(RepresentationError::NotHeyting(
            mb.witness.map(|w| w.to_string()).unwrap_or_default(),
        ));
    }
    let ops = HeytingOps::new(h)?;
    let meet = h
        .elements()
        .map(|a| ops.iff(a, ops.neg(ops.neg(a))))
        .fold(ops.top, |acc, x| ops.op("and", &[acc, x]));
    let filter: Vec<Elem> = h.elements().filter(|&x| ops.le(meet, x)).collect();
    let dense: Vec<Elem> = h.elements().filter(|&d| ops.neg(ops.neg(d)) == ops.top).collect();
    let pairs: Vec<(Elem, Elem)> = filter.iter().map(|&u| (u, ops.top)).collect();
    let theta = congruence_generated(h, &pairs);
    let (algebra, projection) = quotient_algebra(h, &theta)?;

    let mut report = Report::new("glivenko-reflect");
    let inst = format!("H of size {}", h.size());
    report.push(
        format!("{inst}: F_H is the dense set"),
        (filter == dense).into(),
        (filter != dense).then(|| format!("filter {filter:?}, dense {dense:?}")),
    );
    let ba = crate::algebra::catalog::heyting_boolean_laws(h.sig())?;
    let bm = in_quasivariety(&algebra, &ba)?;
    report.push(format!("{inst}: quotient is Boolean"), bm.member.into(), bm.witness.map(|w| w.to_string()));
    report.push(
        format!("{inst}: projection is onto"),
        is_surjective(&projection, algebra.size()).into(),
        None,
    );
    let kernel_ok = h.elements().all(|a| {
        h.elements()
            .all(|b| theta.related(a, b) == filter.contains(&ops.iff(a, b)))
    });
    report.push(format!("{inst}: kernel is determined by F_H"), kernel_ok.into(), None);
    Ok(GlivenkoReflection {
        algebra,
        projection,
        filter,
        dense,
        report,
    })
}

/// Every Heyting homomorphism from `H` into a Boolean algebra factors
/// uniquely through `H → L(H)`, for all pairs drawn from the catalogs.
pub fn check_glivenko_adjunction(
    h_catalog: &[FiniteAlgebra],
    b_catalog: &[FiniteAlgebra],
) -> Result<Report, RepresentationError> {
    let mut report = Report::new("glivenko-adjunction");
    for (j, b) in b_catalog.iter().enumerate() {
        let ha = crate::algebra::catalog::heyting_laws(b.sig())?;
        let ba = crate::algebra::catalog::heyting_boolean_laws(b.sig())?;
        let is_ha = in_quasivariety(b, &ha)?.member;
        let is_ba = in_quasivariety(b, &ba)?.member;
        report.push(
            format!("B #{j}: Boolean, and Heyting through the inclusion"),
            (is_ha && is_ba).into(),
            None,
        );
    }
    for (i, h) in h_catalog.iter().enumerate() {
        let g = glivenko_reflect(h)?;
        report.absorb(g.report.clone());
        for (j, b) in b_catalog.iter().enumerate() {
            let homs = enumerate_homs(h, b)?;
            let bar = enumerate_homs(&g.algebra, b)?;
            let mut bad = None;
            for f in &homs {
                let n = bar
                    .iter()
                    .filter(|gb| (0..h.size()).all(|x| gb[g.projection[x] as usize] == f[x]))
                    .count();
                if n != 1 {
                    bad.get_or_insert(format!("{f:?} factors in {n} ways"));
                }
            }
            for gb in &bar {
                let comp: Hom = g.projection.iter().map(|&x| gb[x as usize]).collect();
                if !homs.contains(&comp) {
                    bad.get_or_insert(format!("{gb:?} composed with q is not a hom"));
                }
            }
            report.push(
                format!("H #{i} (size {}) -> B #{j} (size {}): {} hom(s)", h.size(), b.size(), homs.len()),
                bad.is_none().into(),
                bad,
            );
        }
    }
    Ok(report)
}

/// Isomorphism-class counts by cardinality in each catalog. Informational
/// only: differing counts do not show that no equivalence exists.
pub fn glivenko_distinguisher(h_catalog: &[FiniteAlgebra], b_catalog: &[FiniteAlgebra]) -> Report {
    let mut report = Report::new("distinguisher (heuristic)");
    for (label, cat) in [("Heyting", h_catalog), ("Boolean", b_catalog)] {
        let mut reps: Vec<&FiniteAlgebra> = Vec::new();
        for a in cat {
            if !reps.iter().any(|r| is_isomorphic(r, a)) {
                reps.push(a);
            }
        }
        let mut sizes: Vec<usize> = reps.iter().map(|a| a.size()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        let counts: Vec<String> = sizes
            .iter()
            .map(|&s| format!("{s}: {}", reps.iter().filter(|a| a.size() == s).count()))
            .collect();
        report.note(format!("{label} iso classes by size: {}", counts.join(", ")));
    }
    report.note("heuristic: a count mismatch is not a proof of non-equivalence");
    report
}

/// `t: Σ → Σ′`, `t′: Σ′ → Σ`, with catalogs standing in for each side's
/// quasivariety.
#[derive(Debug, Clone)]
pub struct MoritaWitness {
    pub t: FlexMorphism,
    pub t_prime: FlexMorphism,
    pub qv: QuasivarietySpec,
    pub qv_prime: QuasivarietySpec,
    pub catalog: Vec<FiniteAlgebra>,
    pub catalog_prime: Vec<FiniteAlgebra>,
}

/// `E = t*` on the primed catalog and `E′ = t′*` on the other: both
/// composites must return every table exactly, and each functor must land
/// in the other side's quasivariety and catalog.
pub fn check_stable_morita(w: &MoritaWitness) -> Result<Report, RepresentationError> {
    for (i, m) in w.catalog.iter().enumerate() {
        member_or_err(m, &w.qv, i)?;
    }
    for (i, m) in w.catalog_prime.iter().enumerate() {
        member_or_err(m, &w.qv_prime, i)?;
    }
    let mut report = Report::new("stable-morita");
    let sides = [
        ("E'E", &w.catalog_prime, &w.t, &w.t_prime, &w.qv, &w.catalog),
        ("EE'", &w.catalog, &w.t_prime, &w.t, &w.qv_prime, &w.catalog_prime),
    ];
    for (label, cat, first, second, lands_qv, lands_cat) in sides {
        for (i, m) in cat.iter().enumerate() {
            let once = reduct(first, m)?;
            let twice = reduct(second, &once)?;
            let inst = format!("{label} on #{i} (size {})", m.size());
            let diff = m
                .named_tables()
                .into_iter()
                .zip(twice.named_tables())
                .find(|((_, x), (_, y))| x != y)
                .map(|((c, x), (_, y))| format!("{c}: {x:?} became {y:?}"));
            report.push_as("identity", inst.clone(), diff.is_none().into(), diff);
            let mb = in_quasivariety(&once, lands_qv)?;
            let in_cat = lands_cat.iter().any(|c| is_isomorphic(c, &once));
            let outcome = Outcome::from(mb.member).combine(in_cat.into());
            let witness = match (mb.witness, in_cat) {
                (Some(x), _) => Some(x.to_string()),
                (None, false) => Some("image is not in the catalog".into()),
                _ => None,
            };
            report.push_as("square", inst, outcome, witness);
        }
    }
    Ok(report)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Every bijection between the connective sets, in both directions, must
/// fail to be a conservative strict morphism. Candidates breaking arity are
/// rejected before any logic is consulted.
pub fn check_strict_isomorphisms(l: &Logic, l2: &Logic, bound: Bounds) -> Result<Report, RepresentationError> {
    let mut report = Report::new("strict-isomorphisms").with_bounds(bound);
    let (s, s2) = (&l.sig, &l2.sig);
    if s.len() != s2.len() {
        report.note("connective counts differ: no bijection");
        return Ok(report);
    }
    let mut candidates = 0;
    for (from, to) in [(l, l2), (l2, l)] {
        let (fc, tc) = (from.sig.connectives(), to.sig.connectives());
        for p in permutations(fc.len()) {
            candidates += 1;
            let pairs: Vec<(&str, &str)> = fc
                .iter()
                .zip(&p)
                .map(|(c, &j)| (c.name.as_str(), tc[j].name.as_str()))
                .collect();
            let text: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            let inst = format!("{} to {}: {}", from.name, to.name, text.join(", "));
            let m = match FlexMorphism::strict("sigma", &from.sig, &to.sig, pairs) {
                Ok(m) => m,
                Err(e) => {
                    report.push(inst, Outcome::Pass, Some(format!("not a signature morphism: {e}")));
                    continue;
                }
            };
            let r = check_conservative(&m, from, to, bound)?;
            let outcome = match r.outcome() {
                Outcome::Fail => Outcome::Pass,
                Outcome::Pass => Outcome::Fail,
                Outcome::Inconclusive => Outcome::Inconclusive,
            };
            let witness = match r.first_failure() {
                Some(e) => format!("conservativity fails: {}", e.witness.clone().unwrap_or_default()),
                None => "conservative at this bound".into(),
            };
            report.push(inst, outcome, Some(witness));
        }
    }
    report.note(format!("{candidates} candidate(s)"));
    Ok(report)
}

/// Whether `l` passes the congruence pre-check.
pub fn is_congruential(l: &Logic) -> Result<bool, RepresentationError> {
    Ok(check_congruential(l, congruence_precheck(l))?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog::{self, Lattice};
    use crate::algebra::for_each_tuple;
    use crate::standard;

    fn pbas(sig: &Signature, max: u32) -> Vec<FiniteAlgebra> {
        (0..=max).map(|k| catalog::boolean_powerset(sig, k).unwrap()).collect()
    }

    #[test]
    fn reduct_functor_on_terms_matches_lift() {
        let t = standard::t_prime().compose(&standard::t()).unwrap();
        let m = extract_translation(&ReductFunctor::new(&t), 2).unwrap();
        assert_eq!(m.schema("imp").unwrap().to_string(), "imp(neg(neg(x0)),x1)");
        let id = FlexMorphism::identity(&standard::neg_or());
        assert_eq!(extract_translation(&ReductFunctor::new(&id), 2).unwrap().schemas(), id.schemas());
    }

    #[test]
    fn restriction_and_collapse() {
        let s = standard::neg_or();
        let ba = standard::boolean_algebras(&s).unwrap();
        let ba2 = standard::boolean_algebras(&standard::neg_imp()).unwrap();
        let cat = pbas(&s, 4);
        assert!(check_qv_restriction(&standard::t(), &ba2, &ba, &cat).unwrap().passed());
        let r = check_qv_restriction(&standard::collapse(), &ba, &ba, &cat).unwrap();
        assert_eq!(r.outcome(), Outcome::Fail);
        assert!(r.verdicts[0].verdict == Outcome::Pass, "the trivial algebra survives");
    }

    #[test]
    fn natural_epi_on_three_chain() {
        let big = standard::neg_or_and();
        let small = standard::neg_or();
        let inc = standard::inclusion(&small, &big).unwrap();
        let (qv, qv2) = (
            standard::boolean_algebras(&small).unwrap(),
            standard::boolean_algebras(&big).unwrap(),
        );
        let chain = catalog::heyting_chain(&big, 3).unwrap();
        let e = natural_epi_component(&inc, &qv, &qv2, &chain).unwrap();
        assert!(e.report.passed(), "{}", e.report);
        assert_eq!((e.source.size(), e.target.size()), (2, 2));
        let q = reflect(&chain, &qv2).unwrap();
        let r = check_naturality(&inc, &qv, &qv2, &chain, &q.algebra, &q.projection).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn full_for_dense_not_for_negation_fragment() {
        let s = standard::neg_or();
        let cat = pbas(&s, 2);
        let id = FlexMorphism::identity(&s);
        assert!(check_full_faithful(&id, &cat).unwrap().passed());
        let inc = standard::inclusion(&standard::neg_only(), &s).unwrap();
        let r = check_full_faithful(&inc, &cat).unwrap();
        assert_eq!(r.entries_for("full-faithful").filter(|e| e.verdict == Outcome::Fail).count(), 1);
    }

    #[test]
    fn round_trips() {
        let cpl = |s: &Signature| standard::cpl(s).unwrap();
        assert!(roundtrip_check(&standard::t(), &cpl(&standard::neg_or())).unwrap().passed());
        let inc = standard::inclusion(&standard::neg_or(), &standard::neg_or_and()).unwrap();
        assert!(roundtrip_check(&inc, &cpl(&standard::neg_or_and())).unwrap().passed());
        let t2 = FlexMorphism::parse(
            "t2",
            &standard::neg_imp(),
            &standard::neg_or(),
            [("neg", "neg(x0)"), ("imp", "neg(neg(or(neg(x0),x1)))")],
        )
        .unwrap();
        let r = compare_classes(&standard::t(), &t2, &cpl(&standard::neg_or()), &pbas(&standard::neg_or(), 3)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn quotient_logic_of_interdefinition() {
        let (s, s2) = (standard::neg_imp(), standard::neg_or());
        let a2 = AlgebraizableLogic::new(
            standard::cpl(&s2).unwrap(),
            AlgebraizingPair::parse(&s2, &["x0"], &["or(x0,neg(x0))"], &["or(neg(x0),x1)", "or(neg(x1),x0)"]).unwrap(),
            standard::boolean_algebras(&s2).unwrap(),
        )
        .unwrap();
        let q = construct_quotient_logic(
            &standard::t(),
            &standard::cpl(&s).unwrap(),
            &a2.logic,
            &FlexMorphism::identity(&s2),
            &a2,
            Bounds::new(2, 2, 1),
        )
        .unwrap();
        assert!(q.report.passed(), "{}", q.report);
        assert_eq!(q.alpha.len(), 2);
        assert_eq!(q.h.schema("imp").unwrap().to_string(), "or(neg(x0),x1)");
    }

    #[test]
    fn duplicated_negation_is_merged() {
        let s = Signature::new("dup", [("neg1", 1), ("neg2", 1), ("or", 2)]).unwrap();
        let s2 = standard::neg_or();
        let t = FlexMorphism::parse("t", &s, &s2, [("neg1", "neg(x0)"), ("neg2", "neg(x0)"), ("or", "or(x0,x1)")]).unwrap();
        let a2 = AlgebraizableLogic::new(
            standard::cpl(&s2).unwrap(),
            AlgebraizingPair::parse(&s2, &["x0"], &["or(x0,neg(x0))"], &["or(neg(x0),x1)", "or(neg(x1),x0)"]).unwrap(),
            standard::boolean_algebras(&s2).unwrap(),
        )
        .unwrap();
        let l = Logic::pullback("dup", &t, &a2.logic).unwrap();
        let q = construct_quotient_logic(&t, &l, &a2.logic, &FlexMorphism::identity(&s2), &a2, Bounds::new(1, 2, 1)).unwrap();
        assert_eq!(q.alpha.len(), 2);
        assert_eq!(q.f.schema("neg2").unwrap().to_string(), "neg1(x0)");
        assert!(q.report.passed(), "{}", q.report);
    }

    #[test]
    fn glivenko_on_small_heyting_algebras() {
        let s = standard::ipc_sig();
        let c3 = catalog::heyting_chain(&s, 3).unwrap();
        let g = glivenko_reflect(&c3).unwrap();
        assert!(g.report.passed(), "{}", g.report);
        assert_eq!(g.filter, vec![1, 2]);
        assert_eq!(g.algebra.size(), 2);
        let diamond = catalog::heyting_from_lattice(&s, &Lattice::chain(2).product(&Lattice::chain(2))).unwrap();
        let g = glivenko_reflect(&diamond).unwrap();
        assert_eq!(g.algebra.size(), 4);
        assert_eq!(g.filter.len(), 1);
        let two = catalog::boolean_powerset(&s, 1).unwrap();
        assert_eq!(enumerate_homs(&c3, &two).unwrap().len(), 1);
        let r = check_glivenko_adjunction(&[c3, diamond], &pbas(&s, 2)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn stable_morita_and_broken_witness() {
        let (s, s2) = (standard::neg_imp(), standard::neg_or());
        let w = MoritaWitness {
            t: standard::t(),
            t_prime: standard::t_prime(),
            qv: standard::boolean_algebras(&s).unwrap(),
            qv_prime: standard::boolean_algebras(&s2).unwrap(),
            catalog: pbas(&s, 3),
            catalog_prime: pbas(&s2, 3),
        };
        assert!(check_stable_morita(&w).unwrap().passed());
        let broken = MoritaWitness {
            t_prime: FlexMorphism::parse("t'", &s2, &s, [("neg", "neg(x0)"), ("or", "x0")]).unwrap(),
            ..w
        };
        let r = check_stable_morita(&broken).unwrap();
        let first = r.first_failure().unwrap();
        assert!(first.instance.contains("size 2"), "{first:?}");
    }

    #[test]
    fn no_strict_isomorphism_between_presentations() {
        let l = standard::cpl(&standard::neg_or()).unwrap();
        let l2 = standard::cpl(&standard::neg_imp()).unwrap();
        let r = check_strict_isomorphisms(&l, &l2, Bounds::new(2, 2, 2)).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.verdicts.len(), 4);
        let conservativity = r
            .verdicts
            .iter()
            .filter(|e| e.witness.as_ref().unwrap().starts_with("conservativity fails"))
            .count();
        assert_eq!(conservativity, 2);
    }

    #[test]
    fn reduct_structure_agrees_with_tables() {
        let m = catalog::boolean_powerset(&standard::neg_or(), 2).unwrap();
        let f = ReductFunctor::new(&standard::t());
        let r = f.on_algebra(&m).unwrap();
        let view = f.on_structure(&m);
        for_each_tuple(4, 2, |args| assert_eq!(view.apply(1, args), r.op(1, args)));
    }
}
