//! JSON workbench files: named signatures, logics, morphisms, quasivarieties,
//! catalogs, algebraizing pairs, Morita witnesses and checks. Loading
//! resolves every cross-reference and signature agreement up front; a check
//! is a list of steps run with merged bounds.
//!
//! ```json
//! {
//!   "signatures": { "neg_or": ["neg/1", "or/2"] },
//!   "logics": { "cpl": { "signature": "neg_or", "oracle": { "kind": "classical" } } },
//!   "checks": {
//!     "tarski": { "steps": [ { "kind": "tarskian", "logic": "cpl" } ] }
//!   }
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{
    all_congruences, catalog, enumerate_homs, in_quasivariety, quotient_algebra, reflect,
    size_cap_from_env, AlgebraError, Elem, FiniteAlgebra, QuasivarietySpec,
};
use crate::algebraization::{
    check_bp_conditions, check_lindenbaum, lindenbaum_quotient, verify_free_object,
    AlgebraizableLogic, AlgebraizationError, AlgebraizingPair,
};
use crate::consequence::{
    check_congruential, check_conservative, check_dense, check_tarskian, check_translation,
    canonical_sample, congruence_precheck, AxiomSystem, ConsequenceError, DenseVerdict, Logic,
    LogicalMatrix, Verdict,
};
use crate::report::{Bounds, Outcome, Report};
use crate::representation::{
    check_full_faithful, check_glivenko_adjunction, check_naturality, check_qv_restriction,
    check_stable_morita, check_strict_isomorphisms, construct_quotient_logic, glivenko_distinguisher,
    natural_epi_component, roundtrip_check, MoritaWitness, RepresentationError,
};
use crate::syntax::{compose_flex, parse_formula, FlexMorphism, Signature, SyntaxError};

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}:{line}:{column}: {msg}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{context}: undefined {kind} '{name}'")]
    Dangling {
        context: String,
        kind: &'static str,
        name: String,
    },
    #[error("{context}: signature mismatch, expected {expected}, found {found}")]
    SignatureMismatch {
        context: String,
        expected: String,
        found: String,
    },
    #[error("{context}: {msg}")]
    Invalid { context: String, msg: String },
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("{context}: {source}")]
    Step {
        context: String,
        #[source]
        source: StepError,
    },
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Consequence(#[from] ConsequenceError),
    #[error(transparent)]
    Algebraization(#[from] AlgebraizationError),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
}

fn at<E: Into<StepError>>(context: &str) -> impl FnOnce(E) -> WorkbenchError + '_ {
    move |e| WorkbenchError::Step {
        context: context.to_string(),
        source: e.into(),
    }
}

// ---- file schema ----

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDef {
    #[serde(default)]
    signatures: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    logics: BTreeMap<String, LogicDef>,
    #[serde(default)]
    morphisms: BTreeMap<String, MorphismDef>,
    #[serde(default)]
    quasivarieties: BTreeMap<String, QvDef>,
    #[serde(default)]
    catalogs: BTreeMap<String, CatalogDef>,
    #[serde(default)]
    pairs: BTreeMap<String, PairDef>,
    #[serde(default)]
    witnesses: BTreeMap<String, WitnessDef>,
    #[serde(default)]
    checks: BTreeMap<String, CheckDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogicDef {
    signature: String,
    oracle: OracleDef,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum OracleDef {
    Classical,
    Ipc,
    Matrices { matrices: Vec<MatrixDef> },
    Pullback { morphism: String, inner: String },
    Axiomatic {
        axioms: Vec<String>,
        #[serde(default)]
        modus_ponens: bool,
        depth: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDef {
    size: usize,
    tables: BTreeMap<String, Vec<Elem>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDef {
    size: usize,
    tables: BTreeMap<String, Vec<Elem>>,
    designated: Vec<Elem>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDef {
    source: Option<String>,
    target: Option<String>,
    map: Option<BTreeMap<String, String>>,
    /// `[g, f]` is `g ∘ f`.
    compose: Option<Vec<String>>,
    identity: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QvDef {
    signature: String,
    preset: Option<String>,
    laws: Option<Vec<String>>,
    generators: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDef {
    signature: String,
    #[serde(default)]
    recipes: Vec<String>,
    #[serde(default)]
    algebras: Vec<AlgebraDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDef {
    logic: String,
    delta: Vec<String>,
    epsilon: Vec<String>,
    #[serde(rename = "Delta")]
    big_delta: Vec<String>,
    qv: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDef {
    t: String,
    t_prime: String,
    qv: String,
    qv_prime: String,
    catalog: String,
    catalog_prime: String,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsOverride {
    pub nvars: Option<usize>,
    pub depth: Option<usize>,
    pub premises: Option<usize>,
}

impl BoundsOverride {
    pub fn apply(&self, b: Bounds) -> Bounds {
        Bounds::new(
            self.nvars.unwrap_or(b.nvars),
            self.depth.unwrap_or(b.depth),
            self.premises.unwrap_or(b.premises),
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDef {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub bounds: Option<BoundsOverride>,
    pub steps: Vec<StepDef>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct StepDef {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default)]
    pub bounds: Option<BoundsOverride>,
    #[serde(flatten)]
    pub kind: StepKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    Translation { morphism: String, source: String, target: String },
    Conservative { morphism: String, source: String, target: String },
    Dense {
        morphism: String,
        source: String,
        target: String,
        depth: Option<usize>,
    },
    Congruential { logic: String },
    Tarskian { logic: String },
    StrictIsomorphisms { source: String, target: String },
    Reflector {
        qv: String,
        max_size: usize,
        samples: usize,
        sample_size: usize,
        seed: u64,
    },
    BpConditions { pair: String },
    Lindenbaum { pair: String },
    LindenbaumQuotient {
        logic: String,
        nvars: usize,
        depth: usize,
        classes: Option<usize>,
        qv: Option<String>,
        catalog: Option<String>,
    },
    QvRestriction {
        morphism: String,
        qv_source: String,
        qv_target: String,
        catalog: String,
    },
    NaturalEpi {
        morphism: String,
        qv_source: String,
        qv_target: String,
        catalog: String,
        /// Naturality is checked along every hom between members up to this size.
        #[serde(default = "default_hom_size")]
        hom_size: usize,
    },
    FullFaithful { morphism: String, catalog: String },
    Roundtrip { morphism: String, logic: String },
    QuotientLogic {
        t: String,
        source: String,
        target: String,
        fprime: String,
        pair: String,
    },
    GlivenkoAdjunction { heyting: String, boolean: String },
    GlivenkoProver {
        classical: String,
        intuitionistic: String,
        tautologies: Vec<String>,
        unprovable: Vec<String>,
    },
    StableMorita { witness: String },
}

fn default_hom_size() -> usize {
    8
}

impl StepKind {
    pub fn label(&self) -> &'static str {
        match self {
            StepKind::Translation { .. } => "translation",
            StepKind::Conservative { .. } => "conservative",
            StepKind::Dense { .. } => "dense",
            StepKind::Congruential { .. } => "congruential",
            StepKind::Tarskian { .. } => "tarskian",
            StepKind::StrictIsomorphisms { .. } => "strict-isomorphisms",
            StepKind::Reflector { .. } => "reflector",
            StepKind::BpConditions { .. } => "bp-conditions",
            StepKind::Lindenbaum { .. } => "lindenbaum",
            StepKind::LindenbaumQuotient { .. } => "lindenbaum-quotient",
            StepKind::QvRestriction { .. } => "qv-restriction",
            StepKind::NaturalEpi { .. } => "natural-epi",
            StepKind::FullFaithful { .. } => "full-faithful",
            StepKind::Roundtrip { .. } => "roundtrip",
            StepKind::QuotientLogic { .. } => "quotient-logic",
            StepKind::GlivenkoAdjunction { .. } => "glivenko-adjunction",
            StepKind::GlivenkoProver { .. } => "glivenko-prover",
            StepKind::StableMorita { .. } => "stable-morita",
        }
    }
}

// ---- resolved model ----

#[derive(Debug, Clone)]
pub struct Catalog {
    pub sig: Signature,
    pub algebras: Vec<FiniteAlgebra>,
}

#[derive(Debug, Clone, Default)]
pub struct Workbench {
    pub signatures: BTreeMap<String, Signature>,
    pub logics: BTreeMap<String, Logic>,
    pub morphisms: BTreeMap<String, FlexMorphism>,
    pub quasivarieties: BTreeMap<String, QuasivarietySpec>,
    pub catalogs: BTreeMap<String, Catalog>,
    pub pairs: BTreeMap<String, AlgebraizableLogic>,
    pub witnesses: BTreeMap<String, MoritaWitness>,
    pub checks: BTreeMap<String, CheckDef>,
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, T>,
    kind: &'static str,
    name: &str,
    context: &str,
) -> Result<&'a T, WorkbenchError> {
    map.get(name).ok_or_else(|| WorkbenchError::Dangling {
        context: context.to_string(),
        kind,
        name: name.to_string(),
    })
}

fn agree(context: &str, expected: &Signature, found: &Signature) -> Result<(), WorkbenchError> {
    if expected == found {
        Ok(())
    } else {
        Err(WorkbenchError::SignatureMismatch {
            context: context.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Workbench, WorkbenchError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    load_str(&text, &path.display().to_string())
}

/// An empty (or whitespace-only) text is the empty workbench.
pub fn load_str(text: &str, origin: &str) -> Result<Workbench, WorkbenchError> {
    if text.trim().is_empty() {
        return Ok(Workbench::default());
    }
    let def: FileDef = serde_json::from_str(text).map_err(|e| WorkbenchError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    resolve(def)
}

fn resolve(def: FileDef) -> Result<Workbench, WorkbenchError> {
    let mut wb = Workbench::default();
    for (name, decls) in &def.signatures {
        let s = Signature::from_decls(name, decls).map_err(at(&format!("signature {name}")))?;
        wb.signatures.insert(name.clone(), s);
    }
    for (name, m) in &def.morphisms {
        resolve_morphism(&mut wb, &def, name, m, &mut Vec::new())?;
    }
    for (name, c) in &def.catalogs {
        let ctx = format!("catalog {name}");
        let sig = lookup(&wb.signatures, "signature", &c.signature, &ctx)?.clone();
        let mut algebras = Vec::new();
        for r in &c.recipes {
            algebras.extend(catalog::recipe(r, &sig).map_err(at(&ctx))?);
        }
        for a in &c.algebras {
            algebras.push(FiniteAlgebra::new(&sig, a.size, &a.tables).map_err(at(&ctx))?);
        }
        wb.catalogs.insert(name.clone(), Catalog { sig, algebras });
    }
    for (name, q) in &def.quasivarieties {
        let ctx = format!("quasivariety {name}");
        let sig = lookup(&wb.signatures, "signature", &q.signature, &ctx)?.clone();
        let mut spec = match q.preset.as_deref() {
            None => None,
            Some("boolean") => Some(catalog::boolean_laws(&sig).map_err(at(&ctx))?),
            Some("heyting") => Some(catalog::heyting_laws(&sig).map_err(at(&ctx))?),
            Some("heyting-boolean") => Some(catalog::heyting_boolean_laws(&sig).map_err(at(&ctx))?),
            Some(other) => {
                return Err(WorkbenchError::Invalid {
                    context: ctx,
                    msg: format!("unknown preset '{other}'"),
                })
            }
        };
        if let Some(laws) = &q.laws {
            let refs: Vec<&str> = laws.iter().map(String::as_str).collect();
            let parsed = QuasivarietySpec::parse_laws(name, &sig, &refs).map_err(at(&ctx))?;
            spec = Some(match spec {
                Some(s) => s.with_laws(parsed.laws.unwrap_or_default()).map_err(at(&ctx))?,
                None => parsed,
            });
        }
        if let Some(g) = &q.generators {
            let cat = lookup(&wb.catalogs, "catalog", g, &ctx)?;
            agree(&ctx, &sig, &cat.sig)?;
            spec = Some(match spec {
                Some(s) => s.with_generators(cat.algebras.clone()).map_err(at(&ctx))?,
                None => QuasivarietySpec::from_generators(name, &sig, cat.algebras.clone()).map_err(at(&ctx))?,
            });
        }
        let mut spec = spec.ok_or_else(|| WorkbenchError::Invalid {
            context: ctx.clone(),
            msg: "needs a preset, laws or generators".into(),
        })?;
        spec.name = name.clone();
        wb.quasivarieties.insert(name.clone(), spec);
    }
    for name in def.logics.keys() {
        resolve_logic(&mut wb, &def, name, &mut Vec::new())?;
    }
    for (name, p) in &def.pairs {
        let ctx = format!("pair {name}");
        let logic = lookup(&wb.logics, "logic", &p.logic, &ctx)?.clone();
        let qv = lookup(&wb.quasivarieties, "quasivariety", &p.qv, &ctx)?.clone();
        agree(&ctx, &logic.sig, &qv.sig)?;
        let pair = AlgebraizingPair::parse(&logic.sig, &strs(&p.delta), &strs(&p.epsilon), &strs(&p.big_delta))
            .map_err(at(&ctx))?;
        let a = AlgebraizableLogic::new(logic, pair, qv).map_err(at(&ctx))?;
        wb.pairs.insert(name.clone(), a);
    }
    for (name, w) in &def.witnesses {
        let ctx = format!("witness {name}");
        let t = lookup(&wb.morphisms, "morphism", &w.t, &ctx)?.clone();
        let t_prime = lookup(&wb.morphisms, "morphism", &w.t_prime, &ctx)?.clone();
        let qv = lookup(&wb.quasivarieties, "quasivariety", &w.qv, &ctx)?.clone();
        let qv_prime = lookup(&wb.quasivarieties, "quasivariety", &w.qv_prime, &ctx)?.clone();
        let cat = lookup(&wb.catalogs, "catalog", &w.catalog, &ctx)?;
        let cat_prime = lookup(&wb.catalogs, "catalog", &w.catalog_prime, &ctx)?;
        agree(&ctx, t.source(), &qv.sig)?;
        agree(&ctx, t.target(), &qv_prime.sig)?;
        agree(&ctx, t_prime.source(), t.target())?;
        agree(&ctx, t_prime.target(), t.source())?;
        agree(&ctx, &qv.sig, &cat.sig)?;
        agree(&ctx, &qv_prime.sig, &cat_prime.sig)?;
        wb.witnesses.insert(
            name.clone(),
            MoritaWitness {
                t,
                t_prime,
                qv,
                qv_prime,
                catalog: cat.algebras.clone(),
                catalog_prime: cat_prime.algebras.clone(),
            },
        );
    }
    wb.checks = def.checks.clone();
    for (name, c) in &def.checks {
        for (i, s) in c.steps.iter().enumerate() {
            validate_step(&wb, &format!("check {name}, step {}", i + 1), &s.kind)?;
        }
    }
    Ok(wb)
}

fn resolve_morphism(
    wb: &mut Workbench,
    def: &FileDef,
    name: &str,
    m: &MorphismDef,
    stack: &mut Vec<String>,
) -> Result<FlexMorphism, WorkbenchError> {
    if let Some(done) = wb.morphisms.get(name) {
        return Ok(done.clone());
    }
    let ctx = format!("morphism {name}");
    if stack.iter().any(|s| s == name) {
        return Err(WorkbenchError::Invalid {
            context: ctx,
            msg: "cyclic composition".into(),
        });
    }
    stack.push(name.to_string());
    let out = match (&m.map, &m.compose, &m.identity) {
        (Some(map), None, None) => {
            let src = m.source.as_ref().ok_or_else(|| WorkbenchError::Invalid {
                context: ctx.clone(),
                msg: "a mapped morphism needs a source".into(),
            })?;
            let tgt = m.target.as_ref().ok_or_else(|| WorkbenchError::Invalid {
                context: ctx.clone(),
                msg: "a mapped morphism needs a target".into(),
            })?;
            let s = lookup(&wb.signatures, "signature", src, &ctx)?;
            let t = lookup(&wb.signatures, "signature", tgt, &ctx)?;
            FlexMorphism::parse(name, s, t, map.iter().map(|(a, b)| (a.as_str(), b.as_str())))
                .map_err(at(&ctx))?
        }
        (None, Some(parts), None) if !parts.is_empty() => {
            let mut acc: Option<FlexMorphism> = None;
            for p in parts.iter().rev() {
                let pd = lookup(&def.morphisms, "morphism", p, &ctx)?;
                let pm = resolve_morphism(wb, def, p, pd, stack)?;
                acc = Some(match acc {
                    None => pm,
                    Some(first) => {
                        agree(&ctx, first.target(), pm.source())?;
                        compose_flex(&pm, &first).map_err(at(&ctx))?
                    }
                });
            }
            acc.expect("non-empty").with_name(name)
        }
        (None, None, Some(sig)) => {
            FlexMorphism::identity(lookup(&wb.signatures, "signature", sig, &ctx)?).with_name(name)
        }
        _ => {
            return Err(WorkbenchError::Invalid {
                context: ctx,
                msg: "give exactly one of map, compose, identity".into(),
            })
        }
    };
    stack.pop();
    wb.morphisms.insert(name.to_string(), out.clone());
    Ok(out)
}

fn resolve_logic(
    wb: &mut Workbench,
    def: &FileDef,
    name: &str,
    stack: &mut Vec<String>,
) -> Result<Logic, WorkbenchError> {
    if let Some(done) = wb.logics.get(name) {
        return Ok(done.clone());
    }
    let ctx = format!("logic {name}");
    let ld = lookup(&def.logics, "logic", name, &ctx)?;
    if stack.iter().any(|s| s == name) {
        return Err(WorkbenchError::Invalid {
            context: ctx,
            msg: "cyclic pullback".into(),
        });
    }
    stack.push(name.to_string());
    let sig = lookup(&wb.signatures, "signature", &ld.signature, &ctx)?.clone();
    let logic = match &ld.oracle {
        OracleDef::Classical => {
            let mut l = crate::standard::cpl(&sig).map_err(at(&ctx))?;
            l.name = name.to_string();
            l
        }
        OracleDef::Ipc => Logic::ipc(name, &sig).map_err(at(&ctx))?,
        OracleDef::Matrices { matrices } => {
            let ms = matrices
                .iter()
                .map(|m| {
                    let a = FiniteAlgebra::new(&sig, m.size, &m.tables)?;
                    LogicalMatrix::new(a, &m.designated)
                })
                .collect::<Result<Vec<_>, AlgebraError>>()
                .map_err(at(&ctx))?;
            Logic::matrix(name, &sig, ms).map_err(at(&ctx))?
        }
        OracleDef::Pullback { morphism, inner } => {
            let h = lookup(&wb.morphisms, "morphism", morphism, &ctx)?.clone();
            let inner = resolve_logic(wb, def, inner, stack)?;
            agree(&ctx, &sig, h.source())?;
            agree(&ctx, h.target(), &inner.sig)?;
            Logic::pullback(name, &h, &inner).map_err(at(&ctx))?
        }
        OracleDef::Axiomatic {
            axioms,
            modus_ponens,
            depth,
        } => {
            let ax = axioms
                .iter()
                .map(|a| parse_formula(a, &sig))
                .collect::<Result<Vec<_>, _>>()
                .map_err(at(&ctx))?;
            let rules = if *modus_ponens { vec![AxiomSystem::modus_ponens()] } else { Vec::new() };
            Logic::axiomatic(name, AxiomSystem::new(&sig, ax, rules, *depth).map_err(at(&ctx))?)
        }
    };
    stack.pop();
    wb.logics.insert(name.to_string(), logic.clone());
    Ok(logic)
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn validate_step(wb: &Workbench, ctx: &str, k: &StepKind) -> Result<(), WorkbenchError> {
    let logic = |n: &str| lookup(&wb.logics, "logic", n, ctx);
    let morph = |n: &str| lookup(&wb.morphisms, "morphism", n, ctx);
    let qv = |n: &str| lookup(&wb.quasivarieties, "quasivariety", n, ctx);
    let cat = |n: &str| lookup(&wb.catalogs, "catalog", n, ctx);
    let pair = |n: &str| lookup(&wb.pairs, "pair", n, ctx);
    match k {
        StepKind::Translation { morphism, source, target }
        | StepKind::Conservative { morphism, source, target }
        | StepKind::Dense { morphism, source, target, .. } => {
            let m = morph(morphism)?;
            agree(ctx, &logic(source)?.sig, m.source())?;
            agree(ctx, &logic(target)?.sig, m.target())?;
        }
        StepKind::Congruential { logic: l } | StepKind::Tarskian { logic: l } => {
            logic(l)?;
        }
        StepKind::StrictIsomorphisms { source, target } => {
            logic(source)?;
            logic(target)?;
        }
        StepKind::Reflector { qv: q, .. } => {
            qv(q)?;
        }
        StepKind::BpConditions { pair: p } | StepKind::Lindenbaum { pair: p } => {
            pair(p)?;
        }
        StepKind::LindenbaumQuotient { logic: l, qv: q, catalog: c, .. } => {
            let l = logic(l)?;
            if let Some(q) = q {
                agree(ctx, &l.sig, &qv(q)?.sig)?;
            }
            if let Some(c) = c {
                agree(ctx, &l.sig, &cat(c)?.sig)?;
            }
            if c.is_some() != q.is_some() {
                return Err(WorkbenchError::Invalid {
                    context: ctx.into(),
                    msg: "qv and catalog go together".into(),
                });
            }
        }
        StepKind::QvRestriction { morphism, qv_source, qv_target, catalog: c }
        | StepKind::NaturalEpi { morphism, qv_source, qv_target, catalog: c, .. } => {
            let m = morph(morphism)?;
            agree(ctx, m.source(), &qv(qv_source)?.sig)?;
            agree(ctx, m.target(), &qv(qv_target)?.sig)?;
            agree(ctx, m.target(), &cat(c)?.sig)?;
        }
        StepKind::FullFaithful { morphism, catalog: c } => {
            agree(ctx, morph(morphism)?.target(), &cat(c)?.sig)?;
        }
        StepKind::Roundtrip { morphism, logic: l } => {
            agree(ctx, morph(morphism)?.target(), &logic(l)?.sig)?;
        }
        StepKind::QuotientLogic { t, source, target, fprime, pair: p } => {
            let (t, f) = (morph(t)?, morph(fprime)?);
            agree(ctx, &logic(source)?.sig, t.source())?;
            agree(ctx, &logic(target)?.sig, t.target())?;
            agree(ctx, t.target(), f.source())?;
            agree(ctx, f.target(), &pair(p)?.logic.sig)?;
        }
        StepKind::GlivenkoAdjunction { heyting, boolean } => {
            agree(ctx, &cat(heyting)?.sig, &cat(boolean)?.sig)?;
        }
        StepKind::GlivenkoProver {
            classical,
            intuitionistic,
            tautologies,
            unprovable,
        } => {
            let c = logic(classical)?;
            let i = logic(intuitionistic)?;
            agree(ctx, &c.sig, &i.sig)?;
            if !c.sig.contains("neg") {
                return Err(WorkbenchError::Invalid {
                    context: ctx.into(),
                    msg: "double negation needs `neg`".into(),
                });
            }
            for f in tautologies.iter().chain(unprovable) {
                parse_formula(f, &c.sig).map_err(at(ctx))?;
            }
        }
        StepKind::StableMorita { witness } => {
            lookup(&wb.witnesses, "witness", witness, ctx)?;
        }
    }
    Ok(())
}

// ---- running ----

impl Workbench {
    pub fn check_names(&self) -> impl Iterator<Item = &str> {
        self.checks.keys().map(String::as_str)
    }

    /// Runs a named check. Bounds: the default, then the check's, then the
    /// step's, then `overrides`.
    pub fn run(&self, check: &str, overrides: BoundsOverride) -> Result<Report, WorkbenchError> {
        let def = self
            .checks
            .get(check)
            .ok_or_else(|| WorkbenchError::UnknownCheck(check.to_string()))?;
        let base = def.bounds.unwrap_or_default().apply(Bounds::default());
        let mut report = Report::new(check).with_bounds(overrides.apply(base));
        if let Some(d) = &def.description {
            report.note(d.clone());
        }
        for (i, step) in def.steps.iter().enumerate() {
            let bounds = overrides.apply(step.bounds.unwrap_or_default().apply(base));
            let label = match &step.name {
                Some(n) => n.clone(),
                None => format!("{:02} {}", i + 1, step.kind.label()),
            };
            let ctx = format!("check {check}, {label}");
            let r = self.run_step(&ctx, &step.kind, bounds)?;
            for n in &r.notes {
                report.note(format!("{label}: {n}"));
            }
            match step.expect {
                Expect::Pass => {
                    for e in r.verdicts {
                        report.push_as(format!("{label}: {}", e.check), e.instance, e.verdict, e.witness);
                    }
                }
                Expect::Fail => {
                    let outcome = match r.outcome() {
                        Outcome::Fail => Outcome::Pass,
                        Outcome::Pass => Outcome::Fail,
                        Outcome::Inconclusive => Outcome::Inconclusive,
                    };
                    let witness = match r.first_failure() {
                        Some(e) => format!("{}: {} ({})", e.check, e.instance, e.witness.clone().unwrap_or_default()),
                        None => "no failing instance".into(),
                    };
                    report.push_as(label, "fails as expected", outcome, Some(witness));
                }
            }
        }
        Ok(report)
    }

    fn run_step(&self, ctx: &str, k: &StepKind, b: Bounds) -> Result<Report, WorkbenchError> {
        let logic = |n: &str| lookup(&self.logics, "logic", n, ctx);
        let morph = |n: &str| lookup(&self.morphisms, "morphism", n, ctx);
        let qv = |n: &str| lookup(&self.quasivarieties, "quasivariety", n, ctx);
        let cat = |n: &str| lookup(&self.catalogs, "catalog", n, ctx).map(|c| &c.algebras);
        let pair = |n: &str| lookup(&self.pairs, "pair", n, ctx);
        Ok(match k {
            StepKind::Translation { morphism, source, target } => {
                check_translation(morph(morphism)?, logic(source)?, logic(target)?, b).map_err(at(ctx))?
            }
            StepKind::Conservative { morphism, source, target } => {
                check_conservative(morph(morphism)?, logic(source)?, logic(target)?, b).map_err(at(ctx))?
            }
            StepKind::Dense { morphism, source, target, depth } => {
                let r = check_dense(morph(morphism)?, logic(source)?, logic(target)?, depth.unwrap_or(b.depth))
                    .map_err(at(ctx))?;
                let mut out = r.report;
                let outcome = match r.verdict {
                    DenseVerdict::Dense => Outcome::Pass,
                    DenseVerdict::NotDenseUpToDepth(_) => Outcome::Fail,
                    DenseVerdict::Inconclusive => Outcome::Inconclusive,
                };
                out.push_as("dense", format!("{:?} mode", r.mode), outcome, Some(format!("{:?}", r.verdict)));
                out
            }
            StepKind::Congruential { logic: l } => {
                let l = logic(l)?;
                check_congruential(l, congruence_precheck(l)).map_err(at(ctx))?
            }
            StepKind::Tarskian { logic: l } => {
                let l = logic(l)?;
                check_tarskian(l, &canonical_sample(&l.sig, b)).map_err(at(ctx))?
            }
            StepKind::StrictIsomorphisms { source, target } => {
                check_strict_isomorphisms(logic(source)?, logic(target)?, b).map_err(at(ctx))?
            }
            StepKind::Reflector {
                qv: q,
                max_size,
                samples,
                sample_size,
                seed,
            } => check_reflector(qv(q)?, *max_size, *samples, *sample_size, *seed).map_err(at(ctx))?,
            StepKind::BpConditions { pair: p } => check_bp_conditions(pair(p)?, b).map_err(at(ctx))?,
            StepKind::Lindenbaum { pair: p } => {
                check_lindenbaum(pair(p)?, Bounds::new(b.nvars, b.depth, 0)).map_err(at(ctx))?
            }
            StepKind::LindenbaumQuotient {
                logic: l,
                nvars,
                depth,
                classes,
                qv: q,
                catalog: c,
            } => {
                let q_ = lindenbaum_quotient(logic(l)?, *nvars, *depth, None).map_err(at(ctx))?;
                let mut r = Report::new("lindenbaum-quotient");
                let inst = format!("n = {nvars}, depth {depth}");
                let saturated = q_.algebra().is_some();
                if saturated {
                    r.pass(format!("{inst}: saturated"));
                } else {
                    r.inconclusive(format!("{inst}: saturated"), "new classes still appear at the depth bound");
                }
                if let Some(want) = classes {
                    let found = q_.reps.len();
                    // Unsaturated counts are lower bounds only.
                    let verdict = match (found == *want, saturated) {
                        (true, true) => Outcome::Pass,
                        (false, false) if found < *want => Outcome::Inconclusive,
                        _ => Outcome::Fail,
                    };
                    r.push(format!("{inst}: {want} classes"), verdict, Some(format!("{found} classes")));
                }
                if let (Some(q), Some(c)) = (q, c) {
                    r.absorb(verify_free_object(&q_, qv(q)?, cat(c)?, size_cap_from_env()).map_err(at(ctx))?);
                }
                r
            }
            StepKind::QvRestriction { morphism, qv_source, qv_target, catalog: c } => {
                check_qv_restriction(morph(morphism)?, qv(qv_source)?, qv(qv_target)?, cat(c)?).map_err(at(ctx))?
            }
            StepKind::NaturalEpi {
                morphism,
                qv_source,
                qv_target,
                catalog: c,
                hom_size,
            } => {
                let (t, q1, q2) = (morph(morphism)?, qv(qv_source)?, qv(qv_target)?);
                let algebras = cat(c)?;
                let mut r = Report::new("natural-epi");
                for (i, m) in algebras.iter().enumerate() {
                    let e = natural_epi_component(t, q1, q2, m).map_err(at(ctx))?;
                    for v in e.report.verdicts {
                        r.push_as(v.check, format!("#{i} {}", v.instance), v.verdict, v.witness);
                    }
                    let refl = reflect(m, q2).map_err(at(ctx))?;
                    let n = check_naturality(t, q1, q2, m, &refl.algebra, &refl.projection).map_err(at(ctx))?;
                    for v in n.verdicts {
                        r.push_as(v.check, format!("#{i} -> its reflection: {}", v.instance), v.verdict, v.witness);
                    }
                }
                let small: Vec<(usize, &FiniteAlgebra)> =
                    algebras.iter().enumerate().filter(|(_, a)| a.size() <= *hom_size).collect();
                let mut squares = 0;
                let mut bad = None;
                for &(i, a) in &small {
                    for &(j, bb) in &small {
                        for g in enumerate_homs(a, bb).map_err(at(ctx))? {
                            squares += 1;
                            let n = check_naturality(t, q1, q2, a, bb, &g).map_err(at(ctx))?;
                            if let Some(e) = n.first_failure() {
                                bad.get_or_insert(format!("#{i} -> #{j} along {g:?}: {}", e.instance));
                            }
                        }
                    }
                }
                r.push_as(
                    "naturality",
                    format!("{squares} square(s) over catalog homs"),
                    bad.is_none().into(),
                    bad,
                );
                r
            }
            StepKind::FullFaithful { morphism, catalog: c } => {
                check_full_faithful(morph(morphism)?, cat(c)?).map_err(at(ctx))?
            }
            StepKind::Roundtrip { morphism, logic: l } => roundtrip_check(morph(morphism)?, logic(l)?).map_err(at(ctx))?,
            StepKind::QuotientLogic { t, source, target, fprime, pair: p } => {
                construct_quotient_logic(morph(t)?, logic(source)?, logic(target)?, morph(fprime)?, pair(p)?, b)
                    .map_err(at(ctx))?
                    .report
            }
            StepKind::GlivenkoAdjunction { heyting, boolean } => {
                let (h, bb) = (cat(heyting)?, cat(boolean)?);
                let mut r = check_glivenko_adjunction(h, bb).map_err(at(ctx))?;
                for n in glivenko_distinguisher(h, bb).notes {
                    r.note(n);
                }
                r
            }
            StepKind::GlivenkoProver {
                classical,
                intuitionistic,
                tautologies,
                unprovable,
            } => {
                let (c, i) = (logic(classical)?, logic(intuitionistic)?);
                let mut r = Report::new("glivenko-prover");
                for text in tautologies {
                    let f = parse_formula(text, &c.sig).map_err(at(ctx))?;
                    let nn = crate::syntax::Formula::app("neg", vec![crate::syntax::Formula::app("neg", vec![f.clone()])]);
                    let vc = c.entails(&[], &f).map_err(at(ctx))?;
                    let vi = i.entails(&[], &nn).map_err(at(ctx))?;
                    r.push(
                        text.clone(),
                        Outcome::from(vc == Verdict::Yes).combine((vi == Verdict::Yes).into()),
                        Some(format!("{}: {vc}; double negation in {}: {vi}", c.name, i.name)),
                    );
                }
                for text in unprovable {
                    let f = parse_formula(text, &c.sig).map_err(at(ctx))?;
                    let v = i.entails(&[], &f).map_err(at(ctx))?;
                    r.push(
                        format!("{text} unprovable"),
                        (v == Verdict::No).into(),
                        Some(format!("{}: {v}", i.name)),
                    );
                }
                r
            }
            StepKind::StableMorita { witness } => {
                check_stable_morita(lookup(&self.witnesses, "witness", witness, ctx)?).map_err(at(ctx))?
            }
        })
    }
}

/// The least congruence with quotient in `q`, by trying every congruence.
pub fn brute_force_reflection(m: &FiniteAlgebra, q: &QuasivarietySpec) -> Result<Option<Vec<Elem>>, AlgebraError> {
    let mut best: Option<crate::algebra::Congruence> = None;
    for c in all_congruences(m) {
        let (quot, _) = quotient_algebra(m, &c)?;
        if in_quasivariety(&quot, q)?.member && best.as_ref().map_or(true, |b| c.refines(b)) {
            best = Some(c);
        }
    }
    Ok(best.map(|c| c.block_index()))
}

/// `reflect` against [`brute_force_reflection`] on every structure up to
/// `max_size` and on seeded random structures of `sample_size`.
pub fn check_reflector(
    q: &QuasivarietySpec,
    max_size: usize,
    samples: usize,
    sample_size: usize,
    seed: u64,
) -> Result<Report, AlgebraError> {
    let mut report = Report::new("reflector");
    let mut algebras = Vec::new();
    for k in 1..=max_size {
        algebras.extend(catalog::all_structures(&q.sig, k));
    }
    let exhaustive = algebras.len();
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = FiniteAlgebra::from_fn(&q.sig, sample_size, |_, _| rng.gen_range(0..sample_size as Elem))?;
        algebras.push(a);
    }
    let mut bad = None;
    let mut seen = BTreeSet::new();
    for (i, a) in algebras.iter().enumerate() {
        let got = reflect(a, q)?.congruence.block_index();
        let want = brute_force_reflection(a, q)?;
        if want.as_ref() != Some(&got) {
            bad.get_or_insert(format!("structure #{i}: reflect {got:?}, least {want:?}"));
        }
        seen.insert(a.size());
    }
    report.push(
        format!("{exhaustive} structure(s) up to size {max_size}"),
        bad.is_none().into(),
        bad.clone(),
    );
    report.note(format!("{samples} seeded sample(s) of size {sample_size}, seed {seed}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
      "signatures": { "neg_or": ["neg/1", "or/2"] },
      "logics": { "cpl": { "signature": "neg_or", "oracle": { "kind": "classical" } } },
      "morphisms": {
        "collapse": { "source": "neg_or", "target": "neg_or", "map": { "neg": "neg(x0)", "or": "x0" } },
        "id": { "identity": "neg_or" }
      },
      "checks": {
        "ok": { "steps": [
          { "kind": "conservative", "morphism": "id", "source": "cpl", "target": "cpl" },
          { "kind": "translation", "morphism": "collapse", "source": "cpl", "target": "cpl", "expect": "fail" }
        ] },
        "bad": { "bounds": { "depth": 1 }, "steps": [
          { "kind": "translation", "morphism": "collapse", "source": "cpl", "target": "cpl" }
        ] }
      }
    }"#;

    #[test]
    fn empty_text_is_empty_workbench() {
        let wb = load_str("  \n", "empty").unwrap();
        assert!(wb.logics.is_empty() && wb.checks.is_empty());
    }

    #[test]
    fn runs_with_expectations() {
        let wb = load_str(SMALL, "small").unwrap();
        let r = wb.run("ok", BoundsOverride::default()).unwrap();
        assert!(r.passed(), "{r}");
        let bad = wb.run("bad", BoundsOverride::default()).unwrap();
        assert_eq!(bad.outcome(), Outcome::Fail);
        assert_eq!(bad.bounds, Some(Bounds::new(2, 1, 2)));
        let over = wb
            .run("bad", BoundsOverride { depth: Some(2), ..Default::default() })
            .unwrap();
        assert_eq!(over.bounds, Some(Bounds::new(2, 2, 2)));
        assert!(matches!(wb.run("nope", BoundsOverride::default()), Err(WorkbenchError::UnknownCheck(_))));
    }

    #[test]
    fn deterministic_reports() {
        let wb = load_str(SMALL, "small").unwrap();
        let a = wb.run("ok", BoundsOverride::default()).unwrap().to_json();
        let b = wb.run("ok", BoundsOverride::default()).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn dangling_reference_is_named() {
        let text = r#"{ "logics": { "l": { "signature": "missing", "oracle": { "kind": "classical" } } } }"#;
        let e = load_str(text, "x").unwrap_err().to_string();
        assert!(e.contains("undefined signature 'missing'"), "{e}");
    }

    #[test]
    fn parse_error_has_location() {
        let e = load_str("{\n  \"signatures\": [", "broken.lwb").unwrap_err();
        assert!(matches!(e, WorkbenchError::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn signature_mismatch_in_step() {
        let text = r#"{
          "signatures": { "a": ["neg/1"], "b": ["neg/1", "or/2"] },
          "logics": { "la": { "signature": "a", "oracle": { "kind": "classical" } } },
          "morphisms": { "ib": { "identity": "b" } },
          "checks": { "c": { "steps": [ { "kind": "translation", "morphism": "ib", "source": "la", "target": "la" } ] } }
        }"#;
        assert!(matches!(load_str(text, "x"), Err(WorkbenchError::SignatureMismatch { .. })));
    }

    #[test]
    fn reflector_agrees_on_small_structures() {
        let sig = crate::standard::neg_or();
        let q = crate::standard::boolean_algebras(&sig).unwrap();
        let r = check_reflector(&q, 2, 20, 3, 1).unwrap();
        assert!(r.passed(), "{r}");
    }
}
