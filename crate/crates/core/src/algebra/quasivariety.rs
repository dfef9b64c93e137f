use std::fmt;

use serde::Serialize;

use crate::syntax::{formulas_up_to, Formula, Parser, Signature, SyntaxError};

use super::structure::{for_each_tuple, CompiledTerm};
use super::{
    enumerate_homs, extend_congruence, quotient_algebra, AlgebraError,
    Congruence, Elem, FiniteAlgebra,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Equation {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Equation { lhs, rhs }
    }

    pub fn var_bound(&self) -> u32 {
        self.lhs.var_bound().max(self.rhs.var_bound())
    }

    pub fn holds(&self, alg: &FiniteAlgebra, env: &[Elem]) -> Result<bool, AlgebraError> {
        Ok(alg.eval(&self.lhs, env)? == alg.eval(&self.rhs, env)?)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `p1 & ... & pk => lhs = rhs`; an identity when there are no premises.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiIdentity {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiIdentity {
    pub fn identity(lhs: Formula, rhs: Formula) -> Self {
        QuasiIdentity {
            premises: Vec::new(),
            conclusion: Equation::new(lhs, rhs),
        }
    }

    /// Parses `p1 & p2 & ... => lhs = rhs` (the premise part is optional).
    pub fn parse(text: &str, sig: &Signature) -> Result<Self, SyntaxError> {
        let mut p = Parser::new(text);
        let mut premises = Vec::new();
        let has_arrow = text.contains("=>");
        if has_arrow {
            p.skip_ws();
            if !p.eat_str("=>") {
                loop {
                    premises.push(equation(&mut p, sig)?);
                    if p.eat_str("&") {
                        continue;
                    }
                    if p.eat_str("=>") {
                        break;
                    }
                    return Err(p.malformed("expected '&' or '=>'"));
                }
            }
        }
        let conclusion = equation(&mut p, sig)?;
        if !p.at_end() {
            return Err(p.malformed("trailing input"));
        }
        Ok(QuasiIdentity {
            premises,
            conclusion,
        })
    }

    pub fn var_bound(&self) -> u32 {
        self.premises
            .iter()
            .map(Equation::var_bound)
            .chain(std::iter::once(self.conclusion.var_bound()))
            .max()
            .unwrap_or(0)
    }

    pub fn check_over(&self, sig: &Signature) -> Result<(), SyntaxError> {
        for e in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            e.lhs.check_over(sig)?;
            e.rhs.check_over(sig)?;
        }
        Ok(())
    }
}

fn equation(p: &mut Parser<'_>, sig: &Signature) -> Result<Equation, SyntaxError> {
    let lhs = p.formula(sig)?;
    p.skip_ws();
    if p.src[p.pos..].starts_with("=>") {
        return Err(p.malformed("expected '='"));
    }
    p.expect('=')?;
    let rhs = p.formula(sig)?;
    Ok(Equation { lhs, rhs })
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|e| e.to_string()).collect();
            write!(f, "{} ", ps.join(" & "))?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}

/// A quasivariety given by laws, by a finite family of generating algebras,
/// or by both (which must then agree).
#[derive(Debug, Clone)]
pub struct QuasivarietySpec {
    pub name: String,
    pub sig: Signature,
    pub laws: Option<Vec<QuasiIdentity>>,
    pub generators: Option<Vec<FiniteAlgebra>>,
}

impl QuasivarietySpec {
    pub fn from_laws(name: &str, sig: &Signature, laws: Vec<QuasiIdentity>) -> Result<Self, AlgebraError> {
        for l in &laws {
            l.check_over(sig)?;
        }
        Ok(QuasivarietySpec {
            name: name.to_string(),
            sig: sig.clone(),
            laws: Some(laws),
            generators: None,
        })
    }

    pub fn from_generators(
        name: &str,
        sig: &Signature,
        generators: Vec<FiniteAlgebra>,
    ) -> Result<Self, AlgebraError> {
        for g in &generators {
            if g.sig() != sig {
                return Err(AlgebraError::SignatureMismatch {
                    expected: sig.to_string(),
                    found: g.sig().to_string(),
                });
            }
        }
        Ok(QuasivarietySpec {
            name: name.to_string(),
            sig: sig.clone(),
            laws: None,
            generators: Some(generators),
        })
    }

    /// Parses law strings.
    pub fn parse_laws(name: &str, sig: &Signature, laws: &[&str]) -> Result<Self, AlgebraError> {
        let parsed = laws
            .iter()
            .map(|l| QuasiIdentity::parse(l, sig))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_laws(name, sig, parsed)
    }

    pub fn with_generators(mut self, generators: Vec<FiniteAlgebra>) -> Result<Self, AlgebraError> {
        for g in &generators {
            if g.sig() != &self.sig {
                return Err(AlgebraError::SignatureMismatch {
                    expected: self.sig.to_string(),
                    found: g.sig().to_string(),
                });
            }
        }
        self.generators = Some(generators);
        Ok(self)
    }

    pub fn with_laws(mut self, laws: Vec<QuasiIdentity>) -> Result<Self, AlgebraError> {
        for l in &laws {
            l.check_over(&self.sig)?;
        }
        self.laws = Some(laws);
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipWitness {
    /// A law instance failing under `assignment`.
    Law {
        law: usize,
        text: String,
        assignment: Vec<Elem>,
        lhs: Elem,
        rhs: Elem,
    },
    /// Two elements no homomorphism into a generator separates.
    Inseparable { a: Elem, b: Elem },
}

impl fmt::Display for MembershipWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipWitness::Law {
                law,
                text,
                assignment,
                lhs,
                rhs,
            } => write!(
                f,
                "law #{law} `{text}` fails at x = {assignment:?} ({lhs} ≠ {rhs})"
            ),
            MembershipWitness::Inseparable { a, b } => {
                write!(f, "elements {a} and {b} are not separated by homomorphisms into the generators")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub witness: Option<MembershipWitness>,
}

impl Membership {
    fn yes() -> Self {
        Membership {
            member: true,
            witness: None,
        }
    }

    fn no(w: MembershipWitness) -> Self {
        Membership {
            member: false,
            witness: Some(w),
        }
    }
}

/// Membership test. Laws are preferred when present.
pub fn in_quasivariety(m: &FiniteAlgebra, q: &QuasivarietySpec) -> Result<Membership, AlgebraError> {
    check_sig(m, q)?;
    if let Some(laws) = &q.laws {
        return satisfies_laws(m, laws);
    }
    if let Some(gens) = &q.generators {
        return separated_by(m, gens);
    }
    Err(AlgebraError::EmptyPresentation(q.name.clone()))
}

fn check_sig(m: &FiniteAlgebra, q: &QuasivarietySpec) -> Result<(), AlgebraError> {
    if m.sig() != &q.sig {
        return Err(AlgebraError::SignatureMismatch {
            expected: q.sig.to_string(),
            found: m.sig().to_string(),
        });
    }
    Ok(())
}

/// Exhaustive check of every law over every assignment; the witness is the
/// first failing instance in law order, then assignment order.
pub fn satisfies_laws(m: &FiniteAlgebra, laws: &[QuasiIdentity]) -> Result<Membership, AlgebraError> {
    for (li, law) in laws.iter().enumerate() {
        if let Some(w) = first_violation(m, li, law)? {
            return Ok(Membership::no(w));
        }
    }
    Ok(Membership::yes())
}

fn first_violation(
    m: &FiniteAlgebra,
    li: usize,
    law: &QuasiIdentity,
) -> Result<Option<MembershipWitness>, AlgebraError> {
    Ok(all_violations(m, law)?
        .into_iter()
        .next()
        .map(|(assignment, lhs, rhs)| MembershipWitness::Law {
            law: li,
            text: law.to_string(),
            assignment,
            lhs,
            rhs,
        }))
}

type Violation = (Vec<Elem>, Elem, Elem);

fn all_violations(m: &FiniteAlgebra, law: &QuasiIdentity) -> Result<Vec<Violation>, AlgebraError> {
    let nv = law.var_bound() as usize;
    let compiled_premises = law
        .premises
        .iter()
        .map(|e| Ok((m.compile(&e.lhs)?, m.compile(&e.rhs)?)))
        .collect::<Result<Vec<(CompiledTerm, CompiledTerm)>, AlgebraError>>()?;
    let lhs = m.compile(&law.conclusion.lhs)?;
    let rhs = m.compile(&law.conclusion.rhs)?;
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for_each_tuple(m.size(), nv, |env| {
        let premises_hold = compiled_premises
            .iter()
            .all(|(l, r)| l.eval(m, env, &mut stack) == r.eval(m, env, &mut stack));
        if !premises_hold {
            return;
        }
        let (a, b) = (lhs.eval(m, env, &mut stack), rhs.eval(m, env, &mut stack));
        if a != b {
            out.push((env.to_vec(), a, b));
        }
    });
    Ok(out)
}

/// Membership in ISP of the generators: homomorphisms into the generators
/// must jointly separate points.
pub fn separated_by(m: &FiniteAlgebra, gens: &[FiniteAlgebra]) -> Result<Membership, AlgebraError> {
    let kernel = hom_kernel_meet(m, gens)?;
    for a in m.elements() {
        let r = kernel.rep(a);
        if r != a {
            return Ok(Membership::no(MembershipWitness::Inseparable { a: r, b: a }));
        }
    }
    Ok(Membership::yes())
}

/// Intersection of the kernels of all homomorphisms into the generators
/// (the total relation when there are none).
pub fn hom_kernel_meet(m: &FiniteAlgebra, gens: &[FiniteAlgebra]) -> Result<Congruence, AlgebraError> {
    let mut acc = Congruence::total(m.size());
    for g in gens {
        for h in enumerate_homs(m, g)? {
            acc = acc.meet(&Congruence::kernel(&h));
            if acc.is_diagonal() {
                return Ok(acc);
            }
        }
    }
    Ok(acc)
}

/// The reflection `M → M/θ_M` into a quasivariety.
#[derive(Debug, Clone)]
pub struct Reflection {
    pub algebra: FiniteAlgebra,
    pub projection: Vec<Elem>,
    pub congruence: Congruence,
    pub provenance: String,
}

/// Computes the least congruence whose quotient lies in `q`.
///
/// With laws: repeatedly merge the conclusion pair of every violated law
/// instance in the current quotient (each such merge is forced in any
/// quotient inside `q`) until the quotient satisfies all laws.
/// Generator-only presentations use the intersection of kernels of all
/// homomorphisms into the generators, which is exact for ISP classes.
pub fn reflect(m: &FiniteAlgebra, q: &QuasivarietySpec) -> Result<Reflection, AlgebraError> {
    check_sig(m, q)?;
    let (theta, provenance) = match (&q.laws, &q.generators) {
        (Some(laws), _) => (reflect_by_laws(m, laws)?, "laws: iterated forced merges".to_string()),
        (None, Some(gens)) => (
            hom_kernel_meet(m, gens)?,
            format!("generators: intersection of hom kernels into {} algebra(s)", gens.len()),
        ),
        (None, None) => return Err(AlgebraError::EmptyPresentation(q.name.clone())),
    };
    let (algebra, projection) = quotient_algebra(m, &theta)?;
    Ok(Reflection {
        algebra,
        projection,
        congruence: theta,
        provenance,
    })
}

fn reflect_by_laws(m: &FiniteAlgebra, laws: &[QuasiIdentity]) -> Result<Congruence, AlgebraError> {
    let mut theta = Congruence::diagonal(m.size());
    loop {
        let (quot, _) = quotient_algebra(m, &theta)?;
        let blocks = theta.blocks();
        let mut merges = Vec::new();
        for law in laws {
            for (_, a, b) in all_violations(&quot, law)? {
                merges.push((blocks[a as usize][0], blocks[b as usize][0]));
            }
        }
        if merges.is_empty() {
            return Ok(theta);
        }
        theta = extend_congruence(m, &theta, &merges);
    }
}

/// Equations `s = t` holding in every generator, with `s, t` drawn from
/// formulas over `nvars` variables up to `depth`. Only an approximation of
/// the generated quasivariety's theory; callers record that.
pub fn extract_identities(
    sig: &Signature,
    gens: &[FiniteAlgebra],
    nvars: usize,
    depth: usize,
) -> Result<Vec<QuasiIdentity>, AlgebraError> {
    let terms = formulas_up_to(sig, nvars, depth);
    // value vector of each term across all generator assignments
    let mut profiles: Vec<Vec<Elem>> = vec![Vec::new(); terms.len()];
    for g in gens {
        let compiled = terms
            .iter()
            .map(|t| g.compile(t))
            .collect::<Result<Vec<_>, _>>()?;
        let mut stack = Vec::new();
        for_each_tuple(g.size(), nvars, |env| {
            for (p, c) in profiles.iter_mut().zip(&compiled) {
                p.push(c.eval(g, env, &mut stack));
            }
        });
    }
    let mut out = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if profiles[i] == profiles[j] {
                out.push(QuasiIdentity::identity(terms[i].clone(), terms[j].clone()));
            }
        }
    }
    Ok(out)
}

/// Cross-checks the two presentations of `q` on `algebras`; returns the
/// algebras (by index) on which they disagree.
pub fn presentations_disagree(
    q: &QuasivarietySpec,
    algebras: &[FiniteAlgebra],
) -> Result<Vec<usize>, AlgebraError> {
    let (laws, gens) = match (&q.laws, &q.generators) {
        (Some(l), Some(g)) => (l, g),
        _ => return Ok(Vec::new()),
    };
    let mut out = Vec::new();
    for (i, a) in algebras.iter().enumerate() {
        check_sig(a, q)?;
        if satisfies_laws(a, laws)?.member != separated_by(a, gens)?.member {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, is_isomorphic};

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    #[test]
    fn parse_quasi_identities() {
        let s = neg_or();
        let q = QuasiIdentity::parse("or(x0,x1) = or(x1,x0)", &s).unwrap();
        assert!(q.premises.is_empty());
        let q = QuasiIdentity::parse("=> x0 = x0", &s).unwrap();
        assert!(q.premises.is_empty());
        let q = QuasiIdentity::parse("x0 = neg(x1) & x1 = x2 => x0 = neg(x2)", &s).unwrap();
        assert_eq!(q.premises.len(), 2);
        assert_eq!(q.var_bound(), 3);
        assert_eq!(q.to_string(), "x0 = neg(x1) & x1 = x2 => x0 = neg(x2)");
        assert!(QuasiIdentity::parse("x0 => x1", &s).is_err());
        assert!(QuasiIdentity::parse("x0 = x1 = x2", &s).is_err());
    }

    #[test]
    fn trivial_algebra_in_every_quasivariety() {
        let s = neg_or();
        let q = catalog::boolean_laws(&s).unwrap();
        let one = FiniteAlgebra::trivial(&s);
        assert!(in_quasivariety(&one, &q).unwrap().member);
        let trivial = QuasivarietySpec::parse_laws("triv", &s, &["x0 = x1"]).unwrap();
        assert!(in_quasivariety(&one, &trivial).unwrap().member);
    }

    #[test]
    fn chain_is_not_boolean() {
        let s = neg_or();
        let q = catalog::boolean_laws(&s).unwrap();
        let chain = catalog::heyting_chain(&s, 3).unwrap();
        let m = in_quasivariety(&chain, &q).unwrap();
        assert!(!m.member);
        match m.witness.unwrap() {
            MembershipWitness::Law { text, lhs, rhs, .. } => {
                assert!(text.contains("or(x0,neg(x0))"), "{text}");
                // m ∨ ¬m = m while the other side is the top
                assert_eq!((lhs.min(rhs), lhs.max(rhs)), (1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn powerset_separated_by_two_element() {
        let s = neg_or();
        let gens = vec![catalog::boolean_powerset(&s, 1).unwrap()];
        let q = QuasivarietySpec::from_generators("ba", &s, gens).unwrap();
        let four = catalog::boolean_powerset(&s, 2).unwrap();
        assert!(in_quasivariety(&four, &q).unwrap().member);
        let chain = catalog::heyting_chain(&s, 3).unwrap();
        let m = in_quasivariety(&chain, &q).unwrap();
        assert_eq!(m.witness, Some(MembershipWitness::Inseparable { a: 1, b: 2 }));
    }

    #[test]
    fn reflect_member_is_identity() {
        let s = neg_or();
        let q = catalog::boolean_laws(&s).unwrap();
        let four = catalog::boolean_powerset(&s, 2).unwrap();
        let r = reflect(&four, &q).unwrap();
        assert!(r.congruence.is_diagonal());
        assert_eq!(r.algebra, four);
    }

    #[test]
    fn reflect_chain_to_two_element() {
        let s = neg_or();
        let q = catalog::boolean_laws(&s).unwrap();
        let chain = catalog::heyting_chain(&s, 3).unwrap();
        let r = reflect(&chain, &q).unwrap();
        assert_eq!(r.congruence.blocks(), vec![vec![0], vec![1, 2]]);
        assert!(is_isomorphic(&r.algebra, &catalog::boolean_powerset(&s, 1).unwrap()));
    }

    #[test]
    fn reflect_into_trivial_variety() {
        let s = neg_or();
        let q = QuasivarietySpec::parse_laws("triv", &s, &["x0 = x1"]).unwrap();
        let four = catalog::boolean_powerset(&s, 2).unwrap();
        let r = reflect(&four, &q).unwrap();
        assert!(r.congruence.is_total());
        assert_eq!(r.algebra.size(), 1);
    }

    #[test]
    fn generator_reflection_agrees_with_laws() {
        let s = neg_or();
        let laws = catalog::boolean_laws(&s).unwrap();
        let gens = QuasivarietySpec::from_generators(
            "ba",
            &s,
            vec![catalog::boolean_powerset(&s, 1).unwrap()],
        )
        .unwrap();
        for k in 2..=5 {
            let chain = catalog::heyting_chain(&s, k).unwrap();
            let a = reflect(&chain, &laws).unwrap().congruence;
            let b = reflect(&chain, &gens).unwrap().congruence;
            assert_eq!(a, b, "chain of size {k}");
        }
    }

    #[test]
    fn extracted_identities_hold_and_include_commutativity() {
        let s = neg_or();
        let two = catalog::boolean_powerset(&s, 1).unwrap();
        let ids = extract_identities(&s, std::slice::from_ref(&two), 2, 1).unwrap();
        assert!(ids
            .iter()
            .any(|q| q.to_string() == "=> or(x0,x1) = or(x1,x0)"));
        assert!(satisfies_laws(&catalog::boolean_powerset(&s, 3).unwrap(), &ids)
            .unwrap()
            .member);
    }
}
