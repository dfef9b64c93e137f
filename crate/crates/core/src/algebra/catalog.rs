//! Boolean and Heyting algebras over arbitrary signatures drawn from
//! {top, bot, neg, and, or, imp, iff}, standard law presentations, and
//! catalog recipes such as `powerset_BA(sizes=[1,2,4])`.

use crate::syntax::{Formula, Signature};

use super::{AlgebraError, Elem, FiniteAlgebra, QuasiIdentity, QuasivarietySpec};

/// The power-set Boolean algebra on `atoms` atoms (elements are bitmasks).
pub fn boolean_powerset(sig: &Signature, atoms: u32) -> Result<FiniteAlgebra, AlgebraError> {
    let size = 1usize << atoms;
    let full = (size - 1) as Elem;
    let name = format!("powerset BA on {atoms} atom(s)");
    check_supported(sig, &name)?;
    FiniteAlgebra::from_fn(sig, size, |ci, a| match sig.connectives()[ci].name.as_str() {
        "top" => full,
        "bot" => 0,
        "neg" => !a[0] & full,
        "and" => a[0] & a[1],
        "or" => a[0] | a[1],
        "imp" => (!a[0] & full) | a[1],
        "iff" => !(a[0] ^ a[1]) & full,
        _ => unreachable!("checked above"),
    })
}

/// The Heyting chain `0 < 1 < ... < k-1`.
pub fn heyting_chain(sig: &Signature, k: usize) -> Result<FiniteAlgebra, AlgebraError> {
    heyting_from_lattice(sig, &Lattice::chain(k))
}

fn check_supported(sig: &Signature, structure: &str) -> Result<(), AlgebraError> {
    for c in sig.connectives() {
        let ok = matches!(
            (c.name.as_str(), c.arity),
            ("top", 0) | ("bot", 0) | ("neg", 1) | ("and", 2) | ("or", 2) | ("imp", 2) | ("iff", 2)
        );
        if !ok {
            return Err(AlgebraError::UnsupportedConnective {
                conn: format!("{}/{}", c.name, c.arity),
                structure: structure.to_string(),
            });
        }
    }
    Ok(())
}

/// A finite lattice given by its order relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub name: String,
    size: usize,
    leq: Vec<bool>,
}

impl Lattice {
    fn from_order(name: String, size: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut rel = vec![false; size * size];
        for a in 0..size {
            for b in 0..size {
                rel[a * size + b] = leq(a, b);
            }
        }
        Lattice { name, size, leq: rel }
    }

    pub fn chain(k: usize) -> Self {
        Lattice::from_order(format!("{k}"), k, |a, b| a <= b)
    }

    /// Componentwise order; element `(a, b)` is `a * |other| + b`.
    pub fn product(&self, other: &Lattice) -> Self {
        let m = other.size;
        Lattice::from_order(
            format!("{}x{}", self.name, other.name),
            self.size * m,
            |x, y| self.le(x / m, y / m) && other.le(x % m, y % m),
        )
    }

    /// `self` placed entirely below `other`.
    pub fn ordinal_sum(&self, other: &Lattice) -> Self {
        let n = self.size;
        Lattice::from_order(
            format!("{}+{}", self.name, other.name),
            n + other.size,
            |x, y| match (x < n, y < n) {
                (true, true) => self.le(x, y),
                (false, false) => other.le(x - n, y - n),
                (lo, _) => lo,
            },
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    fn bound(&self, pick: impl Fn(usize) -> bool, upper: bool) -> Option<usize> {
        let cands: Vec<usize> = (0..self.size).filter(|&c| pick(c)).collect();
        cands.iter().copied().find(|&c| {
            cands
                .iter()
                .all(|&d| if upper { self.le(c, d) } else { self.le(d, c) })
        })
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.bound(|c| self.le(a, c) && self.le(b, c), true)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.bound(|c| self.le(c, a) && self.le(c, b), false)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bound(|_| true, true)
    }

    pub fn top(&self) -> Option<usize> {
        self.bound(|_| true, false)
    }

    /// Relative pseudo-complement `max{c : c ∧ a ≤ b}`.
    pub fn residual(&self, a: usize, b: usize) -> Option<usize> {
        let cands: Vec<usize> = (0..self.size)
            .filter(|&c| self.meet(c, a).is_some_and(|m| self.le(m, b)))
            .collect();
        cands
            .iter()
            .copied()
            .find(|&c| cands.iter().all(|&d| self.le(d, c)))
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.size;
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let lhs = self.join(b, c).and_then(|j| self.meet(a, j));
                    let rhs = match (self.meet(a, b), self.meet(a, c)) {
                        (Some(x), Some(y)) => self.join(x, y),
                        _ => None,
                    };
                    lhs.is_some() && lhs == rhs
                })
            })
        })
    }
}

/// The Heyting algebra of a finite distributive lattice.
pub fn heyting_from_lattice(sig: &Signature, lat: &Lattice) -> Result<FiniteAlgebra, AlgebraError> {
    let structure = format!("Heyting algebra {}", lat.name);
    check_supported(sig, &structure)?;
    if lat.size() == 0 {
        return Err(AlgebraError::EmptyCarrier);
    }
    if !lat.is_distributive() {
        return Err(AlgebraError::Invalid(format!("lattice {} is not distributive", lat.name)));
    }
    let top = lat.top().expect("finite lattice");
    let bot = lat.bottom().expect("finite lattice");
    let imp = |a: usize, b: usize| lat.residual(a, b).expect("finite distributive lattice");
    let meet = |a: usize, b: usize| lat.meet(a, b).expect("lattice");
    FiniteAlgebra::from_fn(sig, lat.size(), |ci, a| {
        let a: Vec<usize> = a.iter().map(|&x| x as usize).collect();
        (match sig.connectives()[ci].name.as_str() {
            "top" => top,
            "bot" => bot,
            "neg" => imp(a[0], bot),
            "and" => meet(a[0], a[1]),
            "or" => lat.join(a[0], a[1]).expect("lattice"),
            "imp" => imp(a[0], a[1]),
            "iff" => meet(imp(a[0], a[1]), imp(a[1], a[0])),
            _ => unreachable!("checked above"),
        }) as Elem
    })
}

/// The bundled non-chain Heyting algebras of size at most 6.
pub fn heyting_nonchains(sig: &Signature) -> Result<Vec<FiniteAlgebra>, AlgebraError> {
    let one = Lattice::chain(1);
    let two = Lattice::chain(2);
    let square = two.product(&two);
    let lats = [
        square.clone(),
        one.ordinal_sum(&square),
        square.ordinal_sum(&one),
        two.product(&Lattice::chain(3)),
        one.ordinal_sum(&square).ordinal_sum(&one),
    ];
    lats.iter().map(|l| heyting_from_lattice(sig, l)).collect()
}

fn v(i: u32) -> Formula {
    Formula::Var(i)
}

fn app(c: &str, args: Vec<Formula>) -> Formula {
    Formula::app(c, args)
}

/// Term builders for the Boolean operations available in a signature.
struct Derived<'a> {
    sig: &'a Signature,
}

impl Derived<'_> {
    fn has(&self, c: &str, n: usize) -> bool {
        self.sig.arity(c) == Some(n)
    }

    fn neg(&self, a: Formula) -> Option<Formula> {
        if self.has("neg", 1) {
            Some(app("neg", vec![a]))
        } else if self.has("imp", 2) && self.has("bot", 0) {
            Some(app("imp", vec![a, Formula::constant("bot")]))
        } else {
            None
        }
    }

    fn or(&self, a: Formula, b: Formula) -> Option<Formula> {
        if self.has("or", 2) {
            Some(app("or", vec![a, b]))
        } else if self.has("imp", 2) {
            Some(app("imp", vec![self.neg(a)?, b]))
        } else if self.has("and", 2) {
            let (na, nb) = (self.neg(a)?, self.neg(b)?);
            self.neg(app("and", vec![na, nb]))
        } else {
            None
        }
    }

    fn and(&self, a: Formula, b: Formula) -> Option<Formula> {
        let (na, nb) = (self.neg(a)?, self.neg(b)?);
        self.neg(self.or(na, nb)?)
    }

    fn top(&self) -> Option<Formula> {
        self.or(v(0), self.neg(v(0))?)
    }

    /// Boolean definition of connective `c` from `neg` and `or`.
    fn definition(&self, c: &str) -> Option<Formula> {
        match c {
            "top" => self.top(),
            "bot" => self.neg(self.top()?),
            "neg" => self.neg(v(0)),
            "or" => self.or(v(0), v(1)),
            "and" => self.and(v(0), v(1)),
            "imp" => self.or(self.neg(v(0))?, v(1)),
            "iff" => {
                let l = self.or(self.neg(v(0))?, v(1))?;
                let r = self.or(self.neg(v(1))?, v(0))?;
                self.and(l, r)
            }
            _ => None,
        }
    }
}

/// Boolean algebras over `sig`: Huntington's axioms for the derived join and
/// complement, a constant law for `x ∨ ¬x`, and a definitional equation for
/// every other connective. The two-element algebra is attached as generator,
/// so membership can be cross-checked both ways.
pub fn boolean_laws(sig: &Signature) -> Result<QuasivarietySpec, AlgebraError> {
    let two = boolean_powerset(sig, 1)?;
    let d = Derived { sig };
    let unsupported = || AlgebraError::UnsupportedConnective {
        conn: "or/neg".into(),
        structure: format!("Boolean law presentation over {sig}"),
    };
    let or = |a, b| d.or(a, b).ok_or_else(unsupported);
    let neg = |a| d.neg(a).ok_or_else(unsupported);
    let mut laws = vec![
        QuasiIdentity::identity(or(v(0), v(1))?, or(v(1), v(0))?),
        QuasiIdentity::identity(or(or(v(0), v(1))?, v(2))?, or(v(0), or(v(1), v(2))?)?),
        QuasiIdentity::identity(or(v(0), neg(v(0))?)?, or(v(1), neg(v(1))?)?),
        QuasiIdentity::identity(
            or(
                neg(or(neg(v(0))?, v(1))?)?,
                neg(or(neg(v(0))?, neg(v(1))?)?)?,
            )?,
            v(0),
        ),
    ];
    for c in sig.connectives() {
        let generic = Formula::generic(c.name.clone(), c.arity);
        let def = d.definition(c.name.as_str()).ok_or_else(unsupported)?;
        if def != generic {
            laws.push(QuasiIdentity::identity(generic, def));
        }
    }
    QuasivarietySpec::from_laws("BA", sig, laws)?.with_generators(vec![two])
}

/// Heyting algebras over a signature containing `and`, `or`, `imp` and one
/// of `neg`, `bot`.
pub fn heyting_laws(sig: &Signature) -> Result<QuasivarietySpec, AlgebraError> {
    for c in ["and", "or", "imp"] {
        if sig.arity(c) != Some(2) {
            return Err(AlgebraError::UnsupportedConnective {
                conn: c.into(),
                structure: format!("Heyting law presentation over {sig} (missing)"),
            });
        }
    }
    check_supported(sig, "Heyting law presentation")?;
    let and = |a, b| app("and", vec![a, b]);
    let or = |a, b| app("or", vec![a, b]);
    let imp = |a, b| app("imp", vec![a, b]);
    let top = imp(v(0), v(0));
    let bot = if sig.arity("bot") == Some(0) {
        Formula::constant("bot")
    } else if sig.arity("neg") == Some(1) {
        app("neg", vec![imp(v(1), v(1))])
    } else {
        return Err(AlgebraError::UnsupportedConnective {
            conn: "neg|bot".into(),
            structure: format!("Heyting law presentation over {sig} (missing)"),
        });
    };
    let id = QuasiIdentity::identity;
    let mut laws = vec![
        id(and(v(0), v(1)), and(v(1), v(0))),
        id(or(v(0), v(1)), or(v(1), v(0))),
        id(and(and(v(0), v(1)), v(2)), and(v(0), and(v(1), v(2)))),
        id(or(or(v(0), v(1)), v(2)), or(v(0), or(v(1), v(2)))),
        id(and(v(0), or(v(0), v(1))), v(0)),
        id(or(v(0), and(v(0), v(1))), v(0)),
        id(imp(v(0), v(0)), imp(v(1), v(1))),
        id(and(v(0), imp(v(0), v(1))), and(v(0), v(1))),
        id(and(v(1), imp(v(0), v(1))), v(1)),
        id(imp(v(0), and(v(1), v(2))), and(imp(v(0), v(1)), imp(v(0), v(2)))),
        id(and(bot.clone(), v(0)), bot.clone()),
    ];
    if sig.arity("neg") == Some(1) {
        laws.push(id(app("neg", vec![v(0)]), imp(v(0), bot.clone())));
    }
    if sig.arity("top") == Some(0) {
        laws.push(id(Formula::constant("top"), top));
    }
    if sig.arity("iff") == Some(2) {
        laws.push(id(
            app("iff", vec![v(0), v(1)]),
            and(imp(v(0), v(1)), imp(v(1), v(0))),
        ));
    }
    QuasivarietySpec::from_laws("HA", sig, laws)
}

/// Heyting laws plus excluded middle.
pub fn heyting_boolean_laws(sig: &Signature) -> Result<QuasivarietySpec, AlgebraError> {
    let mut q = heyting_laws(sig)?;
    let neg0 = Derived { sig }.neg(v(0)).expect("Heyting signature has a negation");
    if let Some(laws) = q.laws.as_mut() {
        laws.push(QuasiIdentity::identity(
            app("or", vec![v(0), neg0]),
            app("imp", vec![v(0), v(0)]),
        ));
    }
    q.name = "BA".into();
    q.with_generators(vec![boolean_powerset(sig, 1)?])
}

/// Expands a catalog recipe.
///
/// Recipes: `powerset_BA(sizes=[1,2,4])`, `heyting_chains(max=5)`
/// (chains of sizes 1..=max), `heyting_nonchains()`, `chain(k)`.
pub fn recipe(text: &str, sig: &Signature) -> Result<Vec<FiniteAlgebra>, AlgebraError> {
    let bad = || AlgebraError::BadRecipe(text.to_string());
    let text = text.trim();
    let open = text.find('(').ok_or_else(bad)?;
    if !text.ends_with(')') {
        return Err(bad());
    }
    let head = text[..open].trim();
    let body = text[open + 1..text.len() - 1].trim();
    let arg = |key: &str| -> Option<&str> {
        body.strip_prefix(key)
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('='))
            .map(str::trim)
    };
    let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match head {
        "powerset_BA" => {
            let list = arg("sizes")
                .and_then(|s| s.strip_prefix('['))
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(bad)?;
            list.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let n = int(s)?;
                    if !n.is_power_of_two() {
                        return Err(AlgebraError::BadRecipe(format!(
                            "{text}: {n} is not a power of two"
                        )));
                    }
                    boolean_powerset(sig, n.trailing_zeros())
                })
                .collect()
        }
        "heyting_chains" => {
            let max = int(arg("max").ok_or_else(bad)?)?;
            (1..=max).map(|k| heyting_chain(sig, k)).collect()
        }
        "heyting_nonchains" if body.is_empty() => heyting_nonchains(sig),
        "chain" => heyting_chain(sig, int(body)?).map(|a| vec![a]),
        _ => Err(bad()),
    }
}

/// All algebras on carrier `k` over `sig` (exponential; tiny `k` only).
pub fn all_structures(sig: &Signature, k: usize) -> Vec<FiniteAlgebra> {
    let shapes: Vec<usize> = sig
        .connectives()
        .iter()
        .map(|c| k.pow(c.arity as u32))
        .collect();
    let total: usize = shapes.iter().sum();
    let mut out = Vec::new();
    super::for_each_tuple(k, total, |flat| {
        let mut tables = Vec::with_capacity(shapes.len());
        let mut at = 0;
        for &s in &shapes {
            tables.push(flat[at..at + s].to_vec());
            at += s;
        }
        out.push(FiniteAlgebra::from_raw(sig.clone(), k, tables));
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{in_quasivariety, is_isomorphic, presentations_disagree};

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    fn ha_sig() -> Signature {
        Signature::new("ha", [("neg", 1), ("and", 2), ("or", 2), ("imp", 2)]).unwrap()
    }

    #[test]
    fn chain_three_tables() {
        let c = heyting_chain(&ha_sig(), 3).unwrap();
        assert_eq!(c.table("neg").unwrap(), &[2, 0, 0]);
        assert_eq!(c.op_named("imp", &[2, 1]), Some(1));
        assert_eq!(c.op_named("imp", &[1, 2]), Some(2));
    }

    #[test]
    fn powerset_is_boolean_and_chain_is_not() {
        for sig in [neg_or(), ha_sig()] {
            let q = boolean_laws(&sig).unwrap();
            for k in 0..=3 {
                assert!(in_quasivariety(&boolean_powerset(&sig, k).unwrap(), &q).unwrap().member);
            }
            assert!(!in_quasivariety(&heyting_chain(&sig, 3).unwrap(), &q).unwrap().member);
        }
    }

    #[test]
    fn heyting_catalog_satisfies_heyting_laws() {
        let sig = ha_sig();
        let q = heyting_laws(&sig).unwrap();
        let mut algs = recipe("heyting_chains(max=5)", &sig).unwrap();
        algs.extend(heyting_nonchains(&sig).unwrap());
        algs.extend(recipe("powerset_BA(sizes=[1,2,4,8])", &sig).unwrap());
        for a in &algs {
            assert!(in_quasivariety(a, &q).unwrap().member, "{a:?}");
        }
        let sizes: Vec<usize> = heyting_nonchains(&sig).unwrap().iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![4, 5, 5, 6, 6]);
    }

    #[test]
    fn square_is_the_four_element_boolean_algebra() {
        let sig = ha_sig();
        let sq = heyting_nonchains(&sig).unwrap().remove(0);
        assert!(is_isomorphic(&sq, &boolean_powerset(&sig, 2).unwrap()));
    }

    #[test]
    fn heyting_laws_reject_non_heyting() {
        let sig = ha_sig();
        let q = heyting_laws(&sig).unwrap();
        // chain with the Boolean-style implication ¬a ∨ b
        let c = heyting_chain(&sig, 3).unwrap();
        let mut t = c.named_tables();
        let imp: Vec<Elem> = (0..9u32).map(|i| (2 - i / 3).max(i % 3)).collect();
        t.insert("imp".into(), imp);
        let bad = FiniteAlgebra::new(&sig, 3, &t).unwrap();
        assert!(!in_quasivariety(&bad, &q).unwrap().member);
    }

    #[test]
    fn boolean_presentations_agree_on_small_structures() {
        let sig = neg_or();
        let q = boolean_laws(&sig).unwrap();
        let mut algs = all_structures(&sig, 1);
        algs.extend(all_structures(&sig, 2));
        assert_eq!(algs.len(), 65);
        assert!(presentations_disagree(&q, &algs).unwrap().is_empty());
    }

    #[test]
    fn neg_imp_and_three_connective_laws() {
        let ni = Signature::new("neg_imp", [("neg", 1), ("imp", 2)]).unwrap();
        let noa = Signature::new("neg_or_and", [("neg", 1), ("or", 2), ("and", 2)]).unwrap();
        for sig in [ni, noa] {
            let q = boolean_laws(&sig).unwrap();
            let algs = recipe("powerset_BA(sizes=[1,2,4,8,16])", &sig).unwrap();
            assert!(presentations_disagree(&q, &algs).unwrap().is_empty());
            for a in &algs {
                assert!(in_quasivariety(a, &q).unwrap().member);
            }
            assert!(!in_quasivariety(&heyting_chain(&sig, 3).unwrap(), &q).unwrap().member);
        }
    }

    #[test]
    fn recipes() {
        let sig = neg_or();
        assert_eq!(recipe("powerset_BA(sizes=[1,2,4,8,16])", &sig).unwrap().len(), 5);
        assert!(recipe("powerset_BA(sizes=[3])", &sig).is_err());
        assert!(recipe("nope()", &sig).is_err());
        assert_eq!(recipe("chain(4)", &sig).unwrap()[0].size(), 4);
        assert!(matches!(
            boolean_powerset(&Signature::new("s", [("maj", 3)]).unwrap(), 1),
            Err(AlgebraError::UnsupportedConnective { .. })
        ));
    }

    #[test]
    fn heyting_boolean_laws_match_generator() {
        let sig = ha_sig();
        let q = heyting_boolean_laws(&sig).unwrap();
        let mut algs = recipe("heyting_chains(max=4)", &sig).unwrap();
        algs.extend(heyting_nonchains(&sig).unwrap());
        assert!(presentations_disagree(&q, &algs).unwrap().is_empty());
    }
}
