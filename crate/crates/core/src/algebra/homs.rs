use super::structure::for_each_tuple;
use super::{AlgebraError, Elem, FiniteAlgebra};

/// A map between carriers, `map[a]` being the image of `a`.
pub type Hom = Vec<Elem>;

/// True iff `map` commutes with every operation of `a` and `b`.
pub fn is_hom(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem]) -> bool {
    if map.len() != a.size() || map.iter().any(|&v| v as usize >= b.size()) {
        return false;
    }
    for (ci, c) in a.sig().connectives().iter().enumerate() {
        let mut ok = true;
        let mut image = vec![0; c.arity];
        for_each_tuple(a.size(), c.arity, |args| {
            if !ok {
                return;
            }
            for (k, &x) in args.iter().enumerate() {
                image[k] = map[x as usize];
            }
            if map[a.op(ci, args) as usize] != b.op(ci, &image) {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

/// How to rebuild a finite algebra from a few generators: each step names a
/// new element as an operation applied to earlier ones.
#[derive(Debug, Clone)]
pub struct Construction {
    pub generators: Vec<Elem>,
    pub steps: Vec<(Elem, usize, Vec<Elem>)>,
}

impl Construction {
    /// Greedy small generating set together with a construction sequence.
    pub fn of(alg: &FiniteAlgebra) -> Construction {
        let k = alg.size();
        let mut inside = vec![false; k];
        let mut steps = Vec::new();
        close(alg, &mut inside, &mut steps);
        let mut generators = Vec::new();
        while inside.iter().any(|&b| !b) {
            // pick the outside element whose addition covers the most
            let mut best: Option<(usize, Elem)> = None;
            for e in 0..k as Elem {
                if inside[e as usize] {
                    continue;
                }
                let mut trial = inside.clone();
                trial[e as usize] = true;
                let mut scratch = Vec::new();
                close(alg, &mut trial, &mut scratch);
                let covered = trial.iter().filter(|&&b| b).count();
                if best.map_or(true, |(c, _)| covered > c) {
                    best = Some((covered, e));
                }
            }
            let (_, e) = best.expect("some element lies outside");
            inside[e as usize] = true;
            generators.push(e);
            close(alg, &mut inside, &mut steps);
        }
        Construction { generators, steps }
    }
}

/// Closes `inside` under the operations, logging how each new element arose.
fn close(alg: &FiniteAlgebra, inside: &mut [bool], steps: &mut Vec<(Elem, usize, Vec<Elem>)>) {
    loop {
        let members: Vec<Elem> = (0..alg.size() as Elem)
            .filter(|&e| inside[e as usize])
            .collect();
        let mut changed = false;
        for (ci, c) in alg.sig().connectives().iter().enumerate() {
            let m = members.len();
            if c.arity > 0 && m == 0 {
                continue;
            }
            let mut fresh = Vec::new();
            for_each_tuple(m, c.arity, |idx| {
                let args: Vec<Elem> = idx.iter().map(|&i| members[i as usize]).collect();
                let r = alg.op(ci, &args);
                if !inside[r as usize] {
                    inside[r as usize] = true;
                    fresh.push((r, ci, args));
                }
            });
            if !fresh.is_empty() {
                changed = true;
                steps.extend(fresh);
            }
        }
        if !changed {
            return;
        }
    }
}

/// All homomorphisms `a → b`, in odometer order over the images of a greedy
/// generating set of `a`.
pub fn enumerate_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Hom>, AlgebraError> {
    if a.sig() != b.sig() {
        return Err(AlgebraError::SignatureMismatch {
            expected: a.sig().to_string(),
            found: b.sig().to_string(),
        });
    }
    let cons = Construction::of(a);
    let homs = homs_via(a, b, &cons);
    debug_assert!(
        a.size() > 4 || b.size().pow(a.size() as u32) > 4096 || {
            let mut sorted = homs.clone();
            sorted.sort();
            sorted == brute_force_homs(a, b)
        },
        "generator-based hom search disagrees with brute force"
    );
    Ok(homs)
}

/// Homomorphisms `a → b` sending each `(x, y)` in `fixed` to `x ↦ y`.
pub fn homs_extending(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    fixed: &[(Elem, Elem)],
) -> Result<Vec<Hom>, AlgebraError> {
    Ok(enumerate_homs(a, b)?
        .into_iter()
        .filter(|h| fixed.iter().all(|&(x, y)| h[x as usize] == y))
        .collect())
}

fn homs_via(a: &FiniteAlgebra, b: &FiniteAlgebra, cons: &Construction) -> Vec<Hom> {
    let g = cons.generators.len();
    let mut out = Vec::new();
    for_each_tuple(b.size(), g, |images| {
        let mut map = vec![Elem::MAX; a.size()];
        for (&gen, &img) in cons.generators.iter().zip(images) {
            map[gen as usize] = img;
        }
        for (e, ci, args) in &cons.steps {
            let imgs: Vec<Elem> = args.iter().map(|&x| map[x as usize]).collect();
            map[*e as usize] = b.op(*ci, &imgs);
        }
        if is_hom(a, b, &map) {
            out.push(map);
        }
    });
    out
}

/// Reference search over all `|b|^|a|` maps, lexicographic order.
pub(crate) fn brute_force_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Hom> {
    let mut out = Vec::new();
    for_each_tuple(b.size(), a.size(), |map| {
        if is_hom(a, b, map) {
            out.push(map.to_vec());
        }
    });
    out.sort();
    out
}

/// Some isomorphism `a → b`, if one exists.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Hom> {
    if a.size() != b.size() || a.sig() != b.sig() {
        return None;
    }
    let cons = Construction::of(a);
    let g = cons.generators.len();
    let mut found = None;
    for_each_tuple(b.size(), g, |images| {
        if found.is_some() {
            return;
        }
        let mut map = vec![Elem::MAX; a.size()];
        for (&gen, &img) in cons.generators.iter().zip(images) {
            map[gen as usize] = img;
        }
        for (e, ci, args) in &cons.steps {
            let imgs: Vec<Elem> = args.iter().map(|&x| map[x as usize]).collect();
            map[*e as usize] = b.op(*ci, &imgs);
        }
        let mut seen = vec![false; b.size()];
        let bijective = map.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true));
        if bijective && is_hom(a, b, &map) {
            found = Some(map);
        }
    });
    found
}

pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

pub fn is_surjective(map: &[Elem], codomain_size: usize) -> bool {
    let mut hit = vec![false; codomain_size];
    for &v in map {
        if (v as usize) < codomain_size {
            hit[v as usize] = true;
        }
    }
    hit.into_iter().all(|b| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::syntax::Signature;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    #[test]
    fn two_element_ba_has_only_identity() {
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        assert_eq!(enumerate_homs(&ba, &ba).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn into_trivial_algebra_exactly_one() {
        let ba = catalog::boolean_powerset(&neg_or(), 2).unwrap();
        let one = FiniteAlgebra::trivial(&neg_or());
        assert_eq!(enumerate_homs(&ba, &one).unwrap(), vec![vec![0; 4]]);
    }

    #[test]
    fn from_trivial_needs_fixed_point() {
        // a point b with ¬b = b and b ∨ b = b: none in a Boolean algebra
        let one = FiniteAlgebra::trivial(&neg_or());
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        assert!(enumerate_homs(&one, &ba).unwrap().is_empty());
        let chain = catalog::heyting_chain(&neg_or(), 3).unwrap();
        assert!(enumerate_homs(&one, &chain).unwrap().is_empty());
    }

    #[test]
    fn matches_brute_force_on_small_algebras() {
        let sig = neg_or();
        let algs = [
            FiniteAlgebra::trivial(&sig),
            catalog::boolean_powerset(&sig, 1).unwrap(),
            catalog::boolean_powerset(&sig, 2).unwrap(),
            catalog::heyting_chain(&sig, 3).unwrap(),
            catalog::heyting_chain(&sig, 4).unwrap(),
        ];
        for a in &algs {
            for b in &algs {
                let mut fast = enumerate_homs(a, b).unwrap();
                fast.sort();
                assert_eq!(fast, brute_force_homs(a, b));
            }
        }
    }

    #[test]
    fn signature_mismatch() {
        let other = Signature::new("o", [("neg", 1)]).unwrap();
        let a = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        let b = catalog::boolean_powerset(&other, 1).unwrap();
        assert!(enumerate_homs(&a, &b).is_err());
    }

    #[test]
    fn construction_rebuilds_whole_carrier() {
        let ba = catalog::boolean_powerset(&neg_or(), 4).unwrap();
        let c = Construction::of(&ba);
        assert!(c.generators.len() <= 3);
        assert_eq!(c.generators.len() + c.steps.len(), 16);
    }

    #[test]
    fn isomorphism_search() {
        let sig = neg_or();
        let a = catalog::boolean_powerset(&sig, 2).unwrap();
        // relabel: swap elements 1 and 2
        let perm = [0u32, 2, 1, 3];
        let b = FiniteAlgebra::from_fn(&sig, 4, |ci, args| {
            let inv: Vec<Elem> = args.iter().map(|&x| perm[x as usize]).collect();
            perm[a.op(ci, &inv) as usize]
        })
        .unwrap();
        let iso = find_isomorphism(&a, &b).unwrap();
        assert!(is_hom(&a, &b, &iso));
        assert!(!is_isomorphic(&a, &catalog::heyting_chain(&sig, 4).unwrap()));
    }
}
