use std::collections::HashMap;

use super::structure::for_each_tuple;
use super::{AlgebraError, Elem, FiniteAlgebra, QuasivarietySpec};

pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Reads `LWB_SIZE_CAP`, falling back to [`DEFAULT_SIZE_CAP`].
pub fn size_cap_from_env() -> usize {
    std::env::var("LWB_SIZE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

/// The free algebra on `n` generators, with the coordinates it lives in.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    /// Element standing for `x_i`.
    pub generators: Vec<Elem>,
    /// Each element as a tuple over the (generator algebra, valuation) coordinates.
    pub tuples: Vec<Vec<Elem>>,
}

/// Subalgebra of `∏_{(A, v)} A` generated by the projection tuples, where
/// `A` ranges over the generators of `q` and `v` over all maps `n → A`.
pub fn free_algebra(q: &QuasivarietySpec, n: usize, cap: usize) -> Result<FreeAlgebra, AlgebraError> {
    let gens = q
        .generators
        .as_ref()
        .ok_or_else(|| AlgebraError::NoGenerators(q.name.clone()))?;
    let sig = &q.sig;
    if n == 0 && sig.constants().next().is_none() {
        return Err(AlgebraError::EmptyGeneration);
    }
    // coordinates: (generator index, valuation)
    let mut coords: Vec<(usize, Vec<Elem>)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for_each_tuple(g.size(), n, |v| coords.push((gi, v.to_vec())));
    }

    let mut tuples: Vec<Vec<Elem>> = Vec::new();
    let mut index: HashMap<Vec<Elem>, Elem> = HashMap::new();
    let mut intern = |t: Vec<Elem>, tuples: &mut Vec<Vec<Elem>>| -> Result<Elem, AlgebraError> {
        if let Some(&e) = index.get(&t) {
            return Ok(e);
        }
        if tuples.len() >= cap {
            return Err(AlgebraError::SizeCap { cap });
        }
        let e = tuples.len() as Elem;
        index.insert(t.clone(), e);
        tuples.push(t);
        Ok(e)
    };

    let mut generators = Vec::with_capacity(n);
    for i in 0..n {
        let t = coords.iter().map(|(_, v)| v[i]).collect();
        generators.push(intern(t, &mut tuples)?);
    }

    let conns = sig.connectives();
    let mut frontier = 0usize;
    // constants first, then close under operations semi-naively
    loop {
        let known = tuples.len();
        for (ci, c) in conns.iter().enumerate() {
            if c.arity > 0 && known == 0 {
                continue;
            }
            let mut fresh = Vec::new();
            let mut failed = None;
            for_each_tuple(known, c.arity, |idx| {
                if failed.is_some() {
                    return;
                }
                if c.arity > 0 && idx.iter().all(|&i| (i as usize) < frontier) {
                    return;
                }
                if c.arity == 0 && frontier > 0 {
                    return;
                }
                let t: Vec<Elem> = coords
                    .iter()
                    .enumerate()
                    .map(|(k, (gi, _))| {
                        let args: Vec<Elem> = idx.iter().map(|&i| tuples[i as usize][k]).collect();
                        gens[*gi].op(ci, &args)
                    })
                    .collect();
                fresh.push(t);
            });
            for t in fresh {
                if let Err(e) = intern(t, &mut tuples) {
                    failed = Some(e);
                    break;
                }
            }
            if let Some(e) = failed {
                return Err(e);
            }
        }
        if tuples.len() == known {
            break;
        }
        frontier = known;
    }

    let size = tuples.len();
    let algebra = FiniteAlgebra::from_fn(sig, size, |ci, args| {
        let t: Vec<Elem> = coords
            .iter()
            .enumerate()
            .map(|(k, (gi, _))| {
                let a: Vec<Elem> = args.iter().map(|&i| tuples[i as usize][k]).collect();
                gens[*gi].op(ci, &a)
            })
            .collect();
        index[&t]
    })?;
    Ok(FreeAlgebra {
        algebra,
        generators,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, enumerate_homs, in_quasivariety, is_isomorphic};
    use crate::syntax::Signature;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    fn ba(sig: &Signature) -> QuasivarietySpec {
        QuasivarietySpec::from_generators("ba", sig, vec![catalog::boolean_powerset(sig, 1).unwrap()])
            .unwrap()
    }

    #[test]
    fn no_generators_no_constants_errors() {
        assert_eq!(
            free_algebra(&ba(&neg_or()), 0, 64).unwrap_err(),
            AlgebraError::EmptyGeneration
        );
    }

    #[test]
    fn constants_give_two_elements() {
        let sig = Signature::new("s", [("top", 0), ("neg", 1), ("or", 2)]).unwrap();
        assert_eq!(free_algebra(&ba(&sig), 0, 64).unwrap().algebra.size(), 2);
    }

    #[test]
    fn free_boolean_sizes() {
        let q = ba(&neg_or());
        let f1 = free_algebra(&q, 1, 64).unwrap();
        assert_eq!(f1.algebra.size(), 4);
        assert!(is_isomorphic(&f1.algebra, &catalog::boolean_powerset(&neg_or(), 2).unwrap()));
        let f2 = free_algebra(&q, 2, 64).unwrap();
        assert_eq!(f2.algebra.size(), 16);
        assert_eq!(f2.generators, vec![0, 1]);
    }

    #[test]
    fn size_cap_enforced() {
        let q = ba(&neg_or());
        assert_eq!(
            free_algebra(&q, 2, 10).unwrap_err(),
            AlgebraError::SizeCap { cap: 10 }
        );
    }

    #[test]
    fn free_universal_property() {
        let sig = neg_or();
        let q = ba(&sig);
        let f = free_algebra(&q, 2, 64).unwrap();
        assert!(in_quasivariety(&f.algebra, &q).unwrap().member);
        for b in [1, 2, 3].map(|k| catalog::boolean_powerset(&sig, k).unwrap()) {
            let homs = enumerate_homs(&f.algebra, &b).unwrap();
            for x in b.elements() {
                for y in b.elements() {
                    let n = homs
                        .iter()
                        .filter(|h| h[f.generators[0] as usize] == x && h[f.generators[1] as usize] == y)
                        .count();
                    assert_eq!(n, 1);
                }
            }
        }
    }
}
