use std::fmt;

use super::structure::for_each_tuple;
use super::{AlgebraError, Elem, FiniteAlgebra};

/// A partition of `0..k`, stored as "least member of my block".
///
/// The canonical form makes equality of congruences structural equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    rep: Vec<Elem>,
}

impl Congruence {
    pub fn diagonal(k: usize) -> Self {
        Congruence {
            rep: (0..k as Elem).collect(),
        }
    }

    pub fn total(k: usize) -> Self {
        Congruence { rep: vec![0; k] }
    }

    /// From an arbitrary block labelling (`labels[a] == labels[b]` iff related).
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let rep = (0..labels.len())
            .map(|i| {
                (0..=i)
                    .find(|&j| labels[j] == labels[i])
                    .expect("i itself matches") as Elem
            })
            .collect();
        Congruence { rep }
    }

    /// The kernel of a map.
    pub fn kernel(map: &[Elem]) -> Self {
        Congruence::from_labels(map)
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self, a: Elem) -> Elem {
        self.rep[a as usize]
    }

    pub fn reps(&self) -> &[Elem] {
        &self.rep
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.rep[a as usize] == self.rep[b as usize]
    }

    pub fn num_blocks(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|(i, &r)| *i as Elem == r)
            .count()
    }

    /// Blocks ordered by least element.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out: Vec<Vec<Elem>> = Vec::new();
        let mut index = vec![usize::MAX; self.rep.len()];
        for (a, &r) in self.rep.iter().enumerate() {
            if a as Elem == r {
                index[a] = out.len();
                out.push(vec![a as Elem]);
            } else {
                out[index[r as usize]].push(a as Elem);
            }
        }
        out
    }

    /// Block number of each element (blocks ordered by least element).
    pub fn block_index(&self) -> Vec<Elem> {
        let mut index = vec![0 as Elem; self.rep.len()];
        let mut next = 0;
        for a in 0..self.rep.len() {
            let r = self.rep[a] as usize;
            if r == a {
                index[a] = next;
                next += 1;
            } else {
                index[a] = index[r];
            }
        }
        index
    }

    pub fn is_diagonal(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| i as Elem == r)
    }

    pub fn is_total(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.rep.len() == other.rep.len()
            && (0..self.rep.len()).all(|a| other.related(a as Elem, self.rep[a]))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<(Elem, Elem)> = self.rep.iter().copied().zip(other.rep.iter().copied()).collect();
        Congruence::from_labels(&labels)
    }

    /// Compatible with every operation of `alg`.
    pub fn is_compatible(&self, alg: &FiniteAlgebra) -> bool {
        if self.rep.len() != alg.size() {
            return false;
        }
        for (ci, c) in alg.sig().connectives().iter().enumerate() {
            let mut ok = true;
            for_each_tuple(alg.size(), c.arity, |args| {
                if !ok {
                    return;
                }
                let reps: Vec<Elem> = args.iter().map(|&a| self.rep(a)).collect();
                if !self.related(alg.op(ci, args), alg.op(ci, &reps)) {
                    ok = false;
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

struct UnionFind {
    parent: Vec<Elem>,
}

impl UnionFind {
    fn new(k: usize) -> Self {
        UnionFind {
            parent: (0..k as Elem).collect(),
        }
    }

    fn find(&mut self, a: Elem) -> Elem {
        let mut r = a;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = a;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    /// Keeps the smaller element as root.
    fn union(&mut self, a: Elem, b: Elem) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let k = self.parent.len();
        let rep = (0..k as Elem).map(|a| self.find(a)).collect();
        Congruence { rep }
    }
}

/// The least congruence of `alg` containing `pairs`.
///
/// Alternates equivalence closure (union-find) with one-step compatibility
/// closure until nothing changes.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Congruence {
    extend_congruence(alg, &Congruence::diagonal(alg.size()), pairs)
}

/// The least congruence containing `base` and `pairs`.
pub fn extend_congruence(
    alg: &FiniteAlgebra,
    base: &Congruence,
    pairs: &[(Elem, Elem)],
) -> Congruence {
    let k = alg.size();
    let mut uf = UnionFind::new(k);
    for a in 0..k as Elem {
        uf.union(a, base.rep(a));
    }
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    loop {
        let mut changed = false;
        for (ci, c) in alg.sig().connectives().iter().enumerate() {
            if c.arity == 0 {
                continue;
            }
            let mut moved = vec![0 as Elem; c.arity];
            for_each_tuple(k, c.arity, |args| {
                let here = alg.op(ci, args);
                for i in 0..c.arity {
                    let r = uf.find(args[i]);
                    if r == args[i] {
                        continue;
                    }
                    moved.copy_from_slice(args);
                    moved[i] = r;
                    let there = alg.op(ci, &moved);
                    if uf.union(here, there) {
                        changed = true;
                    }
                }
            });
        }
        if !changed {
            return uf.into_congruence();
        }
    }
}

/// `alg / theta` with its projection; blocks are numbered by least element.
pub fn quotient_algebra(
    alg: &FiniteAlgebra,
    theta: &Congruence,
) -> Result<(FiniteAlgebra, Vec<Elem>), AlgebraError> {
    if theta.size() != alg.size() {
        return Err(AlgebraError::CongruenceSize {
            expected: alg.size(),
            found: theta.size(),
        });
    }
    if !theta.is_compatible(alg) {
        return Err(AlgebraError::NotCompatible(theta.to_string()));
    }
    let index = theta.block_index();
    let blocks = theta.blocks();
    let size = blocks.len();
    let quotient = FiniteAlgebra::from_fn(alg.sig(), size, |ci, args| {
        let reps: Vec<Elem> = args.iter().map(|&b| blocks[b as usize][0]).collect();
        index[alg.op(ci, &reps) as usize]
    })?;
    Ok((quotient, index))
}

/// Every congruence of `alg`, enumerated through all set partitions
/// (restricted growth strings). Exponential; meant for small carriers.
pub fn all_congruences(alg: &FiniteAlgebra) -> Vec<Congruence> {
    let k = alg.size();
    let mut out = Vec::new();
    let mut labels = vec![0usize; k];
    fn rec(
        i: usize,
        max: usize,
        labels: &mut Vec<usize>,
        alg: &FiniteAlgebra,
        out: &mut Vec<Congruence>,
    ) {
        if i == labels.len() {
            let c = Congruence::from_labels(labels);
            if c.is_compatible(alg) {
                out.push(c);
            }
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, alg, out);
        }
    }
    if k == 0 {
        return out;
    }
    labels[0] = 0;
    rec(1, 0, &mut labels, alg, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, is_hom, is_isomorphic};
    use crate::syntax::Signature;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    #[test]
    fn empty_pairs_give_diagonal() {
        let a = catalog::heyting_chain(&neg_or(), 3).unwrap();
        assert!(congruence_generated(&a, &[]).is_diagonal());
    }

    #[test]
    fn chain_merge_top_block() {
        // 0 < m < 1 as 0, 1, 2
        let a = catalog::heyting_chain(&neg_or(), 3).unwrap();
        let theta = congruence_generated(&a, &[(1, 2)]);
        assert_eq!(theta.blocks(), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn two_element_ba_merge_is_total() {
        let a = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        assert!(congruence_generated(&a, &[(0, 1)]).is_total());
    }

    #[test]
    fn quotients() {
        let sig = neg_or();
        let chain = catalog::heyting_chain(&sig, 3).unwrap();
        let (q, proj) = quotient_algebra(&chain, &Congruence::diagonal(3)).unwrap();
        assert_eq!(q, chain);
        assert_eq!(proj, vec![0, 1, 2]);

        let (q, _) = quotient_algebra(&chain, &Congruence::total(3)).unwrap();
        assert_eq!(q.size(), 1);

        let theta = congruence_generated(&chain, &[(1, 2)]);
        let (q, proj) = quotient_algebra(&chain, &theta).unwrap();
        assert!(is_isomorphic(&q, &catalog::boolean_powerset(&sig, 1).unwrap()));
        assert!(is_hom(&chain, &q, &proj));
    }

    #[test]
    fn incompatible_partition_rejected() {
        let chain = catalog::heyting_chain(&neg_or(), 3).unwrap();
        // {0, m} merged forces ¬0 = 1 and ¬m = 0 together
        let theta = Congruence::from_labels(&[0, 0, 1]);
        assert!(matches!(
            quotient_algebra(&chain, &theta),
            Err(AlgebraError::NotCompatible(_))
        ));
    }

    #[test]
    fn generated_is_least_among_all() {
        let sig = neg_or();
        let a = catalog::heyting_chain(&sig, 4).unwrap();
        let all = all_congruences(&a);
        for x in a.elements() {
            for y in a.elements() {
                let g = congruence_generated(&a, &[(x, y)]);
                assert!(all.contains(&g));
                for c in all.iter().filter(|c| c.related(x, y)) {
                    assert!(g.refines(c));
                }
            }
        }
    }

    #[test]
    fn refinement_and_meet() {
        let a = Congruence::from_labels(&[0, 0, 1, 1]);
        let b = Congruence::from_labels(&[0, 1, 1, 1]);
        let m = a.meet(&b);
        assert_eq!(m.blocks(), vec![vec![0], vec![1], vec![2, 3]]);
        assert!(m.refines(&a) && m.refines(&b));
        assert!(!a.refines(&b));
        assert_eq!(Congruence::kernel(&[5, 3, 5]).blocks(), vec![vec![0, 2], vec![1]]);
    }
}
