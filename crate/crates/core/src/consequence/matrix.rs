use std::collections::BTreeSet;

use crate::algebra::{for_each_tuple, AlgebraError, CompiledTerm, Elem, FiniteAlgebra};
use crate::syntax::{Formula, Signature};

/// A finite algebra with a set of designated values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalMatrix {
    pub algebra: FiniteAlgebra,
    designated: Vec<bool>,
}

impl LogicalMatrix {
    pub fn new(algebra: FiniteAlgebra, designated: &[Elem]) -> Result<Self, AlgebraError> {
        let mut mask = vec![false; algebra.size()];
        for &d in designated {
            let slot = mask.get_mut(d as usize).ok_or_else(|| {
                AlgebraError::Invalid(format!(
                    "designated value {d} outside carrier of size {}",
                    algebra.size()
                ))
            })?;
            *slot = true;
        }
        Ok(LogicalMatrix {
            algebra,
            designated: mask,
        })
    }

    pub fn sig(&self) -> &Signature {
        self.algebra.sig()
    }

    pub fn is_designated(&self, a: Elem) -> bool {
        self.designated[a as usize]
    }

    pub fn designated(&self) -> Vec<Elem> {
        self.algebra.elements().filter(|&a| self.is_designated(a)).collect()
    }

    /// Same designated set on another algebra with the same carrier.
    pub fn with_algebra(&self, algebra: FiniteAlgebra) -> Self {
        debug_assert_eq!(algebra.size(), self.algebra.size());
        LogicalMatrix {
            algebra,
            designated: self.designated.clone(),
        }
    }
}

/// Renames the variables occurring in `formulas` to `x0..x_{m-1}` (in
/// increasing order) and returns `m`.
fn densify(formulas: &[&Formula]) -> (Vec<Formula>, usize) {
    let vars: BTreeSet<u32> = formulas.iter().flat_map(|f| f.vars()).collect();
    let order: Vec<u32> = vars.into_iter().collect();
    let rename = |i: u32| {
        order
            .binary_search(&i)
            .ok()
            .map(|k| Formula::Var(k as u32))
    };
    let out = formulas.iter().map(|f| f.substitute_with(&rename)).collect();
    (out, order.len())
}

/// `Γ ⊨ ψ` over a family of matrices, exhaustively over valuations of the
/// occurring variables.
pub fn matrix_entails(
    family: &[LogicalMatrix],
    gamma: &[Formula],
    psi: &Formula,
) -> Result<bool, AlgebraError> {
    let all: Vec<&Formula> = gamma.iter().chain(std::iter::once(psi)).collect();
    let (dense, nv) = densify(&all);
    for m in family {
        let code = dense
            .iter()
            .map(|f| m.algebra.compile(f))
            .collect::<Result<Vec<CompiledTerm>, _>>()?;
        let (premises, goal) = code.split_at(code.len() - 1);
        let mut stack = Vec::new();
        let mut refuted = false;
        for_each_tuple(m.algebra.size(), nv, |env| {
            if refuted {
                return;
            }
            if premises
                .iter()
                .all(|p| m.is_designated(p.eval(&m.algebra, env, &mut stack)))
                && !m.is_designated(goal[0].eval(&m.algebra, env, &mut stack))
            {
                refuted = true;
            }
        });
        if refuted {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Packed bit set over the points of a [`Semantics`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
            len: n,
        }
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut b = Bits::zeros(len);
        for i in (0..len).filter(|&i| f(i)) {
            b.set(i);
        }
        b
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn mask(&self, w: usize) -> u64 {
        let rem = self.len - 64 * w;
        if rem >= 64 {
            !0
        } else {
            (1u64 << rem) - 1
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// First point in the meet of `gamma` outside `self`.
    pub fn first_gap(&self, gamma: &[&Bits]) -> Option<usize> {
        (0..self.words.len()).find_map(|w| {
            let meet = gamma.iter().fold(self.mask(w), |acc, g| acc & g.words[w]);
            let gap = meet & !self.words[w];
            (gap != 0).then(|| 64 * w + gap.trailing_zeros() as usize)
        })
    }

    /// Whether the intersection of `gamma` (everything, when empty) lies in `self`.
    pub fn covers_meet(&self, gamma: &[&Bits]) -> bool {
        (0..self.words.len()).all(|w| {
            let meet = gamma.iter().fold(self.mask(w), |acc, g| acc & g.words[w]);
            meet & !self.words[w] == 0
        })
    }
}

/// Value vectors of formulas in `x0..x_{n-1}` over every (matrix, valuation)
/// point of a matrix family.
#[derive(Debug, Clone)]
pub struct Semantics {
    matrices: Vec<LogicalMatrix>,
    nvars: usize,
    /// (matrix index, valuation) per point, matrix-major.
    points: Vec<(usize, Vec<Elem>)>,
}

pub type Values = Vec<Elem>;

impl Semantics {
    pub fn new(matrices: Vec<LogicalMatrix>, nvars: usize) -> Self {
        let mut points = Vec::new();
        for (mi, m) in matrices.iter().enumerate() {
            for_each_tuple(m.algebra.size(), nvars, |v| points.push((mi, v.to_vec())));
        }
        Semantics {
            matrices,
            nvars,
            points,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn matrices(&self) -> &[LogicalMatrix] {
        &self.matrices
    }

    /// Values of `phi` (variables below `nvars`) at every point.
    pub fn values(&self, phi: &Formula) -> Result<Values, AlgebraError> {
        if phi.var_bound() as usize > self.nvars {
            return Err(AlgebraError::UnboundVariable(phi.var_bound() - 1));
        }
        let code = self
            .matrices
            .iter()
            .map(|m| m.algebra.compile(phi))
            .collect::<Result<Vec<_>, _>>()?;
        let mut stack = Vec::new();
        Ok(self
            .points
            .iter()
            .map(|(mi, v)| code[*mi].eval(&self.matrices[*mi].algebra, v, &mut stack))
            .collect())
    }

    /// Values of `schema(args)` computed pointwise from the argument values.
    pub fn apply(&self, schema: &Formula, args: &[&Values]) -> Result<Values, AlgebraError> {
        let code = self
            .matrices
            .iter()
            .map(|m| m.algebra.compile(schema))
            .collect::<Result<Vec<_>, _>>()?;
        let mut stack = Vec::new();
        let mut env = vec![0; args.len()];
        Ok((0..self.points.len())
            .map(|p| {
                for (slot, a) in env.iter_mut().zip(args) {
                    *slot = a[p];
                }
                let mi = self.points[p].0;
                code[mi].eval(&self.matrices[mi].algebra, &env, &mut stack)
            })
            .collect())
    }

    pub fn designation(&self, values: &[Elem]) -> Bits {
        let mut b = Bits::zeros(self.points.len());
        for (p, &v) in values.iter().enumerate() {
            if self.matrices[self.points[p].0].is_designated(v) {
                b.set(p);
            }
        }
        b
    }

    /// Describes point `p` as `matrix #i, x0=a, x1=b`.
    pub fn describe_point(&self, p: usize) -> String {
        let (mi, v) = &self.points[p];
        let vals: Vec<String> = v.iter().enumerate().map(|(i, a)| format!("x{i}={a}")).collect();
        format!("matrix #{mi} [{}]", vals.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::syntax::parse_formula;

    fn neg_or() -> Signature {
        Signature::new("neg_or", [("neg", 1), ("or", 2)]).unwrap()
    }

    fn cpl() -> Vec<LogicalMatrix> {
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        vec![LogicalMatrix::new(ba, &[1]).unwrap()]
    }

    fn p(s: &str) -> Formula {
        parse_formula(s, &neg_or()).unwrap()
    }

    #[test]
    fn disjunction_introduction_and_non_tautology() {
        assert!(matrix_entails(&cpl(), &[p("x0")], &p("or(x0,x1)")).unwrap());
        assert!(!matrix_entails(&cpl(), &[], &p("x0")).unwrap());
        assert!(matrix_entails(&cpl(), &[], &p("or(x5,neg(x5))")).unwrap());
    }

    #[test]
    fn sparse_variables_are_densified() {
        assert!(matrix_entails(&cpl(), &[p("x7"), p("neg(x7)")], &p("x3")).unwrap());
        assert!(!matrix_entails(&cpl(), &[p("x7")], &p("x3")).unwrap());
    }

    #[test]
    fn empty_designated_set_entails_nothing_but_from_premises() {
        let ba = catalog::boolean_powerset(&neg_or(), 1).unwrap();
        let m = vec![LogicalMatrix::new(ba, &[]).unwrap()];
        assert!(!matrix_entails(&m, &[], &p("or(x0,neg(x0))")).unwrap());
        assert!(matrix_entails(&m, &[p("x0")], &p("x1")).unwrap());
    }

    #[test]
    fn semantics_values_and_apply_agree() {
        let sem = Semantics::new(cpl(), 2);
        assert_eq!(sem.num_points(), 4);
        let a = sem.values(&p("x0")).unwrap();
        let b = sem.values(&p("neg(x1)")).unwrap();
        let direct = sem.values(&p("or(x0,neg(x1))")).unwrap();
        assert_eq!(sem.apply(&p("or(x0,x1)"), &[&a, &b]).unwrap(), direct);
        let d = sem.designation(&direct);
        assert!(d.covers_meet(&[&sem.designation(&a)]));
        assert!(!d.covers_meet(&[]));
    }
}
