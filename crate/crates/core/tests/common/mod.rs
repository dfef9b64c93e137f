//! Reference computations written without the library's deciders: truth
//! tables, Heyting chains and brute-force congruence search on raw tables.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lwb_core::algebra::{Elem, FiniteAlgebra};
use lwb_core::syntax::{Formula, Signature};

/// Two-valued evaluation; `neg`, `or`, `and`, `imp` only.
pub fn tv(f: &Formula, v: &[bool]) -> bool {
    match f.as_var() {
        Some(i) => v[i as usize],
        None => {
            let a: Vec<bool> = f.args().iter().map(|g| tv(g, v)).collect();
            match f.conn().unwrap().as_str() {
                "neg" => !a[0],
                "or" => a[0] || a[1],
                "and" => a[0] && a[1],
                "imp" => !a[0] || a[1],
                c => panic!("no truth table for {c}"),
            }
        }
    }
}

pub fn valuations(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n)
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
        .collect()
}

/// The truth function of `f` in `n` variables, as a bit vector.
pub fn truth_fn(f: &Formula, n: usize) -> Vec<bool> {
    valuations(n).iter().map(|v| tv(f, v)).collect()
}

pub fn tautology(f: &Formula, n: usize) -> bool {
    truth_fn(f, n).into_iter().all(|b| b)
}

/// Evaluation in the Heyting chain `0 < 1 < ... < k-1`.
pub fn chain_eval(f: &Formula, k: u32, env: &[u32]) -> u32 {
    let top = k - 1;
    let imp = |a: u32, b: u32| if a <= b { top } else { b };
    match f.as_var() {
        Some(i) => env[i as usize],
        None => {
            let a: Vec<u32> = f.args().iter().map(|g| chain_eval(g, k, env)).collect();
            match f.conn().unwrap().as_str() {
                "neg" => imp(a[0], 0),
                "or" => a[0].max(a[1]),
                "and" => a[0].min(a[1]),
                "imp" => imp(a[0], a[1]),
                c => panic!("no chain table for {c}"),
            }
        }
    }
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            cur.push(b);
            go(cur, n, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// All argument tuples of the given arity over `0..size`.
pub fn tuples(size: usize, arity: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size as Elem).map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
    }
    out
}

/// Whether the partition `labels` is compatible with every operation.
pub fn compatible(m: &FiniteAlgebra, labels: &[usize]) -> bool {
    for c in m.sig().connectives() {
        let ts = tuples(m.size(), c.arity);
        for a in &ts {
            for b in &ts {
                let same = a.iter().zip(b).all(|(x, y)| labels[*x as usize] == labels[*y as usize]);
                if same {
                    let fa = m.op_named(c.name.as_str(), a).unwrap();
                    let fb = m.op_named(c.name.as_str(), b).unwrap();
                    if labels[fa as usize] != labels[fb as usize] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Tables of `m / labels`, keyed by connective; block `i` is label `i`.
pub fn quotient_tables(m: &FiniteAlgebra, labels: &[usize]) -> (usize, BTreeMap<String, Vec<usize>>) {
    let k = labels.iter().max().unwrap() + 1;
    let mut rep = vec![0; k];
    for (x, &l) in labels.iter().enumerate().rev() {
        rep[l] = x;
    }
    let mut out = BTreeMap::new();
    for c in m.sig().connectives() {
        let t = tuples(k, c.arity)
            .into_iter()
            .map(|blocks| {
                let args: Vec<Elem> = blocks.iter().map(|&b| rep[b as usize] as Elem).collect();
                labels[m.op_named(c.name.as_str(), &args).unwrap() as usize]
            })
            .collect();
        out.insert(c.name.to_string(), t);
    }
    (k, out)
}

/// Whether tables over `{neg, or}` (others ignored) form a Boolean algebra,
/// by Huntington's axioms: `or` commutative and associative, and
/// `n(n(a) + b) + n(n(a) + n(b)) = a`.
pub fn is_boolean(k: usize, tables: &BTreeMap<String, Vec<usize>>) -> bool {
    let (neg, or) = (&tables["neg"], &tables["or"]);
    let j = |a: usize, b: usize| or[a * k + b];
    (0..k).all(|a| {
        (0..k).all(|b| {
            j(a, b) == j(b, a)
                && j(neg[j(neg[a], b)], neg[j(neg[a], neg[b])]) == a
                && (0..k).all(|c| j(j(a, b), c) == j(a, j(b, c)))
        })
    })
}

/// Truth functions in `n` variables reachable within `depth` applications
/// of `neg` and `or`, by closing truth tables directly.
pub fn truth_closure(n: usize, depth: usize) -> usize {
    use std::collections::BTreeSet;
    let rows = valuations(n);
    let mut seen: BTreeSet<Vec<bool>> = (0..n).map(|i| rows.iter().map(|v| v[i]).collect()).collect();
    for _ in 0..depth {
        let cur: Vec<Vec<bool>> = seen.iter().cloned().collect();
        for a in &cur {
            seen.insert(a.iter().map(|x| !x).collect());
            for b in &cur {
                seen.insert(a.iter().zip(b).map(|(x, y)| *x || *y).collect());
            }
        }
    }
    seen.len()
}

/// The least congruence of `m` whose quotient is Boolean, by exhausting
/// partitions. `None` when no candidate refines all the others.
pub fn least_boolean_congruence(m: &FiniteAlgebra) -> Option<Vec<usize>> {
    let good: Vec<Vec<usize>> = partitions(m.size())
        .into_iter()
        .filter(|l| compatible(m, l))
        .filter(|l| {
            let (k, t) = quotient_tables(m, l);
            is_boolean(k, &t)
        })
        .collect();
    let refines = |a: &[usize], b: &[usize]| {
        (0..a.len()).all(|x| (0..a.len()).all(|y| a[x] != a[y] || b[x] == b[y]))
    };
    good.iter().find(|c| good.iter().all(|d| refines(c, d))).cloned()
}

/// Whether two labelings induce the same equivalence relation.
pub fn same_partition<A: PartialEq, B: PartialEq>(a: &[A], b: &[B]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|x| (0..a.len()).all(|y| (a[x] == a[y]) == (b[x] == b[y])))
}

/// Maps `0..size -> 0..size` preserving the named unary and binary tables.
pub fn count_endomaps(m: &FiniteAlgebra, conns: &[&str]) -> usize {
    let k = m.size();
    tuples(k, k)
        .into_iter()
        .filter(|f| {
            conns.iter().all(|c| {
                let ar = m.sig().arity(c).unwrap();
                tuples(k, ar).iter().all(|a| {
                    let img: Vec<Elem> = a.iter().map(|&x| f[x as usize]).collect();
                    f[m.op_named(c, a).unwrap() as usize] == m.op_named(c, &img).unwrap()
                })
            })
        })
        .count()
}

pub fn sig(decls: &[&str]) -> Signature {
    let d: Vec<String> = decls.iter().map(|s| s.to_string()).collect();
    Signature::from_decls("oracle", &d).unwrap()
}
