use super::{Conn, Formula, Signature};

/// Every formula of `F(Σ)[nvars]` with depth at most `max_depth`, each once.
///
/// Order: by depth; within a depth by connective order; within a connective
/// lexicographically by the enumeration positions of the arguments. Depth 0
/// lists the variables, then the constants.
pub fn enumerate_formulas(sig: &Signature, nvars: usize, max_depth: usize) -> FormulaEnumeration {
    FormulaEnumeration::new(sig, nvars, max_depth)
}

/// Convenience: the full enumeration as a vector.
pub fn formulas_up_to(sig: &Signature, nvars: usize, max_depth: usize) -> Vec<Formula> {
    enumerate_formulas(sig, nvars, max_depth).collect()
}

/// Number of formulas `enumerate_formulas` yields, computed without building them.
pub fn count_formulas(sig: &Signature, nvars: usize, max_depth: usize) -> u128 {
    let base = nvars as u128 + sig.constants().count() as u128;
    let mut upto = base;
    for _ in 0..max_depth {
        let mut next = base;
        for c in sig.connectives().iter().filter(|c| c.arity > 0) {
            next = next.saturating_add(upto.saturating_pow(c.arity as u32));
        }
        upto = next;
    }
    upto
}

pub struct FormulaEnumeration {
    conns: Vec<(Conn, usize)>,
    max_depth: usize,
    /// Formulas of depth < `depth`, in enumeration order.
    below: Vec<Formula>,
    /// Index in `below` where depth `depth - 1` starts.
    prev_start: usize,
    /// Formulas of the current depth emitted so far (kept only if a deeper level follows).
    current: Vec<Formula>,
    depth: usize,
    conn_idx: usize,
    odometer: Vec<usize>,
    odometer_fresh: bool,
    base: std::vec::IntoIter<Formula>,
    done: bool,
}

impl FormulaEnumeration {
    fn new(sig: &Signature, nvars: usize, max_depth: usize) -> Self {
        let mut base: Vec<Formula> = (0..nvars as u32).map(Formula::Var).collect();
        base.extend(sig.constants().map(|c| Formula::constant(c.name.clone())));
        FormulaEnumeration {
            conns: sig
                .connectives()
                .iter()
                .filter(|c| c.arity > 0)
                .map(|c| (c.name.clone(), c.arity))
                .collect(),
            max_depth,
            below: Vec::new(),
            prev_start: 0,
            current: Vec::new(),
            depth: 0,
            conn_idx: 0,
            odometer: Vec::new(),
            odometer_fresh: true,
            base: base.into_iter(),
            done: false,
        }
    }

    fn advance_level(&mut self) -> bool {
        if self.depth >= self.max_depth {
            return false;
        }
        let fresh = std::mem::take(&mut self.current);
        if fresh.is_empty() {
            return false;
        }
        self.prev_start = self.below.len();
        self.below.extend(fresh);
        self.depth += 1;
        self.conn_idx = 0;
        self.odometer_fresh = true;
        true
    }

    /// Next argument tuple for the current connective with at least one
    /// argument of depth exactly `depth - 1`.
    fn next_tuple(&mut self, arity: usize) -> Option<Vec<usize>> {
        let n = self.below.len();
        loop {
            if self.odometer_fresh {
                self.odometer = vec![0; arity];
                self.odometer_fresh = false;
            } else {
                let mut k = arity;
                loop {
                    if k == 0 {
                        return None;
                    }
                    k -= 1;
                    self.odometer[k] += 1;
                    if self.odometer[k] < n {
                        break;
                    }
                    self.odometer[k] = 0;
                }
            }
            if self.odometer.iter().any(|&i| i >= self.prev_start) {
                return Some(self.odometer.clone());
            }
        }
    }
}

impl Iterator for FormulaEnumeration {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        if self.done {
            return None;
        }
        if self.depth == 0 {
            if let Some(f) = self.base.next() {
                if self.max_depth > 0 {
                    self.current.push(f.clone());
                }
                return Some(f);
            }
            if !self.advance_level() {
                self.done = true;
                return None;
            }
        }
        loop {
            if self.conn_idx >= self.conns.len() {
                if !self.advance_level() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            let (conn, arity) = self.conns[self.conn_idx].clone();
            match self.next_tuple(arity) {
                Some(tuple) => {
                    let args = tuple.iter().map(|&i| self.below[i].clone()).collect();
                    let f = Formula::app(conn, args);
                    if self.depth < self.max_depth {
                        self.current.push(f.clone());
                    }
                    return Some(f);
                }
                None => {
                    self.conn_idx += 1;
                    self.odometer_fresh = true;
                }
            }
        }
    }
}
