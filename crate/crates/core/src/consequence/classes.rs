//! Formulas tagged with their values over a logic's sound models, and the
//! partition of a formula list into interderivability classes.

use std::collections::HashMap;

use crate::syntax::Formula;

use super::matrix::{Bits, Semantics, Values};
use super::{ConsequenceError, Logic, Verdict};

#[derive(Debug, Clone)]
pub(crate) struct Item {
    pub formula: Formula,
    pub values: Values,
    pub bits: Bits,
}

/// Answers entailment questions on items: models refute first, the oracle
/// confirms unless the models are exact.
pub(crate) struct Decider<'a> {
    pub logic: &'a Logic,
    sem: Semantics,
    exact: bool,
}

impl<'a> Decider<'a> {
    pub fn new(logic: &'a Logic, nvars: usize) -> Result<Self, ConsequenceError> {
        Ok(Decider {
            logic,
            sem: Semantics::new(logic.models()?, nvars),
            exact: logic.models_exact(),
        })
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn item(&self, formula: Formula) -> Result<Item, ConsequenceError> {
        formula.check_over(&self.logic.sig)?;
        let values = self.sem.values(&formula)?;
        let bits = self.sem.designation(&values);
        Ok(Item {
            formula,
            values,
            bits,
        })
    }

    pub fn items(&self, formulas: Vec<Formula>) -> Result<Vec<Item>, ConsequenceError> {
        formulas.into_iter().map(|f| self.item(f)).collect()
    }

    /// `schema(args)`, with values composed pointwise.
    pub fn apply(&self, schema: &Formula, args: &[&Item]) -> Result<Item, ConsequenceError> {
        let formulas: Vec<Formula> = args.iter().map(|a| a.formula.clone()).collect();
        let vals: Vec<&Values> = args.iter().map(|a| &a.values).collect();
        let values = self.sem.apply(schema, &vals)?;
        let bits = self.sem.designation(&values);
        Ok(Item {
            formula: schema.instantiate(&formulas),
            values,
            bits,
        })
    }

    pub fn entails(&self, gamma: &[&Item], psi: &Item) -> Result<Verdict, ConsequenceError> {
        let bits: Vec<&Bits> = gamma.iter().map(|g| &g.bits).collect();
        if !psi.bits.covers_meet(&bits) {
            return Ok(Verdict::No);
        }
        if self.exact {
            return Ok(Verdict::Yes);
        }
        let g: Vec<Formula> = gamma.iter().map(|g| g.formula.clone()).collect();
        self.logic.entails(&g, &psi.formula)
    }

    pub fn equivalent(&self, a: &Item, b: &Item) -> Result<Verdict, ConsequenceError> {
        if a.bits != b.bits {
            return Ok(Verdict::No);
        }
        if self.exact || a.formula == b.formula {
            return Ok(Verdict::Yes);
        }
        let ab = self.logic.entails(std::slice::from_ref(&a.formula), &b.formula)?;
        if ab == Verdict::No {
            return Ok(Verdict::No);
        }
        let ba = self.logic.entails(std::slice::from_ref(&b.formula), &a.formula)?;
        Ok(match (ab, ba) {
            (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            _ => Verdict::Unknown,
        })
    }
}

/// Interderivability classes of an item list, numbered by first occurrence.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    pub class_of: Vec<usize>,
    /// Item index of each class's first member.
    pub reps: Vec<usize>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.reps.len()
    }
}

pub(crate) fn partition(dec: &Decider, items: &[Item]) -> Result<Partition, ConsequenceError> {
    let mut cl = Classifier::new(dec);
    let mut class_of = Vec::with_capacity(items.len());
    let mut reps = Vec::new();
    for (i, it) in items.iter().enumerate() {
        let (c, new) = cl.classify(it)?;
        if new {
            reps.push(i);
        }
        class_of.push(c);
    }
    Ok(Partition { class_of, reps })
}

/// Incremental classification against the representatives seen so far.
pub(crate) struct Classifier<'d, 'a> {
    dec: &'d Decider<'a>,
    buckets: HashMap<Bits, Vec<usize>>,
    pub reps: Vec<Item>,
}

impl<'d, 'a> Classifier<'d, 'a> {
    pub fn new(dec: &'d Decider<'a>) -> Self {
        Classifier {
            dec,
            buckets: HashMap::new(),
            reps: Vec::new(),
        }
    }

    /// The class of `it`, and whether it was new (then `it` is its representative).
    pub fn classify(&mut self, it: &Item) -> Result<(usize, bool), ConsequenceError> {
        let bucket = self.buckets.entry(it.bits.clone()).or_default();
        for &c in bucket.iter() {
            match self.dec.equivalent(&self.reps[c], it)? {
                Verdict::Yes => return Ok((c, false)),
                Verdict::No => {}
                Verdict::Unknown => {
                    return Err(ConsequenceError::Undecided {
                        instance: format!("{} -||- {}", self.reps[c].formula, it.formula),
                    })
                }
            }
        }
        bucket.push(self.reps.len());
        self.reps.push(it.clone());
        Ok((self.reps.len() - 1, true))
    }

    /// The class of `it` if already known.
    pub fn find(&self, it: &Item) -> Result<Option<usize>, ConsequenceError> {
        for &c in self.buckets.get(&it.bits).map(Vec::as_slice).unwrap_or(&[]) {
            match self.dec.equivalent(&self.reps[c], it)? {
                Verdict::Yes => return Ok(Some(c)),
                Verdict::No => {}
                Verdict::Unknown => {
                    return Err(ConsequenceError::Undecided {
                        instance: format!("{} -||- {}", self.reps[c].formula, it.formula),
                    })
                }
            }
        }
        Ok(None)
    }
}

/// Calls `f` on every subset of `0..n` of size at most `k`, by size and then
/// lexicographically. Stops early when `f` returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut cur = Vec::with_capacity(k);
    for size in 0..=k.min(n) {
        cur.clear();
        cur.extend(0..size);
        loop {
            if !f(&cur) {
                return;
            }
            // advance to the next combination of this size
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] < n - size + i {
                    cur[i] += 1;
                    for j in i + 1..size {
                        cur[j] = cur[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if size == 0 || i == usize::MAX {
                break;
            }
        }
    }
}
