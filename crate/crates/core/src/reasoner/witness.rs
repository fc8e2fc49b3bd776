//! Counter-model construction for failed subsumptions.
//!
//! A canonical model of one left-hand disjunct is built node by node. Each
//! choice point (which enumerated individual, which grid value, which branch
//! of a union, whether to add a stray successor) is driven by a variant
//! number, and each candidate is accepted only if the evaluator confirms it.

use alloc::vec::Vec;

use super::normal::{Conjunct, NormalForm};
use super::region::RegionSet;
use super::semantics::{Interpretation, Value, Witness, MAX_DOMAIN};
use super::structural::Engine;
use super::Tbox;
use crate::syntax::Description;

const VARIANTS: u64 = 96;
const MAX_NODE_DEPTH: u32 = 5;

struct Builder<'g> {
    grid: &'g [Value],
    cap: usize,
    variant: u64,
    interp: Interpretation,
}

impl<'g> Builder<'g> {
    fn choose(&mut self, n: usize) -> usize {
        if n <= 1 {
            return 0;
        }
        let k = (self.variant % n as u64) as usize;
        self.variant /= n as u64;
        k
    }

    fn fresh(&mut self) -> Option<usize> {
        if self.interp.size >= MAX_DOMAIN {
            return None;
        }
        self.interp.size += 1;
        Some(self.interp.size - 1)
    }

    fn individual(&mut self, name: &str) -> Option<usize> {
        if let Some(&i) = self.interp.individuals.get(name) {
            return Some(i);
        }
        let i = self.fresh()?;
        self.interp.individuals.insert(name.into(), i);
        Some(i)
    }

    fn value(&mut self, v: Value) -> Option<usize> {
        if let Some((&i, _)) = self.interp.values.iter().find(|(_, w)| **w == v) {
            return Some(i);
        }
        let i = self.fresh()?;
        self.interp.values.insert(i, v);
        Some(i)
    }

    fn edge(&mut self, slot: &str, from: usize, to: usize) {
        let pairs = self.interp.roles.entry(slot.into()).or_default();
        if !pairs.contains(&(from, to)) {
            pairs.push((from, to));
        }
    }

    fn node(&mut self, engine: &Engine, c: &Conjunct, depth: u32) -> Option<usize> {
        if depth > MAX_NODE_DEPTH {
            return None;
        }
        let x = if let Some(names) = &c.enums {
            let names: Vec<&alloc::string::String> = names.iter().collect();
            if names.is_empty() {
                return None;
            }
            let k = self.choose(names.len());
            self.individual(names[k])?
        } else if !c.regions.is_empty() {
            let (set, _) = RegionSet::intersect_all(&c.regions);
            let mut candidates: Vec<Value> = self.grid.iter().filter(|v| set.contains(v)).cloned().collect();
            if candidates.is_empty() {
                candidates.push(sample(&set)?);
            }
            let k = self.choose(candidates.len());
            self.value(candidates[k].clone())?
        } else {
            self.fresh()?
        };
        for a in &c.atoms {
            *self.interp.concepts.entry(a.clone()).or_insert(0) |= 1 << x;
        }
        let is_value = self.interp.values.contains_key(&x);
        for (s, sc) in &c.slots {
            let only = NormalForm::and_all(&sc.only, self.cap).ok()?;
            for r in sc.restrictions.iter().filter(|r| r.min >= 1) {
                if is_value {
                    return None;
                }
                let f = r.filler.and(&only, self.cap).ok()?;
                for _ in 0..r.min {
                    let y = self.pick(engine, &f, depth + 1)?;
                    self.edge(s, x, y);
                }
            }
            if !is_value && self.choose(2) == 1 {
                let y = self.fresh()?;
                self.edge(s, x, y);
            }
        }
        for (s, p) in &c.projs {
            let y = self.pick(engine, p, depth + 1)?;
            if self.interp.values.contains_key(&y) {
                return None;
            }
            self.edge(s, y, x);
        }
        Some(x)
    }

    fn pick(&mut self, engine: &Engine, n: &NormalForm, depth: u32) -> Option<usize> {
        let branches: Vec<Conjunct> = n
            .disjuncts
            .iter()
            .flat_map(|c| engine.expand(c, 0))
            .filter(|e| !engine.clash(e, 0))
            .collect();
        if branches.is_empty() {
            return None;
        }
        let k = self.choose(branches.len());
        self.node(engine, &branches[k], depth)
    }
}

fn sample(set: &RegionSet) -> Option<Value> {
    match set {
        RegionSet::Any => Some(Value::Symbol("v".into())),
        RegionSet::Interval { lo, unit, .. } if !set.is_empty() => Some(Value::Number(*lo, unit.clone())),
        RegionSet::Interval { .. } => None,
        RegionSet::Finite(vs) => vs.iter().next().cloned(),
    }
}

/// Looks for an interpretation with an element in `left` but not in `right`.
pub(crate) fn canonical_counterexample(
    engine: &Engine,
    cap: usize,
    left_nf: &NormalForm,
    left: &Description,
    right: &Description,
    tbox: &Tbox,
    grid: &[Value],
) -> Option<Witness> {
    for c in &left_nf.disjuncts {
        for e in engine.expand(c, 0) {
            if engine.clash(&e, 0) {
                continue;
            }
            for variant in 0..VARIANTS {
                let mut b = Builder {
                    grid,
                    cap,
                    variant,
                    interp: Interpretation::default(),
                };
                let built = b.node(engine, &e, 0);
                let exhausted = b.variant != 0;
                if let Some(x) = built {
                    let w = Witness::Model {
                        interp: b.interp,
                        element: x,
                    };
                    if w.replays(left, right, tbox) {
                        return Some(w);
                    }
                }
                if exhausted {
                    break;
                }
            }
        }
    }
    None
}

/// Some model with at least one member of `nf`, if the builder finds one.
pub(crate) fn canonical_model(
    engine: &Engine,
    cap: usize,
    nf: &NormalForm,
    d: &Description,
    tbox: &Tbox,
    grid: &[Value],
) -> Option<Witness> {
    canonical_counterexample(engine, cap, nf, d, &Description::atom(crate::syntax::NOTHING), tbox, grid)
}
