//! Structural subsumption over normal forms.
//!
//! Every rule here is sound for the semantics in `semantics`: a `true`
//! answer from [`Engine::sub`] means containment in every interpretation
//! satisfying the axioms. `false` only means no proof was found.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use super::normal::{Conjunct, NormalForm};
use super::region::{Containment, RegionSet};

const MAX_DEPTH: u32 = 10;
const STEP_BUDGET: u32 = 200_000;

/// Axioms in normal form: each left side is a single conjunct.
#[derive(Debug, Clone, Default)]
pub(crate) struct CompiledTbox {
    pub axioms: Vec<(Conjunct, NormalForm)>,
    pub disjoint: Vec<(NormalForm, NormalForm)>,
}

pub(crate) struct Engine<'a> {
    tbox: &'a CompiledTbox,
    cap: usize,
    steps: Cell<u32>,
    pub unit_mismatch: Cell<bool>,
    pub exhausted: Cell<bool>,
}

impl<'a> Engine<'a> {
    pub fn new(tbox: &'a CompiledTbox, cap: usize) -> Self {
        Engine {
            tbox,
            cap,
            steps: Cell::new(STEP_BUDGET),
            unit_mismatch: Cell::new(false),
            exhausted: Cell::new(false),
        }
    }

    fn tick(&self, depth: u32) -> bool {
        if depth > MAX_DEPTH {
            self.exhausted.set(true);
            return false;
        }
        let s = self.steps.get();
        if s == 0 {
            self.exhausted.set(true);
            return false;
        }
        self.steps.set(s - 1);
        true
    }

    /// `c ⊑ d`.
    pub fn sub(&self, c: &NormalForm, d: &NormalForm, depth: u32) -> bool {
        c.disjuncts.iter().all(|cj| self.sub_conj(cj, d, depth))
    }

    fn sub_conj(&self, c: &Conjunct, d: &NormalForm, depth: u32) -> bool {
        self.expand(c, depth)
            .iter()
            .all(|e| self.clash(e, depth) || d.disjuncts.iter().any(|dj| self.covers(e, dj, depth)))
    }

    /// Whether `n` is empty in every model.
    pub fn unsat(&self, n: &NormalForm, depth: u32) -> bool {
        n.disjuncts
            .iter()
            .all(|c| self.expand(c, depth).iter().all(|e| self.clash(e, depth)))
    }

    /// Conjoins the right sides of applicable axioms until nothing changes.
    /// A disjunctive right side splits the conjunct into branches.
    pub fn expand(&self, c: &Conjunct, depth: u32) -> Vec<Conjunct> {
        let mut out = Vec::new();
        let mut applied = vec![false; self.tbox.axioms.len()];
        self.expand_into(c.clone(), &mut applied, &mut out, depth);
        out
    }

    fn expand_into(&self, mut c: Conjunct, applied: &mut [bool], out: &mut Vec<Conjunct>, depth: u32) {
        loop {
            let mut progressed = false;
            for (i, (lhs, rhs)) in self.tbox.axioms.iter().enumerate() {
                if applied[i] || !lhs.atoms.is_subset(&c.atoms) || !self.covers(&c, lhs, depth + 1) {
                    continue;
                }
                applied[i] = true;
                match rhs.disjuncts.len() {
                    0 => {
                        c.enums = Some(Default::default());
                        out.push(c);
                        return;
                    }
                    1 => {
                        let merged = c.merge(&rhs.disjuncts[0]);
                        if merged != c {
                            c = merged;
                            progressed = true;
                        }
                    }
                    k if out.len() + k <= self.cap => {
                        for r in &rhs.disjuncts {
                            let mut branch = applied.to_vec();
                            self.expand_into(c.merge(r), &mut branch, out, depth);
                        }
                        return;
                    }
                    // Leaving the axiom out only loses knowledge.
                    _ => {}
                }
            }
            if !progressed {
                break;
            }
        }
        out.push(c);
    }

    /// Whether the (expanded) conjunct is empty in every model.
    pub fn clash(&self, c: &Conjunct, depth: u32) -> bool {
        if !self.tick(depth) {
            return false;
        }
        if let Some(e) = &c.enums {
            if e.is_empty() || !c.regions.is_empty() {
                return true;
            }
        }
        if !c.regions.is_empty() {
            let (set, _) = RegionSet::intersect_all(&c.regions);
            if set.is_empty() {
                return true;
            }
            // Data values have no slot successors.
            let needs_successor = c.slots.values().any(|s| s.restrictions.iter().any(|r| r.min >= 1));
            if needs_successor {
                return true;
            }
        }
        if c.negs.iter().any(|n| self.covers_nf(c, n, depth + 1)) {
            return true;
        }
        if self
            .tbox
            .disjoint
            .iter()
            .any(|(p, q)| self.covers_nf(c, p, depth + 1) && self.covers_nf(c, q, depth + 1))
        {
            return true;
        }
        for slot in c.slots.values() {
            let Ok(only) = NormalForm::and_all(&slot.only, self.cap) else { continue };
            for r in slot.restrictions.iter().filter(|r| r.min >= 1) {
                let Ok(f) = r.filler.and(&only, self.cap) else { continue };
                if self.unsat(&f, depth + 1) {
                    return true;
                }
                for r2 in &slot.restrictions {
                    if let Some(m2) = r2.max {
                        if r.min > m2 && self.sub(&f, &r2.filler, depth + 1) {
                            return true;
                        }
                    }
                }
            }
        }
        c.projs.iter().any(|(_, p)| self.unsat(p, depth + 1))
    }

    fn covers_nf(&self, c: &Conjunct, d: &NormalForm, depth: u32) -> bool {
        d.disjuncts.iter().any(|dj| self.covers(c, dj, depth))
    }

    /// `c ⊑ d` for single conjuncts, `c` already expanded.
    pub fn covers(&self, c: &Conjunct, d: &Conjunct, depth: u32) -> bool {
        if !self.tick(depth) {
            return false;
        }
        if !d.atoms.is_subset(&c.atoms) {
            return false;
        }
        if let Some(de) = &d.enums {
            match &c.enums {
                Some(ce) if ce.is_subset(de) => {}
                _ => return false,
            }
        }
        if !d.regions.is_empty() {
            let (have, _) = RegionSet::intersect_all(&c.regions);
            for r in &d.regions {
                match have.within(r) {
                    Containment::Yes => {}
                    Containment::No => return false,
                    Containment::UnitMismatch => {
                        self.unit_mismatch.set(true);
                        return false;
                    }
                }
            }
        }
        for n in &d.negs {
            let known = c.negs.iter().any(|cn| self.sub(n, cn, depth + 1));
            if !known && !self.excludes(c, n, depth + 1) {
                return false;
            }
        }
        let is_value = !c.regions.is_empty();
        for (s, ds) in &d.slots {
            let empty = Default::default();
            let cs = c.slots.get(s).unwrap_or(&empty);
            let Ok(only_c) = NormalForm::and_all(&cs.only, self.cap) else { return false };
            for r in &ds.restrictions {
                if r.min >= 1 {
                    let ok = cs.restrictions.iter().any(|rc| {
                        rc.min >= r.min
                            && rc
                                .filler
                                .and(&only_c, self.cap)
                                .is_ok_and(|f| self.sub(&f, &r.filler, depth + 1))
                    });
                    if !ok {
                        return false;
                    }
                }
                if let Some(m) = r.max {
                    if is_value {
                        continue;
                    }
                    let Ok(narrow) = r.filler.and(&only_c, self.cap) else { return false };
                    let ok = cs
                        .restrictions
                        .iter()
                        .any(|rc| rc.max.is_some_and(|mc| mc <= m) && self.sub(&narrow, &rc.filler, depth + 1))
                        || self.unsat(&narrow, depth + 1);
                    if !ok {
                        return false;
                    }
                }
            }
            for o in &ds.only {
                if o.is_top() || is_value {
                    continue;
                }
                let ok = (!cs.only.is_empty() && self.sub(&only_c, o, depth + 1))
                    || cs
                        .restrictions
                        .iter()
                        .any(|rc| rc.max == Some(0) && rc.filler.is_top());
                if !ok {
                    return false;
                }
            }
        }
        for (s, p) in &d.projs {
            if !c.projs.iter().any(|(cs, cp)| cs == s && self.sub(cp, p, depth + 1)) {
                return false;
            }
        }
        true
    }

    /// Whether `c` and `n` share no member in any model.
    fn excludes(&self, c: &Conjunct, n: &NormalForm, depth: u32) -> bool {
        n.disjuncts.iter().all(|nd| {
            let merged = c.merge(nd);
            self.expand(&merged, depth).iter().all(|e| self.clash(e, depth))
        })
    }
}
