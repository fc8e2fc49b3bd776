//! Typed storage of a requirements model: elements, axioms, hierarchies,
//! operator applications and conflicts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::operators::{FactorTable, OperatorArgs, OperatorKind, Strength};
use crate::syntax::{Description, Span};

mod element;
mod load;

pub use element::{Category, Element, ElementBody, ElementKind, PctEntry, QualityForm};
pub use load::{load_model, load_model_lenient, load_model_with, LoadError, LoadOptions, LoadedModel};

/// Outcome of checking an application's declared strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    /// The declared strength was computed and holds.
    Verified,
    /// Admissible but not computable (natural-language bodies, operationalization).
    Asserted,
    /// Inadmissible for the operator, or contradicted by computation.
    Violated,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Asserted => "asserted",
            Verdict::Violated => "violated",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

/// A finding attached to an application while loading or checking it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    /// Stable diagnostic code such as `E-SIG`.
    pub code: &'static str,
    pub severity: Severity,
    pub message: String,
    pub related: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Application {
    /// `#n`, numbered in file order.
    pub id: String,
    pub op: OperatorKind,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub strength: Strength,
    pub args: OperatorArgs,
    pub verdict: Verdict,
    /// Why the verdict is what it is, when there is something to say.
    pub note: Option<String>,
    pub issues: Vec<Issue>,
    pub span: Span,
}

impl Application {
    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub lhs: Description,
    pub rhs: Description,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConflictSource {
    Declared,
    /// Added from a consistency-check finding.
    Imported,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictSet {
    pub ids: Vec<String>,
    pub source: ConflictSource,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelStore {
    elements: Vec<Element>,
    index: BTreeMap<String, usize>,
    pub applications: Vec<Application>,
    pub axioms: Vec<Axiom>,
    pub disjoint: Vec<(Description, Description)>,
    /// `(child, parent)` dimension-of edges between quality names.
    pub dimensions: Vec<(String, String)>,
    /// `(child, parent)` part-of edges between subjects.
    pub parts: Vec<(String, String)>,
    pub factors: FactorTable,
    pub conflicts: Vec<ConflictSet>,
}

impl ModelStore {
    pub fn get(&self, id: &str) -> Option<&Element> {
        self.index.get(id).map(|&i| &self.elements[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Elements in declaration order; synthesized outputs follow in application order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter()
    }

    pub fn active_elements(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| e.active)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Inserts `e`, replacing any element with the same id in place.
    pub fn insert(&mut self, e: Element) {
        match self.index.get(&e.id) {
            Some(&i) => self.elements[i] = e,
            None => {
                self.index.insert(e.id.clone(), self.elements.len());
                self.elements.push(e);
            }
        }
    }

    pub(crate) fn get_mut(&mut self, id: &str) -> Option<&mut Element> {
        let i = *self.index.get(id)?;
        Some(&mut self.elements[i])
    }

    /// Adds conflict sets found by the consistency checker; duplicates are skipped.
    pub fn import_conflicts<I>(&mut self, sets: I)
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        for mut ids in sets {
            ids.sort();
            ids.dedup();
            let known = self.conflicts.iter().any(|c| {
                let mut have = c.ids.clone();
                have.sort();
                have == ids
            });
            if !known && !ids.is_empty() {
                self.conflicts.push(ConflictSet {
                    ids,
                    source: ConflictSource::Imported,
                });
            }
        }
    }

    pub fn with_imported_conflicts<I>(mut self, sets: I) -> Self
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        self.import_conflicts(sets);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KindCount {
    pub active: usize,
    pub dropped: usize,
}

impl KindCount {
    pub fn total(&self) -> usize {
        self.active + self.dropped
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    pub per_kind: BTreeMap<ElementKind, KindCount>,
    pub total: KindCount,
    pub applications: usize,
    pub axioms: usize,
    pub conflicts: usize,
}

pub fn stats(m: &ModelStore) -> Stats {
    let mut per_kind: BTreeMap<ElementKind, KindCount> =
        ElementKind::ALL.iter().map(|k| (*k, KindCount::default())).collect();
    let mut total = KindCount::default();
    for e in m.elements() {
        let c = per_kind.get_mut(&e.kind).expect("all kinds present");
        if e.active {
            c.active += 1;
            total.active += 1;
        } else {
            c.dropped += 1;
            total.dropped += 1;
        }
    }
    Stats {
        per_kind,
        total,
        applications: m.applications.len(),
        axioms: m.axioms.len() + m.disjoint.len(),
        conflicts: m.conflicts.len(),
    }
}

/// A description in one element that names another element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReferTo {
    pub from: String,
    pub to: String,
    pub via: String,
}

pub fn referto_edges(m: &ModelStore) -> Vec<ReferTo> {
    let mut edges = BTreeSet::new();
    for e in m.elements() {
        let mut visit = |d: &Description, top: &str| {
            collect_refs(m, d, top, &mut |to, via| {
                if to != e.id {
                    edges.insert(ReferTo {
                        from: e.id.clone(),
                        to: to.into(),
                        via: via.into(),
                    });
                }
            });
        };
        match &e.body {
            ElementBody::NLText(_) => {}
            ElementBody::Concept(d) => visit(d, "refers_to"),
            ElementBody::SubsumptionForm { lhs, rhs } => {
                visit(lhs, "constrains");
                visit(rhs, "refers_to");
            }
            ElementBody::FunctionDesc { slots, .. } => {
                for s in slots {
                    visit(s, "refers_to");
                }
            }
            ElementBody::QualityForm(q) => {
                visit(&q.subject, "inheres_in");
                if let Some(o) = &q.observer {
                    visit(o, "observed_by");
                }
            }
        }
    }
    let mut out: Vec<ReferTo> = edges.into_iter().collect();
    let order: BTreeMap<&str, usize> = m.elements().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
    out.sort_by_key(|r| (order[r.from.as_str()], order[r.to.as_str()], r.via.clone()));
    out
}

fn collect_refs(m: &ModelStore, d: &Description, via: &str, f: &mut dyn FnMut(&str, &str)) {
    match d {
        Description::Atom(a) if m.contains(a) => f(a, via),
        Description::Enum(members) => {
            for x in members.iter().filter(|x| m.contains(x)) {
                f(x, via);
            }
        }
        Description::Slot { slot, filler, .. } => collect_refs(m, filler, slot, f),
        Description::Proj { base, slot } => collect_refs(m, base, slot, f),
        Description::And(l, r) | Description::Or(l, r) | Description::Diff(l, r) => {
            collect_refs(m, l, via, f);
            collect_refs(m, r, via, f);
        }
        _ => {}
    }
}
