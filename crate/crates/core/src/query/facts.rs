use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{ElementBody, ModelStore};
use crate::syntax::{render_description, Description};

/// `subject relation object`, with the element it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fact {
    pub subject: String,
    pub relation: String,
    pub object: String,
    pub source: String,
}

/// Facts between nodes, each node carrying the description it is matched by.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactGraph {
    pub nodes: BTreeMap<String, Description>,
    pub facts: BTreeSet<Fact>,
}

pub const HAS_QUALITY: &str = "has_quality";
pub const INHERES_IN: &str = "inheres_in";
pub const HAS_VALUE_IN: &str = "has_value_in";
pub const OBSERVED_BY: &str = "observed_by";

/// Name of the inverse of a function slot.
pub fn inverse_of(slot: &str) -> String {
    match slot {
        INHERES_IN => HAS_QUALITY.into(),
        s => format!("is_{s}_of"),
    }
}

impl FactGraph {
    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn relations(&self) -> BTreeSet<&str> {
        self.facts.iter().map(|f| f.relation.as_str()).collect()
    }

    /// Objects related to `subject` by `relation`.
    pub fn objects<'a>(&'a self, subject: &'a str, relation: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.facts
            .iter()
            .filter(move |f| f.subject == subject && f.relation == relation)
            .map(|f| f.object.as_str())
    }

    fn node(&mut self, key: String, desc: Description) -> String {
        self.nodes.entry(key.clone()).or_insert(desc);
        key
    }

    fn add(&mut self, subject: &str, relation: &str, object: &str, source: &str) {
        self.facts.insert(Fact {
            subject: subject.into(),
            relation: relation.into(),
            object: object.into(),
            source: source.into(),
        });
    }

    fn add_both(&mut self, subject: &str, relation: &str, object: &str, source: &str) {
        self.add(subject, relation, object, source);
        self.add(object, &inverse_of(relation), subject, source);
    }
}

pub fn extract_facts(m: &ModelStore) -> FactGraph {
    let mut g = FactGraph::default();
    // Element ids first so fillers naming an element resolve to it.
    for e in m.active_elements() {
        let mut parts = alloc::vec![Description::atom(e.id.as_str())];
        match &e.body {
            ElementBody::FunctionDesc { name, .. } => parts.push(Description::atom(name.as_str())),
            ElementBody::QualityForm(q) => parts.push(Description::atom(q.quality.as_str())),
            _ => {}
        }
        g.node(e.id.clone(), Description::conjunction(parts).expect("non-empty"));
    }
    let term = |g: &mut FactGraph, d: &Description| -> String {
        if let Description::Atom(a) = d {
            if g.nodes.contains_key(a) {
                return a.clone();
            }
        }
        g.node(render_description(d), d.clone())
    };

    let mut regions: BTreeMap<String, Vec<(Description, String)>> = BTreeMap::new();
    for e in m.active_elements() {
        match &e.body {
            ElementBody::FunctionDesc { slots, .. } => {
                for d in slots.iter().flat_map(|d| d.conjuncts()) {
                    if let Description::Slot { slot, filler, .. } = d {
                        let o = term(&mut g, filler);
                        g.add_both(&e.id, slot, &o, &e.id);
                    }
                }
            }
            ElementBody::QualityForm(q) => {
                let subject = term(&mut g, &q.subject);
                let key = format!("{}@{}", q.quality, subject);
                g.node(key.clone(), Description::atom(q.quality.as_str()));
                g.add_both(&key, INHERES_IN, &subject, &e.id);
                if let Some(o) = &q.observer {
                    let o = term(&mut g, o);
                    g.add_both(&key, OBSERVED_BY, &o, &e.id);
                }
                regions
                    .entry(key)
                    .or_default()
                    .push((Description::Region(q.region.clone()), e.id.clone()));
            }
            _ => {}
        }
    }
    // A quality instance lies in every region stated for it.
    for (key, rs) in regions {
        let region = Description::conjunction(rs.iter().map(|(d, _)| d.clone())).expect("non-empty");
        let node = g.node(render_description(&region), region);
        for (_, source) in &rs {
            g.add(&key, HAS_VALUE_IN, &node, source);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;
    use crate::syntax::parse_model_file;

    #[test]
    fn search_facts() {
        let ast = parse_model_file(
            "f F1 = Search <actor: User> <object: Product>.\n\
             qc QC1 = Processing_time (F1) :: [0, 30 (Sec)].\n",
        )
        .into_result()
        .unwrap();
        let g = extract_facts(&load_model(&ast).unwrap());
        let has = |s: &str, r: &str, o: &str| g.facts.iter().any(|f| f.subject == s && f.relation == r && f.object == o);
        assert!(has("F1", "actor", "User"));
        assert!(has("F1", "object", "Product"));
        assert!(has("User", "is_actor_of", "F1"));
        assert!(has("F1", "has_quality", "Processing_time@F1"));
        assert!(has("Processing_time@F1", "has_value_in", "[0, 30 (Sec)]"));
    }

    #[test]
    fn empty_model_has_no_facts() {
        assert!(extract_facts(&ModelStore::default()).is_empty());
    }
}
