use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::facts::{extract_facts, FactGraph, HAS_QUALITY, HAS_VALUE_IN, INHERES_IN, OBSERVED_BY};
use super::QueryError;
use crate::model::ModelStore;
use crate::reasoner::{Reasoner, Verdict3};
use crate::syntax::{CardModifier, Description};

/// Relations a query may use even when the model has no such fact.
pub const VOCABULARY: [&str; 6] = [HAS_QUALITY, INHERES_IN, HAS_VALUE_IN, OBSERVED_BY, "is_actor_of", "is_object_of"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Tri {
    No,
    Maybe,
    Yes,
}

impl Tri {
    fn and(self, o: Tri) -> Tri {
        self.min(o)
    }

    fn or(self, o: Tri) -> Tri {
        self.max(o)
    }

    fn not(self) -> Tri {
        match self {
            Tri::No => Tri::Yes,
            Tri::Maybe => Tri::Maybe,
            Tri::Yes => Tri::No,
        }
    }
}

/// A node the query matched; tentative when some step was undecided.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QueryMatch {
    pub id: String,
    pub tentative: bool,
}

struct Matcher<'a> {
    g: &'a FactGraph,
    r: Reasoner,
}

impl Matcher<'_> {
    fn node(&self, key: &str, q: &Description) -> Tri {
        match q {
            Description::And(a, b) => {
                let left = self.node(key, a);
                if left == Tri::No {
                    return Tri::No;
                }
                left.and(self.node(key, b))
            }
            Description::Or(a, b) => self.node(key, a).or(self.node(key, b)),
            Description::Diff(a, b) if has_slot(b) => self.node(key, a).and(self.node(key, b).not()),
            Description::Slot { slot, modifier, filler } => self.slot(key, slot, *modifier, filler),
            _ => {
                let Some(d) = self.g.nodes.get(key) else { return Tri::No };
                match self.r.subsumes(d, q) {
                    Verdict3::Proved => Tri::Yes,
                    Verdict3::Disproved(_) => Tri::No,
                    Verdict3::Unknown(_) => Tri::Maybe,
                }
            }
        }
    }

    fn slot(&self, key: &str, slot: &str, modifier: CardModifier, filler: &Description) -> Tri {
        let answers: Vec<Tri> = self.g.objects(key, slot).map(|o| self.node(o, filler)).collect();
        let yes = answers.iter().filter(|t| **t == Tri::Yes).count();
        let maybe = answers.iter().filter(|t| **t != Tri::No).count();
        let at_least = |n: usize| match () {
            _ if yes >= n => Tri::Yes,
            _ if maybe >= n => Tri::Maybe,
            _ => Tri::No,
        };
        let at_most = |n: usize| match () {
            _ if maybe <= n => Tri::Yes,
            _ if yes <= n => Tri::Maybe,
            _ => Tri::No,
        };
        match modifier {
            // Queries ask whether some neighbour matches.
            CardModifier::ExactlyOne | CardModifier::Some => at_least(1),
            CardModifier::AtLeast(n) => at_least(n as usize),
            CardModifier::AtMost(n) => at_most(n as usize),
            CardModifier::Exactly(n) => at_least(n as usize).and(at_most(n as usize)),
            CardModifier::Only => answers.iter().copied().fold(Tri::Yes, Tri::and),
        }
    }
}

fn has_slot(d: &Description) -> bool {
    let mut found = false;
    d.walk(&mut |n| found |= matches!(n, Description::Slot { .. }));
    found
}

/// Nodes matching `q`; undecided matches are kept, marked tentative.
pub fn eval_query_lenient(m: &ModelStore, q: &Description) -> Result<Vec<QueryMatch>, QueryError> {
    let g = extract_facts(m);
    let known: BTreeSet<&str> = g.relations().into_iter().chain(VOCABULARY).collect();
    let mut unknown = None;
    q.walk(&mut |n| {
        if let Description::Slot { slot, .. } = n {
            if unknown.is_none() && !known.contains(slot.as_str()) {
                unknown = Some(slot.clone());
            }
        }
    });
    if let Some(slot) = unknown {
        return Err(QueryError::UnknownRelation(slot));
    }
    let matcher = Matcher {
        g: &g,
        r: Reasoner::new(m),
    };
    let subjects: BTreeSet<&str> = g.facts.iter().map(|f| f.subject.as_str()).collect();
    let mut out = Vec::new();
    for key in subjects {
        match matcher.node(key, q) {
            Tri::Yes => out.push(QueryMatch {
                id: key.into(),
                tentative: false,
            }),
            Tri::Maybe => out.push(QueryMatch {
                id: key.into(),
                tentative: true,
            }),
            Tri::No => {}
        }
    }
    Ok(out)
}

/// Nodes proved to match `q`.
pub fn eval_query(m: &ModelStore, q: &Description) -> Result<BTreeSet<String>, QueryError> {
    Ok(eval_query_lenient(m, q)?
        .into_iter()
        .filter(|h| !h.tentative)
        .map(|h| h.id)
        .collect())
}
