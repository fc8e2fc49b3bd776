//! Disjointness clashes between atomic concepts.
//!
//! Every atom gets the super-concepts implied by atomic axioms, domain
//! assumptions, and ONLY-constraints on the slots of functions. An atom
//! implied to lie below both members of a disjoint pair is a clash.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{ElementBody, ElementKind, ModelStore};
use crate::syntax::{CardModifier, Description, NOTHING};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeSource {
    /// Declared `axiom`, by position.
    Axiom { index: usize },
    /// Body of an element.
    Element { id: String },
    /// `K :< <slot: ONLY C>` applied to a function of kind `K`.
    Only {
        constraint: String,
        function: String,
        slot: String,
    },
}

impl fmt::Display for EdgeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeSource::Axiom { index } => write!(f, "axiom {}", index + 1),
            EdgeSource::Element { id } => write!(f, "{id}"),
            EdgeSource::Only {
                constraint,
                function,
                slot,
            } => write!(f, "{constraint} on {function}.{slot}"),
        }
    }
}

/// One step `sub ⊑ sup` of a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub sub: String,
    pub sup: String,
    pub source: EdgeSource,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :< {} ({})", self.sub, self.sup, self.source)
    }
}

/// `concept` is implied to be below both concepts of a disjoint pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clash {
    pub concept: String,
    pub disjoint: (String, String),
    pub chains: [Vec<Derivation>; 2],
    /// Elements and axioms the chains rest on.
    pub elements: Vec<String>,
}

impl fmt::Display for Clash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} is below disjoint {} and {}",
            self.concept, self.disjoint.0, self.disjoint.1
        )?;
        for chain in &self.chains {
            let steps: Vec<String> = chain.iter().map(ToString::to_string).collect();
            write!(f, "; {}", steps.join(", "))?;
        }
        Ok(())
    }
}

struct OnlyConstraint {
    owner: String,
    slot: String,
    targets: Vec<String>,
    source: String,
}

#[derive(Default)]
struct Graph {
    edges: BTreeMap<String, BTreeMap<String, EdgeSource>>,
    atoms: BTreeSet<String>,
}

impl Graph {
    fn add(&mut self, sub: &str, sup: &str, source: EdgeSource) -> bool {
        self.atoms.insert(sub.into());
        self.atoms.insert(sup.into());
        if sub == sup {
            return false;
        }
        let out = self.edges.entry(sub.into()).or_default();
        if out.contains_key(sup) {
            return false;
        }
        out.insert(sup.into(), source);
        true
    }

    fn reach(&self, from: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut todo = alloc::vec![from.to_string()];
        while let Some(x) = todo.pop() {
            if seen.insert(x.clone()) {
                if let Some(out) = self.edges.get(&x) {
                    todo.extend(out.keys().cloned());
                }
            }
        }
        seen
    }

    /// Shortest chain of edges from `from` to `to`.
    fn chain(&self, from: &str, to: &str) -> Vec<Derivation> {
        let mut parent: BTreeMap<String, String> = BTreeMap::new();
        let mut queue = VecDeque::from([from.to_string()]);
        let mut seen = BTreeSet::from([from.to_string()]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for y in self.edges.get(&x).into_iter().flat_map(|o| o.keys()) {
                if seen.insert(y.clone()) {
                    parent.insert(y.clone(), x.clone());
                    queue.push_back(y.clone());
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = to.to_string();
        while let Some(p) = parent.get(&cur) {
            steps.push(Derivation {
                sub: p.clone(),
                sup: cur.clone(),
                source: self.edges[p][&cur].clone(),
            });
            cur = p.clone();
        }
        steps.reverse();
        steps
    }
}

fn atom_of(d: &Description) -> Option<&str> {
    match d {
        Description::Atom(a) if a != NOTHING => Some(a),
        _ => None,
    }
}

fn conjunct_atoms(d: &Description) -> Vec<String> {
    d.conjuncts().into_iter().filter_map(atom_of).map(String::from).collect()
}

/// Reads `lhs :< rhs` into atomic edges, ONLY-constraints and disjoint pairs.
fn absorb(
    lhs: &Description,
    rhs: &Description,
    source: EdgeSource,
    g: &mut Graph,
    only: &mut Vec<OnlyConstraint>,
    disjoint: &mut BTreeSet<(String, String)>,
) {
    if matches!(rhs, Description::Atom(n) if n == NOTHING) {
        if let Description::And(a, b) = lhs {
            if let (Some(a), Some(b)) = (atom_of(a), atom_of(b)) {
                disjoint.insert(pair(a, b));
            }
        }
        return;
    }
    let Some(k) = atom_of(lhs) else { return };
    for c in rhs.conjuncts() {
        match c {
            Description::Atom(a) if a != NOTHING => {
                g.add(k, a, source.clone());
            }
            Description::Slot {
                slot,
                modifier: CardModifier::Only,
                filler,
            } => only.push(OnlyConstraint {
                owner: k.into(),
                slot: slot.clone(),
                targets: conjunct_atoms(filler),
                source: source.to_string(),
            }),
            _ => {}
        }
    }
}

fn pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

pub fn check_consistency(m: &ModelStore) -> Vec<Clash> {
    let mut g = Graph::default();
    let mut only = Vec::new();
    let mut disjoint = BTreeSet::new();
    for (index, ax) in m.axioms.iter().enumerate() {
        absorb(&ax.lhs, &ax.rhs, EdgeSource::Axiom { index }, &mut g, &mut only, &mut disjoint);
    }
    for (a, b) in &m.disjoint {
        if let (Some(a), Some(b)) = (atom_of(a), atom_of(b)) {
            disjoint.insert(pair(a, b));
        }
    }
    let mut functions = Vec::new();
    for e in m.active_elements() {
        match &e.body {
            ElementBody::SubsumptionForm { lhs, rhs } => {
                let source = EdgeSource::Element { id: e.id.clone() };
                if e.kind == ElementKind::DA {
                    absorb(lhs, rhs, source, &mut g, &mut only, &mut disjoint);
                } else if matches!(e.kind, ElementKind::FC | ElementKind::SC) {
                    // Constraints contribute ONLY-restrictions, never plain edges.
                    let mut scratch = Graph::default();
                    absorb(lhs, rhs, source, &mut scratch, &mut only, &mut BTreeSet::new());
                }
            }
            ElementBody::FunctionDesc { name, slots } => {
                g.atoms.insert(name.clone());
                functions.push((e.id.clone(), name.clone(), slots));
            }
            _ => {}
        }
    }
    loop {
        let mut added = false;
        for (id, name, slots) in &functions {
            let mut above = g.reach(name);
            above.insert(id.clone());
            for c in only.iter().filter(|c| above.contains(&c.owner)) {
                for d in slots.iter().flat_map(|d| d.conjuncts()) {
                    let Description::Slot { slot, filler, .. } = d else { continue };
                    if *slot != c.slot {
                        continue;
                    }
                    for a in conjunct_atoms(filler) {
                        for t in &c.targets {
                            let source = EdgeSource::Only {
                                constraint: c.source.clone(),
                                function: id.clone(),
                                slot: slot.clone(),
                            };
                            added |= g.add(&a, t, source);
                        }
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    let reach: BTreeMap<&String, BTreeSet<String>> = g.atoms.iter().map(|a| (a, g.reach(a))).collect();
    let clashes_on = |x: &String, (p, q): &(String, String)| reach[x].contains(p) && reach[x].contains(q);
    let mut out = Vec::new();
    for x in &g.atoms {
        for d in &disjoint {
            if !clashes_on(x, d) {
                continue;
            }
            // Report only the most general clashing concept.
            let inherited = reach[x]
                .iter()
                .any(|y| y != x && !reach[y].contains(x) && clashes_on(y, d));
            if inherited {
                continue;
            }
            let chains = [g.chain(x, &d.0), g.chain(x, &d.1)];
            let elements: BTreeSet<String> = chains
                .iter()
                .flatten()
                .flat_map(|s| match &s.source {
                    EdgeSource::Axiom { index } => alloc::vec![format!("axiom {}", index + 1)],
                    EdgeSource::Element { id } => alloc::vec![id.clone()],
                    EdgeSource::Only {
                        constraint, function, ..
                    } => alloc::vec![constraint.clone(), function.clone()],
                })
                .collect();
            out.push(Clash {
                concept: x.clone(),
                disjoint: d.clone(),
                chains,
                elements: elements.into_iter().collect(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;
    use crate::syntax::parse_model_file;

    fn clashes(src: &str) -> Vec<Clash> {
        check_consistency(&load_model(&parse_model_file(src).into_result().unwrap()).unwrap())
    }

    const USER: &str = "
        axiom Register :< System_function.
        axiom System_function :< <object: ONLY Information_entity>.
        disjoint Information_entity, Real_world_entity.
        da D1 = User :< Real_world_entity.
        f F1 = Register <subject: {the_system}> <object: User>.
    ";

    #[test]
    fn user_clash() {
        let c = clashes(USER);
        assert_eq!(c.len(), 1, "{c:?}");
        assert_eq!(c[0].concept, "User");
        assert!(c[0].elements.contains(&"D1".to_string()));
        assert!(c[0].elements.contains(&"F1".to_string()));
    }

    #[test]
    fn no_disjointness_no_clash() {
        let src = USER.replace("disjoint Information_entity, Real_world_entity.", "");
        assert!(clashes(&src).is_empty());
    }
}
