//! Translation of descriptions into normal form, structural subsumption,
//! strength verification of operator applications, consistency checking,
//! and a finite-model oracle for testing.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{ElementBody, ElementKind, ModelStore};
use crate::syntax::{Description, NOTHING};

mod consistency;
mod normal;
mod oracle;
mod pct;
mod region;
mod semantics;
mod strength;
mod structural;
mod witness;

pub use consistency::{check_consistency, Clash, Derivation, EdgeSource};
pub use normal::{translate, Conjunct, DnfCapExceeded, NormalForm, Restriction, SlotConstraint};
pub use oracle::{oracle_subsumes, oracle_subsumes_with, value_grid, BoundsExceeded, OracleBounds, OracleOutcome};
pub use pct::pct_entails;
pub use semantics::{literal_value, value_in_region, Interpretation, Value, Witness};
pub use strength::{admissible, check_strength, element_entails, StrengthCheck};

use structural::{CompiledTbox, Engine};

/// Three-valued answer of the reasoner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict3 {
    Proved,
    Disproved(Witness),
    Unknown(String),
}

impl Verdict3 {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict3::Proved)
    }

    pub fn is_disproved(&self) -> bool {
        matches!(self, Verdict3::Disproved(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict3::Proved => "proved",
            Verdict3::Disproved(_) => "disproved",
            Verdict3::Unknown(_) => "unknown",
        }
    }
}

impl fmt::Display for Verdict3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict3::Proved => f.write_str("proved"),
            Verdict3::Disproved(w) => write!(f, "disproved: {w}"),
            Verdict3::Unknown(why) => write!(f, "unknown: {why}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReasonerConfig {
    /// Largest number of disjuncts a normal form may have.
    pub max_dnf: usize,
    /// Largest exhaustive counter-model search, as log2 of interpretations.
    pub search_bits: u32,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        ReasonerConfig {
            max_dnf: 16,
            search_bits: 16,
        }
    }
}

/// Terminological knowledge: `lhs ⊑ rhs` axioms and disjoint pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tbox {
    pub axioms: Vec<(Description, Description)>,
    pub disjoint: Vec<(Description, Description)>,
}

impl Tbox {
    /// Declared axioms and disjointness plus the bodies of active domain assumptions.
    pub fn from_model(m: &ModelStore) -> Tbox {
        let mut t = Tbox {
            axioms: m.axioms.iter().map(|a| (a.lhs.clone(), a.rhs.clone())).collect(),
            disjoint: m.disjoint.clone(),
        };
        for e in m.active_elements().filter(|e| e.kind == ElementKind::DA) {
            if let ElementBody::SubsumptionForm { lhs, rhs } = &e.body {
                t.push(lhs.clone(), rhs.clone());
            }
        }
        t
    }

    pub fn push(&mut self, lhs: Description, rhs: Description) {
        match (&lhs, &rhs) {
            (Description::And(a, b), Description::Atom(n)) if n == NOTHING => {
                self.disjoint.push(((**a).clone(), (**b).clone()))
            }
            _ => self.axioms.push((lhs, rhs)),
        }
    }

    fn compile(&self, cap: usize) -> CompiledTbox {
        let mut out = CompiledTbox::default();
        for (l, r) in &self.axioms {
            // An axiom that cannot be normalized is left out; that only loses knowledge.
            let (Ok(nl), Ok(nr)) = (translate(l, cap), translate(r, cap)) else { continue };
            for c in nl.disjuncts {
                out.axioms.push((c, nr.clone()));
            }
        }
        for (a, b) in &self.disjoint {
            if let (Ok(na), Ok(nb)) = (translate(a, cap), translate(b, cap)) {
                out.disjoint.push((na, nb));
            }
        }
        out
    }
}

/// Structural subsumption under a fixed terminology.
#[derive(Debug, Clone)]
pub struct Reasoner {
    tbox: Tbox,
    config: ReasonerConfig,
    compiled: CompiledTbox,
}

impl Reasoner {
    pub fn new(m: &ModelStore) -> Reasoner {
        Reasoner::with_config(Tbox::from_model(m), ReasonerConfig::default())
    }

    pub fn from_model(m: &ModelStore, config: ReasonerConfig) -> Reasoner {
        Reasoner::with_config(Tbox::from_model(m), config)
    }

    pub fn with_config(tbox: Tbox, config: ReasonerConfig) -> Reasoner {
        let compiled = tbox.compile(config.max_dnf);
        Reasoner { tbox, config, compiled }
    }

    pub fn tbox(&self) -> &Tbox {
        &self.tbox
    }

    pub fn config(&self) -> ReasonerConfig {
        self.config
    }

    /// A reasoner that additionally assumes `extra`.
    pub fn extended<I>(&self, extra: I) -> Reasoner
    where
        I: IntoIterator<Item = (Description, Description)>,
    {
        let mut tbox = self.tbox.clone();
        for (l, r) in extra {
            tbox.push(l, r);
        }
        Reasoner::with_config(tbox, self.config)
    }

    /// Whether `left ⊑ right` in every model of the terminology.
    pub fn subsumes(&self, left: &Description, right: &Description) -> Verdict3 {
        let cap = self.config.max_dnf;
        let (nl, nr) = match (translate(left, cap), translate(right, cap)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Verdict3::Unknown(format!("normal form exceeds {cap} disjuncts")),
        };
        let engine = Engine::new(&self.compiled, cap);
        if engine.sub(&nl, &nr, 0) {
            return Verdict3::Proved;
        }
        if engine.unit_mismatch.get() {
            return Verdict3::Unknown("regions are stated in different units".into());
        }
        let mut descs: Vec<&Description> = alloc::vec![left, right];
        for (l, r) in self.tbox.axioms.iter().chain(&self.tbox.disjoint) {
            descs.push(l);
            descs.push(r);
        }
        let grid = value_grid(descs.iter().copied());
        let fresh = Engine::new(&self.compiled, cap);
        if let Some(w) = witness::canonical_counterexample(&fresh, cap, &nl, left, right, &self.tbox, &grid) {
            return Verdict3::Disproved(w);
        }
        let bounds = OracleBounds {
            max_bits: self.config.search_bits,
            ..OracleBounds::default()
        };
        for k in 1..=2 {
            if let Ok(OracleOutcome::Counterexample(w)) = oracle_subsumes_with(left, right, &self.tbox, k, &grid, &bounds) {
                return Verdict3::Disproved(w);
            }
        }
        let why = if engine.exhausted.get() {
            "the search for a structural proof hit its depth or step limit"
        } else {
            "no structural proof and no counter-model found"
        };
        Verdict3::Unknown(why.into())
    }

    /// A model in which `d` has a member, if one is found.
    pub fn find_model(&self, d: &Description) -> Option<Witness> {
        let cap = self.config.max_dnf;
        let nf = translate(d, cap).ok()?;
        let engine = Engine::new(&self.compiled, cap);
        let grid = value_grid([d]);
        witness::canonical_model(&engine, cap, &nf, d, &self.tbox, &grid)
    }

    /// Whether `d` is empty in every model, as far as structure shows.
    pub fn is_unsatisfiable(&self, d: &Description) -> bool {
        let cap = self.config.max_dnf;
        match translate(d, cap) {
            Ok(nf) => Engine::new(&self.compiled, cap).unsat(&nf, 0),
            Err(_) => false,
        }
    }
}

/// `subsumes` with the model's terminology and default limits.
pub fn subsumes(m: &ModelStore, left: &Description, right: &Description) -> Verdict3 {
    Reasoner::new(m).subsumes(left, right)
}
