//! Disjunctive normal form of descriptions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{CardModifier, Description, RegionExpr, ANYTHING, NOTHING};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DnfCapExceeded {
    pub cap: usize,
}

/// A union of conjuncts. No disjuncts at all is the empty concept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct NormalForm {
    pub disjuncts: Vec<Conjunct>,
}

/// An intersection of simple constraints on one individual.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Conjunct {
    pub atoms: BTreeSet<String>,
    /// Each entry is excluded: the individual is in none of them.
    pub negs: Vec<NormalForm>,
    /// Intersection of all enumerations, when there is at least one.
    pub enums: Option<BTreeSet<String>>,
    pub regions: Vec<RegionExpr>,
    pub slots: BTreeMap<String, SlotConstraint>,
    /// `(s, P)`: some member of `P` reaches the individual through `s`.
    pub projs: Vec<(String, NormalForm)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SlotConstraint {
    pub restrictions: Vec<Restriction>,
    /// Every successor lies in each of these.
    pub only: Vec<NormalForm>,
}

/// `min <= |s(x, filler)| <= max`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Restriction {
    pub min: u32,
    pub max: Option<u32>,
    pub filler: NormalForm,
}

impl NormalForm {
    pub fn top() -> Self {
        NormalForm {
            disjuncts: vec![Conjunct::default()],
        }
    }

    pub fn bottom() -> Self {
        NormalForm { disjuncts: Vec::new() }
    }

    pub fn is_top(&self) -> bool {
        self.disjuncts.iter().any(Conjunct::is_top)
    }

    pub fn is_bottom(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn single(c: Conjunct) -> Self {
        NormalForm { disjuncts: vec![c] }
    }

    pub fn and(&self, other: &NormalForm, cap: usize) -> Result<NormalForm, DnfCapExceeded> {
        if self.disjuncts.len().saturating_mul(other.disjuncts.len()) > cap {
            return Err(DnfCapExceeded { cap });
        }
        let mut disjuncts = Vec::new();
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                disjuncts.push(a.merge(b));
            }
        }
        Ok(NormalForm { disjuncts })
    }

    pub fn or(mut self, other: NormalForm, cap: usize) -> Result<NormalForm, DnfCapExceeded> {
        for d in other.disjuncts {
            if !self.disjuncts.contains(&d) {
                self.disjuncts.push(d);
            }
        }
        if self.disjuncts.len() > cap {
            return Err(DnfCapExceeded { cap });
        }
        Ok(self)
    }

    /// Conjunction of several forms; the empty list is the universal concept.
    pub fn and_all<'a, I>(forms: I, cap: usize) -> Result<NormalForm, DnfCapExceeded>
    where
        I: IntoIterator<Item = &'a NormalForm>,
    {
        let mut acc = NormalForm::top();
        for f in forms {
            acc = acc.and(f, cap)?;
        }
        Ok(acc)
    }
}

impl Conjunct {
    pub fn is_top(&self) -> bool {
        self.atoms.is_empty()
            && self.negs.is_empty()
            && self.enums.is_none()
            && self.regions.is_empty()
            && self.slots.is_empty()
            && self.projs.is_empty()
    }

    pub fn merge(&self, other: &Conjunct) -> Conjunct {
        let mut out = self.clone();
        out.atoms.extend(other.atoms.iter().cloned());
        for n in &other.negs {
            if !out.negs.contains(n) {
                out.negs.push(n.clone());
            }
        }
        out.enums = match (&self.enums, &other.enums) {
            (Some(a), Some(b)) => Some(a.intersection(b).cloned().collect()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        for r in &other.regions {
            if !out.regions.contains(r) {
                out.regions.push(r.clone());
            }
        }
        for (s, c) in &other.slots {
            let slot = out.slots.entry(s.clone()).or_default();
            for r in &c.restrictions {
                if !slot.restrictions.contains(r) {
                    slot.restrictions.push(r.clone());
                }
            }
            for o in &c.only {
                if !slot.only.contains(o) {
                    slot.only.push(o.clone());
                }
            }
        }
        for p in &other.projs {
            if !out.projs.contains(p) {
                out.projs.push(p.clone());
            }
        }
        out
    }
}

/// Translates `d` into normal form, failing once a union grows past `cap` disjuncts.
pub fn translate(d: &Description, cap: usize) -> Result<NormalForm, DnfCapExceeded> {
    Ok(match d {
        Description::Atom(a) if a == NOTHING => NormalForm::bottom(),
        Description::Atom(a) if a == ANYTHING => NormalForm::top(),
        Description::Atom(a) | Description::Region(RegionExpr::Named(a)) => {
            let mut c = Conjunct::default();
            c.atoms.insert(a.clone());
            NormalForm::single(c)
        }
        Description::Region(r) => NormalForm::single(Conjunct {
            regions: vec![r.clone()],
            ..Conjunct::default()
        }),
        Description::Enum(members) => NormalForm::single(Conjunct {
            enums: Some(members.iter().cloned().collect()),
            ..Conjunct::default()
        }),
        Description::Slot { slot, modifier, filler } => {
            let f = translate(filler, cap)?;
            let mut sc = SlotConstraint::default();
            let restrict = |min, max, filler| Restriction { min, max, filler };
            match *modifier {
                CardModifier::ExactlyOne => {
                    sc.restrictions.push(restrict(1, Some(1), NormalForm::top()));
                    sc.only.push(f);
                }
                CardModifier::AtMost(n) => sc.restrictions.push(restrict(0, Some(n), f)),
                CardModifier::AtLeast(n) => sc.restrictions.push(restrict(n, None, f)),
                CardModifier::Exactly(n) => sc.restrictions.push(restrict(n, Some(n), f)),
                CardModifier::Some => sc.restrictions.push(restrict(1, None, f)),
                CardModifier::Only => sc.only.push(f),
            }
            let mut c = Conjunct::default();
            c.slots.insert(slot.clone(), sc);
            NormalForm::single(c)
        }
        Description::Proj { base, slot } => NormalForm::single(Conjunct {
            projs: vec![(slot.clone(), translate(base, cap)?)],
            ..Conjunct::default()
        }),
        Description::And(l, r) => translate(l, cap)?.and(&translate(r, cap)?, cap)?,
        Description::Or(l, r) => translate(l, cap)?.or(translate(r, cap)?, cap)?,
        Description::Diff(l, r) => {
            let mut left = translate(l, cap)?;
            let right = translate(r, cap)?;
            if !right.is_bottom() {
                for c in &mut left.disjuncts {
                    if !c.negs.contains(&right) {
                        c.negs.push(right.clone());
                    }
                }
            }
            left
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_description_str;

    fn nf(text: &str) -> NormalForm {
        translate(&parse_description_str(text).unwrap(), 16).unwrap()
    }

    #[test]
    fn at_least_three() {
        let n = nf("<register_for: >=3 Class>");
        let slot = &n.disjuncts[0].slots["register_for"];
        assert_eq!(slot.restrictions[0].min, 3);
        assert_eq!(slot.restrictions[0].max, None);
        assert!(slot.restrictions[0].filler.disjuncts[0].atoms.contains("Class"));
    }

    #[test]
    fn union_gives_two_disjuncts() {
        assert_eq!(nf("A | B").disjuncts.len(), 2);
        assert_eq!(nf("(A | B) (C | D)").disjuncts.len(), 4);
    }

    #[test]
    fn male_students_older_than_twenty() {
        let n = nf("Student <gender: Male> <age: >=20>");
        assert_eq!(n.disjuncts.len(), 1);
        let c = &n.disjuncts[0];
        assert!(c.atoms.contains("Student"));
        let age = &c.slots["age"];
        assert!(matches!(age.only[0].disjuncts[0].regions[0], RegionExpr::Interval { hi: None, .. }));
        assert_eq!(age.restrictions[0].max, Some(1));
    }

    #[test]
    fn cap_is_enforced() {
        let d = parse_description_str("(A | B) (C | D) (E | F) (G | H) (I | J)").unwrap();
        assert_eq!(translate(&d, 16), Err(DnfCapExceeded { cap: 16 }));
    }

    #[test]
    fn nothing_and_anything() {
        assert!(nf("Nothing").is_bottom());
        assert!(nf("Anything").is_top());
        assert!(nf("A Nothing").is_bottom());
    }
}
