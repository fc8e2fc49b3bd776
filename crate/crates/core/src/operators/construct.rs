use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{DeUniversalizeArgs, FocusArgs, FocusMode, OperatorKind, ScaleDirection, ScaleFactor, Strength};
use crate::model::{ElementKind, ModelStore, PctEntry, QualityForm};
use crate::num::{format_rational, Rational};
use crate::syntax::{Description, RegionExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("`{0}` is not below the focused quality or subject in any hierarchy")]
    NotInHierarchy(String),
    #[error("focus needs at least one target")]
    EmptyTargets,
    #[error("scaling would shift the region instead of enlarging or shrinking it")]
    ShiftRejected,
    #[error("scaling leaves an empty region")]
    EmptyRegion,
    #[error("factor {0} is out of range for this direction")]
    FactorOutOfRange(String),
    #[error("unknown qualitative factor `{0}`")]
    UnknownFactor(String),
    #[error("region kind mismatch: {0}")]
    RegionKindMismatch(String),
    #[error("slot path `{0}` does not resolve in the element")]
    PathUnresolved(String),
    #[error("percentage {0} is outside (0%, 100%]")]
    PctOutOfRange(String),
    #[error("the element already has an observer")]
    ObserverAlreadySet,
    #[error("input is not a QG or QC")]
    NotQuality,
}

/// A synthesized output plus the strength the construction itself implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constructed {
    pub kind: ElementKind,
    pub form: QualityForm,
    pub strength: Strength,
}

/// Qualitative scale factors and the direction each one scales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTable {
    entries: BTreeMap<String, ScaleDirection>,
}

impl Default for FactorTable {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("Very".to_string(), ScaleDirection::Strengthens);
        entries.insert("Nearly".to_string(), ScaleDirection::Weakens);
        entries.insert("Almost".to_string(), ScaleDirection::Weakens);
        FactorTable { entries }
    }
}

impl FactorTable {
    pub fn insert(&mut self, name: impl Into<String>, direction: ScaleDirection) {
        self.entries.insert(name.into(), direction);
    }

    pub fn direction(&self, name: &str) -> Option<ScaleDirection> {
        self.entries.get(name).copied()
    }
}

fn quality_kind(kind: ElementKind) -> Result<(), ConstructError> {
    if kind.is_qgc() {
        Ok(())
    } else {
        Err(ConstructError::NotQuality)
    }
}

/// Names a subject stands for: the atom itself or the members of an enumeration.
fn subject_roots(subject: &Description) -> Vec<&str> {
    match subject {
        Description::Atom(a) => vec![a.as_str()],
        Description::Enum(members) => members.iter().map(String::as_str).collect(),
        _ => Vec::new(),
    }
}

fn descendants(edges: &[(String, String)], root: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![root.to_string()];
    while let Some(p) = stack.pop() {
        for (child, parent) in edges {
            if *parent == p && seen.insert(child.clone()) {
                stack.push(child.clone());
            }
        }
    }
    seen
}

fn children(edges: &[(String, String)], root: &str) -> BTreeSet<String> {
    edges.iter().filter(|(_, p)| p == root).map(|(c, _)| c.clone()).collect()
}

/// Atoms declared below `root` by `axiom A :< B` chains.
fn axiom_descendants(m: &ModelStore, root: &str) -> BTreeSet<String> {
    let edges: Vec<(String, String)> = m
        .axioms
        .iter()
        .filter_map(|ax| match (&ax.lhs, &ax.rhs) {
            (Description::Atom(a), Description::Atom(b)) => Some((a.clone(), b.clone())),
            _ => None,
        })
        .collect();
    descendants(&edges, root)
}

pub fn construct_focus(
    m: &ModelStore,
    kind: ElementKind,
    input: &QualityForm,
    args: &FocusArgs,
) -> Result<Vec<Constructed>, ConstructError> {
    quality_kind(kind)?;
    if args.targets.is_empty() {
        return Err(ConstructError::EmptyTargets);
    }
    let dims = descendants(&m.dimensions, &input.quality);
    let roots = subject_roots(&input.subject);
    let mut below_subject = BTreeSet::new();
    let mut by_parts = BTreeSet::new();
    for r in &roots {
        let parts = descendants(&m.parts, r);
        by_parts.extend(parts.iter().cloned());
        below_subject.extend(parts);
        below_subject.extend(axiom_descendants(m, r));
    }
    let all_in = |set: &BTreeSet<String>| args.targets.iter().all(|t| set.contains(t));
    let mode = match args.mode {
        Some(mode) => mode,
        None if all_in(&dims) => FocusMode::Quality,
        None if all_in(&below_subject) => FocusMode::Subject,
        None => {
            let set = if args.targets.iter().any(|t| dims.contains(t)) { &dims } else { &below_subject };
            let bad = args.targets.iter().find(|t| !set.contains(*t)).expect("some target fails");
            return Err(ConstructError::NotInHierarchy(bad.clone()));
        }
    };
    let pool = match mode {
        FocusMode::Quality => &dims,
        FocusMode::Subject => &below_subject,
    };
    if let Some(bad) = args.targets.iter().find(|t| !pool.contains(*t)) {
        return Err(ConstructError::NotInHierarchy(bad.clone()));
    }
    let targets: BTreeSet<String> = args.targets.iter().cloned().collect();
    let full = match mode {
        FocusMode::Quality => children(&m.dimensions, &input.quality),
        FocusMode::Subject if roots.len() == 1 => children(&m.parts, roots[0]),
        FocusMode::Subject => BTreeSet::new(),
    };
    let strength = if !full.is_empty() && targets == full {
        Strength::Equate
    } else {
        Strength::Weaken
    };
    let out = args
        .targets
        .iter()
        .map(|t| {
            let mut form = input.clone();
            match mode {
                FocusMode::Quality => form.quality = t.clone(),
                FocusMode::Subject => {
                    form.subject = match &input.subject {
                        Description::Enum(_) => Description::Enum(vec![t.clone()]),
                        _ => Description::Atom(t.clone()),
                    }
                }
            }
            Constructed { kind, form, strength }
        })
        .collect();
    Ok(out)
}

pub fn construct_scale(
    m: &ModelStore,
    kind: ElementKind,
    input: &QualityForm,
    op: OperatorKind,
    factor: &ScaleFactor,
) -> Result<Constructed, ConstructError> {
    quality_kind(kind)?;
    let up = op == OperatorKind::ScaleUp;
    let mut form = input.clone();
    let strength = match factor {
        ScaleFactor::Qualitative(name) => {
            let RegionExpr::Named(region) = &input.region else {
                return Err(ConstructError::RegionKindMismatch(
                    "a qualitative factor needs a named region".into(),
                ));
            };
            let dir = m.factors.direction(name).ok_or_else(|| ConstructError::UnknownFactor(name.clone()))?;
            let want = if up { ScaleDirection::Strengthens } else { ScaleDirection::Weakens };
            if dir != want {
                return Err(ConstructError::FactorOutOfRange(name.clone()));
            }
            form.region = RegionExpr::Named(format!("{name}_{region}"));
            if up {
                Strength::Strengthen
            } else {
                Strength::Weaken
            }
        }
        ScaleFactor::Quantitative { lo: flo, hi: fhi } => {
            let RegionExpr::Interval { lo, hi, unit } = &input.region else {
                return Err(ConstructError::RegionKindMismatch(
                    "a quantitative factor pair needs an interval region".into(),
                ));
            };
            let one = Rational::one();
            let in_range = if up {
                *flo >= one && *fhi <= one
            } else {
                *flo <= one && *fhi >= one
            };
            if !in_range || *flo < Rational::zero() || *fhi < Rational::zero() {
                return Err(ConstructError::FactorOutOfRange(format!(
                    "({}, {})",
                    format_rational(flo),
                    format_rational(fhi)
                )));
            }
            let new_lo = lo * flo;
            let new_hi = hi.map(|h| h * fhi);
            if let Some(h) = new_hi {
                if new_lo > h {
                    return Err(ConstructError::EmptyRegion);
                }
            }
            let contains = |outer_lo: &Rational, outer_hi: &Option<Rational>, inner_lo: &Rational, inner_hi: &Option<Rational>| {
                outer_lo <= inner_lo
                    && match (outer_hi, inner_hi) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(o), Some(i)) => o >= i,
                    }
            };
            let ok = if up {
                contains(lo, hi, &new_lo, &new_hi)
            } else {
                contains(&new_lo, &new_hi, lo, hi)
            };
            if !ok {
                return Err(ConstructError::ShiftRejected);
            }
            form.region = RegionExpr::Interval {
                lo: new_lo,
                hi: new_hi,
                unit: unit.clone(),
            };
            if form.region == input.region {
                Strength::Equate
            } else if up {
                Strength::Strengthen
            } else {
                Strength::Weaken
            }
        }
    };
    Ok(Constructed { kind, form, strength })
}

/// Finds `slot` among the top-level conjuncts of `d` and returns its filler.
fn slot_filler<'a>(d: &'a Description, slot: &str) -> Option<&'a Description> {
    d.conjuncts().into_iter().find_map(|c| match c {
        Description::Slot { slot: s, filler, .. } if s == slot => Some(&**filler),
        _ => None,
    })
}

pub fn construct_deuniversalize(
    kind: ElementKind,
    input: &QualityForm,
    args: &DeUniversalizeArgs,
) -> Result<Constructed, ConstructError> {
    quality_kind(kind)?;
    if args.pct <= Rational::zero() || args.pct > Rational::one() {
        return Err(ConstructError::PctOutOfRange(crate::num::format_percent(&args.pct)));
    }
    let unresolved = || ConstructError::PathUnresolved(args.slot_path.join("."));
    let (first, rest) = args.slot_path.split_first().ok_or_else(unresolved)?;
    let mut scope = match first.as_str() {
        "inheres_in" => &input.subject,
        "observed_by" => input.observer.as_ref().ok_or_else(unresolved)?,
        _ => return Err(unresolved()),
    };
    for slot in rest {
        scope = slot_filler(scope, slot).ok_or_else(unresolved)?;
    }
    let vacuous = args.pct == Rational::one();
    let mut form = input.clone();
    form.pct_chain.push(PctEntry {
        var: args.var.clone(),
        path: args.slot_path.clone(),
        pct: args.pct,
        vacuous,
    });
    let strength = if vacuous { Strength::Equate } else { Strength::Weaken };
    Ok(Constructed { kind, form, strength })
}

pub fn construct_observe(
    kind: ElementKind,
    input: &QualityForm,
    observer: &Description,
) -> Result<Constructed, ConstructError> {
    quality_kind(kind)?;
    if input.observer.is_some() {
        return Err(ConstructError::ObserverAlreadySet);
    }
    let mut form = input.clone();
    form.observer = Some(observer.clone());
    Ok(Constructed {
        kind: ElementKind::QC,
        form,
        strength: Strength::Strengthen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn secs(lo: i64, hi: i64) -> RegionExpr {
        RegionExpr::interval(Rational::from_integer(lo), Rational::from_integer(hi), Some("Sec"))
    }

    fn qc(region: RegionExpr) -> QualityForm {
        QualityForm::new("Processing_time", Description::atom("File_search"), region)
    }

    fn scale(op: OperatorKind, lo: Rational, hi: Rational) -> Result<Constructed, ConstructError> {
        let m = ModelStore::default();
        construct_scale(&m, ElementKind::QC, &qc(secs(0, 30)), op, &ScaleFactor::Quantitative { lo, hi })
    }

    #[test]
    fn scale_down_and_up() {
        let down = scale(OperatorKind::ScaleDown, Rational::one(), Rational::new(6, 5)).unwrap();
        assert_eq!(down.form.region, secs(0, 36));
        assert_eq!(down.strength, Strength::Weaken);
        let up = scale(OperatorKind::ScaleUp, Rational::one(), Rational::new(2, 3)).unwrap();
        assert_eq!(up.form.region, secs(0, 20));
        assert_eq!(up.strength, Strength::Strengthen);
        let same = scale(OperatorKind::ScaleDown, Rational::one(), Rational::one()).unwrap();
        assert_eq!(same.strength, Strength::Equate);
        assert!(matches!(
            scale(OperatorKind::ScaleDown, Rational::one(), Rational::new(1, 2)),
            Err(ConstructError::FactorOutOfRange(_))
        ));
    }

    #[test]
    fn shifted_region_rejected() {
        let m = ModelStore::default();
        let input = qc(RegionExpr::Interval { lo: Rational::from_integer(-10), hi: Some(Rational::from_integer(20)), unit: None });
        let r = construct_scale(
            &m,
            ElementKind::QC,
            &input,
            OperatorKind::ScaleDown,
            &ScaleFactor::Quantitative { lo: Rational::new(1, 2), hi: Rational::one() },
        );
        assert_eq!(r, Err(ConstructError::ShiftRejected));
    }

    #[test]
    fn qualitative_scale_prefixes_region() {
        let m = ModelStore::default();
        let input = qc(RegionExpr::Named("Fast".into()));
        let out = construct_scale(&m, ElementKind::QG, &input, OperatorKind::ScaleDown, &ScaleFactor::Qualitative("Nearly".into())).unwrap();
        assert_eq!(out.form.region, RegionExpr::Named("Nearly_Fast".into()));
        let wrong = construct_scale(&m, ElementKind::QG, &input, OperatorKind::ScaleUp, &ScaleFactor::Qualitative("Nearly".into()));
        assert!(wrong.is_err());
    }

    #[test]
    fn deuniversalize_paths() {
        let input = QualityForm::new(
            "Processing_time",
            Description::and(
                Description::atom("Run"),
                Description::slot("run_of", crate::syntax::CardModifier::ExactlyOne, Description::atom("SysFunc")),
            ),
            RegionExpr::Named("Fast".into()),
        );
        let args = |path: &[&str], pct| DeUniversalizeArgs {
            var: "F".into(),
            slot_path: path.iter().map(|s| s.to_string()).collect(),
            pct,
        };
        let one = construct_deuniversalize(ElementKind::QG, &input, &args(&["inheres_in", "run_of"], Rational::new(4, 5))).unwrap();
        let two = construct_deuniversalize(ElementKind::QG, &one.form, &args(&["inheres_in"], Rational::new(9, 10))).unwrap();
        assert_eq!(two.form.pct_chain.len(), 2);
        assert_eq!(two.strength, Strength::Weaken);
        let full = construct_deuniversalize(ElementKind::QG, &input, &args(&["inheres_in"], Rational::one())).unwrap();
        assert_eq!(full.strength, Strength::Equate);
        assert!(full.form.pct_chain[0].vacuous);
        assert!(construct_deuniversalize(ElementKind::QG, &input, &args(&["observed_by"], Rational::one())).is_err());
        assert!(construct_deuniversalize(ElementKind::QG, &input, &args(&["inheres_in"], Rational::zero())).is_err());
    }

    #[test]
    fn observe_once() {
        let input = QualityForm::new("Style", Description::enumeration(["the_interface"]), RegionExpr::Named("Simple".into()));
        let out = construct_observe(ElementKind::QG, &input, &Description::atom("Surveyed_user")).unwrap();
        assert_eq!(out.kind, ElementKind::QC);
        assert_eq!(construct_observe(ElementKind::QC, &out.form, &Description::atom("X")), Err(ConstructError::ObserverAlreadySet));
    }

    #[test]
    fn focus_modes() {
        let mut m = ModelStore::default();
        for d in ["Confidentiality", "Integrity", "Availability"] {
            m.dimensions.push((d.into(), "Security".into()));
        }
        m.parts.push(("data_storage".into(), "the_system".into()));
        let input = QualityForm::new("Security", Description::enumeration(["the_system"]), RegionExpr::Named("Good".into()));
        let args = |ts: &[&str]| FocusArgs { mode: None, targets: ts.iter().map(|s| s.to_string()).collect() };
        let sub = construct_focus(&m, ElementKind::QG, &input, &args(&["data_storage"])).unwrap();
        assert_eq!(sub[0].form.subject, Description::enumeration(["data_storage"]));
        let full = construct_focus(&m, ElementKind::QG, &input, &args(&["Confidentiality", "Integrity", "Availability"])).unwrap();
        assert_eq!(full.len(), 3);
        assert!(full.iter().all(|c| c.strength == Strength::Equate));
        let part = construct_focus(&m, ElementKind::QG, &input, &args(&["Integrity"])).unwrap();
        assert_eq!(part[0].strength, Strength::Weaken);
        assert!(construct_focus(&m, ElementKind::QG, &input, &args(&[])).is_err());
        assert!(matches!(construct_focus(&m, ElementKind::QG, &input, &args(&["Speed"])), Err(ConstructError::NotInHierarchy(_))));
    }
}
