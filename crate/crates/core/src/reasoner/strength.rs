//! Verification of declared refinement strengths.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::pct::{chain_entails, describe_chain};
use super::{Reasoner, ReasonerConfig, Verdict3};
use crate::model::{Application, Element, ElementBody, ElementKind, ModelStore, QualityForm, Verdict};
use crate::operators::{construct_focus, construct_scale, OperatorArgs, OperatorKind, ScaleFactor, Strength};
use crate::syntax::{Description, RegionExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrengthCheck {
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl StrengthCheck {
    fn new(verdict: Verdict, note: impl Into<String>) -> Self {
        StrengthCheck {
            verdict,
            note: Some(note.into()),
        }
    }
}

/// Strengths an operator may claim at all.
pub fn admissible(op: OperatorKind, declared: Strength) -> bool {
    use OperatorKind::*;
    use Strength::*;
    match op {
        Interpret => matches!(declared, Strengthen | Equate),
        Reduce => true,
        // Equating covers identity factors.
        ScaleUp => matches!(declared, Strengthen | Equate),
        ScaleDown => matches!(declared, Weaken | Equate),
        DeUniversalize => declared == Weaken,
        Focus => matches!(declared, Weaken | Equate),
        Operationalize => matches!(declared, Strengthen | Weaken),
        Observe => declared == Strengthen,
        Resolve => declared == Weaken,
    }
}

pub fn check_strength(m: &ModelStore, a: &Application, config: &ReasonerConfig) -> StrengthCheck {
    if !admissible(a.op, a.strength) {
        return StrengthCheck::new(
            Verdict::Violated,
            format!("{} is never a {}", a.op.keyword(), a.strength),
        );
    }
    let Some(input) = a.inputs.first().and_then(|id| m.get(id)) else {
        return StrengthCheck::new(Verdict::Unknown, "input is missing");
    };
    let outputs: Vec<&Element> = a.outputs.iter().filter_map(|id| m.get(id)).collect();
    let reasoner = Reasoner::from_model(m, *config);
    match a.op {
        OperatorKind::Operationalize => {
            let only_das = outputs.iter().all(|e| e.kind == ElementKind::DA);
            match (a.strength, only_das) {
                (Strength::Strengthen, true) => StrengthCheck::new(
                    Verdict::Violated,
                    "operationalizing into assumptions only is a weakening",
                ),
                (Strength::Weaken, false) => StrengthCheck::new(
                    Verdict::Violated,
                    "operationalizing into specification elements is a strengthening",
                ),
                _ => StrengthCheck::new(
                    Verdict::Asserted,
                    "relates effects of the outputs to the goal; recorded, not computed",
                ),
            }
        }
        OperatorKind::Resolve => StrengthCheck::new(Verdict::Asserted, "conflict resolution is recorded, not computed"),
        OperatorKind::Interpret | OperatorKind::Reduce => relator(&reasoner, a, input, &outputs),
        OperatorKind::Focus => focus(m, a, input),
        OperatorKind::ScaleUp | OperatorKind::ScaleDown => scale(m, &reasoner, a, input, &outputs),
        OperatorKind::DeUniversalize => deuniversalize(input, &outputs),
        OperatorKind::Observe => match outputs.first().and_then(|o| quality(o)) {
            Some(q) if q.observer.is_some() => {
                StrengthCheck::new(Verdict::Verified, "the output only adds an observer")
            }
            _ => StrengthCheck::new(Verdict::Unknown, "output has no observer"),
        },
    }
}

fn quality(e: &Element) -> Option<&QualityForm> {
    match &e.body {
        ElementBody::QualityForm(q) => Some(q),
        _ => None,
    }
}

fn relator(r: &Reasoner, a: &Application, input: &Element, outputs: &[&Element]) -> StrengthCheck {
    let peers: Vec<&Element> = outputs
        .iter()
        .copied()
        .filter(|o| o.kind != ElementKind::DA || input.kind == ElementKind::DA)
        .collect();
    let natural = |e: &Element| matches!(e.body, ElementBody::NLText(_));
    if natural(input) || peers.iter().any(|e| natural(e)) || peers.is_empty() {
        return StrengthCheck::new(Verdict::Asserted, "natural-language bodies are not computable");
    }
    let down = || element_entails(r, &peers, input);
    let up = || -> Verdict3 {
        let mut worst = Verdict3::Proved;
        for o in &peers {
            match element_entails(r, &[input], o) {
                Verdict3::Proved => {}
                d @ Verdict3::Disproved(_) => return d,
                u @ Verdict3::Unknown(_) => worst = u,
            }
        }
        worst
    };
    let joint = peers.len() > 1 && !matches!(input.body, ElementBody::SubsumptionForm { .. });
    let judge = |v: Verdict3, claim: &str| -> StrengthCheck {
        match v {
            Verdict3::Proved => StrengthCheck::new(Verdict::Verified, format!("{claim} proved")),
            Verdict3::Disproved(w) => StrengthCheck::new(Verdict::Violated, format!("{claim} fails: {w}")),
            Verdict3::Unknown(_) if joint => StrengthCheck::new(
                Verdict::Asserted,
                format!("{claim} depends on the outputs jointly; recorded, not computed"),
            ),
            Verdict3::Unknown(why) => StrengthCheck::new(Verdict::Unknown, format!("{claim}: {why}")),
        }
    };
    let ids: Vec<&str> = peers.iter().map(|e| e.id.as_str()).collect();
    let ids = ids.join(", ");
    match a.strength {
        Strength::Strengthen => judge(down(), &format!("{ids} entails {}", input.id)),
        Strength::Weaken => judge(up(), &format!("{} entails {ids}", input.id)),
        Strength::Equate => {
            let first = judge(down(), &format!("{ids} entails {}", input.id));
            if first.verdict != Verdict::Verified {
                return first;
            }
            judge(up(), &format!("{} entails {ids}", input.id))
        }
    }
}

/// Whether the premises together entail the conclusion.
pub fn element_entails(r: &Reasoner, premises: &[&Element], conclusion: &Element) -> Verdict3 {
    match &conclusion.body {
        ElementBody::SubsumptionForm { lhs, rhs } => {
            let mut extra = Vec::new();
            for p in premises {
                match &p.body {
                    ElementBody::SubsumptionForm { lhs, rhs } => extra.push((lhs.clone(), rhs.clone())),
                    other => {
                        return Verdict3::Unknown(format!(
                            "`{}` has a {}, `{}` a subsumption form",
                            p.id,
                            other.shape(),
                            conclusion.id
                        ))
                    }
                }
            }
            r.extended(extra).subsumes(lhs, rhs)
        }
        ElementBody::QualityForm(b) => best_of(premises, |p| match &p.body {
            ElementBody::QualityForm(a) => qgc_entails(r, a, b),
            other => Verdict3::Unknown(format!("`{}` has a {}", p.id, other.shape())),
        }),
        ElementBody::FunctionDesc { name, slots } => {
            described_entails(r, premises, &ElementBody::function_description(name, slots))
        }
        ElementBody::Concept(target) => described_entails(r, premises, target),
        ElementBody::NLText(_) => Verdict3::Unknown("natural-language body".into()),
    }
}

/// Premises with description bodies hold together on their conjunction.
fn described_entails(r: &Reasoner, premises: &[&Element], target: &Description) -> Verdict3 {
    let single = best_of(premises, |p| match description_of(&p.body) {
        Some(d) => r.subsumes(&d, target),
        None => Verdict3::Unknown(format!("`{}` has a {}", p.id, p.body.shape())),
    });
    if single.is_proved() || premises.len() < 2 {
        return single;
    }
    let all: Option<Vec<Description>> = premises.iter().map(|p| description_of(&p.body)).collect();
    match all.and_then(Description::conjunction) {
        Some(joint) => r.subsumes(&joint, target),
        None => single,
    }
}

fn description_of(body: &ElementBody) -> Option<Description> {
    match body {
        ElementBody::Concept(d) => Some(d.clone()),
        ElementBody::FunctionDesc { name, slots } => Some(ElementBody::function_description(name, slots)),
        _ => None,
    }
}

/// Proved if one premise alone proves it; a single premise's verdict otherwise.
fn best_of<F>(premises: &[&Element], mut f: F) -> Verdict3
where
    F: FnMut(&Element) -> Verdict3,
{
    let mut last = Verdict3::Unknown("no premises".into());
    for p in premises {
        let v = f(p);
        if v.is_proved() {
            return v;
        }
        last = v;
    }
    if premises.len() == 1 {
        last
    } else {
        Verdict3::Unknown("no single output entails it on its own".into())
    }
}

/// `a ⊨ b` for quality forms: `b` constrains no more qualities and subjects
/// than `a`, and `a`'s region and percentages are at least as tight.
pub(crate) fn qgc_entails(r: &Reasoner, a: &QualityForm, b: &QualityForm) -> Verdict3 {
    let quality_ok = a.quality == b.quality
        || r.subsumes(&Description::atom(b.quality.as_str()), &Description::atom(a.quality.as_str()))
            .is_proved();
    if !quality_ok {
        return Verdict3::Unknown(format!("quality {} is not known to be a {}", b.quality, a.quality));
    }
    if a.subject != b.subject && !r.subsumes(&b.subject, &a.subject).is_proved() {
        return Verdict3::Unknown("subjects are not known to be related".into());
    }
    let observer_ok = b.observer.is_none() || a.observer == b.observer;
    if !observer_ok {
        return Verdict3::Unknown("observers differ".into());
    }
    let identical_scope = a.quality == b.quality && a.subject == b.subject;
    let region = if a.region == b.region {
        Verdict3::Proved
    } else {
        r.subsumes(&Description::Region(a.region.clone()), &Description::Region(b.region.clone()))
    };
    match region {
        Verdict3::Proved => {}
        Verdict3::Disproved(w) if identical_scope && a.pct_chain.is_empty() && b.pct_chain.is_empty() => {
            return Verdict3::Disproved(w)
        }
        Verdict3::Disproved(_) => return Verdict3::Unknown("region is not contained".into()),
        u @ Verdict3::Unknown(_) => return u,
    }
    match chain_entails(&a.pct_chain, &b.pct_chain) {
        Verdict3::Disproved(w) if identical_scope && a.region == b.region && a.observer == b.observer => {
            Verdict3::Disproved(w)
        }
        Verdict3::Disproved(_) => Verdict3::Unknown(format!(
            "percentages [{}] do not cover [{}]",
            describe_chain(&a.pct_chain),
            describe_chain(&b.pct_chain)
        )),
        v => v,
    }
}

fn focus(m: &ModelStore, a: &Application, input: &Element) -> StrengthCheck {
    let (Some(q), OperatorArgs::Focus(args)) = (quality(input), &a.args) else {
        return StrengthCheck::new(Verdict::Unknown, "focus needs a quality form and targets");
    };
    match construct_focus(m, input.kind, q, args) {
        Ok(outs) => {
            let computed = outs.first().map_or(Strength::Weaken, |c| c.strength);
            let how = if computed == Strength::Equate {
                "targets are the full set of children"
            } else {
                "targets are a partial set of children"
            };
            if computed.justifies(a.strength) {
                StrengthCheck::new(Verdict::Verified, how)
            } else {
                StrengthCheck::new(Verdict::Violated, format!("{how}, so the focus is a {computed}"))
            }
        }
        Err(e) => StrengthCheck::new(Verdict::Unknown, format!("{e}")),
    }
}

fn scale(m: &ModelStore, r: &Reasoner, a: &Application, input: &Element, outputs: &[&Element]) -> StrengthCheck {
    let (Some(q), OperatorArgs::Scale(f)) = (quality(input), &a.args) else {
        return StrengthCheck::new(Verdict::Unknown, "scale needs a quality form and a factor");
    };
    let computed = match construct_scale(m, input.kind, q, a.op, f) {
        Ok(c) => c.strength,
        Err(e) => return StrengthCheck::new(Verdict::Unknown, format!("{e}")),
    };
    if !computed.justifies(a.strength) {
        return StrengthCheck::new(
            Verdict::Violated,
            format!("the factor makes this scaling a {computed}"),
        );
    }
    if matches!(f, ScaleFactor::Qualitative(_)) {
        return StrengthCheck::new(
            Verdict::Asserted,
            "direction follows the factor table; vague regions are not compared",
        );
    }
    let Some(out) = outputs.first().and_then(|o| quality(o)) else {
        return StrengthCheck::new(Verdict::Unknown, "output is missing");
    };
    let region = |x: &RegionExpr| Description::Region(x.clone());
    let wider = r.subsumes(&region(&q.region), &region(&out.region));
    let narrower = r.subsumes(&region(&out.region), &region(&q.region));
    let holds = match a.strength {
        Strength::Weaken => wider.is_proved(),
        Strength::Strengthen => narrower.is_proved(),
        Strength::Equate => wider.is_proved() && narrower.is_proved(),
    };
    if holds {
        StrengthCheck::new(Verdict::Verified, "region containment proved")
    } else {
        StrengthCheck::new(Verdict::Unknown, "region containment not proved")
    }
}

fn deuniversalize(input: &Element, outputs: &[&Element]) -> StrengthCheck {
    let (Some(q), Some(out)) = (quality(input), outputs.first().and_then(|o| quality(o))) else {
        return StrengthCheck::new(Verdict::Unknown, "de-universalization needs quality forms");
    };
    match super::pct_entails(q, out) {
        Verdict3::Proved => StrengthCheck::new(Verdict::Verified, "percentage chain entailment proved"),
        v => StrengthCheck::new(Verdict::Unknown, format!("{v}")),
    }
}
