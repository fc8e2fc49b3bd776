//! Generators shared by the integration tests.

#![allow(dead_code)]

use desiree_core::model::{ElementBody, ElementKind, QualityForm};
use desiree_core::operators::{DeUniversalizeArgs, FocusArgs, FocusMode, ScaleDirection, ScaleFactor};
use desiree_core::syntax::{ApplicationDecl, DeclItem, Declaration, Literal};
use desiree_core::{CardModifier, Description, ModelFileAst, OperatorArgs, OperatorKind, Rational, RegionExpr, Span, Strength};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};
use proptest::strategy::{BoxedStrategy, Strategy, ValueTree};
use proptest::test_runner::TestRunner;

/// Draws one value from `s` with the runner's RNG.
pub fn draw<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy produces a value").current()
}

pub fn modifier() -> impl Strategy<Value = CardModifier> {
    prop_oneof![
        3 => Just(CardModifier::ExactlyOne),
        2 => Just(CardModifier::Some),
        2 => Just(CardModifier::Only),
        1 => (0u32..3).prop_map(CardModifier::AtMost),
        1 => (1u32..3).prop_map(CardModifier::AtLeast),
        1 => (1u32..3).prop_map(CardModifier::Exactly),
    ]
}

/// Concepts over a small vocabulary, sized for the finite-model oracle.
pub fn small_concept(atoms: &'static [&'static str], slots: &'static [&'static str], depth: u32) -> BoxedStrategy<Description> {
    let leaf = prop_oneof![
        8 => select(atoms).prop_map(Description::atom),
        1 => Just(Description::enumeration(["a"])),
        1 => Just(Description::atom("Nothing")),
        1 => Just(Description::atom("Anything")),
    ];
    leaf.prop_recursive(depth, 12, 2, move |inner| {
        prop_oneof![
            3 => (select(slots), modifier(), inner.clone()).prop_map(|(s, m, f)| Description::slot(s, m, f)),
            3 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::and(l, r)),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::or(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::diff(l, r)),
            1 => (inner, select(slots)).prop_map(|(b, s)| Description::proj(b, s)),
        ]
    })
    .boxed()
}

/// Pairs of which a fair share are subsumptions by construction.
pub fn subsumption_pair() -> impl Strategy<Value = (Description, Description)> {
    const ATOMS: &[&str] = &["A", "B", "C"];
    const SLOTS: &[&str] = &["r", "s"];
    let c = || small_concept(ATOMS, SLOTS, 2);
    (c(), c(), 0u8..6).prop_map(|(d, x, shape)| match shape {
        0 => (Description::and(d.clone(), x), d),
        1 => (d.clone(), Description::or(d, x)),
        2 => (d.clone(), d),
        3 => (Description::slot("r", CardModifier::Some, Description::and(d.clone(), x)), Description::slot("r", CardModifier::Some, d)),
        _ => (d, x),
    })
}

pub type Pairs = Vec<(Description, Description)>;

/// Optional terminology: one axiom, one disjoint pair, or nothing.
pub fn small_tbox() -> impl Strategy<Value = (Pairs, Pairs)> {
    let pair = (select(&["A", "B", "C"][..]), select(&["A", "B", "C"][..]))
        .prop_filter("distinct", |(a, b)| a != b)
        .prop_map(|(a, b)| (Description::atom(a), Description::atom(b)));
    prop_oneof![
        2 => Just((Vec::new(), Vec::new())),
        1 => pair.clone().prop_map(|p| (vec![p], Vec::new())),
        1 => pair.prop_map(|p| (Vec::new(), vec![p])),
    ]
}

// ---- whole model files ----

const NAMES: &[&str] = &["User", "Meeting_room", "Ticket", "Airline_ticket", "Report", "the_system", "Email", "x1"];
const SLOT_NAMES: &[&str] = &["actor", "object", "target", "means", "when", "inheres_in"];
const UNITS: &[&str] = &["Sec", "Min", "ms", "USD"];

pub fn name() -> impl Strategy<Value = String> {
    select(NAMES).prop_map(String::from)
}

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..200, select(&[1i64, 2, 3, 4, 5, 6, 10][..])).prop_map(|(n, d)| Rational::new(n, d))
}

fn percent() -> impl Strategy<Value = Rational> {
    (0i64..=40).prop_map(|n| Rational::new(n * 5, 200))
}

fn unit() -> impl Strategy<Value = Option<String>> {
    proptest::option::of(select(UNITS).prop_map(String::from))
}

fn interval() -> impl Strategy<Value = RegionExpr> {
    (rational(), rational(), unit(), any::<bool>()).prop_map(|(a, b, unit, open)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        RegionExpr::Interval { lo, hi: (!open).then_some(hi), unit }
    })
}

fn percent_range() -> impl Strategy<Value = RegionExpr> {
    (percent(), percent()).prop_map(|(a, b)| RegionExpr::Percent { lo: a.min(b), hi: a.max(b) })
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        rational().prop_map(Literal::Number),
        "[a-z \"\\\\]{0,6}".prop_map(Literal::Text),
        select(NAMES).prop_map(|s| Literal::Symbol(s.into())),
    ]
}

fn value_set(all_symbols_ok: bool) -> impl Strategy<Value = RegionExpr> {
    proptest::collection::vec(literal(), 1..4)
        .prop_filter("a symbol-only set reads as an enumeration", move |v| {
            all_symbols_ok || !v.iter().all(|l| matches!(l, Literal::Symbol(_)))
        })
        .prop_map(RegionExpr::ValueSet)
}

/// A region tree. Inside `has_value_in` names and symbol sets are regions too.
fn region_desc(in_value_slot: bool) -> BoxedStrategy<Description> {
    let leaf = if in_value_slot {
        prop_oneof![
            interval(),
            percent_range(),
            value_set(true),
            select(&["Fast", "Good", "Nearly_Fast"][..]).prop_map(|n| RegionExpr::Named(n.into())),
        ]
        .boxed()
    } else {
        prop_oneof![interval(), percent_range(), value_set(false)].boxed()
    };
    leaf.prop_map(Description::Region)
        .prop_recursive(2, 6, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::or(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Description::diff(l, r)),
            ]
        })
        .boxed()
}

fn enumeration() -> impl Strategy<Value = Description> {
    subsequence(NAMES, 1..3).prop_map(|mut v| {
        v.sort_unstable();
        Description::enumeration(v)
    })
}

/// Any description the parser can produce.
pub fn description() -> BoxedStrategy<Description> {
    let leaf = prop_oneof![6 => name().prop_map(Description::Atom), 1 => enumeration()];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            3 => (select(SLOT_NAMES), modifier(), inner.clone()).prop_map(|(s, m, f)| Description::slot(s, m, f)),
            1 => (modifier(), region_desc(false)).prop_map(|(m, f)| Description::slot("amount", m, f)),
            1 => (select(&[CardModifier::ExactlyOne, CardModifier::Some, CardModifier::Only][..]), region_desc(true))
                .prop_map(|(m, f)| Description::slot("has_value_in", m, f)),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::and(l, r)),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::or(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Description::diff(l, r)),
            1 => (inner, select(SLOT_NAMES)).prop_map(|(b, s)| Description::proj(b, s)),
        ]
    })
    .boxed()
}

fn concept_slot() -> impl Strategy<Value = Description> {
    (select(SLOT_NAMES), modifier(), description()).prop_map(|(s, m, f)| Description::slot(s, m, f))
}

fn function_body() -> impl Strategy<Value = ElementBody> {
    (name(), proptest::collection::vec(concept_slot(), 0..4)).prop_map(|(name, slots)| {
        let mut seen = Vec::new();
        let slots = slots
            .into_iter()
            .filter(|s| match s {
                Description::Slot { slot, .. } if !seen.contains(slot) => {
                    seen.push(slot.clone());
                    true
                }
                _ => false,
            })
            .collect();
        ElementBody::FunctionDesc { name, slots }
    })
}

fn nl_text() -> impl Strategy<Value = ElementBody> {
    "[A-Za-z ,\"\\\\\n]{1,24}".prop_map(ElementBody::NLText)
}

fn quality_form(kind: ElementKind) -> BoxedStrategy<QualityForm> {
    let region = if kind == ElementKind::QG {
        select(&["Fast", "Good", "Low"][..]).prop_map(|n| RegionExpr::Named(n.into())).boxed()
    } else {
        prop_oneof![
            interval(),
            percent_range(),
            value_set(true),
        ]
        .boxed()
    };
    let observer = proptest::option::of(description());
    (select(&["Processing_time", "Usability", "Cost"][..]), description(), region, observer)
        .prop_map(|(q, subject, region, observer)| {
            let mut f = QualityForm::new(q, subject, region);
            f.observer = observer;
            f
        })
        .boxed()
}

fn body(kind: ElementKind) -> BoxedStrategy<ElementBody> {
    let sf = (description(), description()).prop_map(|(lhs, rhs)| ElementBody::SubsumptionForm { lhs, rhs });
    match kind {
        ElementKind::F => prop_oneof![4 => function_body(), 1 => nl_text()].boxed(),
        ElementKind::QG | ElementKind::QC => prop_oneof![4 => quality_form(kind).prop_map(ElementBody::QualityForm), 1 => nl_text()].boxed(),
        _ => prop_oneof![
            2 => sf,
            2 => description().prop_map(ElementBody::Concept),
            1 => nl_text(),
        ]
        .boxed(),
    }
}

fn id() -> impl Strategy<Value = String> {
    "[A-Z]{1,3}[0-9]{1,2}"
}

fn ids(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec(id(), n)
}

fn strength() -> impl Strategy<Value = Strength> {
    select(&[Strength::Strengthen, Strength::Weaken, Strength::Equate][..])
}

fn application() -> BoxedStrategy<ApplicationDecl> {
    let single = (select(&[OperatorKind::Reduce, OperatorKind::Interpret, OperatorKind::Operationalize][..]), id())
        .prop_map(|(op, i)| (op, vec![i], OperatorArgs::None))
        .boxed();
    let resolve = ids(2..4).prop_map(|v| (OperatorKind::Resolve, v, OperatorArgs::None)).boxed();
    let focus = (
        id(),
        proptest::option::of(select(&[FocusMode::Quality, FocusMode::Subject][..])),
        proptest::collection::vec(name(), 1..3),
    )
        .prop_map(|(i, mode, targets)| (OperatorKind::Focus, vec![i], OperatorArgs::Focus(FocusArgs { mode, targets })))
        .boxed();
    let factor = prop_oneof![
        select(&["Nearly", "Very"][..]).prop_map(|n| ScaleFactor::Qualitative(n.into())),
        (rational(), rational()).prop_map(|(lo, hi)| ScaleFactor::Quantitative { lo, hi }),
    ];
    let scale = (select(&[OperatorKind::ScaleUp, OperatorKind::ScaleDown][..]), id(), factor)
        .prop_map(|(op, i, f)| (op, vec![i], OperatorArgs::Scale(f)))
        .boxed();
    let deuniv = (id(), "[A-Z]", proptest::collection::vec(select(SLOT_NAMES), 0..3), percent())
        .prop_map(|(i, var, rest, pct)| {
            let mut slot_path = vec!["inheres_in".to_string()];
            slot_path.extend(rest.into_iter().map(String::from));
            (OperatorKind::DeUniversalize, vec![i], OperatorArgs::DeUniversalize(DeUniversalizeArgs { var, slot_path, pct }))
        })
        .boxed();
    let observe = (id(), description())
        .prop_map(|(i, observer)| (OperatorKind::Observe, vec![i], OperatorArgs::Observe { observer }))
        .boxed();
    (prop_oneof![single, resolve, focus, scale, deuniv, observe], strength(), ids(0..3))
        .prop_map(|((op, inputs, args), strength, outputs)| ApplicationDecl { op, inputs, args, strength, outputs })
        .boxed()
}

fn element() -> impl Strategy<Value = DeclItem> {
    select(&ElementKind::ALL[..]).prop_flat_map(|kind| body(kind).prop_map(move |body| DeclItem::Element { kind, id: String::new(), body }))
}

fn item() -> BoxedStrategy<DeclItem> {
    prop_oneof![
        6 => element(),
        1 => (description(), description()).prop_map(|(lhs, rhs)| DeclItem::Axiom { lhs, rhs }),
        1 => (description(), description()).prop_map(|(a, b)| DeclItem::Disjoint(a, b)),
        1 => (name(), name()).prop_map(|(child, parent)| DeclItem::Dimension { child, parent }),
        1 => (name(), name()).prop_map(|(child, parent)| DeclItem::Part { child, parent }),
        1 => (select(&["Nearly", "Very"][..]), select(&[ScaleDirection::Weakens, ScaleDirection::Strengthens][..]))
            .prop_map(|(n, direction)| DeclItem::Factor { name: n.into(), direction }),
        3 => application().prop_map(DeclItem::Application),
        1 => ids(1..4).prop_map(DeclItem::Conflict),
    ]
    .boxed()
}

fn comments() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec("([a-z0-9]+( [a-z0-9]+){0,3})?", 0..2)
}

/// A model file whose element ids are distinct. Spans are left at their default.
pub fn model_file() -> impl Strategy<Value = ModelFileAst> {
    (proptest::collection::vec((item(), comments()), 0..8), comments()).prop_map(|(items, trailing)| {
        let declarations = items
            .into_iter()
            .enumerate()
            .map(|(i, (mut item, comments))| {
                if let DeclItem::Element { id, kind, .. } = &mut item {
                    *id = format!("{}{}", kind.to_string().to_uppercase(), i + 1);
                }
                Declaration { item, span: Span::default(), comments }
            })
            .collect();
        ModelFileAst { declarations, trailing_comments: trailing }
    })
}
