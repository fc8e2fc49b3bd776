use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::{Application, Axiom, ConflictSet, ConflictSource, Element, ElementBody, ElementKind, Issue, ModelStore, Severity, Verdict};
use crate::operators::{
    construct_deuniversalize, construct_focus, construct_observe, construct_scale, validate_application, Constructed,
    OperatorArgs, OperatorKind,
};
use crate::reasoner::{check_strength, ReasonerConfig};
use crate::syntax::{DeclItem, Description, ModelFileAst, RegionExpr, Span, NOTHING};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("{span}: `{id}` is a {kind} but {detail}")]
    KindMismatch {
        id: String,
        kind: ElementKind,
        detail: String,
        span: Span,
    },
    #[error("{span}: unknown element `{id}` in {context}")]
    DanglingReference { id: String, context: String, span: Span },
    #[error("{span}: `{id}` is declared more than once")]
    DuplicateId { id: String, span: Span },
}

impl LoadError {
    pub fn span(&self) -> Span {
        match self {
            LoadError::KindMismatch { span, .. }
            | LoadError::DanglingReference { span, .. }
            | LoadError::DuplicateId { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct LoadOptions {
    pub reasoner: ReasonerConfig,
}


/// A store built on a best-effort basis together with everything that was wrong.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub store: ModelStore,
    pub errors: Vec<LoadError>,
}

/// Loads `ast`, failing on the first structural error. Problems with
/// individual applications are recorded on the application, not returned.
pub fn load_model(ast: &ModelFileAst) -> Result<ModelStore, LoadError> {
    let loaded = load_model_lenient(ast);
    match loaded.errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(loaded.store),
    }
}

pub fn load_model_lenient(ast: &ModelFileAst) -> LoadedModel {
    load_model_with(ast, &LoadOptions::default())
}

pub fn load_model_with(ast: &ModelFileAst, opts: &LoadOptions) -> LoadedModel {
    let mut m = ModelStore::default();
    let mut errors = Vec::new();

    for decl in &ast.declarations {
        let span = decl.span;
        match &decl.item {
            DeclItem::Element { kind, id, body } => {
                if m.contains(id) {
                    errors.push(LoadError::DuplicateId { id: id.clone(), span });
                    continue;
                }
                if let Some(detail) = body_mismatch(*kind, body) {
                    errors.push(LoadError::KindMismatch {
                        id: id.clone(),
                        kind: *kind,
                        detail,
                        span,
                    });
                }
                m.insert(Element {
                    id: id.clone(),
                    kind: *kind,
                    body: body.clone(),
                    active: true,
                    constructed_by: None,
                });
            }
            DeclItem::Axiom { lhs, rhs } => match disjoint_sugar(lhs, rhs) {
                Some((a, b)) => m.disjoint.push((a, b)),
                None => m.axioms.push(Axiom {
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                    span,
                }),
            },
            DeclItem::Disjoint(a, b) => m.disjoint.push((a.clone(), b.clone())),
            DeclItem::Dimension { child, parent } => m.dimensions.push((child.clone(), parent.clone())),
            DeclItem::Part { child, parent } => m.parts.push((child.clone(), parent.clone())),
            DeclItem::Factor { name, direction } => m.factors.insert(name.clone(), *direction),
            DeclItem::Application(_) | DeclItem::Conflict(_) => {}
        }
    }

    let mut n = 0;
    for decl in &ast.declarations {
        let DeclItem::Application(a) = &decl.item else { continue };
        n += 1;
        let app = Application {
            id: format!("#{n}"),
            op: a.op,
            inputs: a.inputs.clone(),
            outputs: a.outputs.clone(),
            strength: a.strength,
            args: a.args.clone(),
            verdict: Verdict::Unknown,
            note: None,
            issues: Vec::new(),
            span: decl.span,
        };
        let app = apply(&mut m, app, &mut errors);
        m.applications.push(app);
    }

    for decl in &ast.declarations {
        if let DeclItem::Conflict(ids) = &decl.item {
            for id in ids.iter().filter(|id| !m.contains(id)) {
                errors.push(LoadError::DanglingReference {
                    id: id.clone(),
                    context: "conflict declaration".into(),
                    span: decl.span,
                });
            }
            m.conflicts.push(ConflictSet {
                ids: ids.clone(),
                source: ConflictSource::Declared,
            });
        }
    }

    for i in 0..m.applications.len() {
        if m.applications[i].has_errors() {
            continue;
        }
        let check = check_strength(&m, &m.applications[i], &opts.reasoner);
        let app = &mut m.applications[i];
        app.verdict = check.verdict;
        app.note = check.note.clone();
        match check.verdict {
            Verdict::Violated => app.issues.push(Issue {
                code: "E-STR",
                severity: Severity::Error,
                message: format!(
                    "declared {} does not hold: {}",
                    app.strength,
                    check.note.unwrap_or_default()
                ),
                related: app.inputs.iter().chain(&app.outputs).cloned().collect(),
            }),
            Verdict::Unknown => app.issues.push(Issue {
                code: "W-STR",
                severity: Severity::Warning,
                message: format!(
                    "declared {} could not be decided: {}",
                    app.strength,
                    check.note.unwrap_or_default()
                ),
                related: app.inputs.iter().chain(&app.outputs).cloned().collect(),
            }),
            Verdict::Verified | Verdict::Asserted => {}
        }
    }

    LoadedModel { store: m, errors }
}

fn issue(app: &mut Application, code: &'static str, message: String, related: Vec<String>) {
    app.issues.push(Issue {
        code,
        severity: Severity::Error,
        message,
        related,
    });
}

/// Validates, constructs and records one application in file order.
fn apply(m: &mut ModelStore, mut app: Application, errors: &mut Vec<LoadError>) -> Application {
    let mut missing = false;
    for id in app.inputs.clone() {
        match m.get(&id) {
            None => {
                errors.push(LoadError::DanglingReference {
                    id: id.clone(),
                    context: format!("inputs of {}", app.op.keyword()),
                    span: app.span,
                });
                missing = true;
            }
            Some(e) if !e.active => {
                let msg = format!("`{id}` was dropped by an earlier resolve and cannot be refined further");
                issue(&mut app, "E-DROP", msg, alloc::vec![id.clone()]);
            }
            Some(_) => {}
        }
    }
    if !app.op.is_constructor() {
        for id in app.outputs.iter().filter(|id| !m.contains(id)) {
            errors.push(LoadError::DanglingReference {
                id: id.clone(),
                context: format!("outputs of {}", app.op.keyword()),
                span: app.span,
            });
            missing = true;
        }
    }
    if missing {
        issue(
            &mut app,
            "E-REF",
            "application refers to undeclared elements".into(),
            Vec::new(),
        );
        return app;
    }

    let violations = validate_application(m, &app);
    let bad_signature = !violations.is_empty();
    for v in violations {
        let related = app.inputs.iter().chain(&app.outputs).cloned().collect();
        issue(&mut app, "E-SIG", format!("{v}"), related);
    }
    if bad_signature {
        return app;
    }

    if app.op.is_constructor() {
        construct_outputs(m, &mut app, errors);
    }

    if app.op == OperatorKind::Resolve && !app.has_errors() {
        let keep: BTreeSet<&String> = app.outputs.iter().collect();
        for id in app.inputs.iter().filter(|id| !keep.contains(id)) {
            if let Some(e) = m.get_mut(id) {
                e.active = false;
            }
        }
    }
    app
}

fn construct_outputs(m: &mut ModelStore, app: &mut Application, errors: &mut Vec<LoadError>) {
    let input = m.get(&app.inputs[0]).expect("checked").clone();
    let ElementBody::QualityForm(form) = &input.body else {
        let msg = format!(
            "{} needs a structured quality form, `{}` has a {}",
            app.op.keyword(),
            input.id,
            input.body.shape()
        );
        issue(app, "E-OP", msg, alloc::vec![input.id.clone()]);
        return;
    };
    let built: Result<Vec<Constructed>, _> = match (&app.op, &app.args) {
        (OperatorKind::Focus, OperatorArgs::Focus(f)) => construct_focus(m, input.kind, form, f),
        (OperatorKind::ScaleUp | OperatorKind::ScaleDown, OperatorArgs::Scale(f)) => {
            construct_scale(m, input.kind, form, app.op, f).map(|c| alloc::vec![c])
        }
        (OperatorKind::DeUniversalize, OperatorArgs::DeUniversalize(u)) => {
            construct_deuniversalize(input.kind, form, u).map(|c| alloc::vec![c])
        }
        (OperatorKind::Observe, OperatorArgs::Observe { observer }) => {
            construct_observe(input.kind, form, observer).map(|c| alloc::vec![c])
        }
        _ => return,
    };
    let built = match built {
        Ok(b) => b,
        Err(e) => {
            issue(app, "E-OP", format!("{}: {e}", app.op.keyword()), alloc::vec![input.id.clone()]);
            return;
        }
    };
    let index = m.applications.len();
    for (out_id, c) in app.outputs.clone().into_iter().zip(built) {
        if let Some(existing) = m.get(&out_id) {
            if existing.constructed_by.is_some() {
                errors.push(LoadError::DuplicateId {
                    id: out_id.clone(),
                    span: app.span,
                });
                continue;
            }
            let same = existing.kind == c.kind
                && match &existing.body {
                    ElementBody::QualityForm(q) => q.same_base(&c.form) && (q.pct_chain.is_empty() || *q == c.form),
                    _ => false,
                };
            if !same {
                let msg = format!(
                    "declared `{out_id}` differs from what {} constructs; the constructed form is kept",
                    app.op.keyword()
                );
                issue(app, "E-OUT", msg, alloc::vec![out_id.clone()]);
            }
        }
        m.insert(Element {
            id: out_id,
            kind: c.kind,
            body: ElementBody::QualityForm(c.form),
            active: true,
            constructed_by: Some(index),
        });
    }
}

/// `axiom A (and) B :< Nothing.` is sugar for `disjoint A, B.`
fn disjoint_sugar(lhs: &Description, rhs: &Description) -> Option<(Description, Description)> {
    match (lhs, rhs) {
        (Description::And(a, b), Description::Atom(n)) if n == NOTHING => Some(((**a).clone(), (**b).clone())),
        _ => None,
    }
}

fn body_mismatch(kind: ElementKind, body: &ElementBody) -> Option<String> {
    use ElementKind::*;
    let shape = body.shape();
    match (kind, body) {
        (_, ElementBody::NLText(_)) => None,
        (Goal, ElementBody::Concept(_) | ElementBody::SubsumptionForm { .. }) => None,
        (FG | CTG | FC | SC | DA, ElementBody::SubsumptionForm { .. }) => None,
        (F, ElementBody::FunctionDesc { .. }) => None,
        (QG, ElementBody::QualityForm(q)) => {
            if q.observer.is_some() {
                Some("it has an observer, which makes it a QC".into())
            } else if !matches!(q.region, RegionExpr::Named(_)) {
                Some("its region is measurable, which makes it a QC".into())
            } else {
                None
            }
        }
        (QC, ElementBody::QualityForm(q)) => {
            if matches!(q.region, RegionExpr::Named(_)) && q.observer.is_none() {
                Some("its region is vague and it has no observer, which makes it a QG".into())
            } else {
                None
            }
        }
        (F, _) => Some(format!("its body is a {shape}, not a function description")),
        (QG | QC, _) => Some(format!("its body is a {shape}, not a quality form")),
        (Goal, _) => Some(format!("its body is a {shape}, not a description")),
        _ => Some(format!("its body is a {shape}, not a subsumption form")),
    }
}
