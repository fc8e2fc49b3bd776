use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{OperatorArgs, OperatorKind, ScaleFactor};
use crate::model::{Application, ElementKind, ModelStore};

/// One failed arity or kind constraint of an operator signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureViolation {
    pub detail: String,
}

impl fmt::Display for SignatureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detail)
    }
}

/// Checks `a` against the signature of its operator. Outputs that are not
/// (yet) in the store are only counted, not kind-checked; constructor outputs
/// are synthesized later.
pub fn validate_application(m: &ModelStore, a: &Application) -> Vec<SignatureViolation> {
    let inputs: Vec<Option<ElementKind>> = a.inputs.iter().map(|id| m.get(id).map(|e| e.kind)).collect();
    let outputs: Vec<Option<ElementKind>> = if a.op.is_constructor() {
        a.outputs.iter().map(|_| None).collect()
    } else {
        a.outputs.iter().map(|id| m.get(id).map(|e| e.kind)).collect()
    };
    check_signature(a.op, &a.args, &inputs, &outputs)
}

/// Allowed output kinds when operationalizing an element of kind `input`.
pub fn operationalize_targets(input: ElementKind) -> &'static [ElementKind] {
    use ElementKind::*;
    match input {
        FG => &[F, FC, DA],
        QG => &[QC, F, FC, DA],
        CTG => &[SC, DA],
        Goal => &[DA],
        _ => &[],
    }
}

struct Checker {
    op: OperatorKind,
    out: Vec<SignatureViolation>,
}

impl Checker {
    fn fail(&mut self, detail: String) {
        self.out.push(SignatureViolation {
            detail: format!("{}: {detail}", self.op),
        });
    }

    fn arity(&mut self, what: &str, n: usize, min: usize, max: Option<usize>) {
        let ok = n >= min && max.is_none_or(|m| n <= m);
        if !ok {
            let want = match max {
                Some(m) if m == min => format!("exactly {m}"),
                Some(m) => format!("{min} to {m}"),
                None => format!("at least {min}"),
            };
            self.fail(format!("takes {want} {what}, got {n}"));
        }
    }
}

pub(crate) fn check_signature(
    op: OperatorKind,
    args: &OperatorArgs,
    inputs: &[Option<ElementKind>],
    outputs: &[Option<ElementKind>],
) -> Vec<SignatureViolation> {
    use ElementKind::*;
    let mut c = Checker { op, out: Vec::new() };
    let single = inputs.len() == 1;
    let input = if single { inputs[0] } else { None };
    let known_outputs = || outputs.iter().flatten().copied();

    match op {
        OperatorKind::Reduce => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("outputs", outputs.len(), 1, None);
            if let Some(k) = input {
                if k == DA {
                    c.fail("a domain assumption cannot be reduced".into());
                }
                for o in known_outputs() {
                    if o != k && o != DA {
                        c.fail(format!("output of kind {o} must be {k} or DA"));
                    }
                }
                let all_known = outputs.iter().all(Option::is_some);
                if all_known && !outputs.is_empty() && !known_outputs().any(|o| o == k) {
                    c.fail(format!("needs at least one output of kind {k}"));
                }
            }
        }
        OperatorKind::Interpret => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("output", outputs.len(), 1, Some(1));
            if let (Some(k), Some(o)) = (input, outputs.first().copied().flatten()) {
                if !o.is_subkind_of(k) {
                    c.fail(format!("output of kind {o} is neither {k} nor one of its sub-kinds"));
                }
            }
        }
        OperatorKind::Focus => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("outputs", outputs.len(), 1, None);
            qgc_input(&mut c, input);
            match args {
                OperatorArgs::Focus(f) if f.targets.is_empty() => c.fail("needs at least one target".into()),
                OperatorArgs::Focus(f) if f.targets.len() != outputs.len() => c.fail(format!(
                    "{} targets but {} outputs",
                    f.targets.len(),
                    outputs.len()
                )),
                OperatorArgs::Focus(_) => {}
                _ => c.fail("missing focus targets".into()),
            }
            same_kind_outputs(&mut c, input, outputs);
        }
        OperatorKind::ScaleUp | OperatorKind::ScaleDown => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("output", outputs.len(), 1, Some(1));
            qgc_input(&mut c, input);
            match (input, args) {
                (Some(QG), OperatorArgs::Scale(ScaleFactor::Quantitative { .. })) => {
                    c.fail("a QG is scaled by a qualitative factor".into())
                }
                (Some(QC), OperatorArgs::Scale(ScaleFactor::Qualitative(_))) => {
                    c.fail("a QC is scaled by a quantitative factor pair".into())
                }
                (_, OperatorArgs::Scale(_)) => {}
                _ => c.fail("missing scale factor".into()),
            }
            same_kind_outputs(&mut c, input, outputs);
        }
        OperatorKind::DeUniversalize => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("output", outputs.len(), 1, Some(1));
            qgc_input(&mut c, input);
            if !matches!(args, OperatorArgs::DeUniversalize(_)) {
                c.fail("missing variable, path and percentage".into());
            }
            same_kind_outputs(&mut c, input, outputs);
        }
        OperatorKind::Resolve => {
            c.arity("inputs", inputs.len(), 2, None);
            let mut cats: Vec<_> = inputs.iter().flatten().map(|k| k.category()).collect();
            cats.sort();
            cats.dedup();
            if inputs.iter().all(Option::is_some) {
                for o in known_outputs() {
                    if !cats.contains(&o.category()) {
                        c.fail(format!("output of kind {o} leaves the category of the inputs"));
                    }
                }
            }
        }
        OperatorKind::Operationalize => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("outputs", outputs.len(), 1, None);
            if let Some(k) = input {
                let allowed = operationalize_targets(k);
                if allowed.is_empty() {
                    c.fail(format!("only goals can be operationalized, not {k}"));
                } else {
                    for o in known_outputs() {
                        if !allowed.contains(&o) {
                            let names: Vec<String> = allowed.iter().map(|a| format!("{a}")).collect();
                            c.fail(format!("{k} operationalizes into {{{}}}, not {o}", names.join(", ")));
                        }
                    }
                }
            }
        }
        OperatorKind::Observe => {
            c.arity("input", inputs.len(), 1, Some(1));
            c.arity("output", outputs.len(), 1, Some(1));
            qgc_input(&mut c, input);
            if !matches!(args, OperatorArgs::Observe { .. }) {
                c.fail("missing observer".into());
            }
            for o in known_outputs() {
                if o != QC {
                    c.fail(format!("output must be a QC, not {o}"));
                }
            }
        }
    }
    c.out
}

fn qgc_input(c: &mut Checker, input: Option<ElementKind>) {
    if let Some(k) = input {
        if !k.is_qgc() {
            c.fail(format!("applies to QG or QC, not {k}"));
        }
    }
}

fn same_kind_outputs(c: &mut Checker, input: Option<ElementKind>, outputs: &[Option<ElementKind>]) {
    if let Some(k) = input {
        for o in outputs.iter().flatten() {
            if *o != k {
                c.fail(format!("output of kind {o} must be {k}"));
            }
        }
    }
}
