use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::ast::*;
use crate::model::{ElementBody, QualityForm};
use crate::num::{format_percent, format_rational};
use crate::operators::{FocusMode, OperatorArgs, ScaleDirection, ScaleFactor};

const DIFF: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const ATOMIC: u8 = 4;

fn precedence(d: &Description) -> u8 {
    match d {
        Description::Diff(..) => DIFF,
        Description::Or(..) => OR,
        Description::And(..) => AND,
        // `>= n` would swallow a following name as its unit.
        Description::Region(RegionExpr::Interval { hi: None, .. }) => 0,
        _ => ATOMIC,
    }
}

pub fn render_description(d: &Description) -> String {
    let mut out = String::new();
    write_desc(&mut out, d, 0);
    out
}

fn write_desc(out: &mut String, d: &Description, min: u8) {
    let paren = precedence(d) < min;
    if paren {
        out.push('(');
    }
    match d {
        Description::Atom(name) => out.push_str(name),
        Description::Slot { slot, modifier, filler } => {
            let _ = write!(out, "<{slot}: ");
            let numeric = match modifier {
                CardModifier::ExactlyOne => false,
                CardModifier::AtMost(n) => {
                    let _ = write!(out, "<={n} ");
                    true
                }
                CardModifier::AtLeast(n) => {
                    let _ = write!(out, ">={n} ");
                    true
                }
                CardModifier::Exactly(n) => {
                    let _ = write!(out, "{n} ");
                    true
                }
                CardModifier::Some => {
                    out.push_str("SOME ");
                    false
                }
                CardModifier::Only => {
                    out.push_str("ONLY ");
                    false
                }
            };
            let body = render_description(filler);
            if numeric && (body.starts_with("<=") || body.starts_with(">=")) {
                let _ = write!(out, "({body})");
            } else {
                out.push_str(&body);
            }
            out.push('>');
        }
        Description::Enum(members) => {
            let _ = write!(out, "{{{}}}", members.join(", "));
        }
        Description::Proj { base, slot } => {
            let glued = matches!(
                **base,
                Description::Atom(_) | Description::Enum(_) | Description::Slot { .. } | Description::Proj { .. }
            );
            if glued {
                write_desc(out, base, ATOMIC);
            } else {
                out.push('(');
                write_desc(out, base, 0);
                out.push(')');
            }
            let _ = write!(out, ".{slot}");
        }
        Description::And(l, r) => {
            write_desc(out, l, AND);
            out.push(' ');
            write_desc(out, r, ATOMIC);
        }
        Description::Or(l, r) => {
            write_desc(out, l, OR);
            out.push_str(" | ");
            write_desc(out, r, AND);
        }
        Description::Diff(l, r) => {
            write_desc(out, l, DIFF);
            out.push_str(" - ");
            write_desc(out, r, OR);
        }
        Description::Region(r) => out.push_str(&render_region(r)),
    }
    if paren {
        out.push(')');
    }
}

pub fn render_region(r: &RegionExpr) -> String {
    match r {
        RegionExpr::Named(n) => n.clone(),
        RegionExpr::Interval { lo, hi, unit } => {
            let unit = unit.as_ref().map(|u| format!(" ({u})")).unwrap_or_default();
            match hi {
                Some(hi) => format!("[{}, {}{unit}]", format_rational(lo), format_rational(hi)),
                None => format!(">={}{unit}", format_rational(lo)),
            }
        }
        RegionExpr::ValueSet(values) => {
            let items: Vec<String> = values.iter().map(render_literal).collect();
            format!("{{{}}}", items.join(", "))
        }
        RegionExpr::Percent { lo, hi } => format!("[{}, {}]", format_percent(lo), format_percent(hi)),
    }
}

fn render_literal(l: &Literal) -> String {
    match l {
        Literal::Number(n) => format_rational(n),
        Literal::Symbol(s) => s.clone(),
        Literal::Text(t) => quote(t),
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn render_quality_form(q: &QualityForm) -> String {
    let mut out = format!(
        "{} ({}) :: {}",
        q.quality,
        render_description(&q.subject),
        render_region(&q.region)
    );
    if let Some(o) = &q.observer {
        let _ = write!(out, " <observed_by: {}>", render_description(o));
    }
    out
}

pub fn render_body(body: &ElementBody) -> String {
    match body {
        ElementBody::NLText(t) => quote(t),
        ElementBody::Concept(d) => render_description(d),
        ElementBody::SubsumptionForm { lhs, rhs } => {
            format!("{} :< {}", render_description(lhs), render_description(rhs))
        }
        ElementBody::FunctionDesc { name, slots } => {
            let mut out = name.clone();
            for s in slots {
                out.push(' ');
                out.push_str(&render_description(s));
            }
            out
        }
        ElementBody::QualityForm(q) => render_quality_form(q),
    }
}

fn render_application(a: &ApplicationDecl) -> String {
    let args = match &a.args {
        OperatorArgs::None => a.inputs.join(", "),
        OperatorArgs::Focus(f) => {
            let mode = match f.mode {
                Some(FocusMode::Quality) => "quality ",
                Some(FocusMode::Subject) => "subject ",
                None => "",
            };
            format!("{}, {mode}{{{}}}", a.inputs.join(", "), f.targets.join(", "))
        }
        OperatorArgs::Scale(ScaleFactor::Qualitative(name)) => format!("{}, {name}", a.inputs.join(", ")),
        OperatorArgs::Scale(ScaleFactor::Quantitative { lo, hi }) => format!(
            "{}, ({}, {})",
            a.inputs.join(", "),
            format_rational(lo),
            format_rational(hi)
        ),
        OperatorArgs::DeUniversalize(u) => {
            let mut path = format!("?{}", u.var);
            for slot in u.slot_path.iter().rev() {
                path = format!("<{slot}: {path}>");
            }
            format!("?{}, {}, {path}, {}", u.var, a.inputs.join(", "), format_percent(&u.pct))
        }
        OperatorArgs::Observe { observer } => {
            format!("{}, {}", a.inputs.join(", "), render_description(observer))
        }
    };
    format!(
        "{}({args})[{}] = {{{}}}",
        a.op.keyword(),
        a.strength.tag(),
        a.outputs.join(", ")
    )
}

pub fn render_declaration(item: &DeclItem) -> String {
    let text = match item {
        DeclItem::Element { kind, id, body } => format!("{} {id} = {}", kind.keyword(), render_body(body)),
        DeclItem::Axiom { lhs, rhs } => {
            format!("axiom {} :< {}", render_description(lhs), render_description(rhs))
        }
        DeclItem::Disjoint(a, b) => {
            format!("disjoint {}, {}", render_description(a), render_description(b))
        }
        DeclItem::Dimension { child, parent } => format!("dimension {child} of {parent}"),
        DeclItem::Part { child, parent } => format!("part {child} of {parent}"),
        DeclItem::Factor { name, direction } => {
            let dir = match direction {
                ScaleDirection::Weakens => "weakens",
                ScaleDirection::Strengthens => "strengthens",
            };
            format!("factor {name} {dir}")
        }
        DeclItem::Application(a) => render_application(a),
        DeclItem::Conflict(ids) => format!("conflict {{{}}}", ids.join(", ")),
    };
    text + "."
}

/// Canonical text of a model file; comments are kept above their declaration.
pub fn render_model_file(ast: &ModelFileAst) -> String {
    let mut out = String::new();
    for (i, decl) in ast.declarations.iter().enumerate() {
        if i > 0 && !decl.comments.is_empty() {
            out.push('\n');
        }
        for c in &decl.comments {
            write_comment(&mut out, c);
        }
        out.push_str(&render_declaration(&decl.item));
        out.push('\n');
    }
    if !ast.trailing_comments.is_empty() && !ast.declarations.is_empty() {
        out.push('\n');
    }
    for c in &ast.trailing_comments {
        write_comment(&mut out, c);
    }
    out
}

fn write_comment(out: &mut String, text: &str) {
    if text.is_empty() {
        out.push_str("//\n");
    } else {
        let _ = writeln!(out, "// {text}");
    }
}
