use std::fmt::Write as _;

use desiree_core::model::{referto_edges, ConflictSource, ModelStore};
use desiree_core::syntax::{render_body, render_description};
use serde_json::{json, Value};

pub fn to_json(m: &ModelStore) -> Value {
    let elements: Vec<Value> = m
        .elements()
        .map(|e| {
            json!({
                "id": e.id,
                "kind": e.kind.keyword(),
                "body": render_body(&e.body),
                "active": e.active,
            })
        })
        .collect();
    let applications: Vec<Value> = m
        .applications
        .iter()
        .map(|a| {
            json!({
                "id": a.id,
                "op": a.op.keyword(),
                "inputs": a.inputs,
                "outputs": a.outputs,
                "strength": a.strength.tag(),
                "verdict": a.verdict.to_string(),
                "note": a.note,
            })
        })
        .collect();
    let axioms: Vec<Value> = m
        .axioms
        .iter()
        .map(|a| json!({"lhs": render_description(&a.lhs), "rhs": render_description(&a.rhs)}))
        .collect();
    let disjoint: Vec<Value> = m
        .disjoint
        .iter()
        .map(|(a, b)| json!([render_description(a), render_description(b)]))
        .collect();
    let conflicts: Vec<Value> = m
        .conflicts
        .iter()
        .map(|c| {
            let source = match c.source {
                ConflictSource::Declared => "declared",
                ConflictSource::Imported => "imported",
            };
            json!({"ids": c.ids, "source": source})
        })
        .collect();
    json!({
        "elements": elements,
        "applications": applications,
        "axioms": axioms,
        "disjoint": disjoint,
        "hierarchies": {
            "dimension_of": m.dimensions,
            "part_of": m.parts,
        },
        "conflicts": conflicts,
    })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(m: &ModelStore) -> String {
    let mut out = String::from("digraph desiree {\n  rankdir=BT;\n");
    for e in m.elements() {
        let style = if e.active { "" } else { ", style=dotted" };
        let label = quote(&format!("{}:{}", e.id, e.kind.keyword()));
        let _ = writeln!(out, "  {} [label={label}{style}];", quote(&e.id));
    }
    for a in &m.applications {
        let node = quote(&a.id);
        let label = quote(&format!("{} [{}]", a.op.keyword(), a.strength.tag()));
        let _ = writeln!(out, "  {node} [shape=box, label={label}];");
        for i in &a.inputs {
            let _ = writeln!(out, "  {} -> {node} [dir=back];", quote(i));
        }
        for o in &a.outputs {
            let _ = writeln!(out, "  {node} -> {} [dir=back];", quote(o));
        }
    }
    for r in referto_edges(m) {
        let _ = writeln!(
            out,
            "  {} -> {} [style=dashed, label={}];",
            quote(&r.from),
            quote(&r.to),
            quote(&r.via)
        );
    }
    out.push_str("}\n");
    out
}
