use std::fmt::Write as _;

use desiree_core::model::{Issue, Severity};
use desiree_core::reasoner::Clash;
use desiree_core::syntax::{ParseError, ParseErrorKind};
use desiree_core::{LoadError, Span};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub span: Option<Span>,
    pub message: String,
    pub related: Vec<String>,
}

impl Diagnostic {
    pub fn from_parse(e: &ParseError) -> Self {
        let code = match e.kind {
            ParseErrorKind::Lex => "E-LEX",
            ParseErrorKind::Syntax => "E-SYN",
            ParseErrorKind::NotSupported => "E-UNSUP",
            ParseErrorKind::DuplicateId => "E-DUP",
        };
        let mut message = e.message.clone();
        if !e.expected.is_empty() {
            let _ = write!(message, " (expected {})", e.expected.join(", "));
        }
        Diagnostic {
            severity: Severity::Error,
            code,
            span: Some(e.span),
            message,
            related: Vec::new(),
        }
    }

    pub fn from_load(e: &LoadError) -> Self {
        let (code, related) = match e {
            LoadError::KindMismatch { id, .. } => ("E-KIND", vec![id.clone()]),
            LoadError::DanglingReference { id, .. } => ("E-REF", vec![id.clone()]),
            LoadError::DuplicateId { id, .. } => ("E-DUP", vec![id.clone()]),
        };
        // The error's own text starts with the span, which is printed separately.
        let text = e.to_string();
        let message = text.split_once(": ").map_or(text.clone(), |(_, m)| m.to_string());
        Diagnostic {
            severity: Severity::Error,
            code,
            span: Some(e.span()),
            message,
            related,
        }
    }

    pub fn from_issue(app: &str, span: Span, i: &Issue) -> Self {
        let mut related = vec![app.to_string()];
        related.extend(i.related.iter().cloned());
        Diagnostic {
            severity: i.severity,
            code: i.code,
            span: Some(span),
            message: i.message.clone(),
            related,
        }
    }

    pub fn from_clash(c: &Clash) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code: "E-CONS",
            span: None,
            message: c.to_string(),
            related: c.elements.clone(),
        }
    }

    fn position(&self) -> (usize, usize) {
        self.span.map_or((usize::MAX, 0), |s| (s.line as usize, s.col as usize))
    }

    pub fn render(&self, file: &str, color: bool) -> String {
        let (label, ansi) = match self.severity {
            Severity::Error => ("error", "31"),
            Severity::Warning => ("warning", "33"),
            Severity::Info => ("info", "36"),
        };
        let label = if color {
            format!("\x1b[1;{ansi}m{label}\x1b[0m")
        } else {
            label.to_string()
        };
        let mut out = match self.span {
            Some(s) => format!("{file}:{}:{}: {label}[{}]: {}", s.line, s.col, self.code, self.message),
            None => format!("{file}: {label}[{}]: {}", self.code, self.message),
        };
        if !self.related.is_empty() {
            let _ = write!(out, " [{}]", self.related.join(", "));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "severity": severity_name(self.severity),
            "code": self.code,
            "line": self.span.map(|s| s.line),
            "col": self.span.map(|s| s.col),
            "message": self.message,
            "related": self.related,
        })
    }
}

pub fn severity_name(s: Severity) -> &'static str {
    match s {
        Severity::Error => "error",
        Severity::Warning => "warning",
        Severity::Info => "info",
    }
}

/// File order, then code; unpositioned findings last in their given order.
pub fn sort(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| a.position().cmp(&b.position()).then(a.code.cmp(b.code)));
}
