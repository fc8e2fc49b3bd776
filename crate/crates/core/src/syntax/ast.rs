use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{ElementBody, ElementKind};
use crate::num::Rational;
use crate::operators::{OperatorArgs, OperatorKind, ScaleDirection, Strength};

use super::Span;

/// Reserved atom denoting the empty concept.
pub const NOTHING: &str = "Nothing";
/// Reserved atom denoting the universal concept.
pub const ANYTHING: &str = "Anything";

/// A description of the concept algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Description {
    Atom(String),
    Slot {
        slot: String,
        modifier: CardModifier,
        filler: Box<Description>,
    },
    /// Set of named individuals, ordered and without duplicates.
    Enum(Vec<String>),
    /// `D.s`: everything some member of `D` reaches through `s`.
    Proj {
        base: Box<Description>,
        slot: String,
    },
    And(Box<Description>, Box<Description>),
    Or(Box<Description>, Box<Description>),
    Diff(Box<Description>, Box<Description>),
    Region(RegionExpr),
}

impl Description {
    pub fn atom(name: impl Into<String>) -> Self {
        Description::Atom(name.into())
    }

    pub fn slot(slot: impl Into<String>, modifier: CardModifier, filler: Description) -> Self {
        Description::Slot {
            slot: slot.into(),
            modifier,
            filler: Box::new(filler),
        }
    }

    pub fn and(left: Description, right: Description) -> Self {
        Description::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Description, right: Description) -> Self {
        Description::Or(Box::new(left), Box::new(right))
    }

    pub fn diff(left: Description, right: Description) -> Self {
        Description::Diff(Box::new(left), Box::new(right))
    }

    pub fn proj(base: Description, slot: impl Into<String>) -> Self {
        Description::Proj {
            base: Box::new(base),
            slot: slot.into(),
        }
    }

    pub fn enumeration<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Description::Enum(members.into_iter().map(Into::into).collect())
    }

    /// Left-nested conjunction of `parts`; `None` when `parts` is empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Description>) -> Option<Self> {
        parts.into_iter().reduce(Description::and)
    }

    pub fn is_region(&self) -> bool {
        matches!(self, Description::Region(_))
    }

    /// Visits every node depth-first, parents before children.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Description)) {
        f(self);
        match self {
            Description::Slot { filler, .. } => filler.walk(f),
            Description::Proj { base, .. } => base.walk(f),
            Description::And(l, r) | Description::Or(l, r) | Description::Diff(l, r) => {
                l.walk(f);
                r.walk(f);
            }
            Description::Atom(_) | Description::Enum(_) | Description::Region(_) => {}
        }
    }

    /// Splits a left-nested chain of `And` into its operands.
    pub fn conjuncts(&self) -> Vec<&Description> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Description, out: &mut Vec<&'a Description>) {
            match d {
                Description::And(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }
}

/// Cardinality modifier of a slot-description pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum CardModifier {
    /// `<s: D>`: exactly one filler, and it is a `D`.
    #[default]
    ExactlyOne,
    AtMost(u32),
    AtLeast(u32),
    Exactly(u32),
    Some,
    Only,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionExpr {
    Named(String),
    /// `[lo, hi (unit)]`; `hi == None` is the open-ended `>= lo`.
    Interval {
        lo: Rational,
        hi: Option<Rational>,
        unit: Option<String>,
    },
    ValueSet(Vec<Literal>),
    /// `[lo%, hi%]` stored as fractions of one.
    Percent { lo: Rational, hi: Rational },
}

impl RegionExpr {
    pub fn interval(lo: Rational, hi: Rational, unit: Option<&str>) -> Self {
        RegionExpr::Interval {
            lo,
            hi: Some(hi),
            unit: unit.map(normalize_unit),
        }
    }
}

/// Units compare by exact string after dropping one trailing period.
pub fn normalize_unit(raw: &str) -> String {
    let t = raw.trim();
    String::from(t.strip_suffix('.').unwrap_or(t).trim())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Number(Rational),
    Text(String),
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelFileAst {
    pub declarations: Vec<Declaration>,
    /// Comments after the last declaration.
    pub trailing_comments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub item: DeclItem,
    pub span: Span,
    /// `//` comment lines directly preceding the declaration, without the slashes.
    pub comments: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclItem {
    Element {
        kind: ElementKind,
        id: String,
        body: ElementBody,
    },
    Axiom {
        lhs: Description,
        rhs: Description,
    },
    Disjoint(Description, Description),
    Dimension {
        child: String,
        parent: String,
    },
    Part {
        child: String,
        parent: String,
    },
    Factor {
        name: String,
        direction: ScaleDirection,
    },
    Application(ApplicationDecl),
    Conflict(Vec<String>),
}

impl DeclItem {
    /// Identifier introduced by the declaration, if any.
    pub fn declared_id(&self) -> Option<&str> {
        match self {
            DeclItem::Element { id, .. } => Some(id),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplicationDecl {
    pub op: OperatorKind,
    pub inputs: Vec<String>,
    pub args: OperatorArgs,
    pub strength: Strength,
    pub outputs: Vec<String>,
}
