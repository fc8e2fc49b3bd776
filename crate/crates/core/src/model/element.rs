use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::num::Rational;
use crate::syntax::{Description, RegionExpr};

/// The nine requirement concepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Goal,
    FG,
    QG,
    CTG,
    F,
    FC,
    QC,
    SC,
    DA,
}

/// Coarse grouping used by the "refine within a category" rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Requirement,
    Specification,
    Assumption,
}

impl ElementKind {
    pub const ALL: [ElementKind; 9] = [
        ElementKind::Goal,
        ElementKind::FG,
        ElementKind::QG,
        ElementKind::CTG,
        ElementKind::F,
        ElementKind::FC,
        ElementKind::QC,
        ElementKind::SC,
        ElementKind::DA,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Goal => "goal",
            ElementKind::FG => "fg",
            ElementKind::QG => "qg",
            ElementKind::CTG => "ctg",
            ElementKind::F => "f",
            ElementKind::FC => "fc",
            ElementKind::QC => "qc",
            ElementKind::SC => "sc",
            ElementKind::DA => "da",
        }
    }

    pub fn category(self) -> Category {
        match self {
            ElementKind::Goal | ElementKind::FG | ElementKind::QG | ElementKind::CTG => {
                Category::Requirement
            }
            ElementKind::F | ElementKind::FC | ElementKind::QC | ElementKind::SC => {
                Category::Specification
            }
            ElementKind::DA => Category::Assumption,
        }
    }

    pub fn is_goal(self) -> bool {
        self.category() == Category::Requirement
    }

    pub fn is_qgc(self) -> bool {
        matches!(self, ElementKind::QG | ElementKind::QC)
    }

    /// `self` equals `other` or is one of its sub-kinds (FG, QG and CTG are goals).
    pub fn is_subkind_of(self, other: ElementKind) -> bool {
        self == other || (other == ElementKind::Goal && self.is_goal())
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ElementKind::Goal => "Goal",
            ElementKind::FG => "FG",
            ElementKind::QG => "QG",
            ElementKind::CTG => "CTG",
            ElementKind::F => "F",
            ElementKind::FC => "FC",
            ElementKind::QC => "QC",
            ElementKind::SC => "SC",
            ElementKind::DA => "DA",
        };
        f.write_str(name)
    }
}

impl FromStr for ElementKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        ElementKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementBody {
    /// Opaque natural-language statement.
    NLText(String),
    /// A goal stated as a bare description.
    Concept(Description),
    /// `C :< D`
    SubsumptionForm { lhs: Description, rhs: Description },
    /// `FName <s1: D1> <s2: D2> ...`
    FunctionDesc { name: String, slots: Vec<Description> },
    /// `Q (SubjT) :: QRG <observed_by: O>`
    QualityForm(QualityForm),
}

impl ElementBody {
    pub fn shape(&self) -> &'static str {
        match self {
            ElementBody::NLText(_) => "natural-language text",
            ElementBody::Concept(_) => "description",
            ElementBody::SubsumptionForm { .. } => "subsumption form",
            ElementBody::FunctionDesc { .. } => "function description",
            ElementBody::QualityForm(_) => "quality form",
        }
    }

    /// A function body as a single description: the name conjoined with its slots.
    pub fn function_description(name: &str, slots: &[Description]) -> Description {
        let mut parts = Vec::with_capacity(slots.len() + 1);
        parts.push(Description::atom(name));
        parts.extend(slots.iter().cloned());
        Description::conjunction(parts).expect("non-empty")
    }

    /// Every description that occurs in the body.
    pub fn descriptions(&self) -> Vec<&Description> {
        match self {
            ElementBody::NLText(_) => Vec::new(),
            ElementBody::Concept(d) => alloc::vec![d],
            ElementBody::SubsumptionForm { lhs, rhs } => alloc::vec![lhs, rhs],
            ElementBody::FunctionDesc { slots, .. } => slots.iter().collect(),
            ElementBody::QualityForm(q) => {
                let mut v = alloc::vec![&q.subject];
                v.extend(q.observer.as_ref());
                v
            }
        }
    }
}

/// Body of a QG or QC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityForm {
    pub quality: String,
    pub subject: Description,
    pub region: RegionExpr,
    pub observer: Option<Description>,
    /// De-universalizations in the order they were applied.
    pub pct_chain: Vec<PctEntry>,
}

impl QualityForm {
    pub fn new(quality: impl Into<String>, subject: Description, region: RegionExpr) -> Self {
        QualityForm {
            quality: quality.into(),
            subject,
            region,
            observer: None,
            pct_chain: Vec::new(),
        }
    }

    /// Same quality, subject, region and observer; pct chains may differ.
    pub fn same_base(&self, other: &QualityForm) -> bool {
        self.quality == other.quality
            && self.subject == other.subject
            && self.region == other.region
            && self.observer == other.observer
    }
}

/// One de-universalization step: at least `pct` of the individuals matched by
/// `?var` at the end of `path` satisfy the requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PctEntry {
    pub var: String,
    pub path: Vec<String>,
    pub pct: Rational,
    /// `pct == 100%`: the step changes nothing.
    pub vacuous: bool,
}

/// An element of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: String,
    pub kind: ElementKind,
    pub body: ElementBody,
    /// False once a resolve application dropped the element.
    pub active: bool,
    /// Index of the constructor application that synthesized this element.
    pub constructed_by: Option<usize>,
}
