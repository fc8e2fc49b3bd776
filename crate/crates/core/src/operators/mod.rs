//! Refinement and operationalization operators: signature validation and the
//! four constructors (focus, scale, de-universalize, observe).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::num::Rational;
use crate::syntax::Description;

mod construct;
mod validate;

pub use construct::{
    construct_deuniversalize, construct_focus, construct_observe, construct_scale, ConstructError,
    Constructed, FactorTable,
};
pub use validate::{validate_application, SignatureViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperatorKind {
    Reduce,
    Interpret,
    Focus,
    ScaleUp,
    ScaleDown,
    DeUniversalize,
    Resolve,
    Operationalize,
    Observe,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 9] = [
        OperatorKind::Reduce,
        OperatorKind::Interpret,
        OperatorKind::Focus,
        OperatorKind::ScaleUp,
        OperatorKind::ScaleDown,
        OperatorKind::DeUniversalize,
        OperatorKind::Resolve,
        OperatorKind::Operationalize,
        OperatorKind::Observe,
    ];

    /// Name used in model files.
    pub fn keyword(self) -> &'static str {
        match self {
            OperatorKind::Reduce => "reduce",
            OperatorKind::Interpret => "interpret",
            OperatorKind::Focus => "focus",
            OperatorKind::ScaleUp => "scale_up",
            OperatorKind::ScaleDown => "scale_down",
            OperatorKind::DeUniversalize => "deuniversalize",
            OperatorKind::Resolve => "resolve",
            OperatorKind::Operationalize => "operationalize",
            OperatorKind::Observe => "observe",
        }
    }

    fn alias(self) -> &'static str {
        match self {
            OperatorKind::Reduce => "rd",
            OperatorKind::Interpret => "interpret",
            OperatorKind::Focus => "fk",
            OperatorKind::ScaleUp => "gu",
            OperatorKind::ScaleDown => "gd",
            OperatorKind::DeUniversalize => "u",
            OperatorKind::Resolve => "rs",
            OperatorKind::Operationalize => "op",
            OperatorKind::Observe => "ob",
        }
    }

    /// Constructors synthesize their outputs; relators only relate declared elements.
    pub fn is_constructor(self) -> bool {
        matches!(
            self,
            OperatorKind::Focus
                | OperatorKind::ScaleUp
                | OperatorKind::ScaleDown
                | OperatorKind::DeUniversalize
                | OperatorKind::Observe
        )
    }

    pub fn is_refinement(self) -> bool {
        !matches!(self, OperatorKind::Operationalize | OperatorKind::Observe)
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for OperatorKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s || k.alias() == s)
            .ok_or(())
    }
}

/// Declared refinement direction: `[s]`, `[w]` or `[e]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strength {
    Strengthen,
    Weaken,
    Equate,
}

impl Strength {
    pub fn tag(self) -> &'static str {
        match self {
            Strength::Strengthen => "s",
            Strength::Weaken => "w",
            Strength::Equate => "e",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "s" => Some(Strength::Strengthen),
            "w" => Some(Strength::Weaken),
            "e" => Some(Strength::Equate),
            _ => None,
        }
    }

    /// Whether a refinement that actually has strength `self` also justifies
    /// the claim `declared` (an equating is both a strengthening and a weakening).
    pub fn justifies(self, declared: Strength) -> bool {
        self == declared || self == Strength::Equate
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strength::Strengthen => "strengthening",
            Strength::Weaken => "weakening",
            Strength::Equate => "equating",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScaleDirection {
    /// Shrinks the region (scale up, strengthening).
    Strengthens,
    /// Enlarges the region (scale down, weakening).
    Weakens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FocusMode {
    Quality,
    Subject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocusArgs {
    /// `None` lets the hierarchies decide.
    pub mode: Option<FocusMode>,
    pub targets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaleFactor {
    Qualitative(String),
    Quantitative { lo: Rational, hi: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeUniversalizeArgs {
    pub var: String,
    /// Slot names from the outermost inward, starting at `inheres_in` or `observed_by`.
    pub slot_path: Vec<String>,
    pub pct: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorArgs {
    None,
    Focus(FocusArgs),
    Scale(ScaleFactor),
    DeUniversalize(DeUniversalizeArgs),
    Observe { observer: Description },
}
