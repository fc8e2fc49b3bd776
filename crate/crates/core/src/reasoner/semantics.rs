//! Set-theoretic semantics of descriptions over finite interpretations.
//!
//! Domains have at most 64 elements so that every extension is a `u64` mask.
//! Elements are anonymous individuals, named individuals, or data values.
//! Only individuals have slot successors.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Tbox;
use crate::num::{format_rational, Rational};
use crate::syntax::{CardModifier, Description, Literal, RegionExpr, ANYTHING, NOTHING};

pub const MAX_DOMAIN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Number(Rational, Option<String>),
    Symbol(String),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n, None) => f.write_str(&format_rational(n)),
            Value::Number(n, Some(u)) => write!(f, "{} {u}", format_rational(n)),
            Value::Symbol(s) => f.write_str(s),
            Value::Text(t) => write!(f, "{t:?}"),
        }
    }
}

pub const PERCENT_UNIT: &str = "%";

/// Whether the data value `v` lies in the region `r`. Named regions are
/// interpreted like concept names and never match here.
pub fn value_in_region(v: &Value, r: &RegionExpr) -> bool {
    match (r, v) {
        (RegionExpr::Interval { lo, hi, unit }, Value::Number(x, u)) => {
            u == unit && x >= lo && hi.is_none_or(|h| *x <= h)
        }
        (RegionExpr::Percent { lo, hi }, Value::Number(x, Some(u))) => u == PERCENT_UNIT && x >= lo && x <= hi,
        (RegionExpr::ValueSet(items), v) => items.iter().any(|l| literal_value(l) == *v),
        _ => false,
    }
}

pub fn literal_value(l: &Literal) -> Value {
    match l {
        Literal::Number(n) => Value::Number(*n, None),
        Literal::Symbol(s) => Value::Symbol(s.clone()),
        Literal::Text(t) => Value::Text(t.clone()),
    }
}

/// A finite interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interpretation {
    pub size: usize,
    /// Named individuals; distinct names denote distinct elements.
    pub individuals: BTreeMap<String, usize>,
    /// Elements that are data values.
    pub values: BTreeMap<usize, Value>,
    /// Extensions of concept and region names; missing names are empty.
    pub concepts: BTreeMap<String, u64>,
    /// `(from, to)` pairs per slot.
    pub roles: BTreeMap<String, Vec<(usize, usize)>>,
}

impl Interpretation {
    pub fn full(&self) -> u64 {
        mask_of(self.size)
    }

    /// Extension of `d` as a bit mask over the domain.
    pub fn eval(&self, d: &Description) -> u64 {
        let mut comp = Compiler::new(self);
        let e = comp.compile(d);
        let frame = comp.frame(self);
        frame.eval(&e)
    }

    pub fn contains(&self, d: &Description, x: usize) -> bool {
        self.eval(d) >> x & 1 == 1
    }

    /// Whether every axiom holds and every disjoint pair is disjoint.
    pub fn satisfies(&self, tbox: &Tbox) -> bool {
        tbox.axioms.iter().all(|(l, r)| self.eval(l) & !self.eval(r) == 0)
            && tbox.disjoint.iter().all(|(a, b)| self.eval(a) & self.eval(b) == 0)
    }

    pub fn element_name(&self, x: usize) -> String {
        if let Some((n, _)) = self.individuals.iter().find(|(_, &i)| i == x) {
            return n.clone();
        }
        if let Some(v) = self.values.get(&x) {
            return format!("{v}");
        }
        format!("e{x}")
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.size).map(|x| self.element_name(x)).collect();
        write!(f, "domain {{{}}}", names.join(", "))?;
        for (c, m) in &self.concepts {
            let members: Vec<&str> = (0..self.size).filter(|x| m >> x & 1 == 1).map(|x| names[x].as_str()).collect();
            write!(f, "; {c} = {{{}}}", members.join(", "))?;
        }
        for (s, pairs) in &self.roles {
            let edges: Vec<String> = pairs.iter().map(|(a, b)| format!("({}, {})", names[*a], names[*b])).collect();
            write!(f, "; {s} = {{{}}}", edges.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A description compiled against fixed symbol tables.
#[derive(Debug, Clone)]
pub(crate) enum CExpr {
    Const(u64),
    Atom(usize),
    Slot { slot: usize, modifier: CardModifier, filler: Box<CExpr> },
    Proj { slot: usize, base: Box<CExpr> },
    And(Box<CExpr>, Box<CExpr>),
    Or(Box<CExpr>, Box<CExpr>),
    Diff(Box<CExpr>, Box<CExpr>),
}

/// Assigns indices to concept and slot names; individuals and values are fixed.
#[derive(Debug, Clone)]
pub(crate) struct Compiler {
    pub atoms: BTreeMap<String, usize>,
    pub slots: BTreeMap<String, usize>,
    individuals: BTreeMap<String, usize>,
    values: Vec<(usize, Value)>,
    full: u64,
}

impl Compiler {
    pub fn new(i: &Interpretation) -> Self {
        Compiler::with_domain(
            i.size,
            i.individuals.clone(),
            i.values.iter().map(|(k, v)| (*k, v.clone())).collect(),
        )
    }

    pub fn with_domain(size: usize, individuals: BTreeMap<String, usize>, values: Vec<(usize, Value)>) -> Self {
        Compiler {
            atoms: BTreeMap::new(),
            slots: BTreeMap::new(),
            individuals,
            values,
            full: mask_of(size),
        }
    }

    fn atom(&mut self, name: &str) -> usize {
        let n = self.atoms.len();
        *self.atoms.entry(name.into()).or_insert(n)
    }

    fn slot(&mut self, name: &str) -> usize {
        let n = self.slots.len();
        *self.slots.entry(name.into()).or_insert(n)
    }

    pub fn compile(&mut self, d: &Description) -> CExpr {
        match d {
            Description::Atom(a) if a == NOTHING => CExpr::Const(0),
            Description::Atom(a) if a == ANYTHING => CExpr::Const(self.full),
            Description::Atom(a) | Description::Region(RegionExpr::Named(a)) => CExpr::Atom(self.atom(a)),
            Description::Region(r) => {
                let m = self
                    .values
                    .iter()
                    .filter(|(_, v)| value_in_region(v, r))
                    .fold(0u64, |m, (i, _)| m | 1 << i);
                CExpr::Const(m)
            }
            Description::Enum(members) => {
                let m = members
                    .iter()
                    .filter_map(|n| self.individuals.get(n))
                    .fold(0u64, |m, i| m | 1 << i);
                CExpr::Const(m)
            }
            Description::Slot { slot, modifier, filler } => CExpr::Slot {
                slot: self.slot(slot),
                modifier: *modifier,
                filler: Box::new(self.compile(filler)),
            },
            Description::Proj { base, slot } => CExpr::Proj {
                slot: self.slot(slot),
                base: Box::new(self.compile(base)),
            },
            Description::And(l, r) => CExpr::And(Box::new(self.compile(l)), Box::new(self.compile(r))),
            Description::Or(l, r) => CExpr::Or(Box::new(self.compile(l)), Box::new(self.compile(r))),
            Description::Diff(l, r) => CExpr::Diff(Box::new(self.compile(l)), Box::new(self.compile(r))),
        }
    }

    /// Builds the frame for `i` using this compiler's symbol tables.
    pub fn frame(&self, i: &Interpretation) -> Frame {
        let n = i.size;
        let mut atoms = vec![0u64; self.atoms.len()];
        for (name, &idx) in &self.atoms {
            atoms[idx] = i.concepts.get(name).copied().unwrap_or(0) & mask_of(n);
        }
        let mut succ = vec![0u64; self.slots.len() * n];
        for (name, &idx) in &self.slots {
            for &(a, b) in i.roles.get(name).map(Vec::as_slice).unwrap_or(&[]) {
                if a < n && b < n && !i.values.contains_key(&a) {
                    succ[idx * n + a] |= 1 << b;
                }
            }
        }
        Frame { n, atoms, succ }
    }
}

/// Concept extensions and successor masks of one interpretation.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    pub n: usize,
    pub atoms: Vec<u64>,
    /// `succ[slot * n + x]` is the successor mask of `x`.
    pub succ: Vec<u64>,
}

impl Frame {
    pub fn eval(&self, e: &CExpr) -> u64 {
        match e {
            CExpr::Const(m) => *m,
            CExpr::Atom(i) => self.atoms[*i],
            CExpr::And(l, r) => self.eval(l) & self.eval(r),
            CExpr::Or(l, r) => self.eval(l) | self.eval(r),
            CExpr::Diff(l, r) => self.eval(l) & !self.eval(r),
            CExpr::Proj { slot, base } => {
                let b = self.eval(base);
                let row = &self.succ[slot * self.n..(slot + 1) * self.n];
                (0..self.n).filter(|y| b >> y & 1 == 1).fold(0, |m, y| m | row[y])
            }
            CExpr::Slot { slot, modifier, filler } => {
                let f = self.eval(filler);
                let row = &self.succ[slot * self.n..(slot + 1) * self.n];
                let mut out = 0u64;
                for (x, &s) in row.iter().enumerate() {
                    let hits = (s & f).count_ones();
                    let ok = match *modifier {
                        CardModifier::ExactlyOne => s.count_ones() == 1 && s & !f == 0,
                        CardModifier::AtMost(k) => hits <= k,
                        CardModifier::AtLeast(k) => hits >= k,
                        CardModifier::Exactly(k) => hits == k,
                        CardModifier::Some => hits >= 1,
                        CardModifier::Only => s & !f == 0,
                    };
                    if ok {
                        out |= 1 << x;
                    }
                }
                out
            }
        }
    }
}

/// Evidence that a claimed entailment fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `element` belongs to the left description and not to the right one
    /// in `interp`, which satisfies the axioms in force.
    Model { interp: Interpretation, element: usize },
    /// A population of `size` subjects of which `satisfying` meet the
    /// requirement: enough for `held` at chain position `position`, too few
    /// for `required`.
    Population {
        position: usize,
        size: u64,
        satisfying: u64,
        held: Rational,
        required: Rational,
    },
}

impl Witness {
    /// Re-checks a model witness against `left ⊑ right` under `tbox`.
    pub fn replays(&self, left: &Description, right: &Description, tbox: &Tbox) -> bool {
        match self {
            Witness::Model { interp, element } => {
                *element < interp.size
                    && interp.contains(left, *element)
                    && !interp.contains(right, *element)
                    && interp.satisfies(tbox)
            }
            Witness::Population {
                size,
                satisfying,
                held,
                required,
                ..
            } => {
                let frac = Rational::new(*satisfying as i64, *size as i64);
                *size > 0 && frac >= *held && frac < *required
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Model { interp, element } => {
                write!(f, "{} in {interp}", interp.element_name(*element))
            }
            Witness::Population {
                position,
                size,
                satisfying,
                ..
            } => write!(
                f,
                "{satisfying} of {size} subjects satisfy the requirement at de-universalization step {}",
                position + 1
            ),
        }
    }
}
