//! Exhaustive finite-model oracle for subsumption.
//!
//! Enumerates every interpretation over `k` anonymous individuals, the named
//! individuals of the inputs, and a fixed grid of data values: every subset
//! for each concept name and every successor set for each individual and
//! slot. Used to test the structural reasoner, not by it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::semantics::{mask_of, CExpr, Compiler, Frame, Interpretation, Value, Witness, PERCENT_UNIT};
use super::Tbox;
use crate::num::Rational;
use crate::syntax::{Description, RegionExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_atoms: usize,
    pub max_slots: usize,
    pub max_domain: usize,
    /// Upper bound on log2 of the number of interpretations.
    pub max_bits: u32,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_atoms: 4,
            max_slots: 3,
            max_domain: 3,
            max_bits: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("oracle bounds exceeded: {detail}")]
pub struct BoundsExceeded {
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Containment held in every enumerated interpretation.
    HoldsInAll {
        interpretations: u64,
        /// How many of them satisfied the axioms.
        models: u64,
    },
    Counterexample(Witness),
}

impl OracleOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, OracleOutcome::HoldsInAll { .. })
    }
}

pub fn oracle_subsumes(
    left: &Description,
    right: &Description,
    tbox: &Tbox,
    k: usize,
    grid: &[Value],
) -> Result<OracleOutcome, BoundsExceeded> {
    oracle_subsumes_with(left, right, tbox, k, grid, &OracleBounds::default())
}

/// Like [`oracle_subsumes`] with explicit bounds.
pub fn oracle_subsumes_with(
    left: &Description,
    right: &Description,
    tbox: &Tbox,
    k: usize,
    grid: &[Value],
    bounds: &OracleBounds,
) -> Result<OracleOutcome, BoundsExceeded> {
    let exceeded = |detail: String| Err(BoundsExceeded { detail });
    if k == 0 || k > bounds.max_domain {
        return exceeded(format!("domain size {k} outside 1..={}", bounds.max_domain));
    }
    let mut all: Vec<&Description> = alloc::vec![left, right];
    for (l, r) in tbox.axioms.iter().chain(&tbox.disjoint) {
        all.push(l);
        all.push(r);
    }
    let names = individual_names(all.iter().copied());
    let inds = k + names.len();
    let n = inds + grid.len();
    if n > 64 {
        return exceeded(format!("{n} domain elements"));
    }
    let individuals: BTreeMap<String, usize> = names.iter().enumerate().map(|(i, s)| (s.clone(), k + i)).collect();
    let values: Vec<(usize, Value)> = grid.iter().enumerate().map(|(i, v)| (inds + i, v.clone())).collect();
    let mut comp = Compiler::with_domain(n, individuals.clone(), values.clone());
    let el = comp.compile(left);
    let er = comp.compile(right);
    let axioms: Vec<(CExpr, CExpr)> = tbox.axioms.iter().map(|(l, r)| (comp.compile(l), comp.compile(r))).collect();
    let disjoint: Vec<(CExpr, CExpr)> = tbox.disjoint.iter().map(|(l, r)| (comp.compile(l), comp.compile(r))).collect();

    let atoms = comp.atoms.len();
    let slots = comp.slots.len();
    if atoms > bounds.max_atoms {
        return exceeded(format!("{atoms} concept names"));
    }
    if slots > bounds.max_slots {
        return exceeded(format!("{slots} slots"));
    }
    let bits = (atoms * n + slots * inds * n) as u32;
    if bits > bounds.max_bits {
        return exceeded(format!("{bits} bits of interpretation"));
    }

    let mut frame = Frame {
        n,
        atoms: alloc::vec![0; atoms],
        succ: alloc::vec![0; slots * n],
    };
    let m = mask_of(n);
    let total = 1u64 << bits;
    let mut models = 0u64;
    for code in 0..total {
        let mut off = 0;
        for a in frame.atoms.iter_mut() {
            *a = (code >> off) & m;
            off += n;
        }
        for s in 0..slots {
            for x in 0..inds {
                frame.succ[s * n + x] = (code >> off) & m;
                off += n;
            }
        }
        let ok = axioms.iter().all(|(l, r)| frame.eval(l) & !frame.eval(r) == 0)
            && disjoint.iter().all(|(a, b)| frame.eval(a) & frame.eval(b) == 0);
        if !ok {
            continue;
        }
        models += 1;
        let diff = frame.eval(&el) & !frame.eval(&er);
        if diff != 0 {
            let interp = to_interpretation(&comp, &frame, individuals, values);
            return Ok(OracleOutcome::Counterexample(Witness::Model {
                interp,
                element: diff.trailing_zeros() as usize,
            }));
        }
    }
    Ok(OracleOutcome::HoldsInAll {
        interpretations: total,
        models,
    })
}

fn to_interpretation(
    comp: &Compiler,
    frame: &Frame,
    individuals: BTreeMap<String, usize>,
    values: Vec<(usize, Value)>,
) -> Interpretation {
    let n = frame.n;
    let mut i = Interpretation {
        size: n,
        individuals,
        values: values.into_iter().collect(),
        ..Default::default()
    };
    for (name, &idx) in &comp.atoms {
        if frame.atoms[idx] != 0 {
            i.concepts.insert(name.clone(), frame.atoms[idx]);
        }
    }
    for (name, &idx) in &comp.slots {
        let mut pairs = Vec::new();
        for x in 0..n {
            let s = frame.succ[idx * n + x];
            for y in 0..n {
                if s >> y & 1 == 1 {
                    pairs.push((x, y));
                }
            }
        }
        if !pairs.is_empty() {
            i.roles.insert(name.clone(), pairs);
        }
    }
    i
}

pub(crate) fn individual_names<'a, I>(descs: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a Description>,
{
    let mut names = BTreeSet::new();
    for d in descs {
        d.walk(&mut |n| {
            if let Description::Enum(ms) = n {
                names.extend(ms.iter().cloned());
            }
        });
    }
    names
}

/// Values that separate every region mentioned in `descs`: all interval
/// endpoints, the midpoints between them, one point beyond each end, and
/// every member of a value set.
pub fn value_grid<'a, I>(descs: I) -> Vec<Value>
where
    I: IntoIterator<Item = &'a Description>,
{
    let mut points: BTreeMap<Option<String>, BTreeSet<Rational>> = BTreeMap::new();
    let mut extra: BTreeSet<Value> = BTreeSet::new();
    for d in descs {
        d.walk(&mut |n| match n {
            Description::Region(RegionExpr::Interval { lo, hi, unit }) => {
                let p = points.entry(unit.clone()).or_default();
                p.insert(*lo);
                p.extend(hi.iter().copied());
            }
            Description::Region(RegionExpr::Percent { lo, hi }) => {
                let p = points.entry(Some(PERCENT_UNIT.into())).or_default();
                p.insert(*lo);
                p.insert(*hi);
            }
            Description::Region(RegionExpr::ValueSet(items)) => {
                extra.extend(items.iter().map(super::semantics::literal_value));
            }
            _ => {}
        });
    }
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    let mut out: BTreeSet<Value> = extra;
    for (unit, ps) in points {
        let ps: Vec<Rational> = ps.into_iter().collect();
        let mut push = |r: Rational| {
            out.insert(Value::Number(r, unit.clone()));
        };
        if let (Some(first), Some(last)) = (ps.first(), ps.last()) {
            push(first - one);
            push(last + one);
        }
        for w in ps.windows(2) {
            push((w[0] + w[1]) / two);
        }
        for p in &ps {
            push(*p);
        }
    }
    out.into_iter().collect()
}
