//! Intersections and containment of quality regions.

use alloc::collections::BTreeSet;
use alloc::string::String;

use super::semantics::{literal_value, value_in_region, Value, PERCENT_UNIT};
use crate::num::Rational;
use crate::syntax::RegionExpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RegionSet {
    /// No region constraint at all.
    Any,
    Interval {
        lo: Rational,
        hi: Option<Rational>,
        unit: Option<String>,
    },
    Finite(BTreeSet<Value>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Containment {
    Yes,
    No,
    /// The comparison involves different units.
    UnitMismatch,
}

impl RegionSet {
    pub fn from_expr(r: &RegionExpr) -> RegionSet {
        match r {
            RegionExpr::Interval { lo, hi, unit } => RegionSet::Interval {
                lo: *lo,
                hi: *hi,
                unit: unit.clone(),
            },
            RegionExpr::Percent { lo, hi } => RegionSet::Interval {
                lo: *lo,
                hi: Some(*hi),
                unit: Some(PERCENT_UNIT.into()),
            },
            RegionExpr::ValueSet(items) => RegionSet::Finite(items.iter().map(literal_value).collect()),
            // Named regions are concept names; callers never pass them here.
            RegionExpr::Named(_) => RegionSet::Any,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            RegionSet::Any => false,
            RegionSet::Interval { lo, hi, .. } => hi.is_some_and(|h| h < *lo),
            RegionSet::Finite(v) => v.is_empty(),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match self {
            RegionSet::Any => true,
            RegionSet::Interval { lo, hi, unit } => match v {
                Value::Number(x, u) => u == unit && x >= lo && hi.is_none_or(|h| *x <= h),
                _ => false,
            },
            RegionSet::Finite(vs) => vs.contains(v),
        }
    }

    /// Intersection of all `regions`; the flag reports intervals in different units.
    pub fn intersect_all<'a, I>(regions: I) -> (RegionSet, bool)
    where
        I: IntoIterator<Item = &'a RegionExpr>,
    {
        let mut acc = RegionSet::Any;
        let mut mismatch = false;
        for r in regions {
            let (next, m) = acc.intersect(&RegionSet::from_expr(r));
            acc = next;
            mismatch |= m;
        }
        (acc, mismatch)
    }

    pub fn intersect(&self, other: &RegionSet) -> (RegionSet, bool) {
        match (self, other) {
            (RegionSet::Any, x) | (x, RegionSet::Any) => (x.clone(), false),
            (
                RegionSet::Interval { lo: l1, hi: h1, unit: u1 },
                RegionSet::Interval { lo: l2, hi: h2, unit: u2 },
            ) => {
                if u1 != u2 {
                    return (RegionSet::Finite(BTreeSet::new()), true);
                }
                let hi = match (h1, h2) {
                    (Some(a), Some(b)) => Some(*a.min(b)),
                    (Some(a), None) | (None, Some(a)) => Some(*a),
                    (None, None) => None,
                };
                let out = RegionSet::Interval {
                    lo: *l1.max(l2),
                    hi,
                    unit: u1.clone(),
                };
                if out.is_empty() {
                    (RegionSet::Finite(BTreeSet::new()), false)
                } else {
                    (out, false)
                }
            }
            (RegionSet::Finite(vs), i @ RegionSet::Interval { .. }) | (i @ RegionSet::Interval { .. }, RegionSet::Finite(vs)) => {
                (RegionSet::Finite(vs.iter().filter(|v| i.contains(v)).cloned().collect()), false)
            }
            (RegionSet::Finite(a), RegionSet::Finite(b)) => (RegionSet::Finite(a.intersection(b).cloned().collect()), false),
        }
    }

    /// Whether every value of `self` lies in `r`.
    pub fn within(&self, r: &RegionExpr) -> Containment {
        if self.is_empty() {
            return Containment::Yes;
        }
        let target = RegionSet::from_expr(r);
        match (self, &target) {
            (RegionSet::Any, _) => Containment::No,
            (
                RegionSet::Interval { lo, hi, unit },
                RegionSet::Interval {
                    lo: tlo,
                    hi: thi,
                    unit: tunit,
                },
            ) => {
                if unit != tunit {
                    return Containment::UnitMismatch;
                }
                let upper = match (hi, thi) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(h), Some(t)) => h <= t,
                };
                yes_if(lo >= tlo && upper)
            }
            (RegionSet::Interval { lo, hi: Some(hi), unit }, RegionSet::Finite(_)) if lo == hi => {
                yes_if(value_in_region(&Value::Number(*lo, unit.clone()), r))
            }
            (RegionSet::Interval { .. }, _) => Containment::No,
            (RegionSet::Finite(vs), RegionSet::Interval { unit: tunit, .. }) => {
                let odd_unit = vs.iter().any(|v| matches!(v, Value::Number(_, u) if u != tunit));
                if odd_unit {
                    Containment::UnitMismatch
                } else {
                    yes_if(vs.iter().all(|v| target.contains(v)))
                }
            }
            (RegionSet::Finite(vs), _) => yes_if(vs.iter().all(|v| target.contains(v))),
        }
    }
}

fn yes_if(b: bool) -> Containment {
    if b {
        Containment::Yes
    } else {
        Containment::No
    }
}
