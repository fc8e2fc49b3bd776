use alloc::format;

use num_traits::One;

use super::semantics::Witness;
use super::Verdict3;
use crate::model::{PctEntry, QualityForm};
use crate::num::{format_percent, Rational};

/// Entailment between two de-universalizations of the same quality form.
///
/// Chains are compared step by step; a missing step counts as 100%. The
/// first form entails the second when each of its percentages is at least
/// the corresponding one of the second.
pub fn pct_entails(a: &QualityForm, b: &QualityForm) -> Verdict3 {
    if !a.same_base(b) {
        return Verdict3::Unknown("the two forms differ in more than their percentages".into());
    }
    chain_entails(&a.pct_chain, &b.pct_chain)
}

pub(crate) fn chain_entails(a: &[PctEntry], b: &[PctEntry]) -> Verdict3 {
    let one = Rational::one();
    for i in 0..a.len().max(b.len()) {
        let (ea, eb) = (a.get(i), b.get(i));
        if let (Some(x), Some(y)) = (ea, eb) {
            if x.path != y.path {
                return Verdict3::Unknown(format!(
                    "step {} quantifies over `{}` on one side and `{}` on the other",
                    i + 1,
                    x.path.join("."),
                    y.path.join(".")
                ));
            }
        }
        let held = ea.map_or(one, |e| e.pct);
        let required = eb.map_or(one, |e| e.pct);
        if held < required {
            return Verdict3::Disproved(Witness::Population {
                position: i,
                size: *held.denom() as u64,
                satisfying: *held.numer() as u64,
                held,
                required,
            });
        }
    }
    Verdict3::Proved
}

pub(crate) fn describe_chain(c: &[PctEntry]) -> alloc::string::String {
    let parts: alloc::vec::Vec<_> = c
        .iter()
        .map(|e| format!("{} over {}", format_percent(&e.pct), e.path.join(".")))
        .collect();
    parts.join(", ")
}
