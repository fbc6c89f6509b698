//! Dimension thresholds of the exact bounds.

use serde::Serialize;

use crate::exactfn::{RationalFn, Sign};

use super::{BoundAssembly, Target};

/// Largest dimension searched for a sign change.
const SEARCH_LIMIT: i64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdEntry {
    pub target: Target,
    /// Smallest `n ≥ 3` at which the total is positive.
    pub first_positive: Option<i64>,
    /// Whether positivity for every `n ≥ first_positive` is certified by the
    /// Taylor-shift test on numerator and denominator.
    pub positive_for_all_larger: bool,
    /// Dimensions below `first_positive` where the total is negative.
    pub negative: Vec<i64>,
    /// Dimensions below `first_positive` where the denominator vanishes.
    pub poles: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub entries: Vec<ThresholdEntry>,
    pub remarks: Vec<String>,
}

impl ThresholdReport {
    pub fn entry(&self, target: Target) -> Option<&ThresholdEntry> {
        self.entries.iter().find(|e| e.target == target)
    }
}

fn entry(target: Target, total: &RationalFn) -> ThresholdEntry {
    let mut negative = Vec::new();
    let mut poles = Vec::new();
    let mut first_positive = None;
    for n in 3..=SEARCH_LIMIT {
        match total.sign_at(n) {
            Ok(Sign::Positive) => {
                first_positive = Some(n);
                break;
            }
            Ok(Sign::Negative) => negative.push(n),
            Ok(Sign::Zero) => {}
            Err(_) => poles.push(n),
        }
    }
    ThresholdEntry {
        target,
        first_positive,
        positive_for_all_larger: first_positive.is_some_and(|n| total.positive_for_all_ge(n)),
        negative,
        poles,
    }
}

pub fn threshold_report(assemblies: &[BoundAssembly]) -> ThresholdReport {
    let entries: Vec<_> = assemblies.iter().map(|a| entry(a.target, &a.total.coeff)).collect();
    let mut remarks = Vec::new();
    for e in &entries {
        match (e.target, e.first_positive) {
            (Target::C1Lower, Some(n)) => remarks.push(format!(
                "nonumbilic lower bound is positive for n >= {n}; the supersolution bound shows no argument of this type can go below n = 5"
            )),
            (Target::C1Upper, Some(n)) => remarks.push(format!(
                "nonumbilic upper bound is negative at n = {:?}, has poles at n = {:?}, and is positive from n = {n}",
                e.negative, e.poles
            )),
            (Target::C2Lower, Some(n)) => remarks.push(format!(
                "umbilic lower bound is positive for n >= {n}; below n = 7 the expansion degenerates, so n = 7 is the best this argument gives"
            )),
            (t, None) => remarks.push(format!("{t} has no positive value for n <= {SEARCH_LIMIT}")),
        }
    }
    ThresholdReport { entries, remarks }
}
