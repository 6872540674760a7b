//! Scalar ranges of fuzzy terms, fuzzification, modifiers, connectives and
//! fuzzy quantifiers.

mod range;

pub use range::{find_range, Bound, MembershipVector, RangeTerm, ScalarRange};

use crate::model::{KnowledgeGraph, Name, Term};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuzzyError {
    #[error("no `range of {quantity}` statement{}", scope_suffix(.scope))]
    MissingRange {
        quantity: String,
        scope: Option<String>,
    },
    #[error("no numeric bounds given for term `{0}`")]
    MissingTermBounds(String),
    #[error("invalid bounds for term `{0}`")]
    InvalidTermBounds(String),
    #[error("terms `{left}` and `{right}` are not contiguous (gap {gap})")]
    NonContiguousRange {
        left: String,
        right: String,
        gap: f64,
    },
    #[error("value {value} outside range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("membership vector is all zero")]
    DegenerateVector,
    #[error("membership vector has {got} entries, range has {want} terms")]
    LengthMismatch { got: usize, want: usize },
    #[error("membership values must lie in [0, 1]")]
    InvalidMembership,
    #[error("`{0}` is not a term of this range")]
    UnknownTerm(String),
    #[error("unknown fuzzy modifier `{0}`")]
    UnknownModifier(String),
    #[error("reference class is empty")]
    EmptyReferenceClass,
    #[error("where-count {where_count} exceeds from-count {from_count}")]
    InvalidCounts {
        where_count: usize,
        from_count: usize,
    },
}

fn scope_suffix(scope: &Option<String>) -> String {
    scope
        .as_ref()
        .map(|s| format!(" for `{s}`"))
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyConfig {
    /// Crossfade half-width as a fraction of the narrower adjacent term.
    pub crossfade_fraction: f64,
    /// Value substituted for symbolic upper bounds such as `age-at-death`.
    pub ceiling: f64,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        Self {
            crossfade_fraction: 0.1,
            ceiling: 120.0,
        }
    }
}

pub fn fuzzy_and(a: f64, b: f64) -> f64 {
    a.min(b)
}

pub fn fuzzy_or(a: f64, b: f64) -> f64 {
    a.max(b)
}

pub fn fuzzy_not(a: f64) -> f64 {
    1.0 - a
}

/// Default hedge for a modifier with no definition in the graph.
pub fn hedge(modifier: &str, membership: f64) -> Result<f64, FuzzyError> {
    match modifier {
        "very" => Ok(membership * membership),
        "extremely" => Ok(membership.powi(3)),
        "somewhat" => Ok(membership.sqrt()),
        other => Err(FuzzyError::UnknownModifier(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FuzzyInput {
    Value(f64),
    Memberships(MembershipVector),
}

/// Membership of the modified term `modifiers:term` (e.g. `very:old`).
///
/// The longest suffix of the modifier chain that the graph defines with a
/// numeric bound (`age of very:old greater-than 75 for person`) is
/// evaluated crisply against the value; remaining outer modifiers apply
/// their default hedges, innermost first.
pub fn apply_modifier(
    graph: Option<&KnowledgeGraph>,
    range: &ScalarRange,
    modifiers: &[String],
    term: &str,
    input: &FuzzyInput,
) -> Result<f64, FuzzyError> {
    let index = range
        .term_index(term)
        .ok_or_else(|| FuzzyError::UnknownTerm(term.to_string()))?;
    let value = || -> Result<f64, FuzzyError> {
        match input {
            FuzzyInput::Value(v) => Ok(*v),
            FuzzyInput::Memberships(mv) => range.defuzzify(mv),
        }
    };
    let mut outer = modifiers.len();
    let mut membership = None;
    if let Some(graph) = graph {
        for start in 0..modifiers.len() {
            let name = Name::with_prefixes(modifiers[start..].to_vec(), term);
            if let Some(defined) = explicit_membership(graph, range, &name, value()?) {
                membership = Some(defined);
                outer = start;
                break;
            }
        }
    }
    let mut m = match membership {
        Some(m) => m,
        None => match input {
            FuzzyInput::Value(v) => range.fuzzify(*v)?.get(index),
            FuzzyInput::Memberships(mv) => {
                range.check_vector(mv)?;
                mv.get(index)
            }
        },
    };
    for modifier in modifiers[..outer].iter().rev() {
        m = hedge(modifier, m)?;
    }
    Ok(m)
}

/// Crisp membership from a defining statement for `name`, if any.
fn explicit_membership(
    graph: &KnowledgeGraph,
    range: &ScalarRange,
    name: &Name,
    value: f64,
) -> Option<f64> {
    let quantity = Term::Name(range.quantity.clone());
    let argument = Term::Name(name.clone());
    for (_, s) in graph.about(&argument) {
        let crate::model::Statement::Property(p) = s else {
            continue;
        };
        if p.descriptor != quantity || !range.scope_matches(&p.scope) {
            continue;
        }
        let numbers: Vec<f64> = p.referents.iter().filter_map(Term::as_number).collect();
        if numbers.len() != p.referents.len() {
            continue;
        }
        let holds = match (p.operator.as_str(), numbers.as_slice()) {
            ("greater-than", [n]) => value > *n,
            ("less-than", [n]) => value < *n,
            ("is", [lo, hi]) => *lo <= value && value <= *hi,
            _ => continue,
        };
        return Some(if holds { 1.0 } else { 0.0 });
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FuzzyQuantifier {
    Few,
    Many,
    Most,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierThresholds {
    /// few holds for 0 < ratio ≤ few.
    pub few: f64,
    /// many holds for ratio ≥ many.
    pub many: f64,
    /// most holds for ratio ≥ most.
    pub most: f64,
}

impl Default for QuantifierThresholds {
    fn default() -> Self {
        Self {
            few: 0.2,
            many: 0.5,
            most: 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierVerdict {
    pub holds: bool,
    pub ratio: f64,
}

const RATIO_EPSILON: f64 = 1e-12;

pub fn quantifier_holds(
    kind: FuzzyQuantifier,
    where_count: usize,
    from_count: usize,
    thresholds: &QuantifierThresholds,
) -> Result<QuantifierVerdict, FuzzyError> {
    if from_count == 0 {
        return Err(FuzzyError::EmptyReferenceClass);
    }
    if where_count > from_count {
        return Err(FuzzyError::InvalidCounts {
            where_count,
            from_count,
        });
    }
    let ratio = where_count as f64 / from_count as f64;
    let holds = match kind {
        FuzzyQuantifier::Few => where_count > 0 && ratio <= thresholds.few + RATIO_EPSILON,
        FuzzyQuantifier::Many => ratio + RATIO_EPSILON >= thresholds.many,
        FuzzyQuantifier::Most => ratio + RATIO_EPSILON >= thresholds.most,
    };
    Ok(QuantifierVerdict { holds, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connectives() {
        assert_eq!(fuzzy_and(0.2, 0.8), 0.2);
        assert_eq!(fuzzy_or(0.2, 0.8), 0.8);
        assert!((fuzzy_not(fuzzy_not(0.3)) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn quantifiers() {
        let t = QuantifierThresholds::default();
        let v = quantifier_holds(FuzzyQuantifier::Few, 2, 10, &t).unwrap();
        assert!(v.holds);
        assert_eq!(v.ratio, 0.2);
        let v = quantifier_holds(FuzzyQuantifier::Most, 8, 10, &t).unwrap();
        assert!(v.holds);
        assert_eq!(v.ratio, 0.8);
        assert!(
            !quantifier_holds(FuzzyQuantifier::Few, 0, 10, &t)
                .unwrap()
                .holds
        );
        assert_eq!(
            quantifier_holds(FuzzyQuantifier::Many, 0, 0, &t),
            Err(FuzzyError::EmptyReferenceClass)
        );
        assert!(quantifier_holds(FuzzyQuantifier::Many, 3, 2, &t).is_err());
    }

    #[test]
    fn default_hedges() {
        assert!((hedge("very", 0.9).unwrap() - 0.81).abs() < 1e-12);
        assert_eq!(hedge("very", 1.0).unwrap(), 1.0);
        assert!(hedge("kinda", 0.5).is_err());
    }
}
