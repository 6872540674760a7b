use super::{FuzzyConfig, FuzzyError};
use crate::model::{vocab, KnowledgeGraph, Name, Term};

#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Value(f64),
    /// Resolved to the configured ceiling.
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeTerm {
    pub name: String,
    pub lower: f64,
    pub upper: Bound,
}

impl RangeTerm {
    pub fn new(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            lower,
            upper: Bound::Value(upper),
        }
    }
}

/// Per-term memberships aligned with a range's term order.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipVector(Vec<f64>);

impl MembershipVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, index: usize) -> f64 {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// An ordered, contiguous partition of a numeric quantity into fuzzy terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRange {
    pub quantity: Name,
    pub scope: Option<Name>,
    terms: Vec<RangeTerm>,
    bounds: Vec<(f64, f64)>,
    /// Internal boundaries; `boundaries[i]` separates terms i and i+1.
    boundaries: Vec<f64>,
    half_widths: Vec<f64>,
}

/// Bounds closer than this (after the integer gap) count as touching.
const MAX_GAP: f64 = 1.0;

impl ScalarRange {
    pub fn new(
        quantity: Name,
        scope: Option<Name>,
        terms: Vec<RangeTerm>,
        config: &FuzzyConfig,
    ) -> Result<Self, FuzzyError> {
        let mut bounds = Vec::with_capacity(terms.len());
        for t in &terms {
            let upper = match &t.upper {
                Bound::Value(v) => *v,
                Bound::Symbol(_) => config.ceiling,
            };
            if !t.lower.is_finite() || !upper.is_finite() || t.lower > upper {
                return Err(FuzzyError::InvalidTermBounds(t.name.clone()));
            }
            bounds.push((t.lower, upper));
        }
        if terms.is_empty() {
            return Err(FuzzyError::MissingRange {
                quantity: quantity.to_string(),
                scope: scope.as_ref().map(Name::to_string),
            });
        }
        let mut boundaries = Vec::new();
        let mut half_widths = Vec::new();
        for i in 1..bounds.len() {
            let (lo_a, hi_a) = bounds[i - 1];
            let (lo_b, hi_b) = bounds[i];
            let gap = lo_b - hi_a;
            if !(0.0..=MAX_GAP).contains(&gap) {
                return Err(FuzzyError::NonContiguousRange {
                    left: terms[i - 1].name.clone(),
                    right: terms[i].name.clone(),
                    gap,
                });
            }
            boundaries.push((hi_a + lo_b) / 2.0);
            half_widths.push(config.crossfade_fraction * (hi_a - lo_a).min(hi_b - lo_b));
        }
        Ok(Self {
            quantity,
            scope,
            terms,
            bounds,
            boundaries,
            half_widths,
        })
    }

    /// Builds the range from `range of Q is t1, ... for S` and one
    /// `Q of ti is lo, hi for S` statement per term.
    pub fn from_graph(
        graph: &KnowledgeGraph,
        quantity: &Name,
        scope: Option<&Name>,
        config: &FuzzyConfig,
    ) -> Result<Self, FuzzyError> {
        let missing = || FuzzyError::MissingRange {
            quantity: quantity.to_string(),
            scope: scope.map(Name::to_string),
        };
        let quantity_term = Term::Name(quantity.clone());
        let candidates: Vec<_> = graph
            .properties(&Term::name(vocab::RANGE), vocab::IS)
            .filter(|(_, p)| p.argument == quantity_term)
            .map(|(_, p)| p)
            .collect();
        let chosen = match scope {
            Some(s) => candidates
                .iter()
                .find(|p| p.scope.iter().any(|t| t.as_name() == Some(s))),
            None => candidates
                .iter()
                .find(|p| p.scope.is_empty())
                .or(candidates.first()),
        }
        .ok_or_else(missing)?;
        let range_scope = chosen.scope.first().and_then(Term::as_name).cloned();
        let mut terms = Vec::new();
        for referent in &chosen.referents {
            let name = referent.to_string();
            let defs: Vec<_> = graph
                .properties(&quantity_term, vocab::IS)
                .filter(|(_, p)| &p.argument == referent)
                .map(|(_, p)| p)
                .collect();
            let def = defs
                .iter()
                .find(|p| scope_contains(&p.scope, range_scope.as_ref()))
                .or_else(|| defs.iter().find(|p| p.scope.is_empty()))
                .ok_or_else(|| FuzzyError::MissingTermBounds(name.clone()))?;
            let [lower, upper] = def.referents.as_slice() else {
                return Err(FuzzyError::InvalidTermBounds(name));
            };
            let lower = lower
                .as_number()
                .ok_or_else(|| FuzzyError::InvalidTermBounds(name.clone()))?;
            let upper = match upper {
                Term::Number(n) => Bound::Value(n.value()),
                Term::Name(n) => Bound::Symbol(n.to_string()),
                _ => return Err(FuzzyError::InvalidTermBounds(name)),
            };
            terms.push(RangeTerm { name, lower, upper });
        }
        Self::new(quantity.clone(), range_scope, terms, config)
    }

    /// Overrides every crossfade half-width.
    pub fn with_half_width(mut self, half_width: f64) -> Self {
        let w = if half_width.is_finite() {
            half_width.max(0.0)
        } else {
            0.0
        };
        self.half_widths.iter_mut().for_each(|h| *h = w);
        self
    }

    pub fn terms(&self) -> &[RangeTerm] {
        &self.terms
    }

    pub fn term_names(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.name.as_str())
    }

    pub fn term_index(&self, name: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name == name)
    }

    /// Resolved `(lower, upper)` of each term.
    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn min(&self) -> f64 {
        self.bounds[0].0
    }

    pub fn max(&self) -> f64 {
        self.bounds[self.bounds.len() - 1].1
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.bounds.iter().map(|(lo, hi)| (lo + hi) / 2.0).collect()
    }

    pub(crate) fn scope_matches(&self, scope: &[Term]) -> bool {
        scope.is_empty() || scope_contains(scope, self.scope.as_ref())
    }

    /// Fraction of the way past boundary `j`'s crossfade window.
    fn past(&self, j: usize, value: f64) -> f64 {
        let (b, w) = (self.boundaries[j], self.half_widths[j]);
        if w == 0.0 {
            return match value.partial_cmp(&b) {
                Some(std::cmp::Ordering::Greater) => 1.0,
                Some(std::cmp::Ordering::Equal) => 0.5,
                _ => 0.0,
            };
        }
        // measured from the boundary so the boundary itself gives exactly 0.5
        (0.5 + (value - b) / (2.0 * w)).clamp(0.0, 1.0)
    }

    pub fn fuzzify(&self, value: f64) -> Result<MembershipVector, FuzzyError> {
        if !(self.min()..=self.max()).contains(&value) {
            return Err(FuzzyError::OutOfRange {
                value,
                min: self.min(),
                max: self.max(),
            });
        }
        let n = self.terms.len();
        let past: Vec<f64> = (0..n - 1).map(|j| self.past(j, value)).collect();
        let mut m: Vec<f64> = (0..n)
            .map(|i| {
                let entered = if i == 0 { 1.0 } else { past[i - 1] };
                let left = if i == n - 1 { 0.0 } else { past[i] };
                (entered - left).max(0.0)
            })
            .collect();
        let total: f64 = m.iter().sum();
        m.iter_mut().for_each(|x| *x /= total);
        Ok(MembershipVector(m))
    }

    pub(crate) fn check_vector(&self, mv: &MembershipVector) -> Result<f64, FuzzyError> {
        if mv.len() != self.terms.len() {
            return Err(FuzzyError::LengthMismatch {
                got: mv.len(),
                want: self.terms.len(),
            });
        }
        if mv.values().iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(FuzzyError::InvalidMembership);
        }
        let total = mv.sum();
        if total == 0.0 {
            return Err(FuzzyError::DegenerateVector);
        }
        Ok(total)
    }

    /// Membership-weighted mean of the term midpoints.
    pub fn defuzzify(&self, mv: &MembershipVector) -> Result<f64, FuzzyError> {
        let total = self.check_vector(mv)?;
        let weighted: f64 = mv
            .values()
            .iter()
            .zip(self.midpoints())
            .map(|(m, mid)| m * mid)
            .sum();
        Ok((weighted / total).clamp(self.min(), self.max()))
    }
}

fn scope_contains(scope: &[Term], name: Option<&Name>) -> bool {
    match name {
        Some(n) => scope.iter().any(|t| t.as_name() == Some(n)),
        None => scope.is_empty(),
    }
}

/// The range for `quantity` that lists `term`, if the graph has one.
pub fn find_range(
    graph: &KnowledgeGraph,
    quantity: &Name,
    term: &str,
    config: &FuzzyConfig,
) -> Option<Result<ScalarRange, FuzzyError>> {
    let quantity_term = Term::Name(quantity.clone());
    let (_, p) = graph
        .properties(&Term::name(vocab::RANGE), vocab::IS)
        .find(|(_, p)| {
            p.argument == quantity_term && p.referents.iter().any(|r| r.to_string() == term)
        })?;
    let scope = p.scope.first().and_then(Term::as_name).cloned();
    Some(ScalarRange::from_graph(
        graph,
        quantity,
        scope.as_ref(),
        config,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_document;

    const AGES: &str = "range of age is infant, child, adult for person
age of infant is 0, 4 for person
age of child is 5, 17 for person
age of adult is 18, age-at-death for person
";

    fn graph(text: &str) -> KnowledgeGraph {
        KnowledgeGraph::from_statements(parse_document(text).unwrap()).unwrap()
    }

    fn ages() -> ScalarRange {
        ScalarRange::from_graph(
            &graph(AGES),
            &Name::new("age"),
            Some(&Name::new("person")),
            &FuzzyConfig::default(),
        )
        .unwrap()
    }

    fn temperature() -> ScalarRange {
        let terms = vec![
            RangeTerm::new("cold", -10.0, 10.0),
            RangeTerm::new("warm", 10.0, 25.0),
            RangeTerm::new("hot", 25.0, 45.0),
        ];
        ScalarRange::new(
            Name::new("temperature"),
            None,
            terms,
            &FuzzyConfig::default(),
        )
        .unwrap()
        .with_half_width(1.0)
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn builds_age_range() {
        let r = ages();
        assert_eq!(r.bounds(), &[(0.0, 4.0), (5.0, 17.0), (18.0, 120.0)]);
        assert_eq!(r.boundaries(), &[4.5, 17.5]);
        assert_eq!(r.midpoints(), vec![2.0, 11.0, 69.0]);
    }

    #[test]
    fn missing_bounds_and_gaps() {
        let text = "range of age is infant, child for person\nage of infant is 0, 4 for person\n";
        let err = ScalarRange::from_graph(
            &graph(text),
            &Name::new("age"),
            None,
            &FuzzyConfig::default(),
        );
        assert_eq!(err, Err(FuzzyError::MissingTermBounds("child".into())));
        let terms = vec![
            RangeTerm::new("a", 0.0, 4.0),
            RangeTerm::new("b", 6.0, 17.0),
        ];
        let err = ScalarRange::new(Name::new("q"), None, terms, &FuzzyConfig::default());
        assert!(matches!(err, Err(FuzzyError::NonContiguousRange { .. })));
    }

    #[test]
    fn interior_value_is_crisp() {
        assert_eq!(ages().fuzzify(10.0).unwrap().values(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn temperature_crossfade() {
        let t = temperature();
        assert!(close(t.fuzzify(25.8).unwrap().values(), &[0.0, 0.1, 0.9]));
        assert!(close(t.fuzzify(25.6).unwrap().values(), &[0.0, 0.2, 0.8]));
        assert!(close(t.fuzzify(25.0).unwrap().values(), &[0.0, 0.5, 0.5]));
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            ages().fuzzify(-1.0),
            Err(FuzzyError::OutOfRange { .. })
        ));
        assert!(ages().fuzzify(f64::NAN).is_err());
    }

    #[test]
    fn defuzzify_midpoints() {
        let r = ages();
        assert_eq!(
            r.defuzzify(&MembershipVector::new(vec![0.0, 1.0, 0.0]))
                .unwrap(),
            11.0
        );
        assert_eq!(
            r.defuzzify(&MembershipVector::new(vec![0.5, 0.5, 0.0]))
                .unwrap(),
            6.5
        );
        assert_eq!(
            r.defuzzify(&MembershipVector::new(vec![0.0, 0.0, 0.0])),
            Err(FuzzyError::DegenerateVector)
        );
    }

    #[test]
    fn zero_width_boundary_steps() {
        let t = temperature().with_half_width(0.0);
        assert_eq!(t.fuzzify(25.0).unwrap().values(), &[0.0, 0.5, 0.5]);
        assert_eq!(t.fuzzify(25.01).unwrap().values(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn explicit_modifier_definition() {
        let text = format!(
            "{AGES}range of age is young, old for human\nage of young is 0, 59 for human\nage of old is 60, 120 for human\nage of very:old greater-than 75 for human\n"
        );
        let g = graph(&text);
        let r = find_range(&g, &Name::new("age"), "old", &FuzzyConfig::default())
            .unwrap()
            .unwrap();
        let very = vec!["very".to_string()];
        let m = |v| {
            super::super::apply_modifier(
                Some(&g),
                &r,
                &very,
                "old",
                &super::super::FuzzyInput::Value(v),
            )
            .unwrap()
        };
        assert_eq!(m(80.0), 1.0);
        assert_eq!(m(70.0), 0.0);
        let plain = super::super::apply_modifier(
            None,
            &r,
            &very,
            "old",
            &super::super::FuzzyInput::Value(70.0),
        )
        .unwrap();
        assert_eq!(plain, 1.0);
        let err = super::super::apply_modifier(
            None,
            &r,
            &very,
            "ancient",
            &super::super::FuzzyInput::Value(70.0),
        );
        assert_eq!(err, Err(FuzzyError::UnknownTerm("ancient".into())));
    }

    #[test]
    fn default_square_on_memberships() {
        let r = temperature();
        let mv = MembershipVector::new(vec![0.0, 0.1, 0.9]);
        let very = vec!["very".to_string()];
        let m = super::super::apply_modifier(
            None,
            &r,
            &very,
            "hot",
            &super::super::FuzzyInput::Memberships(mv),
        )
        .unwrap();
        assert!((m - 0.81).abs() < 1e-12);
    }
}
