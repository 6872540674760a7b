use std::fmt;

use crate::fuzzy::FuzzyQuantifier;
use crate::model::{Bindings, Condition, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Which,
    Count,
    Few,
    Many,
    Most,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Which => "which",
            Quantifier::Count => "count",
            Quantifier::Few => "few",
            Quantifier::Many => "many",
            Quantifier::Most => "most",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "which" => Quantifier::Which,
            "count" => Quantifier::Count,
            "few" => Quantifier::Few,
            "many" => Quantifier::Many,
            "most" => Quantifier::Most,
            _ => return None,
        })
    }

    pub fn fuzzy(self) -> Option<FuzzyQuantifier> {
        match self {
            Quantifier::Few => Some(FuzzyQuantifier::Few),
            Quantifier::Many => Some(FuzzyQuantifier::Many),
            Quantifier::Most => Some(FuzzyQuantifier::Most),
            _ => None,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// `quantifier ?head where conditions [from conditions]`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Query {
    pub quantifier: Quantifier,
    /// Head variable name, without the `?`.
    pub head: String,
    pub conditions: Vec<Condition>,
    /// Reference class; mandatory for few/many/most.
    pub from: Option<Vec<Condition>>,
}

/// Deduplicated, insertion-ordered binding maps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BindingSet {
    rows: Vec<Bindings>,
}

impl BindingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self {
            rows: vec![Bindings::new()],
        }
    }

    /// Returns false if an equal row is already present.
    pub fn push(&mut self, row: Bindings) -> bool {
        if self.rows.contains(&row) {
            return false;
        }
        self.rows.push(row);
        true
    }

    pub fn rows(&self) -> &[Bindings] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct values of one variable, in row order.
    pub fn project(&self, variable: &str) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for row in &self.rows {
            if let Some(t) = row.get(variable) {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
        out
    }
}

impl IntoIterator for BindingSet {
    type Item = Bindings;
    type IntoIter = std::vec::IntoIter<Bindings>;

    fn into_iter(self) -> Self::IntoIter {
        self.rows.into_iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryResult {
    /// `which`: distinct head-variable values.
    Bindings(Vec<Term>),
    Count(usize),
    Verdict {
        holds: bool,
        where_count: usize,
        from_count: usize,
        ratio: f64,
    },
}
