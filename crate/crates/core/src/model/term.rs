use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use super::statement::Statement;

/// Variable name to value assignments produced by pattern matching.
pub type Bindings = BTreeMap<String, Term>;

/// A possibly prefixed name such as `tulip` or `very:old`.
///
/// Prefixes act as modifiers on the base name; the chain is kept in source
/// order, so `very:very:old` has prefixes `["very", "very"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    prefixes: Vec<String>,
    base: String,
}

impl Name {
    pub fn new(base: impl Into<String>) -> Self {
        Self {
            prefixes: Vec::new(),
            base: base.into(),
        }
    }

    pub fn with_prefixes(prefixes: Vec<String>, base: impl Into<String>) -> Self {
        Self {
            prefixes,
            base: base.into(),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }

    pub fn is_simple(&self) -> bool {
        self.prefixes.is_empty()
    }

    /// True when the name is a single unprefixed identifier equal to `text`.
    pub fn is(&self, text: &str) -> bool {
        self.prefixes.is_empty() && self.base == text
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for prefix in &self.prefixes {
            write!(f, "{prefix}:")?;
        }
        f.write_str(&self.base)
    }
}

/// A finite number. Negative zero is folded into zero so that equality and
/// hashing agree.
#[derive(Debug, Clone, Copy)]
pub struct Number(f64);

impl Number {
    pub fn new(value: f64) -> Option<Self> {
        if value.is_finite() {
            Some(Self(if value == 0.0 { 0.0 } else { value }))
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Number {}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The universal node/value type of PKN.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Name(Name),
    Number(Number),
    /// A variable, stored without the leading `?`. The empty name is the
    /// anonymous variable written `?` in analogy completions.
    Variable(String),
    SubGraph(Vec<Statement>),
}

impl Term {
    pub fn name(base: impl Into<String>) -> Self {
        Term::Name(Name::new(base))
    }

    /// Panics if `value` is not finite.
    pub fn number(value: f64) -> Self {
        Term::Number(Number::new(value).expect("finite number"))
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn anonymous() -> Self {
        Term::Variable(String::new())
    }

    pub fn as_name(&self) -> Option<&Name> {
        match self {
            Term::Name(name) => Some(name),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Term::Number(n) => Some(n.value()),
            _ => None,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    /// True for a simple (unprefixed) name equal to `text`.
    pub fn is_name(&self, text: &str) -> bool {
        matches!(self, Term::Name(n) if n.is(text))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Variable(_) => false,
            Term::SubGraph(statements) => statements.iter().all(Statement::is_ground),
            _ => true,
        }
    }

    pub fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(v) if !v.is_empty() => {
                out.insert(v.clone());
            }
            Term::SubGraph(statements) => {
                for s in statements {
                    s.collect_variables(out);
                }
            }
            _ => {}
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> Term {
        match self {
            Term::Variable(v) => bindings.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::SubGraph(statements) => {
                Term::SubGraph(statements.iter().map(|s| s.substitute(bindings)).collect())
            }
            _ => self.clone(),
        }
    }
}

impl From<Name> for Term {
    fn from(name: Name) -> Self {
        Term::Name(name)
    }
}
