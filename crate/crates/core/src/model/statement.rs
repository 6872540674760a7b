use std::collections::BTreeSet;

use super::metadata::Metadata;
use super::term::{Bindings, Name, Term};

/// Well-known operators and relationship names with engine-level meaning.
pub mod vocab {
    pub const IS: &str = "is";
    pub const INCLUDES: &str = "includes";
    pub const EXCLUDES: &str = "excludes";
    pub const GREATER_THAN: &str = "greater-than";
    pub const LESS_THAN: &str = "less-than";
    pub const KIND_OF: &str = "kind-of";
    pub const IS_A: &str = "is-a";
    pub const SIMILAR_TO: &str = "similar-to";
    pub const LIE: &str = "lie";
    pub const RANGE: &str = "range";
}

/// `descriptor of argument operator referent, ... [for scope] [(metadata)]`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropertyStatement {
    pub descriptor: Term,
    pub argument: Term,
    pub operator: String,
    pub referents: Vec<Term>,
    pub scope: Vec<Term>,
    pub metadata: Metadata,
}

impl PropertyStatement {
    pub fn new(
        descriptor: Term,
        argument: Term,
        operator: impl Into<String>,
        referents: Vec<Term>,
    ) -> Self {
        Self {
            descriptor,
            argument,
            operator: operator.into(),
            referents,
            scope: Vec::new(),
            metadata: Metadata::new(),
        }
    }

    /// `includes` and `excludes` treat their referents as a set.
    pub fn is_set_valued(&self) -> bool {
        self.operator == vocab::INCLUDES || self.operator == vocab::EXCLUDES
    }
}

/// `subject relationship object [for scope] [(metadata)]`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationStatement {
    pub subject: Term,
    pub relationship: Name,
    pub object: Term,
    pub scope: Vec<Term>,
    pub metadata: Metadata,
}

impl RelationStatement {
    pub fn new(subject: Term, relationship: Name, object: Term) -> Self {
        Self {
            subject,
            relationship,
            object,
            scope: Vec::new(),
            metadata: Metadata::new(),
        }
    }
}

/// A property or relation pattern, as used in rules, queries and
/// suppositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    Property(PropertyStatement),
    Relation(RelationStatement),
}

impl Condition {
    /// The concept a condition is about: the argument of a property or the
    /// subject of a relation.
    pub fn head(&self) -> &Term {
        match self {
            Condition::Property(p) => &p.argument,
            Condition::Relation(r) => &r.subject,
        }
    }

    pub fn with_head(&self, head: Term) -> Condition {
        let mut c = self.clone();
        match &mut c {
            Condition::Property(p) => p.argument = head,
            Condition::Relation(r) => r.subject = head,
        }
        c
    }

    pub fn scope(&self) -> &[Term] {
        match self {
            Condition::Property(p) => &p.scope,
            Condition::Relation(r) => &r.scope,
        }
    }

    pub fn metadata(&self) -> &Metadata {
        match self {
            Condition::Property(p) => &p.metadata,
            Condition::Relation(r) => &r.metadata,
        }
    }

    pub fn without_metadata(&self) -> Condition {
        let mut c = self.clone();
        match &mut c {
            Condition::Property(p) => p.metadata = Metadata::new(),
            Condition::Relation(r) => r.metadata = Metadata::new(),
        }
        c
    }

    pub fn is_ground(&self) -> bool {
        let mut vars = BTreeSet::new();
        self.collect_variables(&mut vars);
        vars.is_empty() && !self.has_anonymous()
    }

    fn has_anonymous(&self) -> bool {
        self.terms()
            .any(|t| matches!(t, Term::Variable(v) if v.is_empty()))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        self.collect_variables(&mut vars);
        vars
    }

    pub fn collect_variables(&self, out: &mut BTreeSet<String>) {
        for t in self.terms() {
            t.collect_variables(out);
        }
    }

    /// Every term slot of the condition in field order.
    pub fn terms(&self) -> Box<dyn Iterator<Item = &Term> + '_> {
        match self {
            Condition::Property(p) => Box::new(
                std::iter::once(&p.descriptor)
                    .chain(std::iter::once(&p.argument))
                    .chain(p.referents.iter())
                    .chain(p.scope.iter()),
            ),
            Condition::Relation(r) => Box::new(
                std::iter::once(&r.subject)
                    .chain(std::iter::once(&r.object))
                    .chain(r.scope.iter()),
            ),
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> Condition {
        let sub = |ts: &[Term]| {
            ts.iter()
                .map(|t| t.substitute(bindings))
                .collect::<Vec<_>>()
        };
        match self {
            Condition::Property(p) => Condition::Property(PropertyStatement {
                descriptor: p.descriptor.substitute(bindings),
                argument: p.argument.substitute(bindings),
                operator: p.operator.clone(),
                referents: sub(&p.referents),
                scope: sub(&p.scope),
                metadata: p.metadata.clone(),
            }),
            Condition::Relation(r) => Condition::Relation(RelationStatement {
                subject: r.subject.substitute(bindings),
                relationship: r.relationship.clone(),
                object: r.object.substitute(bindings),
                scope: sub(&r.scope),
                metadata: r.metadata.clone(),
            }),
        }
    }
}

impl From<Condition> for Statement {
    fn from(c: Condition) -> Self {
        match c {
            Condition::Property(p) => Statement::Property(p),
            Condition::Relation(r) => Statement::Relation(r),
        }
    }
}

/// `antecedent and ... implies consequent and ... [(metadata)]`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImplicationStatement {
    pub antecedents: Vec<Condition>,
    pub consequents: Vec<Condition>,
    pub metadata: Metadata,
}

impl ImplicationStatement {
    pub fn new(antecedents: Vec<Condition>, consequents: Vec<Condition>) -> Self {
        Self {
            antecedents,
            consequents,
            metadata: Metadata::new(),
        }
    }

    /// All locally scoped variables of the rule.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for c in self.antecedents.iter().chain(&self.consequents) {
            c.collect_variables(&mut vars);
        }
        vars
    }

    pub fn antecedent_variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for c in &self.antecedents {
            c.collect_variables(&mut vars);
        }
        vars
    }

    pub fn consequent_variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for c in &self.consequents {
            c.collect_variables(&mut vars);
        }
        vars
    }

    /// Variables that occur only in consequents. These are permitted but
    /// get skolemized when the rule is applied forwards.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let ante = self.antecedent_variables();
        self.consequent_variables()
            .into_iter()
            .filter(|v| !ante.contains(v))
            .collect()
    }
}

/// `a:b::c:d`, where at most one position is a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnalogyStatement {
    pub a: Term,
    pub b: Term,
    pub c: Term,
    pub d: Term,
}

impl AnalogyStatement {
    pub fn new(a: Term, b: Term, c: Term, d: Term) -> Self {
        Self { a, b, c, d }
    }

    pub fn terms(&self) -> [&Term; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Property(PropertyStatement),
    Relation(RelationStatement),
    Implication(ImplicationStatement),
    Analogy(AnalogyStatement),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidStatement {
    #[error("variable `?{0}` in an asserted fact")]
    VariableInFact(String),
    #[error("property statement has no referent")]
    EmptyReferent,
    #[error("duplicate referent `{0}`")]
    DuplicateReferent(String),
    #[error("descriptor must be a name")]
    DescriptorNotName,
    #[error("scope entries must be names")]
    ScopeNotName,
    #[error("implication needs at least one antecedent and one consequent")]
    EmptyImplication,
    #[error("analogy has more than one variable")]
    AnalogyVariables,
    #[error("empty sub-graph")]
    EmptySubGraph,
}

impl Statement {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Statement::Property(_) => "property",
            Statement::Relation(_) => "relation",
            Statement::Implication(_) => "implication",
            Statement::Analogy(_) => "analogy",
        }
    }

    pub fn as_condition(&self) -> Option<Condition> {
        match self {
            Statement::Property(p) => Some(Condition::Property(p.clone())),
            Statement::Relation(r) => Some(Condition::Relation(r.clone())),
            _ => None,
        }
    }

    pub fn metadata(&self) -> Option<&Metadata> {
        match self {
            Statement::Property(p) => Some(&p.metadata),
            Statement::Relation(r) => Some(&r.metadata),
            Statement::Implication(i) => Some(&i.metadata),
            Statement::Analogy(_) => None,
        }
    }

    pub fn without_metadata(&self) -> Statement {
        let mut s = self.clone();
        match &mut s {
            Statement::Property(p) => p.metadata = Metadata::new(),
            Statement::Relation(r) => r.metadata = Metadata::new(),
            Statement::Implication(i) => i.metadata = Metadata::new(),
            Statement::Analogy(_) => {}
        }
        s
    }

    pub fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Statement::Property(p) => Condition::Property(p.clone()).collect_variables(out),
            Statement::Relation(r) => Condition::Relation(r.clone()).collect_variables(out),
            Statement::Implication(i) => out.extend(i.variables()),
            Statement::Analogy(a) => {
                for t in a.terms() {
                    t.collect_variables(out);
                }
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Statement::Property(p) => Condition::Property(p.clone()).is_ground(),
            Statement::Relation(r) => Condition::Relation(r.clone()).is_ground(),
            Statement::Implication(i) => i.variables().is_empty(),
            Statement::Analogy(a) => a.terms().iter().all(|t| t.is_ground()),
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> Statement {
        match self {
            Statement::Property(p) => Condition::Property(p.clone()).substitute(bindings).into(),
            Statement::Relation(r) => Condition::Relation(r.clone()).substitute(bindings).into(),
            Statement::Implication(i) => Statement::Implication(ImplicationStatement {
                antecedents: i
                    .antecedents
                    .iter()
                    .map(|c| c.substitute(bindings))
                    .collect(),
                consequents: i
                    .consequents
                    .iter()
                    .map(|c| c.substitute(bindings))
                    .collect(),
                metadata: i.metadata.clone(),
            }),
            Statement::Analogy(a) => Statement::Analogy(AnalogyStatement {
                a: a.a.substitute(bindings),
                b: a.b.substitute(bindings),
                c: a.c.substitute(bindings),
                d: a.d.substitute(bindings),
            }),
        }
    }

    /// Number of statements this one stands for, counting itself, the
    /// conditions of an implication and every statement nested in a
    /// sub-graph term.
    pub fn nested_count(&self) -> usize {
        fn term_count(t: &Term) -> usize {
            match t {
                Term::SubGraph(ss) => ss.iter().map(Statement::nested_count).sum(),
                _ => 0,
            }
        }
        match self {
            Statement::Implication(i) => {
                1 + i
                    .antecedents
                    .iter()
                    .chain(&i.consequents)
                    .map(|c| Statement::from(c.clone()).nested_count())
                    .sum::<usize>()
            }
            Statement::Analogy(a) => 1 + a.terms().iter().map(|t| term_count(t)).sum::<usize>(),
            Statement::Property(_) | Statement::Relation(_) => {
                let c = self.as_condition().expect("property or relation");
                1 + c.terms().map(term_count).sum::<usize>()
            }
        }
    }

    /// Checks the invariants required of a statement asserted into a graph.
    pub fn validate(&self) -> Result<(), InvalidStatement> {
        self.validate_inner(false)
    }

    fn validate_inner(&self, pattern: bool) -> Result<(), InvalidStatement> {
        match self {
            Statement::Property(_) | Statement::Relation(_) => {
                let condition = self.as_condition().expect("property or relation");
                validate_condition(&condition, pattern)?;
                if pattern {
                    return Ok(());
                }
                if let Some(v) = condition.variables().into_iter().next() {
                    return Err(InvalidStatement::VariableInFact(v));
                }
                if condition.has_anonymous() {
                    return Err(InvalidStatement::VariableInFact(String::new()));
                }
                Ok(())
            }
            Statement::Implication(i) => {
                if i.antecedents.is_empty() || i.consequents.is_empty() {
                    return Err(InvalidStatement::EmptyImplication);
                }
                for c in i.antecedents.iter().chain(&i.consequents) {
                    validate_condition(c, true)?;
                }
                Ok(())
            }
            Statement::Analogy(a) => {
                if a.terms().iter().filter(|t| t.is_variable()).count() > 1 {
                    return Err(InvalidStatement::AnalogyVariables);
                }
                for t in a.terms() {
                    validate_term(t, pattern)?;
                }
                Ok(())
            }
        }
    }
}

fn validate_condition(c: &Condition, pattern: bool) -> Result<(), InvalidStatement> {
    if c.scope().iter().any(|t| t.as_name().is_none()) {
        return Err(InvalidStatement::ScopeNotName);
    }
    if let Condition::Property(p) = c {
        match &p.descriptor {
            Term::Name(_) => {}
            Term::Variable(_) if pattern => {}
            _ => return Err(InvalidStatement::DescriptorNotName),
        }
        if p.referents.is_empty() {
            return Err(InvalidStatement::EmptyReferent);
        }
        for (i, r) in p.referents.iter().enumerate() {
            if r.is_ground() && p.referents[..i].contains(r) {
                return Err(InvalidStatement::DuplicateReferent(
                    crate::parser::serialize_term(r),
                ));
            }
        }
    }
    for t in c.terms() {
        validate_term(t, pattern)?;
    }
    Ok(())
}

fn validate_term(t: &Term, pattern: bool) -> Result<(), InvalidStatement> {
    if let Term::SubGraph(statements) = t {
        if statements.is_empty() {
            return Err(InvalidStatement::EmptySubGraph);
        }
        for s in statements {
            s.validate_inner(pattern)?;
        }
    }
    Ok(())
}
