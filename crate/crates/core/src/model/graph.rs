use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::statement::{
    vocab, AnalogyStatement, Condition, ImplicationStatement, InvalidStatement, PropertyStatement,
    RelationStatement, Statement,
};
use super::term::{Bindings, Name, Term};
use super::unify::covers;

/// Position of a statement in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StatementId(pub usize);

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid statement: {0}")]
    Invalid(#[from] InvalidStatement),
    #[error("pattern has neither a concrete descriptor nor a concrete argument")]
    UnindexablePattern,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Index {
    by_descriptor_operator: HashMap<(Term, String), Vec<StatementId>>,
    by_relationship: HashMap<Name, Vec<StatementId>>,
    by_head: HashMap<Term, Vec<StatementId>>,
    implications: Vec<StatementId>,
    analogies: Vec<StatementId>,
}

impl Index {
    fn insert(&mut self, id: StatementId, statement: &Statement) {
        match statement {
            Statement::Property(p) => {
                self.by_descriptor_operator
                    .entry((p.descriptor.clone(), p.operator.clone()))
                    .or_default()
                    .push(id);
                self.by_head.entry(p.argument.clone()).or_default().push(id);
            }
            Statement::Relation(r) => {
                self.by_relationship
                    .entry(r.relationship.clone())
                    .or_default()
                    .push(id);
                self.by_head.entry(r.subject.clone()).or_default().push(id);
            }
            Statement::Implication(_) => self.implications.push(id),
            Statement::Analogy(_) => self.analogies.push(id),
        }
    }
}

/// An indexed store of PKN statements.
///
/// Mutation goes through `&mut self`, so a graph has a single writer; clone
/// it (or use [`KnowledgeGraph::with_statement`]) to take a snapshot that
/// can be shared read-only across threads.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    statements: Vec<Statement>,
    ids: HashMap<Statement, StatementId>,
    index: Index,
    skolems: HashMap<StatementId, Bindings>,
    skolem_count: usize,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_statements(
        statements: impl IntoIterator<Item = Statement>,
    ) -> Result<Self, ModelError> {
        let mut graph = Self::new();
        for s in statements {
            graph.add_statement(s)?;
        }
        Ok(graph)
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn get(&self, id: StatementId) -> Option<&Statement> {
        self.statements.get(id.0)
    }

    pub fn id_of(&self, statement: &Statement) -> Option<StatementId> {
        self.ids.get(statement).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StatementId, &Statement)> {
        self.statements
            .iter()
            .enumerate()
            .map(|(i, s)| (StatementId(i), s))
    }

    /// Adds a statement, returning the id of the stored copy. Adding a
    /// structurally equal statement again returns the existing id.
    pub fn add_statement(&mut self, statement: Statement) -> Result<StatementId, ModelError> {
        statement.validate()?;
        if let Some(id) = self.ids.get(&statement) {
            return Ok(*id);
        }
        let id = StatementId(self.statements.len());
        if let Statement::Implication(rule) = &statement {
            let free = rule.free_variables();
            if !free.is_empty() {
                let mut map = Bindings::new();
                for v in free {
                    self.skolem_count += 1;
                    map.insert(v, Term::name(format!("_sk_{}", self.skolem_count)));
                }
                self.skolems.insert(id, map);
            }
        }
        self.index.insert(id, &statement);
        self.ids.insert(statement.clone(), id);
        self.statements.push(statement);
        Ok(id)
    }

    /// Snapshot-style insertion: returns a new graph and leaves `self`
    /// untouched.
    pub fn with_statement(&self, statement: Statement) -> Result<(Self, StatementId), ModelError> {
        let mut next = self.clone();
        let id = next.add_statement(statement)?;
        Ok((next, id))
    }

    /// Fresh constants standing for the free consequent variables of an
    /// implication. Skolem names start with `_`, which no PKN identifier can.
    pub fn skolem_bindings(&self, id: StatementId) -> Option<&Bindings> {
        self.skolems.get(&id)
    }

    fn resolve<'a>(
        &'a self,
        ids: Option<&'a Vec<StatementId>>,
    ) -> impl Iterator<Item = (StatementId, &'a Statement)> + 'a {
        ids.into_iter()
            .flatten()
            .map(move |id| (*id, &self.statements[id.0]))
    }

    pub fn properties(
        &self,
        descriptor: &Term,
        operator: &str,
    ) -> impl Iterator<Item = (StatementId, &PropertyStatement)> {
        self.resolve(
            self.index
                .by_descriptor_operator
                .get(&(descriptor.clone(), operator.to_string())),
        )
        .filter_map(|(id, s)| match s {
            Statement::Property(p) => Some((id, p)),
            _ => None,
        })
    }

    pub fn relations(
        &self,
        relationship: &Name,
    ) -> impl Iterator<Item = (StatementId, &RelationStatement)> {
        self.resolve(self.index.by_relationship.get(relationship))
            .filter_map(|(id, s)| match s {
                Statement::Relation(r) => Some((id, r)),
                _ => None,
            })
    }

    /// Properties whose argument, or relations whose subject, is `head`.
    pub fn about(&self, head: &Term) -> impl Iterator<Item = (StatementId, &Statement)> {
        self.resolve(self.index.by_head.get(head))
    }

    pub fn implications(&self) -> impl Iterator<Item = (StatementId, &ImplicationStatement)> {
        self.resolve(Some(&self.index.implications))
            .filter_map(|(id, s)| match s {
                Statement::Implication(i) => Some((id, i)),
                _ => None,
            })
    }

    pub fn analogies(&self) -> impl Iterator<Item = (StatementId, &AnalogyStatement)> {
        self.resolve(Some(&self.index.analogies))
            .filter_map(|(id, s)| match s {
                Statement::Analogy(a) => Some((id, a)),
                _ => None,
            })
    }

    /// Every stored property statement that covers `pattern`, in insertion
    /// order, with the bindings that make it match.
    pub fn match_properties(
        &self,
        pattern: &PropertyStatement,
    ) -> Result<Vec<(StatementId, Bindings)>, ModelError> {
        let pattern_condition = Condition::Property(pattern.clone());
        let candidates: Vec<(StatementId, &PropertyStatement)> = if pattern.descriptor.is_ground() {
            self.properties(&pattern.descriptor, &pattern.operator)
                .collect()
        } else if pattern.argument.is_ground() {
            self.about(&pattern.argument)
                .filter_map(|(id, s)| match s {
                    Statement::Property(p) if p.operator == pattern.operator => Some((id, p)),
                    _ => None,
                })
                .collect()
        } else {
            return Err(ModelError::UnindexablePattern);
        };
        let mut out = Vec::new();
        for (id, stored) in candidates {
            for b in covers(
                &Condition::Property(stored.clone()),
                &pattern_condition,
                &Bindings::new(),
            ) {
                out.push((id, b));
            }
        }
        Ok(out)
    }

    pub fn match_relations(&self, pattern: &RelationStatement) -> Vec<(StatementId, Bindings)> {
        let pattern_condition = Condition::Relation(pattern.clone());
        let mut out = Vec::new();
        for (id, stored) in self.relations(&pattern.relationship) {
            for b in covers(
                &Condition::Relation(stored.clone()),
                &pattern_condition,
                &Bindings::new(),
            ) {
                out.push((id, b));
            }
        }
        out
    }

    pub fn match_condition(
        &self,
        pattern: &Condition,
    ) -> Result<Vec<(StatementId, Bindings)>, ModelError> {
        match pattern {
            Condition::Property(p) => self.match_properties(p),
            Condition::Relation(r) => Ok(self.match_relations(r)),
        }
    }

    /// Breadth-first transitive closure over `kind-of` links, each ancestor
    /// reported once. Terminates on cyclic hierarchies.
    pub fn kind_of_ancestors(&self, concept: &Term) -> Vec<Term> {
        let kind_of = Name::new(vocab::KIND_OF);
        let mut seen: HashSet<&Term> = HashSet::from([concept]);
        let mut out = Vec::new();
        let mut queue = VecDeque::from([concept.clone()]);
        while let Some(current) = queue.pop_front() {
            for (_, r) in self.relations(&kind_of) {
                if r.subject == current && seen.insert(&r.object) {
                    out.push(r.object.clone());
                    queue.push_back(r.object.clone());
                }
            }
        }
        out
    }

    /// Distinct atomic ground terms (names and numbers) occurring in any
    /// term slot, in first-seen order.
    pub fn vocabulary(&self) -> Vec<Term> {
        fn visit<'a>(t: &'a Term, seen: &mut HashSet<&'a Term>, out: &mut Vec<Term>) {
            match t {
                Term::Name(_) | Term::Number(_) => {
                    if seen.insert(t) {
                        out.push(t.clone());
                    }
                }
                Term::SubGraph(ss) => {
                    for s in ss {
                        visit_statement(s, seen, out);
                    }
                }
                Term::Variable(_) => {}
            }
        }
        fn visit_statement<'a>(
            s: &'a Statement,
            seen: &mut HashSet<&'a Term>,
            out: &mut Vec<Term>,
        ) {
            match s {
                Statement::Property(p) => {
                    for t in std::iter::once(&p.argument).chain(&p.referents) {
                        visit(t, seen, out);
                    }
                }
                Statement::Relation(r) => {
                    visit(&r.subject, seen, out);
                    visit(&r.object, seen, out);
                }
                Statement::Implication(i) => {
                    for c in i.antecedents.iter().chain(&i.consequents) {
                        match c {
                            Condition::Property(p) => {
                                for t in std::iter::once(&p.argument).chain(&p.referents) {
                                    visit(t, seen, out);
                                }
                            }
                            Condition::Relation(r) => {
                                visit(&r.subject, seen, out);
                                visit(&r.object, seen, out);
                            }
                        }
                    }
                }
                Statement::Analogy(a) => {
                    for t in a.terms() {
                        visit(t, seen, out);
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for s in &self.statements {
            visit_statement(s, &mut seen, &mut out);
        }
        out
    }

    /// Rebuilds every index from the statement list and reports any
    /// disagreement. An empty result means the graph is consistent.
    pub fn audit(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut rebuilt = Index::default();
        for (id, s) in self.iter() {
            rebuilt.insert(id, s);
            match self.ids.get(s) {
                Some(found) if *found == id => {}
                Some(found) => problems.push(format!("{id} is also registered as {found}")),
                None => problems.push(format!("{id} missing from identity map")),
            }
        }
        if self.ids.len() != self.statements.len() {
            problems.push(format!(
                "identity map has {} entries for {} statements",
                self.ids.len(),
                self.statements.len()
            ));
        }
        if rebuilt != self.index {
            problems.push("index contents differ from statement list".to_string());
        }
        problems
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Metadata, Qualitative};

    fn kind_of(a: &str, b: &str) -> Statement {
        Statement::Relation(RelationStatement::new(
            Term::name(a),
            Name::new("kind-of"),
            Term::name(b),
        ))
    }

    fn flowers() -> Statement {
        let mut p = PropertyStatement::new(
            Term::name("flowers"),
            Term::name("Netherlands"),
            "includes",
            vec![Term::name("daffodils"), Term::name("tulips")],
        );
        p.metadata = Metadata::new().with("certainty", Qualitative::High);
        Statement::Property(p)
    }

    #[test]
    fn duplicate_add_is_idempotent() {
        let mut g = KnowledgeGraph::new();
        let a = g.add_statement(flowers()).unwrap();
        let b = g.add_statement(flowers()).unwrap();
        assert_eq!(a, b);
        assert_eq!(g.len(), 1);
        assert!(g.audit().is_empty());
    }

    #[test]
    fn certainty_difference_makes_distinct_statements() {
        let mut g = KnowledgeGraph::new();
        g.add_statement(flowers()).unwrap();
        let Statement::Property(mut p) = flowers() else {
            unreachable!()
        };
        p.metadata = Metadata::new().with("certainty", Qualitative::Low);
        g.add_statement(Statement::Property(p)).unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn variable_in_fact_rejected() {
        let mut g = KnowledgeGraph::new();
        let s = Statement::Relation(RelationStatement::new(
            Term::name("Paul"),
            Name::with_prefixes(vec!["close".into()], "friend-of"),
            Term::variable("x"),
        ));
        assert!(matches!(
            g.add_statement(s),
            Err(ModelError::Invalid(InvalidStatement::VariableInFact(_)))
        ));
        assert!(g.is_empty());
    }

    #[test]
    fn empty_and_duplicate_referents_rejected() {
        let mut g = KnowledgeGraph::new();
        let empty = PropertyStatement::new(Term::name("a"), Term::name("b"), "is", vec![]);
        assert!(g.add_statement(Statement::Property(empty)).is_err());
        let dup = PropertyStatement::new(
            Term::name("a"),
            Term::name("b"),
            "includes",
            vec![Term::name("x"), Term::name("x")],
        );
        assert!(matches!(
            g.add_statement(Statement::Property(dup)),
            Err(ModelError::Invalid(InvalidStatement::DuplicateReferent(_)))
        ));
    }

    #[test]
    fn match_properties_binds_argument() {
        let mut g = KnowledgeGraph::new();
        let id = g.add_statement(flowers()).unwrap();
        let pattern = PropertyStatement::new(
            Term::name("flowers"),
            Term::variable("x"),
            "includes",
            vec![Term::name("daffodils")],
        );
        let got = g.match_properties(&pattern).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, id);
        assert_eq!(got[0].1["x"], Term::name("Netherlands"));

        let other_op = PropertyStatement::new(
            Term::name("flowers"),
            Term::variable("x"),
            "excludes",
            vec![Term::name("daffodils")],
        );
        assert!(g.match_properties(&other_op).unwrap().is_empty());
    }

    #[test]
    fn unindexable_pattern() {
        let g = KnowledgeGraph::new();
        let pattern = PropertyStatement::new(
            Term::variable("d"),
            Term::variable("x"),
            "is",
            vec![Term::name("y")],
        );
        assert_eq!(
            g.match_properties(&pattern),
            Err(ModelError::UnindexablePattern)
        );
    }

    #[test]
    fn ancestors_breadth_first() {
        let g = KnowledgeGraph::from_statements([
            kind_of("rose", "flower"),
            kind_of("flower", "plant"),
        ])
        .unwrap();
        assert_eq!(
            g.kind_of_ancestors(&Term::name("rose")),
            vec![Term::name("flower"), Term::name("plant")]
        );
        assert!(g.kind_of_ancestors(&Term::name("plant")).is_empty());
        assert!(g.kind_of_ancestors(&Term::name("unknown")).is_empty());
    }

    #[test]
    fn ancestors_cycle_safe() {
        let g = KnowledgeGraph::from_statements([kind_of("a", "b"), kind_of("b", "a")]).unwrap();
        assert_eq!(g.kind_of_ancestors(&Term::name("a")), vec![Term::name("b")]);
    }

    #[test]
    fn snapshot_leaves_original_untouched() {
        let g = KnowledgeGraph::new();
        let (next, id) = g.with_statement(flowers()).unwrap();
        assert!(g.is_empty());
        assert_eq!(next.get(id), Some(&flowers()));
    }
}
