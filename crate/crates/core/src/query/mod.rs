//! Conjunctive queries with fuzzy terms and fuzzy quantifiers.

mod types;

pub use types::{BindingSet, Quantifier, Query, QueryResult};

use crate::fuzzy::{
    apply_modifier, find_range, quantifier_holds, FuzzyConfig, FuzzyError, FuzzyInput,
    QuantifierThresholds,
};
use crate::model::unify::{covers, scopes_compatible, unify_terms};
use crate::model::{
    vocab, Bindings, Condition, KnowledgeGraph, PropertyStatement, Qualitative, Statement, Term,
};
use crate::reasoner::{ProofParams, Reasoner};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QueryError {
    #[error("comparison with unbound variable `?{0}`")]
    UnboundComparison(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

/// Proves conditions with the reasoner instead of matching facts only.
#[derive(Debug, Clone, PartialEq)]
pub struct ReasoningOptions {
    pub params: ProofParams,
    /// Weakest certainty at which a proved condition counts as true.
    pub min_certainty: Qualitative,
}

impl Default for ReasoningOptions {
    fn default() -> Self {
        Self {
            params: ProofParams::default(),
            min_certainty: Qualitative::Medium,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryOptions {
    /// Membership at or above which a fuzzy condition holds.
    pub alpha: f64,
    pub thresholds: QuantifierThresholds,
    pub fuzzy: FuzzyConfig,
    pub reasoning: Option<ReasoningOptions>,
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            thresholds: QuantifierThresholds::default(),
            fuzzy: FuzzyConfig::default(),
            reasoning: None,
        }
    }
}

const EPSILON: f64 = 1e-12;

/// Evaluates queries against one graph snapshot.
pub struct QueryEngine<'g> {
    graph: &'g KnowledgeGraph,
    options: QueryOptions,
    reasoner: Option<(Reasoner<'g>, Qualitative)>,
}

impl<'g> QueryEngine<'g> {
    pub fn new(graph: &'g KnowledgeGraph, options: QueryOptions) -> Self {
        let reasoner = options
            .reasoning
            .as_ref()
            .map(|r| (Reasoner::new(graph, r.params.clone()), r.min_certainty));
        Self {
            graph,
            options,
            reasoner,
        }
    }

    /// Left-to-right join: each condition filters and extends the rows
    /// produced so far.
    pub fn evaluate(&self, conditions: &[Condition]) -> Result<BindingSet, QueryError> {
        let mut rows = BindingSet::unit();
        for condition in conditions {
            let mut next = BindingSet::new();
            for row in rows.rows() {
                let c = condition.substitute(row);
                for b in self.matches(&c)? {
                    let mut merged = row.clone();
                    merged.extend(b);
                    next.push(merged);
                }
            }
            rows = next;
        }
        Ok(rows)
    }

    pub fn run(&self, query: &Query) -> Result<QueryResult, QueryError> {
        let mut heads = self.evaluate(&query.conditions)?.project(&query.head);
        let from_count = match &query.from {
            Some(from) => {
                let class = self.evaluate(from)?.project(&query.head);
                heads.retain(|h| class.contains(h));
                Some(class.len())
            }
            None => None,
        };
        Ok(match query.quantifier {
            Quantifier::Which => QueryResult::Bindings(heads),
            Quantifier::Count => QueryResult::Count(heads.len()),
            q => {
                let kind = q.fuzzy().expect("fuzzy quantifier");
                let from_count = from_count.unwrap_or(heads.len());
                let verdict =
                    quantifier_holds(kind, heads.len(), from_count, &self.options.thresholds)?;
                QueryResult::Verdict {
                    holds: verdict.holds,
                    where_count: heads.len(),
                    from_count,
                    ratio: verdict.ratio,
                }
            }
        })
    }

    fn matches(&self, c: &Condition) -> Result<Vec<Bindings>, QueryError> {
        if let Condition::Property(p) = c {
            if matches!(p.operator.as_str(), vocab::GREATER_THAN | vocab::LESS_THAN) {
                if let [referent] = p.referents.as_slice() {
                    match referent {
                        Term::Variable(v) => return Err(QueryError::UnboundComparison(v.clone())),
                        Term::Number(n) => return Ok(self.compare(p, n.value())),
                        _ => {}
                    }
                }
            }
            if let Some(result) = self.fuzzy(p) {
                return result;
            }
        }
        if let Some((reasoner, min)) = &self.reasoner {
            return Ok(if c.is_ground() {
                match reasoner.best(c) {
                    Some(step) if step.certainty >= *min => vec![Bindings::new()],
                    _ => Vec::new(),
                }
            } else {
                reasoner
                    .ground_instances(c)
                    .into_iter()
                    .filter(|(_, step)| step.certainty >= *min)
                    .map(|(b, _)| b)
                    .collect()
            });
        }
        Ok(plain_matches(self.graph, c))
    }

    /// Stored `D of A is N` facts unifying with the pattern's descriptor
    /// and argument, with the number bound to nothing.
    fn numeric_facts(&self, pattern: &PropertyStatement) -> Vec<(Bindings, f64)> {
        let candidates: Vec<&PropertyStatement> = if pattern.descriptor.is_ground() {
            self.graph
                .properties(&pattern.descriptor, vocab::IS)
                .map(|(_, p)| p)
                .collect()
        } else {
            self.graph
                .statements()
                .iter()
                .filter_map(|s| match s {
                    Statement::Property(p) if p.operator == vocab::IS => Some(p),
                    _ => None,
                })
                .collect()
        };
        let mut out = Vec::new();
        for stored in candidates {
            let [Term::Number(n)] = stored.referents.as_slice() else {
                continue;
            };
            if !scopes_compatible(&stored.scope, &pattern.scope) {
                continue;
            }
            let mut b = Bindings::new();
            if unify_terms(&pattern.descriptor, &stored.descriptor, &mut b)
                && unify_terms(&pattern.argument, &stored.argument, &mut b)
            {
                out.push((b, n.value()));
            }
        }
        out
    }

    fn compare(&self, pattern: &PropertyStatement, bound: f64) -> Vec<Bindings> {
        let greater = pattern.operator == vocab::GREATER_THAN;
        self.numeric_facts(pattern)
            .into_iter()
            .filter(|(_, v)| if greater { *v > bound } else { *v < bound })
            .map(|(b, _)| b)
            .collect()
    }

    /// `D of A is T` where T (possibly with modifiers) is a term of a
    /// scalar range for D: symbolic matches plus numeric values whose
    /// membership reaches alpha. None if the condition is not fuzzy.
    fn fuzzy(&self, p: &PropertyStatement) -> Option<Result<Vec<Bindings>, QueryError>> {
        if p.operator != vocab::IS {
            return None;
        }
        let ([Term::Name(term)], Term::Name(quantity)) = (p.referents.as_slice(), &p.descriptor)
        else {
            return None;
        };
        let range = match find_range(self.graph, quantity, term.base(), &self.options.fuzzy)? {
            Ok(r) => r,
            Err(e) => return Some(Err(e.into())),
        };
        let mut out = plain_matches(self.graph, &Condition::Property(p.clone()));
        for (b, value) in self.numeric_facts(p) {
            let value = value.clamp(range.min(), range.max());
            let m = match apply_modifier(
                Some(self.graph),
                &range,
                term.prefixes(),
                term.base(),
                &FuzzyInput::Value(value),
            ) {
                Ok(m) => m,
                Err(e) => return Some(Err(e.into())),
            };
            if m + EPSILON >= self.options.alpha && !out.contains(&b) {
                out.push(b);
            }
        }
        Some(Ok(out))
    }
}

/// Bindings under which a stored fact covers the pattern.
fn plain_matches(graph: &KnowledgeGraph, c: &Condition) -> Vec<Bindings> {
    let found = match graph.match_condition(c) {
        Ok(m) => m.into_iter().map(|(_, b)| b).collect(),
        Err(_) => graph
            .statements()
            .iter()
            .filter_map(Statement::as_condition)
            .flat_map(|stored| covers(&stored, c, &Bindings::new()))
            .collect::<Vec<_>>(),
    };
    let mut out: Vec<Bindings> = Vec::new();
    for b in found {
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

pub fn evaluate_conditions(
    graph: &KnowledgeGraph,
    conditions: &[Condition],
    options: &QueryOptions,
) -> Result<BindingSet, QueryError> {
    QueryEngine::new(graph, options.clone()).evaluate(conditions)
}

pub fn run_query(
    graph: &KnowledgeGraph,
    query: &Query,
    options: &QueryOptions,
) -> Result<QueryResult, QueryError> {
    QueryEngine::new(graph, options.clone()).run(query)
}
