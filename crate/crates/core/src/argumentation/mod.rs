//! Arguments for and against a supposition, the attacks between them, the
//! aggregated verdict and its explanation.

mod explain;

use std::collections::BTreeSet;

pub use explain::{explain, explain_step};

use crate::model::unify::scopes_compatible;
use crate::model::{
    vocab, Condition, KnowledgeGraph, Name, Qualitative, RelationStatement, Statement, Term,
};
use crate::reasoner::{InferenceStep, ProofParams, Reasoner};

/// Which descriptors and relationships admit a single value, so that
/// different values contradict each other.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContradictionRules {
    pub functional: BTreeSet<String>,
}

impl ContradictionRules {
    pub fn functional<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            functional: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_functional(&self, name: &str) -> bool {
        self.functional.contains(name)
    }
}

/// `{S} is-a lie` for a statement S.
pub fn lie_about(statement: &Statement) -> Condition {
    Condition::Relation(RelationStatement::new(
        Term::SubGraph(vec![statement.without_metadata()]),
        Name::new(vocab::IS_A),
        Term::name(vocab::LIE),
    ))
}

/// True if `x` is `{..., S, ...} is-a lie`.
fn denies(x: &Condition, statement: &Statement) -> bool {
    let Condition::Relation(r) = x else {
        return false;
    };
    if !r.relationship.is(vocab::IS_A) || !r.object.is_name(vocab::LIE) {
        return false;
    }
    let Term::SubGraph(inner) = &r.subject else {
        return false;
    };
    let target = statement.without_metadata();
    inner.iter().any(|s| s.without_metadata() == target)
}

fn same_set(a: &[Term], b: &[Term]) -> bool {
    a.iter().all(|t| b.contains(t)) && b.iter().all(|t| a.contains(t))
}

/// The contradiction predicate: includes against excludes sharing a
/// referent, different values of a functional descriptor or relationship,
/// and explicit denial through `{S} is-a lie`. Symmetric.
pub fn contradicts(x: &Condition, y: &Condition, rules: &ContradictionRules) -> bool {
    if denies(x, &Statement::from(y.clone())) || denies(y, &Statement::from(x.clone())) {
        return true;
    }
    if !scopes_compatible(x.scope(), y.scope()) {
        return false;
    }
    match (x, y) {
        (Condition::Property(a), Condition::Property(b)) => {
            if a.descriptor != b.descriptor || a.argument != b.argument {
                return false;
            }
            let clash = matches!(
                (a.operator.as_str(), b.operator.as_str()),
                (vocab::INCLUDES, vocab::EXCLUDES) | (vocab::EXCLUDES, vocab::INCLUDES)
            );
            if clash {
                return a.referents.iter().any(|r| b.referents.contains(r));
            }
            a.operator == vocab::IS
                && b.operator == vocab::IS
                && rules.is_functional(&a.descriptor.to_string())
                && !same_set(&a.referents, &b.referents)
        }
        (Condition::Relation(a), Condition::Relation(b)) => {
            a.subject == b.subject
                && a.relationship == b.relationship
                && rules.is_functional(&a.relationship.to_string())
                && a.object != b.object
        }
        _ => false,
    }
}

/// Whether `x` contradicts a stored statement. Rules and analogies can
/// only be denied with `is-a lie`.
pub fn contradicts_statement(
    x: &Condition,
    statement: &Statement,
    rules: &ContradictionRules,
) -> bool {
    match statement.as_condition() {
        Some(c) => contradicts(x, &c.without_metadata(), rules),
        None => denies(x, statement),
    }
}

const ALTERNATIVE: &str = "alt";

/// Patterns whose provable instances may contradict `c`; instances must
/// still be filtered through [`contradicts`].
pub fn contradiction_patterns(c: &Condition, rules: &ContradictionRules) -> Vec<Condition> {
    let c = c.without_metadata();
    let mut out = Vec::new();
    match &c {
        Condition::Property(p) => {
            let opposite = match p.operator.as_str() {
                vocab::INCLUDES => Some(vocab::EXCLUDES),
                vocab::EXCLUDES => Some(vocab::INCLUDES),
                _ => None,
            };
            if let Some(op) = opposite {
                for r in &p.referents {
                    let mut q = p.clone();
                    q.operator = op.to_string();
                    q.referents = vec![r.clone()];
                    out.push(Condition::Property(q));
                }
            }
            if p.operator == vocab::IS && rules.is_functional(&p.descriptor.to_string()) {
                let mut q = p.clone();
                q.referents = vec![Term::variable(ALTERNATIVE)];
                out.push(Condition::Property(q));
            }
        }
        Condition::Relation(r) => {
            if rules.is_functional(&r.relationship.to_string()) {
                let mut q = r.clone();
                q.object = Term::variable(ALTERNATIVE);
                out.push(Condition::Relation(q));
            }
        }
    }
    out.push(lie_about(&Statement::from(c)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    For,
    Against,
}

impl Polarity {
    pub fn opposite(self) -> Self {
        match self {
            Polarity::For => Polarity::Against,
            Polarity::Against => Polarity::For,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Argument {
    pub root: InferenceStep,
    pub polarity: Polarity,
    pub certainty: Qualitative,
    /// False for defeaters: arguments that attack another argument's
    /// premises or links rather than concluding the supposition or its
    /// contradiction. Defeaters discount what they attack but do not count
    /// as support or opposition themselves.
    pub direct: bool,
}

impl Argument {
    pub fn new(root: InferenceStep, polarity: Polarity) -> Self {
        let certainty = root.certainty;
        Self {
            root,
            polarity,
            certainty,
            direct: true,
        }
    }

    pub fn defeater(root: InferenceStep, polarity: Polarity) -> Self {
        Self {
            direct: false,
            ..Self::new(root, polarity)
        }
    }

    pub fn conclusion(&self) -> &Condition {
        &self.root.conclusion
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackKind {
    /// Contradicts a premise (a leaf fact).
    Undermine,
    /// Denies the link licensing an inference step.
    Undercut,
    /// Contradicts the conclusion.
    Rebut,
}

impl AttackKind {
    pub fn verb(self) -> &'static str {
        match self {
            AttackKind::Undermine => "undermines",
            AttackKind::Undercut => "undercuts",
            AttackKind::Rebut => "rebuts",
        }
    }
}

/// Indices into [`Verdict::arguments`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttackEdge {
    pub attacker: usize,
    pub target: usize,
    pub kind: AttackKind,
}

/// How `a` attacks `b`, if it does. Rebuttal takes precedence over
/// undermining, which takes precedence over undercutting.
pub fn classify_counter(
    graph: &KnowledgeGraph,
    rules: &ContradictionRules,
    a: &Argument,
    b: &Argument,
) -> Option<AttackKind> {
    if a == b {
        return None;
    }
    let x = a.conclusion();
    if contradicts(x, b.conclusion(), rules) {
        return Some(AttackKind::Rebut);
    }
    let denied = |id| {
        graph
            .get(id)
            .is_some_and(|s| contradicts_statement(x, s, rules))
    };
    for leaf in b.root.leaves() {
        if contradicts(x, &leaf.conclusion, rules) || denied(leaf.used_statement) {
            return Some(AttackKind::Undermine);
        }
    }
    if b.root.links().into_iter().any(denied) {
        return Some(AttackKind::Undercut);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stance {
    Supported,
    Opposed,
    Undecided,
}

impl Stance {
    pub fn label(self) -> &'static str {
        match self {
            Stance::Supported => "supported",
            Stance::Opposed => "opposed",
            Stance::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for Stance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub supposition: Condition,
    pub net_certainty: Qualitative,
    pub stance: Stance,
    /// Strongest surviving for-argument anchor.
    pub support: f64,
    /// Strongest surviving against-argument anchor.
    pub oppose: f64,
    pub arguments: Vec<Argument>,
    pub attacks: Vec<AttackEdge>,
    /// Anchor of each argument after attack discounting.
    pub effective: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregationParams {
    pub rules: ContradictionRules,
    /// Verdicts with |support − oppose| below this are undecided.
    pub undecided_band: f64,
}

impl Default for AggregationParams {
    fn default() -> Self {
        Self {
            rules: ContradictionRules::default(),
            undecided_band: 0.1,
        }
    }
}

const EPSILON: f64 = 1e-9;

/// Every attack among `arguments`, in (attacker, target) order.
pub fn attacks(
    graph: &KnowledgeGraph,
    rules: &ContradictionRules,
    arguments: &[Argument],
) -> Vec<AttackEdge> {
    let mut out = Vec::new();
    for (i, a) in arguments.iter().enumerate() {
        for (j, b) in arguments.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(kind) = classify_counter(graph, rules, a, b) {
                out.push(AttackEdge {
                    attacker: i,
                    target: j,
                    kind,
                });
            }
        }
    }
    out
}

/// Discounts each argument attacked by a strictly stronger one to
/// `min(own, 1 − attacker)`, then weighs the strongest survivors on each
/// side against each other.
pub fn aggregate(
    graph: &KnowledgeGraph,
    supposition: &Condition,
    arguments: Vec<Argument>,
    params: &AggregationParams,
) -> Verdict {
    let attacks = attacks(graph, &params.rules, &arguments);
    let original: Vec<f64> = arguments.iter().map(|a| a.certainty.anchor()).collect();
    let mut effective = original.clone();
    for e in &attacks {
        if original[e.attacker] > original[e.target] + EPSILON {
            effective[e.target] = effective[e.target].min(1.0 - original[e.attacker]);
        }
    }
    let side = |polarity| {
        arguments
            .iter()
            .zip(&effective)
            .filter(|(a, _)| a.direct && a.polarity == polarity)
            .map(|(_, e)| *e)
            .fold(0.0, f64::max)
    };
    let support = side(Polarity::For);
    let oppose = side(Polarity::Against);
    let diff = support - oppose;
    let stance = if diff.abs() < params.undecided_band - EPSILON {
        Stance::Undecided
    } else if diff > 0.0 {
        Stance::Supported
    } else {
        Stance::Opposed
    };
    Verdict {
        supposition: supposition.without_metadata(),
        net_certainty: Qualitative::quantize(diff.abs()),
        stance,
        support,
        oppose,
        arguments,
        attacks,
        effective,
    }
}

/// Proves a supposition, gathers defeaters of the premises and links the
/// direct arguments rely on, and aggregates everything into a verdict.
pub fn deliberate(
    graph: &KnowledgeGraph,
    supposition: &Condition,
    params: &ProofParams,
    undecided_band: f64,
) -> Verdict {
    let reasoner = Reasoner::new(graph, params.clone());
    let mut arguments = reasoner.prove(supposition);
    let direct_conclusions: Vec<Condition> =
        arguments.iter().map(|a| a.conclusion().clone()).collect();
    let mut seen: Vec<(Condition, Polarity)> = Vec::new();
    let mut defeaters = Vec::new();
    for arg in &arguments {
        let mut relied_on: Vec<_> = arg.root.leaves().iter().map(|l| l.used_statement).collect();
        relied_on.extend(arg.root.links());
        for id in relied_on {
            let Some(statement) = graph.get(id) else {
                continue;
            };
            let targets = match statement.as_condition() {
                Some(c) => reasoner.contradictions(&c.without_metadata()),
                None => vec![lie_about(statement)],
            };
            let polarity = arg.polarity.opposite();
            for x in targets {
                if direct_conclusions.contains(&x) || seen.contains(&(x.clone(), polarity)) {
                    continue;
                }
                seen.push((x.clone(), polarity));
                for step in reasoner.routes(&x, 0) {
                    defeaters.push(Argument::defeater(step, polarity));
                }
            }
        }
    }
    arguments.extend(defeaters);
    let aggregation = AggregationParams {
        rules: params.rules.clone(),
        undecided_band,
    };
    aggregate(graph, supposition, arguments, &aggregation)
}
