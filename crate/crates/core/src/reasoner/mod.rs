//! Supposition-driven plausible inference.
//!
//! Proofs are searched backwards from the supposition towards stored facts.
//! Each step's certainty is the weakest link: the minimum of its premises'
//! certainties and the step weight, re-quantized to a qualitative level.

mod analogy;
mod step;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};

pub use analogy::{
    analogy_holds, complete_analogy, AnalogyCandidate, AnalogyCompletion, AnalogyDiagnostic,
};
pub use step::{InferenceKind, InferenceStep};

use crate::argumentation::{
    contradiction_patterns, contradicts, Argument, ContradictionRules, Polarity,
};
use crate::model::unify::covers;
use crate::model::{
    params, vocab, Bindings, Condition, KnowledgeGraph, Metadata, Name, Qualitative, Statement,
    StatementId, Term,
};

/// Default step weights, used when the governing statement gives no
/// parameter of its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepWeights {
    pub specialization: f64,
    pub generalization: f64,
    pub similarity: f64,
    pub implication_forward: f64,
    pub implication_backward: f64,
    pub analogy: f64,
}

impl Default for StepWeights {
    fn default() -> Self {
        Self {
            specialization: 0.8,
            generalization: 0.5,
            similarity: 0.8,
            implication_forward: 0.8,
            implication_backward: 0.2,
            analogy: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofParams {
    /// Longest chain of inference steps above a fact.
    pub max_depth: usize,
    /// Steps whose certainty anchor falls below this are dropped.
    pub min_certainty: f64,
    pub kinds: BTreeSet<InferenceKind>,
    pub weights: StepWeights,
    /// Most candidate bindings tried for one non-ground condition.
    pub candidate_cap: usize,
    pub rules: ContradictionRules,
    /// When set, similarity links whose scope does not mention the
    /// descriptor still apply, with weight capped at this value.
    pub similarity_scope_discount: Option<f64>,
}

impl Default for ProofParams {
    fn default() -> Self {
        Self {
            max_depth: 6,
            min_certainty: 0.1,
            kinds: InferenceKind::ALL.into_iter().collect(),
            weights: StepWeights::default(),
            candidate_cap: 1000,
            rules: ContradictionRules::default(),
            similarity_scope_discount: None,
        }
    }
}

impl ProofParams {
    pub fn enabled(&self, kind: InferenceKind) -> bool {
        self.kinds.contains(&kind)
    }

    pub fn with_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }
}

fn certainty_of(metadata: &Metadata) -> f64 {
    metadata.certainty().anchor()
}

fn parameter(metadata: &Metadata, names: &[&str], default: f64) -> f64 {
    names
        .iter()
        .find_map(|n| metadata.get(n))
        .map_or(default, Qualitative::anchor)
}

type Memo = HashMap<(Condition, usize), Option<InferenceStep>>;
type InstanceMemo = HashMap<(Condition, usize), Vec<(Bindings, InferenceStep)>>;

/// Backward-chaining prover over one graph snapshot. The memo tables live
/// as long as the reasoner, so reuse one instance for related questions.
pub struct Reasoner<'g> {
    graph: &'g KnowledgeGraph,
    params: ProofParams,
    universe: Vec<Term>,
    kind_of: Name,
    similar_to: Name,
    memo: RefCell<Memo>,
    instance_memo: RefCell<InstanceMemo>,
}

impl<'g> Reasoner<'g> {
    pub fn new(graph: &'g KnowledgeGraph, params: ProofParams) -> Self {
        let mut params = params;
        params.max_depth = params.max_depth.max(1);
        let mut universe = graph.vocabulary();
        let mut seen: HashSet<Term> = universe.iter().cloned().collect();
        for s in graph.statements() {
            if let Statement::Property(p) = s {
                if p.descriptor.is_ground() && seen.insert(p.descriptor.clone()) {
                    universe.push(p.descriptor.clone());
                }
            }
        }
        Self {
            graph,
            params,
            universe,
            kind_of: Name::new(vocab::KIND_OF),
            similar_to: Name::new(vocab::SIMILAR_TO),
            memo: RefCell::default(),
            instance_memo: RefCell::default(),
        }
    }

    pub fn graph(&self) -> &'g KnowledgeGraph {
        self.graph
    }

    pub fn params(&self) -> &ProofParams {
        &self.params
    }

    /// Arguments for a supposition and, when it is ground, against it.
    /// A non-ground supposition yields for-arguments for each provable
    /// instance.
    pub fn prove(&self, supposition: &Condition) -> Vec<Argument> {
        let s = supposition.without_metadata();
        let mut out = Vec::new();
        if !s.is_ground() {
            for (b, _) in self.instances(&s, 0) {
                for step in self.routes(&s.substitute(&b), 0) {
                    out.push(Argument::new(step, Polarity::For));
                }
            }
            return out;
        }
        for step in self.routes(&s, 0) {
            out.push(Argument::new(step, Polarity::For));
        }
        for x in self.contradictions(&s) {
            for step in self.routes(&x, 0) {
                out.push(Argument::new(step, Polarity::Against));
            }
        }
        out
    }

    /// Provable ground conditions that contradict `c`.
    pub fn contradictions(&self, c: &Condition) -> Vec<Condition> {
        let mut out: Vec<Condition> = Vec::new();
        for pattern in contradiction_patterns(c, &self.params.rules) {
            let candidates = if pattern.is_ground() {
                vec![pattern]
            } else {
                self.instances(&pattern, 0)
                    .into_iter()
                    .map(|(b, _)| pattern.substitute(&b))
                    .collect()
            };
            for x in candidates {
                if contradicts(&x, c, &self.params.rules) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Ground instances of `c` that can be proved, with bindings for its
    /// variables.
    pub fn ground_instances(&self, c: &Condition) -> Vec<(Bindings, InferenceStep)> {
        self.instances(&c.without_metadata(), 0)
    }

    /// Best proof of a ground condition, if any.
    pub fn best(&self, c: &Condition) -> Option<InferenceStep> {
        self.best_at(&c.without_metadata(), 0)
    }

    /// Alternative top-level proofs of a ground condition: the strongest
    /// proof for each (kind, governing statement) pair, strongest first.
    pub fn routes(&self, c: &Condition, depth: usize) -> Vec<InferenceStep> {
        let mut best: HashMap<(InferenceKind, StatementId), InferenceStep> = HashMap::new();
        for step in self.candidate_steps(c, depth) {
            if step.certainty.anchor() + 1e-12 < self.params.min_certainty {
                continue;
            }
            let key = (step.kind, step.used_statement);
            match best.get(&key) {
                Some(existing) if existing.certainty >= step.certainty => {}
                _ => {
                    best.insert(key, step);
                }
            }
        }
        let mut out: Vec<InferenceStep> = best.into_values().collect();
        out.sort_by(|a, b| {
            b.certainty
                .cmp(&a.certainty)
                .then(a.height().cmp(&b.height()))
                .then(a.kind.cmp(&b.kind))
                .then(a.used_statement.cmp(&b.used_statement))
        });
        out
    }

    fn best_at(&self, c: &Condition, depth: usize) -> Option<InferenceStep> {
        if depth > self.params.max_depth {
            return None;
        }
        let key = (c.clone(), depth);
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let result = self.routes(c, depth).into_iter().next();
        self.memo.borrow_mut().insert(key, result.clone());
        result
    }

    fn candidate_steps(&self, c: &Condition, depth: usize) -> Vec<InferenceStep> {
        let mut steps = Vec::new();
        if self.params.enabled(InferenceKind::Fact) {
            self.facts(c, &mut steps);
        }
        if depth < self.params.max_depth {
            let next = depth + 1;
            if self.params.enabled(InferenceKind::ImplicationForward) {
                self.forward(c, next, &mut steps);
            }
            if self.params.enabled(InferenceKind::ImplicationBackward) {
                self.backward(c, next, &mut steps);
            }
            if !self.is_link(c) {
                if self.params.enabled(InferenceKind::Specialization) {
                    self.specialization(c, next, &mut steps);
                }
                if self.params.enabled(InferenceKind::Generalization) {
                    self.generalization(c, next, &mut steps);
                }
                if self.params.enabled(InferenceKind::Similarity) {
                    self.similarity(c, next, &mut steps);
                }
            }
            if self.params.enabled(InferenceKind::Analogy) {
                self.analogy(c, next, &mut steps);
            }
        }
        steps
    }

    /// `kind-of` and `similar-to` statements license steps; they are not
    /// themselves inherited along hierarchies.
    fn is_link(&self, c: &Condition) -> bool {
        matches!(c, Condition::Relation(r) if r.relationship == self.kind_of || r.relationship == self.similar_to)
    }

    fn facts(&self, c: &Condition, steps: &mut Vec<InferenceStep>) {
        let Ok(matches) = self.graph.match_condition(c) else {
            return;
        };
        let mut seen = HashSet::new();
        for (id, _) in matches {
            if !seen.insert(id) {
                continue;
            }
            let stored = self.graph.get(id).expect("matched id exists");
            let anchor = stored.metadata().map_or(1.0, certainty_of);
            steps.push(InferenceStep::fact(c.clone(), id, anchor));
        }
    }

    fn forward(&self, c: &Condition, depth: usize, steps: &mut Vec<InferenceStep>) {
        for (id, rule) in self.graph.implications() {
            let weight = parameter(
                &rule.metadata,
                &[params::STRENGTH],
                self.params.weights.implication_forward,
            )
            .min(certainty_of(&rule.metadata));
            let skolems = self.graph.skolem_bindings(id).cloned().unwrap_or_default();
            for consequent in &rule.consequents {
                let consequent = consequent.substitute(&skolems);
                for b in covers(&consequent, c, &Bindings::new()) {
                    let antecedents: Vec<Condition> =
                        rule.antecedents.iter().map(|a| a.substitute(&b)).collect();
                    if let Some(premises) = self.prove_all(&antecedents, depth) {
                        steps.push(InferenceStep::derived(
                            InferenceKind::ImplicationForward,
                            c.clone(),
                            id,
                            weight,
                            premises,
                        ));
                    }
                }
            }
        }
    }

    fn backward(&self, c: &Condition, depth: usize, steps: &mut Vec<InferenceStep>) {
        for (id, rule) in self.graph.implications() {
            let weight = parameter(
                &rule.metadata,
                &[params::INVERSE],
                self.params.weights.implication_backward,
            )
            .min(certainty_of(&rule.metadata));
            for antecedent in &rule.antecedents {
                for b in covers(antecedent, c, &Bindings::new()) {
                    let consequents: Vec<Condition> =
                        rule.consequents.iter().map(|k| k.substitute(&b)).collect();
                    if let Some(premises) = self.prove_all(&consequents, depth) {
                        steps.push(InferenceStep::derived(
                            InferenceKind::ImplicationBackward,
                            c.clone(),
                            id,
                            weight,
                            premises,
                        ));
                    }
                }
            }
        }
    }

    fn specialization(&self, c: &Condition, depth: usize, steps: &mut Vec<InferenceStep>) {
        let head = c.head();
        for (id, link) in self.graph.relations(&self.kind_of) {
            if &link.subject != head || link.object == *head {
                continue;
            }
            let weight = parameter(
                &link.metadata,
                &[params::TYPICALITY],
                self.params.weights.specialization,
            )
            .min(certainty_of(&link.metadata));
            self.via(
                InferenceKind::Specialization,
                c,
                &link.object,
                id,
                weight,
                depth,
                steps,
            );
        }
    }

    fn generalization(&self, c: &Condition, depth: usize, steps: &mut Vec<InferenceStep>) {
        let head = c.head();
        for (id, link) in self.graph.relations(&self.kind_of) {
            if &link.object != head || link.subject == *head {
                continue;
            }
            let weight = parameter(
                &link.metadata,
                &[params::DOMINANCE, params::MULTIPLICITY],
                self.params.weights.generalization,
            )
            .min(certainty_of(&link.metadata));
            self.via(
                InferenceKind::Generalization,
                c,
                &link.subject,
                id,
                weight,
                depth,
                steps,
            );
        }
    }

    fn similarity(&self, c: &Condition, depth: usize, steps: &mut Vec<InferenceStep>) {
        let head = c.head();
        let topic = match c {
            Condition::Property(p) => p.descriptor.clone(),
            Condition::Relation(r) => Term::Name(r.relationship.clone()),
        };
        for (id, link) in self.graph.relations(&self.similar_to) {
            let other = if &link.subject == head {
                &link.object
            } else if &link.object == head {
                &link.subject
            } else {
                continue;
            };
            if other == head {
                continue;
            }
            let mut weight = parameter(
                &link.metadata,
                &[params::SIMILARITY],
                self.params.weights.similarity,
            )
            .min(certainty_of(&link.metadata));
            if !link.scope.is_empty() && !link.scope.contains(&topic) {
                match self.params.similarity_scope_discount {
                    Some(cap) => weight = weight.min(cap),
                    None => continue,
                }
            }
            self.via(
                InferenceKind::Similarity,
                c,
                other,
                id,
                weight,
                depth,
                steps,
            );
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn via(
        &self,
        kind: InferenceKind,
        c: &Condition,
        head: &Term,
        link: StatementId,
        weight: f64,
        depth: usize,
        steps: &mut Vec<InferenceStep>,
    ) {
        let premise = c.with_head(head.clone());
        if let Some(p) = self.best_at(&premise, depth) {
            steps.push(InferenceStep::derived(
                kind,
                c.clone(),
                link,
                weight,
                vec![p],
            ));
        }
    }

    fn analogy(&self, c: &Condition, depth: usize, steps: &mut Vec<InferenceStep>) {
        let Condition::Relation(r) = c else { return };
        for (id, an) in self.graph.analogies() {
            let [a, b, cc, d] = an.terms();
            if !(a.is_ground() && b.is_ground() && cc.is_ground() && d.is_ground()) {
                continue;
            }
            for (from, to) in [((a, b), (cc, d)), ((cc, d), (a, b))] {
                if (&r.subject, &r.object) != (to.0, to.1) {
                    continue;
                }
                let mut premise = r.clone();
                premise.subject = from.0.clone();
                premise.object = from.1.clone();
                if let Some(p) = self.best_at(&Condition::Relation(premise), depth) {
                    steps.push(InferenceStep::derived(
                        InferenceKind::Analogy,
                        c.clone(),
                        id,
                        self.params.weights.analogy,
                        vec![p],
                    ));
                }
            }
        }
    }

    /// Strongest joint proof of a conjunction; variables left unbound by
    /// earlier conditions are enumerated.
    fn prove_all(&self, conditions: &[Condition], depth: usize) -> Option<Vec<InferenceStep>> {
        let Some((first, rest)) = conditions.split_first() else {
            return Some(Vec::new());
        };
        if first.is_ground() {
            let step = self.best_at(first, depth)?;
            let mut tail = self.prove_all(rest, depth)?;
            tail.insert(0, step);
            return Some(tail);
        }
        let mut best: Option<(Qualitative, Vec<InferenceStep>)> = None;
        for (b, step) in self.instances(first, depth) {
            let rest: Vec<Condition> = rest.iter().map(|k| k.substitute(&b)).collect();
            let Some(mut tail) = self.prove_all(&rest, depth) else {
                continue;
            };
            let strength = tail
                .iter()
                .map(|s| s.certainty)
                .fold(step.certainty, Ord::min);
            if best.as_ref().is_none_or(|(q, _)| strength > *q) {
                tail.insert(0, step);
                best = Some((strength, tail));
            }
        }
        best.map(|(_, steps)| steps)
    }

    fn instances(&self, c: &Condition, depth: usize) -> Vec<(Bindings, InferenceStep)> {
        if depth > self.params.max_depth {
            return Vec::new();
        }
        let key = (c.clone(), depth);
        if let Some(hit) = self.instance_memo.borrow().get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for b in self.candidate_bindings(c) {
            let ground = c.substitute(&b);
            if !ground.is_ground() {
                continue;
            }
            if let Some(step) = self.best_at(&ground, depth) {
                out.push((b, step));
            }
        }
        self.instance_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Bindings from direct fact matches first, then the product of the
    /// graph's vocabulary over the remaining variables, up to the cap.
    fn candidate_bindings(&self, c: &Condition) -> Vec<Bindings> {
        let cap = self.params.candidate_cap;
        let vars: Vec<String> = c.variables().into_iter().collect();
        let mut out: Vec<Bindings> = Vec::new();
        let mut seen: HashSet<Bindings> = HashSet::new();
        let matches = match self.graph.match_condition(c) {
            Ok(m) => m,
            Err(_) => self
                .graph
                .iter()
                .filter_map(|(id, s)| s.as_condition().map(|k| (id, k)))
                .flat_map(|(id, k)| {
                    covers(&k, c, &Bindings::new())
                        .into_iter()
                        .map(move |b| (id, b))
                })
                .collect(),
        };
        for (_, b) in matches {
            if out.len() >= cap {
                return out;
            }
            if seen.insert(b.clone()) {
                out.push(b);
            }
        }
        let mut indices = vec![0usize; vars.len()];
        if self.universe.is_empty() {
            return out;
        }
        loop {
            if out.len() >= cap {
                break;
            }
            let b: Bindings = vars
                .iter()
                .zip(&indices)
                .map(|(v, i)| (v.clone(), self.universe[*i].clone()))
                .collect();
            if seen.insert(b.clone()) {
                out.push(b);
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == indices.len() {
                    return out;
                }
                indices[pos] += 1;
                if indices[pos] < self.universe.len() {
                    break;
                }
                indices[pos] = 0;
                pos += 1;
            }
        }
        out
    }
}

/// Convenience wrapper: arguments for and against one supposition.
pub fn prove(
    graph: &KnowledgeGraph,
    supposition: &Condition,
    params: &ProofParams,
) -> Vec<Argument> {
    Reasoner::new(graph, params.clone()).prove(supposition)
}
