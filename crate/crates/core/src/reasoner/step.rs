use std::fmt;
use std::str::FromStr;

use crate::model::{Condition, Qualitative, StatementId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InferenceKind {
    Fact,
    Specialization,
    Generalization,
    Similarity,
    ImplicationForward,
    ImplicationBackward,
    Analogy,
}

impl InferenceKind {
    pub const ALL: [InferenceKind; 7] = [
        InferenceKind::Fact,
        InferenceKind::Specialization,
        InferenceKind::Generalization,
        InferenceKind::Similarity,
        InferenceKind::ImplicationForward,
        InferenceKind::ImplicationBackward,
        InferenceKind::Analogy,
    ];

    pub fn label(self) -> &'static str {
        match self {
            InferenceKind::Fact => "fact",
            InferenceKind::Specialization => "specialization",
            InferenceKind::Generalization => "generalization",
            InferenceKind::Similarity => "similarity",
            InferenceKind::ImplicationForward => "implication-forward",
            InferenceKind::ImplicationBackward => "implication-backward",
            InferenceKind::Analogy => "analogy",
        }
    }
}

impl fmt::Display for InferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown inference kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for InferenceKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InferenceKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

/// One node of a proof tree.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceStep {
    pub kind: InferenceKind,
    pub premises: Vec<InferenceStep>,
    /// The fact, rule or link that licenses this step.
    pub used_statement: StatementId,
    /// Anchor of the governing parameter; for facts, their certainty.
    pub weight: f64,
    pub conclusion: Condition,
    pub certainty: Qualitative,
}

impl InferenceStep {
    pub fn fact(conclusion: Condition, used_statement: StatementId, certainty: f64) -> Self {
        Self {
            kind: InferenceKind::Fact,
            premises: Vec::new(),
            used_statement,
            weight: certainty,
            conclusion,
            certainty: Qualitative::quantize(certainty),
        }
    }

    pub fn derived(
        kind: InferenceKind,
        conclusion: Condition,
        used_statement: StatementId,
        weight: f64,
        premises: Vec<InferenceStep>,
    ) -> Self {
        let anchor = premises
            .iter()
            .map(|p| p.certainty.anchor())
            .fold(weight, f64::min);
        Self {
            kind,
            premises,
            used_statement,
            weight,
            conclusion,
            certainty: Qualitative::quantize(anchor),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.kind == InferenceKind::Fact
    }

    /// Fact steps at the leaves, left to right.
    pub fn leaves(&self) -> Vec<&InferenceStep> {
        let mut out = Vec::new();
        self.walk(&mut |s| {
            if s.is_fact() {
                out.push(s);
            }
        });
        out
    }

    /// Statements licensing the non-fact steps, in pre-order.
    pub fn links(&self) -> Vec<StatementId> {
        let mut out = Vec::new();
        self.walk(&mut |s| {
            if !s.is_fact() {
                out.push(s.used_statement);
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a InferenceStep)) {
        visit(self);
        for p in &self.premises {
            p.walk(visit);
        }
    }

    /// Number of steps on the longest path to a leaf (a fact has height 0).
    pub fn height(&self) -> usize {
        self.premises
            .iter()
            .map(|p| p.height() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Weakest link over every weight in the tree, recomputed from scratch.
    pub fn weakest_link(&self) -> Qualitative {
        let mut anchor = f64::INFINITY;
        self.walk(&mut |s| anchor = anchor.min(s.weight));
        Qualitative::quantize(anchor)
    }
}
