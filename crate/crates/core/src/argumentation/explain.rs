use std::fmt::Write;

use super::{Polarity, Verdict};
use crate::model::KnowledgeGraph;
use crate::reasoner::InferenceStep;

fn cite(graph: &KnowledgeGraph, step: &InferenceStep) -> String {
    match graph.get(step.used_statement) {
        Some(s) => format!("{}: {s}", step.used_statement),
        None => step.used_statement.to_string(),
    }
}

/// Renders a proof tree, two spaces per level:
///
/// ```text
/// weather of Paris includes cloudy (implication-forward, high) because
///   by #0: weather of ?place includes rainy implies weather of ?place includes cloudy
///   weather of Paris includes rainy (fact, high) from #1: weather of Paris includes rainy (certainty high)
/// ```
pub fn explain_step(graph: &KnowledgeGraph, step: &InferenceStep, indent: usize) -> String {
    let mut out = String::new();
    render(graph, step, indent, &mut out);
    out
}

fn render(graph: &KnowledgeGraph, step: &InferenceStep, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    if step.is_fact() {
        writeln!(
            out,
            "{pad}{} (fact, {}) from {}",
            step.conclusion,
            step.certainty,
            cite(graph, step)
        )
        .unwrap();
        return;
    }
    writeln!(
        out,
        "{pad}{} ({}, {}) because",
        step.conclusion, step.kind, step.certainty
    )
    .unwrap();
    writeln!(out, "{pad}  by {}", cite(graph, step)).unwrap();
    for p in &step.premises {
        render(graph, p, indent + 1, out);
    }
}

/// Explanation of a verdict. With only for-arguments and no attacks the
/// proof trees are printed as they are; otherwise they are numbered and
/// grouped under FOR and AGAINST, followed by the attacks between them.
pub fn explain(graph: &KnowledgeGraph, verdict: &Verdict) -> String {
    let mut out = String::new();
    let has_against = verdict
        .arguments
        .iter()
        .any(|a| a.polarity == Polarity::Against);
    if !has_against && verdict.attacks.is_empty() {
        for a in &verdict.arguments {
            render(graph, &a.root, 0, &mut out);
        }
        return out;
    }
    for (label, polarity) in [("FOR:", Polarity::For), ("AGAINST:", Polarity::Against)] {
        let members: Vec<_> = verdict
            .arguments
            .iter()
            .enumerate()
            .filter(|(_, a)| a.polarity == polarity)
            .collect();
        if members.is_empty() {
            continue;
        }
        writeln!(out, "{label}").unwrap();
        for (i, a) in members {
            let tree = explain_step(graph, &a.root, 1);
            out.push_str("  ");
            write!(out, "[{}] ", i + 1).unwrap();
            out.push_str(&tree[2..]);
        }
    }
    if !verdict.attacks.is_empty() {
        writeln!(out, "ATTACKS:").unwrap();
        for e in &verdict.attacks {
            writeln!(
                out,
                "  [{}] {} [{}]",
                e.attacker + 1,
                e.kind.verb(),
                e.target + 1
            )
            .unwrap();
        }
    }
    out
}
