use std::fmt;

use crate::model::{KnowledgeGraph, Name, Qualitative, Statement, StatementId, Term};

/// One completion `d` of `a:b::c:d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogyCandidate {
    pub term: Term,
    pub certainty: Qualitative,
    /// Relationships shared by both pairs; `true` marks the reversed
    /// direction (`b R a` and `d R c`).
    pub relationships: Vec<(Name, bool)>,
    pub supporting: Vec<StatementId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalogyDiagnostic {
    /// No relation links `a` and `b`.
    NoSharedRelation,
    /// `a` and `b` are related, but `c` has no matching relation.
    NoCompletion,
}

impl fmt::Display for AnalogyDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalogyDiagnostic::NoSharedRelation => "no relation links the first pair",
            AnalogyDiagnostic::NoCompletion => "no matching relation for the third term",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalogyCompletion {
    /// Ranked by number of shared relationships, then certainty.
    pub candidates: Vec<AnalogyCandidate>,
    pub diagnostic: Option<AnalogyDiagnostic>,
}

/// Solves `a:b::c:?` by brute force over stored relations: every
/// relationship R with `a R b` (or `b R a`) proposes each `d` with
/// `c R d` (or `d R c`).
pub fn complete_analogy(
    graph: &KnowledgeGraph,
    a: &Term,
    b: &Term,
    c: &Term,
    weight: f64,
) -> AnalogyCompletion {
    let relations: Vec<_> = graph
        .iter()
        .filter_map(|(id, s)| match s {
            Statement::Relation(r) => Some((id, r)),
            _ => None,
        })
        .collect();
    let mut candidates: Vec<(AnalogyCandidate, f64)> = Vec::new();
    let mut linked = false;
    for (id1, r1) in &relations {
        let reversed = if (&r1.subject, &r1.object) == (a, b) {
            false
        } else if (&r1.subject, &r1.object) == (b, a) {
            true
        } else {
            continue;
        };
        linked = true;
        for (id2, r2) in &relations {
            if r2.relationship != r1.relationship {
                continue;
            }
            let d = match reversed {
                false if &r2.subject == c => &r2.object,
                true if &r2.object == c => &r2.subject,
                _ => continue,
            };
            let anchor = r1
                .metadata
                .certainty()
                .anchor()
                .min(r2.metadata.certainty().anchor());
            let key = (r1.relationship.clone(), reversed);
            let i = match candidates.iter().position(|(k, _)| &k.term == d) {
                Some(i) => i,
                None => {
                    candidates.push((
                        AnalogyCandidate {
                            term: d.clone(),
                            certainty: Qualitative::None,
                            relationships: Vec::new(),
                            supporting: Vec::new(),
                        },
                        weight,
                    ));
                    candidates.len() - 1
                }
            };
            let (cand, min_anchor) = &mut candidates[i];
            if !cand.relationships.contains(&key) {
                cand.relationships.push(key);
            }
            for id in [*id1, *id2] {
                if !cand.supporting.contains(&id) {
                    cand.supporting.push(id);
                }
            }
            *min_anchor = min_anchor.min(anchor);
        }
    }
    let mut candidates: Vec<AnalogyCandidate> = candidates
        .into_iter()
        .map(|(mut cand, anchor)| {
            cand.certainty = Qualitative::quantize(anchor);
            cand
        })
        .collect();
    // stable sort keeps first-seen order among equals
    candidates.sort_by(|x, y| {
        y.relationships
            .len()
            .cmp(&x.relationships.len())
            .then(y.certainty.cmp(&x.certainty))
    });
    let diagnostic = if !linked {
        Some(AnalogyDiagnostic::NoSharedRelation)
    } else if candidates.is_empty() {
        Some(AnalogyDiagnostic::NoCompletion)
    } else {
        None
    };
    AnalogyCompletion {
        candidates,
        diagnostic,
    }
}

/// Certainty that the ground analogy `a:b::c:d` holds, if any shared
/// relationship supports it.
pub fn analogy_holds(
    graph: &KnowledgeGraph,
    terms: [&Term; 4],
    weight: f64,
) -> Option<Qualitative> {
    let [a, b, c, d] = terms;
    complete_analogy(graph, a, b, c, weight)
        .candidates
        .into_iter()
        .find(|k| &k.term == d)
        .map(|k| k.certainty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_document;

    fn graph(text: &str) -> KnowledgeGraph {
        KnowledgeGraph::from_statements(parse_document(text).unwrap()).unwrap()
    }

    #[test]
    fn single_shared_relation() {
        let g = graph("dog parent-of puppy\ncat parent-of kitten\n");
        let r = complete_analogy(
            &g,
            &Term::name("dog"),
            &Term::name("puppy"),
            &Term::name("cat"),
            0.8,
        );
        assert_eq!(r.diagnostic, None);
        assert_eq!(r.candidates.len(), 1);
        assert_eq!(r.candidates[0].term, Term::name("kitten"));
        assert_eq!(r.candidates[0].certainty, Qualitative::High);
    }

    #[test]
    fn ranking_by_shared_relations() {
        let g = graph(
            "dog parent-of puppy\ndog older-than puppy\ncat parent-of kitten\ncat older-than kitten\ncat older-than mouse\n",
        );
        let r = complete_analogy(
            &g,
            &Term::name("dog"),
            &Term::name("puppy"),
            &Term::name("cat"),
            0.8,
        );
        let terms: Vec<_> = r.candidates.iter().map(|c| c.term.to_string()).collect();
        assert_eq!(terms, ["kitten", "mouse"]);
        assert_eq!(r.candidates[0].relationships.len(), 2);
    }

    #[test]
    fn reverse_direction_and_certainty() {
        let g = graph("tree has-part leaf\nflower has-part petal (certainty low)\n");
        let r = complete_analogy(
            &g,
            &Term::name("leaf"),
            &Term::name("tree"),
            &Term::name("petal"),
            0.8,
        );
        assert_eq!(r.candidates[0].term, Term::name("flower"));
        assert_eq!(
            r.candidates[0].relationships,
            vec![(Name::new("has-part"), true)]
        );
        assert_eq!(r.candidates[0].certainty, Qualitative::Low);
        let t = [
            &Term::name("leaf"),
            &Term::name("tree"),
            &Term::name("petal"),
            &Term::name("flower"),
        ];
        assert_eq!(analogy_holds(&g, t, 0.8), Some(Qualitative::Low));
    }

    #[test]
    fn no_relation_diagnostic() {
        let g = graph("cat parent-of kitten\n");
        let r = complete_analogy(
            &g,
            &Term::name("dog"),
            &Term::name("puppy"),
            &Term::name("cat"),
            0.8,
        );
        assert!(r.candidates.is_empty());
        assert_eq!(r.diagnostic, Some(AnalogyDiagnostic::NoSharedRelation));
    }
}
