mod common;

use std::collections::BTreeSet;

use common::*;
use pkn_core::model::{KnowledgeGraph, Statement};
use pkn_core::rdf::check::{check_triples, check_turtle, normalize_lists, TextTriple};
use pkn_core::rdf::{to_triples, to_turtle, Node};
use proptest::prelude::*;

fn statement_nodes(triples: &[pkn_core::rdf::Triple]) -> BTreeSet<String> {
    triples
        .iter()
        .flat_map(|t| [&t.subject, &t.object])
        .filter_map(|n| match n {
            Node::Blank(b) if b.starts_with('b') => Some(b.clone()),
            _ => None,
        })
        .collect()
}

#[test]
fn corpus_statements_export() {
    let text: Vec<&str> = corpus_lines()
        .into_iter()
        .filter(|l| !l.contains(" where "))
        .collect();
    let g = graph(&text.join("\n"));
    let triples = to_triples(&g);
    check_triples(&triples).unwrap();
    let expected: usize = g.statements().iter().map(Statement::nested_count).sum();
    assert_eq!(statement_nodes(&triples).len(), expected);
    check_turtle(&to_turtle(&g)).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_graphs_export_cleanly(ss in prop::collection::vec(ground_statement(), 0..12)) {
        let g = KnowledgeGraph::from_statements(ss).unwrap();
        let triples = to_triples(&g);
        let expected: usize = g.statements().iter().map(Statement::nested_count).sum();
        prop_assert_eq!(statement_nodes(&triples).len(), expected);
        prop_assert_eq!(check_triples(&triples), Ok(()));
        let ttl = to_turtle(&g);
        prop_assert_eq!(&ttl, &to_turtle(&g.clone()));
        let parsed = check_turtle(&ttl).map_err(|e| TestCaseError::fail(format!("{e}\n{ttl}")))?;
        let exported: Vec<TextTriple> = triples.iter().map(TextTriple::from).collect();
        prop_assert_eq!(normalize_lists(&parsed), normalize_lists(&exported));
    }
}
