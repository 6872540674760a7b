mod common;

use common::*;
use pkn_core::parser::{parse_items, parse_statement, serialize_document, Item};
use proptest::prelude::*;

#[test]
fn corpus_parses_and_round_trips() {
    let lines = corpus_lines();
    assert_eq!(lines.len(), 14);
    let (items, errors) = parse_items(CORPUS);
    assert!(errors.is_empty(), "{errors:?}");
    assert_eq!(items.len(), 14);
    for (line, item) in lines.iter().zip(&items) {
        let text = match &item.value {
            Item::Statement(s) => s.to_string(),
            Item::Query(q) => q.to_string(),
        };
        assert_eq!(&text, line);
        let (again, errors) = parse_items(&text);
        assert!(errors.is_empty());
        assert_eq!(again[0].value, item.value);
    }
}

#[test]
fn wrapped_rule_reads_as_one_statement() {
    let wrapped = "weather of ?place includes rainy implies weather of ?place includes\ncloudy (strength high, inverse low)";
    let (items, errors) = parse_items(wrapped);
    // a newline ends a statement, so the wrapped form is two broken lines
    assert_eq!(items.len() + errors.len(), 2);
    let joined = wrapped.replace('\n', " ");
    assert_eq!(
        parse_statement(&joined).unwrap().to_string(),
        corpus_lines()[3]
    );
}

#[test]
fn errors_keep_going_and_point_inside_the_text() {
    let text = "Paul likes John\nof of of\nflowers of Paris includes roses (certainty tall)\nAnne likes Bob\n";
    let (items, errors) = parse_items(text);
    assert_eq!(items.len(), 2);
    assert_eq!(errors.len(), 2);
    assert_eq!(errors[0].line, 2);
    assert_eq!(errors[1].line, 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn statements_round_trip(s in statement()) {
        let text = s.to_string();
        let parsed = parse_statement(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(parsed, s);
    }

    #[test]
    fn documents_round_trip(ss in prop::collection::vec(ground_statement(), 0..8)) {
        let text = serialize_document(&ss);
        let back = pkn_core::parser::parse_document(&text).unwrap();
        prop_assert_eq!(back, ss);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "[a-z?{}(),:0-9 \n.-]{0,60}") {
        let (_, errors) = parse_items(&text);
        let lines = text.split('\n').count();
        for e in errors {
            prop_assert!(e.line >= 1 && e.line <= lines.max(1));
            prop_assert!(e.column >= 1);
        }
    }
}
