#![allow(dead_code)]

pub mod conjunctive;
pub mod saturation;

use pkn_core::model::{
    AnalogyStatement, Condition, ImplicationStatement, KnowledgeGraph, Metadata, Name,
    PropertyStatement, Qualitative, RelationStatement, Statement, Term,
};
use pkn_core::parser::parse_document;
use proptest::prelude::*;

pub const CORPUS: &str = include_str!("../data/corpus.pkn");

pub fn corpus_lines() -> Vec<&'static str> {
    CORPUS.lines().filter(|l| !l.trim().is_empty()).collect()
}

pub fn graph(text: &str) -> KnowledgeGraph {
    KnowledgeGraph::from_statements(parse_document(text).expect("test text parses"))
        .expect("valid statements")
}

pub const LEVELS: [Qualitative; 7] = [
    Qualitative::None,
    Qualitative::VeryLow,
    Qualitative::Low,
    Qualitative::Medium,
    Qualitative::High,
    Qualitative::VeryHigh,
    Qualitative::Certain,
];

pub fn level() -> impl Strategy<Value = Qualitative> {
    prop::sample::select(LEVELS.to_vec())
}

const WORDS: &[&str] = &[
    "alpha",
    "beta",
    "gamma",
    "delta",
    "rose",
    "tulip",
    "Paris",
    "London",
    "weather",
    "color",
    "x1",
    "big_cat",
    "north-east",
    "age-at-death",
];

pub fn simple_name() -> impl Strategy<Value = Name> {
    prop::sample::select(WORDS).prop_map(Name::new)
}

pub fn name() -> impl Strategy<Value = Name> {
    (
        prop::collection::vec(prop::sample::select(&["very", "close", "hot"][..]), 0..3),
        prop::sample::select(WORDS),
    )
        .prop_map(|(prefixes, base)| {
            Name::with_prefixes(prefixes.into_iter().map(String::from).collect(), base)
        })
}

pub fn number() -> impl Strategy<Value = Term> {
    prop_oneof![
        (-1000i64..1000).prop_map(|n| Term::number(n as f64)),
        (-1000.0f64..1000.0).prop_map(Term::number),
    ]
}

pub fn variable() -> impl Strategy<Value = Term> {
    prop::sample::select(&["x", "y", "place", "who"][..]).prop_map(Term::variable)
}

pub fn atom(with_vars: bool) -> BoxedStrategy<Term> {
    if with_vars {
        prop_oneof![4 => name().prop_map(Term::Name), 1 => number(), 2 => variable()].boxed()
    } else {
        prop_oneof![4 => name().prop_map(Term::Name), 1 => number()].boxed()
    }
}

pub fn metadata() -> impl Strategy<Value = Metadata> {
    prop::collection::btree_map(
        prop::sample::select(&["certainty", "strength", "inverse", "typicality", "weight"][..]),
        level(),
        0..3,
    )
    .prop_map(|m| {
        let mut out = Metadata::new();
        for (k, v) in m {
            out.insert(k, v);
        }
        out
    })
}

fn scope() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(simple_name().prop_map(Term::Name), 0..3)
}

/// Terms that may hold nested sub-graphs up to `depth` levels.
pub fn term(depth: u32, with_vars: bool) -> BoxedStrategy<Term> {
    if depth == 0 {
        return atom(with_vars);
    }
    prop_oneof![
        5 => atom(with_vars),
        1 => prop::collection::vec(simple_statement(depth - 1, with_vars), 1..3).prop_map(Term::SubGraph),
    ]
    .boxed()
}

fn operator() -> impl Strategy<Value = String> {
    prop::sample::select(
        &[
            "includes",
            "is",
            "excludes",
            "greater-than",
            "less-than",
            "has",
        ][..],
    )
    .prop_map(String::from)
}

pub fn condition(depth: u32, with_vars: bool) -> BoxedStrategy<Condition> {
    let descriptor = if with_vars {
        prop_oneof![3 => name().prop_map(Term::Name), 1 => variable()].boxed()
    } else {
        name().prop_map(Term::Name).boxed()
    };
    let property = (
        descriptor,
        term(depth, with_vars),
        operator(),
        prop::collection::vec(term(depth, with_vars), 1..4),
        scope(),
    )
        .prop_map(|(d, a, op, refs, scope)| {
            let mut p = PropertyStatement::new(d, a, op, refs);
            p.scope = scope;
            Condition::Property(p)
        });
    let relation = (
        term(depth, with_vars),
        name(),
        term(depth, with_vars),
        scope(),
    )
        .prop_map(|(s, r, o, scope)| {
            let mut r = RelationStatement::new(s, r, o);
            r.scope = scope;
            Condition::Relation(r)
        });
    prop_oneof![property, relation].boxed()
}

fn with_metadata(c: Condition, m: Metadata) -> Statement {
    let mut s = Statement::from(c);
    match &mut s {
        Statement::Property(p) => p.metadata = m,
        Statement::Relation(r) => r.metadata = m,
        _ => unreachable!(),
    }
    s
}

/// Properties and relations, with metadata.
pub fn simple_statement(depth: u32, with_vars: bool) -> BoxedStrategy<Statement> {
    (condition(depth, with_vars), metadata())
        .prop_map(|(c, m)| with_metadata(c, m))
        .boxed()
}

pub fn implication(depth: u32) -> impl Strategy<Value = Statement> {
    (
        prop::collection::vec(condition(depth, true), 1..3),
        prop::collection::vec(condition(depth, true), 1..3),
        metadata(),
    )
        .prop_map(|(a, c, m)| {
            let mut i = ImplicationStatement::new(a, c);
            i.metadata = m;
            Statement::Implication(i)
        })
}

pub fn analogy() -> impl Strategy<Value = Statement> {
    let n = || simple_name().prop_map(Term::Name);
    (
        n(),
        n(),
        n(),
        prop_oneof![3 => n(), 1 => Just(Term::anonymous())],
    )
        .prop_map(|(a, b, c, d)| Statement::Analogy(AnalogyStatement::new(a, b, c, d)))
}

/// Any statement the grammar can write, including ones with variables.
pub fn statement() -> impl Strategy<Value = Statement> {
    prop_oneof![
        4 => simple_statement(2, true),
        2 => implication(1),
        1 => analogy(),
    ]
}

/// Statements that can be asserted into a graph.
pub fn ground_statement() -> impl Strategy<Value = Statement> {
    prop_oneof![
        4 => simple_statement(2, false),
        2 => implication(1),
        1 => analogy(),
    ]
    .prop_filter("assertable", |s| s.validate().is_ok())
}
