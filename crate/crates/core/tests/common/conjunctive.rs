//! Random conjunctive queries over a small vocabulary, checked against
//! brute-force enumeration of variable assignments.

use std::collections::BTreeSet;

use pkn_core::model::{
    Bindings, Condition, KnowledgeGraph, Name, PropertyStatement, RelationStatement, Statement,
    Term,
};
use pkn_core::query::{run_query, Quantifier, Query, QueryOptions, QueryResult};
use proptest::prelude::*;

pub const THINGS: [&str; 5] = ["a", "b", "c", "d", "e"];
pub const RELATIONS: [&str; 3] = ["likes", "knows", "owns"];
pub const COLORS: [&str; 3] = ["red", "green", "blue"];
pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn fact() -> impl Strategy<Value = Statement> {
    let thing = || prop::sample::select(&THINGS[..]).prop_map(Term::name);
    prop_oneof![
        (thing(), prop::sample::select(&RELATIONS[..]), thing())
            .prop_map(|(s, r, o)| Statement::Relation(RelationStatement::new(s, Name::new(r), o))),
        (thing(), prop::sample::select(&COLORS[..])).prop_map(|(a, c)| Statement::Property(
            PropertyStatement::new(Term::name("color"), a, "includes", vec![Term::name(c)])
        )),
    ]
}

pub fn slot(pool: &'static [&'static str]) -> impl Strategy<Value = Term> {
    prop_oneof![
        2 => prop::sample::select(&VARS[..]).prop_map(Term::variable),
        1 => prop::sample::select(pool).prop_map(Term::name),
    ]
}

pub fn pattern() -> impl Strategy<Value = Condition> {
    prop_oneof![
        3 => (slot(&THINGS), prop::sample::select(&RELATIONS[..]), slot(&THINGS))
            .prop_map(|(s, r, o)| Condition::Relation(RelationStatement::new(s, Name::new(r), o))),
        1 => (slot(&THINGS), slot(&COLORS))
            .prop_map(|(a, c)| Condition::Property(PropertyStatement::new(Term::name("color"), a, "includes", vec![c]))),
        // no concrete descriptor or argument, so the engine must scan
        1 => (prop::sample::select(&VARS[..]), slot(&COLORS)).prop_map(|(a, c)| Condition::Property(
            PropertyStatement::new(Term::variable("d"), Term::variable(a), "includes", vec![c])
        )),
    ]
}

/// Every assignment of the query variables over the vocabulary, kept when
/// each instantiated condition is literally a stored fact.
pub fn oracle(graph: &KnowledgeGraph, head: &str, conditions: &[Condition]) -> BTreeSet<String> {
    let mut vars = BTreeSet::new();
    for c in conditions {
        vars.extend(c.variables());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let universe: Vec<Term> = THINGS
        .iter()
        .chain(&COLORS)
        .chain(&["color"])
        .map(|s| Term::name(*s))
        .collect();
    let stored: BTreeSet<String> = graph.statements().iter().map(|s| s.to_string()).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let b: Bindings = vars
            .iter()
            .cloned()
            .zip(idx.iter().map(|i| universe[*i].clone()))
            .collect();
        if conditions
            .iter()
            .all(|c| stored.contains(&Statement::from(c.substitute(&b)).to_string()))
        {
            out.insert(b[head].to_string());
        }
        let mut p = 0;
        loop {
            if p == idx.len() {
                return out;
            }
            idx[p] += 1;
            if idx[p] < universe.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

pub fn which(
    graph: &KnowledgeGraph,
    head: &str,
    conditions: &[Condition],
    quantifier: Quantifier,
) -> QueryResult {
    let q = Query {
        quantifier,
        head: head.to_string(),
        conditions: conditions.to_vec(),
        from: None,
    };
    run_query(graph, &q, &QueryOptions::default()).unwrap()
}
