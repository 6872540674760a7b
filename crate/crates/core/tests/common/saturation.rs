//! Small generated knowledge bases and a forward-saturation oracle for
//! best-proof certainties.

use std::collections::HashMap;

use pkn_core::model::{Condition, KnowledgeGraph, Qualitative};
use pkn_core::parser::{parse_condition, parse_document};
use proptest::prelude::*;

use super::level;

pub const DESCRIPTORS: [&str; 2] = ["color", "size"];
pub const THINGS: [&str; 4] = ["a", "b", "c", "d"];
pub const VALUES: [&str; 2] = ["r1", "r2"];

#[derive(Debug, Clone)]
pub enum Gen {
    Fact {
        d: usize,
        a: usize,
        r: usize,
        certainty: Option<Qualitative>,
    },
    KindOf {
        sub: usize,
        sup: usize,
        typicality: Option<Qualitative>,
        dominance: Option<Qualitative>,
        certainty: Option<Qualitative>,
    },
    Similar {
        x: usize,
        y: usize,
        similarity: Option<Qualitative>,
        scope: Option<usize>,
    },
    Rule {
        d1: usize,
        r1: usize,
        d2: usize,
        r2: usize,
        strength: Option<Qualitative>,
        inverse: Option<Qualitative>,
    },
}

fn meta(pairs: &[(&str, Option<Qualitative>)]) -> String {
    let parts: Vec<String> = pairs
        .iter()
        .filter_map(|(k, v)| v.map(|v| format!("{k} {v}")))
        .collect();
    if parts.is_empty() {
        String::new()
    } else {
        format!(" ({})", parts.join(", "))
    }
}

impl Gen {
    pub fn text(&self) -> String {
        match *self {
            Gen::Fact { d, a, r, certainty } => format!(
                "{} of {} includes {}{}",
                DESCRIPTORS[d],
                THINGS[a],
                VALUES[r],
                meta(&[("certainty", certainty)])
            ),
            Gen::KindOf {
                sub,
                sup,
                typicality,
                dominance,
                certainty,
            } => format!(
                "{} kind-of {}{}",
                THINGS[sub],
                THINGS[sup],
                meta(&[
                    ("typicality", typicality),
                    ("dominance", dominance),
                    ("certainty", certainty)
                ])
            ),
            Gen::Similar {
                x,
                y,
                similarity,
                scope,
            } => format!(
                "{} similar-to {}{}{}",
                THINGS[x],
                THINGS[y],
                scope
                    .map(|d| format!(" for {}", DESCRIPTORS[d]))
                    .unwrap_or_default(),
                meta(&[("similarity", similarity)])
            ),
            Gen::Rule {
                d1,
                r1,
                d2,
                r2,
                strength,
                inverse,
            } => format!(
                "{} of ?x includes {} implies {} of ?x includes {}{}",
                DESCRIPTORS[d1],
                VALUES[r1],
                DESCRIPTORS[d2],
                VALUES[r2],
                meta(&[("strength", strength), ("inverse", inverse)])
            ),
        }
    }
}

pub fn opt_level() -> impl Strategy<Value = Option<Qualitative>> {
    prop::option::weighted(0.5, level())
}

pub fn gen() -> impl Strategy<Value = Gen> {
    let d = || 0..DESCRIPTORS.len();
    let t = || 0..THINGS.len();
    let v = || 0..VALUES.len();
    prop_oneof![
        3 => (d(), t(), v(), opt_level()).prop_map(|(d, a, r, certainty)| Gen::Fact { d, a, r, certainty }),
        2 => (t(), t(), opt_level(), opt_level(), opt_level())
            .prop_map(|(sub, sup, typicality, dominance, certainty)| Gen::KindOf { sub, sup, typicality, dominance, certainty }),
        1 => (t(), t(), opt_level(), prop::option::of(d()))
            .prop_map(|(x, y, similarity, scope)| Gen::Similar { x, y, similarity, scope }),
        2 => (d(), v(), d(), v(), opt_level(), opt_level())
            .prop_map(|(d1, r1, d2, r2, strength, inverse)| Gen::Rule { d1, r1, d2, r2, strength, inverse }),
    ]
}

pub type Key = (usize, usize, usize);

fn anchor(q: Option<Qualitative>, default: f64) -> f64 {
    q.map_or(default, Qualitative::anchor)
}

/// Forward saturation: round k holds the best certainty of every ground
/// property reachable with at most k inference steps above a fact.
pub fn saturate(gens: &[Gen], rounds: usize) -> HashMap<Key, f64> {
    let mut facts: HashMap<Key, f64> = HashMap::new();
    for g in gens {
        if let Gen::Fact { d, a, r, certainty } = *g {
            let e = facts.entry((d, a, r)).or_insert(0.0);
            *e = e.max(anchor(certainty, 1.0));
        }
    }
    let keep = |x: f64| if x + 1e-12 >= 0.1 { x } else { 0.0 };
    facts.values_mut().for_each(|x| *x = keep(*x));
    let mut current = facts.clone();
    for _ in 0..rounds {
        let get = |m: &HashMap<Key, f64>, k: Key| m.get(&k).copied().unwrap_or(0.0);
        let mut next = facts.clone();
        let mut offer = |k: Key, x: f64| {
            let x = keep(x);
            let e = next.entry(k).or_insert(0.0);
            *e = e.max(x);
        };
        for g in gens {
            match *g {
                Gen::Fact { .. } => {}
                Gen::KindOf {
                    sub,
                    sup,
                    typicality,
                    dominance,
                    certainty,
                } => {
                    if sub == sup {
                        continue;
                    }
                    let c = anchor(certainty, 1.0);
                    let down = anchor(typicality, 0.8).min(c);
                    let up = anchor(dominance, 0.5).min(c);
                    for d in 0..DESCRIPTORS.len() {
                        for r in 0..VALUES.len() {
                            // specialization: the subclass inherits from its class
                            offer((d, sub, r), down.min(get(&current, (d, sup, r))));
                            // generalization: the class inherits from a subclass
                            offer((d, sup, r), up.min(get(&current, (d, sub, r))));
                        }
                    }
                }
                Gen::Similar {
                    x,
                    y,
                    similarity,
                    scope,
                } => {
                    if x == y {
                        continue;
                    }
                    let w = anchor(similarity, 0.8);
                    for d in 0..DESCRIPTORS.len() {
                        if scope.is_some_and(|s| s != d) {
                            continue;
                        }
                        for r in 0..VALUES.len() {
                            offer((d, x, r), w.min(get(&current, (d, y, r))));
                            offer((d, y, r), w.min(get(&current, (d, x, r))));
                        }
                    }
                }
                Gen::Rule {
                    d1,
                    r1,
                    d2,
                    r2,
                    strength,
                    inverse,
                } => {
                    for a in 0..THINGS.len() {
                        offer(
                            (d2, a, r2),
                            anchor(strength, 0.8).min(get(&current, (d1, a, r1))),
                        );
                        offer(
                            (d1, a, r1),
                            anchor(inverse, 0.2).min(get(&current, (d2, a, r2))),
                        );
                    }
                }
            }
        }
        current = next;
    }
    current
}

pub fn build(gens: &[Gen]) -> KnowledgeGraph {
    let text: Vec<String> = gens.iter().map(Gen::text).collect();
    KnowledgeGraph::from_statements(parse_document(&text.join("\n")).unwrap()).unwrap()
}

pub fn property(d: usize, a: usize, r: usize) -> Condition {
    parse_condition(&format!(
        "{} of {} includes {}",
        DESCRIPTORS[d], THINGS[a], VALUES[r]
    ))
    .unwrap()
}
