//! Plausible Knowledge Notation: a knowledge-graph model with defeasible
//! reasoning over uncertain, imprecise and inconsistent statements.

pub mod argumentation;
pub mod fuzzy;
pub mod model;
pub mod parser;
pub mod query;
pub mod rdf;
pub mod reasoner;
