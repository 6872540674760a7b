//! Terms, statements, metadata and the indexed knowledge-graph store.

mod graph;
mod metadata;
mod statement;
mod term;
pub mod unify;

pub use graph::{KnowledgeGraph, ModelError, StatementId};
pub use metadata::{params, Metadata, Qualitative, UnknownLevel};
pub use statement::{
    vocab, AnalogyStatement, Condition, ImplicationStatement, InvalidStatement, PropertyStatement,
    RelationStatement, Statement,
};
pub use term::{Bindings, Name, Number, Term};
