//! Canonical PKN text for the AST. Parsing the output yields an equal value.

use std::fmt::{self, Display, Formatter, Write};

use crate::model::{
    AnalogyStatement, Condition, ImplicationStatement, Metadata, PropertyStatement,
    RelationStatement, Statement, Term,
};
use crate::query::Query;

pub fn serialize_term(term: &Term) -> String {
    term.to_string()
}

/// One statement per line, with a trailing newline.
pub fn serialize_document<'a>(statements: impl IntoIterator<Item = &'a Statement>) -> String {
    let mut out = String::new();
    for s in statements {
        writeln!(out, "{s}").expect("writing to a String");
    }
    out
}

fn join<T: Display>(f: &mut Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

fn scope(f: &mut Formatter<'_>, scope: &[Term]) -> fmt::Result {
    if !scope.is_empty() {
        f.write_str(" for ")?;
        join(f, scope, ", ")?;
    }
    Ok(())
}

fn metadata(f: &mut Formatter<'_>, m: &Metadata) -> fmt::Result {
    if !m.is_empty() {
        write!(f, " {m}")?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Name(n) => write!(f, "{n}"),
            Term::Number(n) => write!(f, "{n}"),
            Term::Variable(v) => write!(f, "?{v}"),
            Term::SubGraph(statements) => {
                f.write_str("{")?;
                join(f, statements, "\n")?;
                f.write_str("}")
            }
        }
    }
}

impl Display for Metadata {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} {v}")?;
        }
        f.write_str(")")
    }
}

impl Display for PropertyStatement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} of {} {} ",
            self.descriptor, self.argument, self.operator
        )?;
        join(f, &self.referents, ", ")?;
        scope(f, &self.scope)?;
        metadata(f, &self.metadata)
    }
}

impl Display for RelationStatement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.relationship, self.object)?;
        scope(f, &self.scope)?;
        metadata(f, &self.metadata)
    }
}

impl Display for Condition {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Property(p) => p.fmt(f),
            Condition::Relation(r) => r.fmt(f),
        }
    }
}

impl Display for ImplicationStatement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.antecedents, " and ")?;
        f.write_str(" implies ")?;
        join(f, &self.consequents, " and ")?;
        metadata(f, &self.metadata)
    }
}

impl Display for AnalogyStatement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let d = match &self.d {
            Term::Variable(v) if v.is_empty() => "?".to_string(),
            t => t.to_string(),
        };
        write!(f, "{}:{}::{}:{}", self.a, self.b, self.c, d)
    }
}

impl Display for Statement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Property(p) => p.fmt(f),
            Statement::Relation(r) => r.fmt(f),
            Statement::Implication(i) => i.fmt(f),
            Statement::Analogy(a) => a.fmt(f),
        }
    }
}

impl Display for Query {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} ?{} where ", self.quantifier, self.head)?;
        join(f, &self.conditions, " and ")?;
        if let Some(from) = &self.from {
            f.write_str(" from ")?;
            join(f, from, " and ")?;
        }
        Ok(())
    }
}
