//! RDF export. Every PKN statement becomes a blank node describing its
//! parts, so scopes and metadata survive the translation.

pub mod check;

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::model::{KnowledgeGraph, Number, Statement, Term};

/// IRI of the `pkn:` namespace.
pub const NAMESPACE: &str = "urn:pkn:";
pub const RDF_NAMESPACE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Iri {
    /// Local name in the `pkn:` namespace, already percent-encoded.
    Pkn(String),
    Rdf(&'static str),
}

impl Iri {
    pub fn pkn(local: impl Into<String>) -> Self {
        Iri::Pkn(local.into())
    }

    pub fn full(&self) -> String {
        match self {
            Iri::Pkn(l) => format!("{NAMESPACE}{l}"),
            Iri::Rdf(l) => format!("{RDF_NAMESPACE}{l}"),
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Iri::Pkn(l) => write!(f, "pkn:{l}"),
            Iri::Rdf(l) => write!(f, "rdf:{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    /// Blank node label without the `_:` prefix.
    Blank(String),
    Iri(Iri),
    Number(Number),
    String(String),
}

impl Node {
    pub fn is_blank(&self) -> bool {
        matches!(self, Node::Blank(_))
    }
}

fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Blank(b) => write!(f, "_:{b}"),
            Node::Iri(i) => write!(f, "{i}"),
            Node::Number(n) => write!(f, "{n}"),
            Node::String(s) => f.write_str(&escape_string(s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Node,
    pub predicate: Iri,
    pub object: Node,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Percent-encodes a PKN name as a Turtle local name. Letters, digits and
/// `_` pass through, as does `-` after the first character; everything
/// else, including the `:` of prefixed names, is escaped.
pub fn encode_local(name: &str) -> String {
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_ascii_alphanumeric() || c == '_' || (c == '-' && i > 0) {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                write!(out, "%{b:02X}").expect("writing to a String");
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Node(Node),
    List(Vec<Value>),
}

#[derive(Debug, Clone, PartialEq)]
struct Block {
    subject: String,
    class: &'static str,
    properties: Vec<(Iri, Value)>,
}

#[derive(Default)]
struct Exporter {
    blocks: Vec<Option<Block>>,
    variables: Vec<String>,
}

impl Exporter {
    fn variable(&mut self, name: &str) -> Node {
        let local = encode_local(&format!("?{name}"));
        if !self.variables.contains(&local) {
            self.variables.push(local.clone());
        }
        Node::Iri(Iri::Pkn(local))
    }

    fn term(&mut self, term: &Term) -> Value {
        match term {
            Term::Name(n) => Value::Node(Node::Iri(Iri::Pkn(encode_local(&n.to_string())))),
            Term::Number(n) => Value::Node(Node::Number(*n)),
            Term::Variable(v) => Value::Node(self.variable(v)),
            Term::SubGraph(statements) => {
                let mut nodes: Vec<Value> = statements
                    .iter()
                    .map(|s| Value::Node(self.statement(s)))
                    .collect();
                if nodes.len() == 1 {
                    nodes.remove(0)
                } else {
                    Value::List(nodes)
                }
            }
        }
    }

    /// Allocates the statement's blank node before visiting its parts, so
    /// labels follow pre-order.
    fn statement(&mut self, statement: &Statement) -> Node {
        let index = self.blocks.len();
        self.blocks.push(None);
        let subject = format!("b{index}");
        let mut properties = Vec::new();
        let class = match statement {
            Statement::Property(p) => {
                let descriptor = self.term(&p.descriptor);
                properties.push((Iri::pkn("descriptor"), descriptor));
                let argument = self.term(&p.argument);
                properties.push((Iri::pkn("argument"), argument));
                properties.push((
                    Iri::pkn("operator"),
                    Value::Node(Node::Iri(Iri::Pkn(encode_local(&p.operator)))),
                ));
                let referent = self.referents(&p.referents);
                properties.push((Iri::pkn("referent"), referent));
                self.scope(&p.scope, &mut properties);
                "Property"
            }
            Statement::Relation(r) => {
                let subject = self.term(&r.subject);
                properties.push((Iri::pkn("subject"), subject));
                properties.push((
                    Iri::pkn("relationship"),
                    Value::Node(Node::Iri(Iri::Pkn(encode_local(
                        &r.relationship.to_string(),
                    )))),
                ));
                let object = self.term(&r.object);
                properties.push((Iri::pkn("object"), object));
                self.scope(&r.scope, &mut properties);
                "Relation"
            }
            Statement::Implication(rule) => {
                let vars: BTreeSet<String> = rule.variables();
                if !vars.is_empty() {
                    let nodes = vars.iter().map(|v| Value::Node(self.variable(v))).collect();
                    properties.push((Iri::pkn("variables"), Value::List(nodes)));
                }
                let ants = rule
                    .antecedents
                    .iter()
                    .map(|c| Value::Node(self.statement(&Statement::from(c.clone()))))
                    .collect();
                properties.push((Iri::pkn("antecedents"), Value::List(ants)));
                let cons = rule
                    .consequents
                    .iter()
                    .map(|c| Value::Node(self.statement(&Statement::from(c.clone()))))
                    .collect();
                properties.push((Iri::pkn("consequents"), Value::List(cons)));
                "Implication"
            }
            Statement::Analogy(a) => {
                for (label, t) in ["a", "b", "c", "d"].into_iter().zip(a.terms()) {
                    let v = self.term(t);
                    properties.push((Iri::pkn(label), v));
                }
                "Analogy"
            }
        };
        if let Some(m) = statement.metadata() {
            for (k, v) in m.iter() {
                properties.push((
                    Iri::Pkn(encode_local(k)),
                    Value::Node(Node::String(v.symbol().to_string())),
                ));
            }
        }
        self.blocks[index] = Some(Block {
            subject: subject.clone(),
            class,
            properties,
        });
        Node::Blank(subject)
    }

    fn referents(&mut self, referents: &[Term]) -> Value {
        if referents.len() == 1 {
            return self.term(&referents[0]);
        }
        Value::List(referents.iter().map(|t| self.term(t)).collect())
    }

    fn scope(&mut self, scope: &[Term], properties: &mut Vec<(Iri, Value)>) {
        if scope.is_empty() {
            return;
        }
        let nodes = scope.iter().map(|t| self.term(t)).collect();
        properties.push((Iri::pkn("scope"), Value::List(nodes)));
    }

    fn finish(self) -> (Vec<Block>, Vec<String>) {
        (
            self.blocks
                .into_iter()
                .map(|b| b.expect("every block filled"))
                .collect(),
            self.variables,
        )
    }
}

fn export(graph: &KnowledgeGraph) -> (Vec<Block>, Vec<String>) {
    let mut e = Exporter::default();
    for s in graph.statements() {
        e.statement(s);
    }
    e.finish()
}

fn rdf_type() -> Iri {
    Iri::Rdf("type")
}

struct Flattener {
    out: Vec<Triple>,
    cells: usize,
}

impl Flattener {
    fn value(&mut self, value: Value) -> Node {
        match value {
            Value::Node(n) => n,
            Value::List(items) => {
                if items.is_empty() {
                    return Node::Iri(Iri::Rdf("nil"));
                }
                let first = self.cells;
                let n = items.len();
                self.cells += n;
                for (i, item) in items.into_iter().enumerate() {
                    let cell = Node::Blank(format!("l{}", first + i));
                    let object = self.value(item);
                    self.out.push(Triple {
                        subject: cell.clone(),
                        predicate: Iri::Rdf("first"),
                        object,
                    });
                    let rest = if i + 1 == n {
                        Node::Iri(Iri::Rdf("nil"))
                    } else {
                        Node::Blank(format!("l{}", first + i + 1))
                    };
                    self.out.push(Triple {
                        subject: cell,
                        predicate: Iri::Rdf("rest"),
                        object: rest,
                    });
                }
                Node::Blank(format!("l{first}"))
            }
        }
    }
}

/// The graph as triples: statement nodes are `_:bN` in pre-order, list
/// cells `_:lN`.
pub fn to_triples(graph: &KnowledgeGraph) -> Vec<Triple> {
    let (blocks, variables) = export(graph);
    let mut f = Flattener {
        out: Vec::new(),
        cells: 0,
    };
    for block in blocks {
        let subject = Node::Blank(block.subject);
        f.out.push(Triple {
            subject: subject.clone(),
            predicate: rdf_type(),
            object: Node::Iri(Iri::pkn(block.class)),
        });
        for (predicate, value) in block.properties {
            // the link triple comes before the cells it points to
            let at = f.out.len();
            let object = f.value(value);
            f.out.insert(
                at,
                Triple {
                    subject: subject.clone(),
                    predicate,
                    object,
                },
            );
        }
    }
    for v in variables {
        f.out.push(Triple {
            subject: Node::Iri(Iri::Pkn(v)),
            predicate: rdf_type(),
            object: Node::Iri(Iri::pkn("Variable")),
        });
    }
    f.out
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Node(n) => write!(out, "{n}").unwrap(),
        Value::List(items) => {
            out.push('(');
            for item in items {
                out.push(' ');
                write_value(out, item);
            }
            out.push_str(" )");
        }
    }
}

/// Turtle text with `pkn:` and `rdf:` prefixes and collection syntax.
pub fn to_turtle(graph: &KnowledgeGraph) -> String {
    let (blocks, variables) = export(graph);
    let mut out = String::new();
    writeln!(out, "@prefix pkn: <{NAMESPACE}> .").unwrap();
    writeln!(out, "@prefix rdf: <{RDF_NAMESPACE}> .").unwrap();
    for block in blocks {
        writeln!(out).unwrap();
        write!(out, "_:{} a pkn:{}", block.subject, block.class).unwrap();
        for (predicate, value) in block.properties {
            write!(out, " ;\n    {predicate} ").unwrap();
            write_value(&mut out, &value);
        }
        out.push_str(" .\n");
    }
    if !variables.is_empty() {
        writeln!(out).unwrap();
        for v in variables {
            writeln!(out, "pkn:{v} a pkn:Variable .").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_document;

    fn graph(text: &str) -> KnowledgeGraph {
        KnowledgeGraph::from_statements(parse_document(text).unwrap()).unwrap()
    }

    #[test]
    fn flowers_triples() {
        let g = graph("flowers of Netherlands includes daffodils, tulips (certainty high)\n");
        let triples = to_triples(&g);
        assert_eq!(triples.len(), 10);
        let statement_level = triples
            .iter()
            .filter(|t| t.subject == Node::Blank("b0".into()))
            .count();
        assert_eq!(statement_level, 6);
        assert!(triples.contains(&Triple {
            subject: Node::Blank("b0".into()),
            predicate: Iri::pkn("certainty"),
            object: Node::String("high".into()),
        }));
    }

    #[test]
    fn prefixed_relation() {
        let g = graph("Paul close:friend-of John\n");
        let triples = to_triples(&g);
        assert_eq!(triples.len(), 4);
        assert_eq!(triples[2].object, Node::Iri(Iri::pkn("close%3Afriend-of")));
    }

    #[test]
    fn empty_graph_is_header_only() {
        let g = KnowledgeGraph::new();
        assert!(to_triples(&g).is_empty());
        let ttl = to_turtle(&g);
        assert!(ttl.lines().all(|l| l.starts_with("@prefix")));
    }

    #[test]
    fn flowers_turtle() {
        let g = graph("flowers of Netherlands includes daffodils, tulips (certainty high)\n");
        let ttl = to_turtle(&g);
        assert!(ttl.contains(
            "_:b0 a pkn:Property ;\n    pkn:descriptor pkn:flowers ;\n    pkn:argument pkn:Netherlands ;\n    pkn:operator pkn:includes ;\n    pkn:referent ( pkn:daffodils pkn:tulips ) ;\n    pkn:certainty \"high\" .\n"
        ));
    }

    #[test]
    fn implication_and_analogy() {
        let g = graph("weather of ?place includes rainy implies weather of ?place includes cloudy (strength high, inverse low)\ndog:puppy::cat:?\n");
        let ttl = to_turtle(&g);
        assert!(ttl.contains("pkn:variables ( pkn:%3Fplace )"));
        assert!(ttl.contains("pkn:antecedents ( _:b1 )"));
        assert!(ttl.contains("pkn:consequents ( _:b2 )"));
        assert!(ttl.contains("_:b3 a pkn:Analogy"));
        assert!(ttl.contains("pkn:d pkn:%3F ;") || ttl.contains("pkn:d pkn:%3F ."));
        assert!(ttl.contains("pkn:%3F a pkn:Variable ."));
    }

    #[test]
    fn nested_sub_graphs_preorder() {
        let g = graph("Mary believes {{John says {John loves Joan}} is-a lie}\n");
        let triples = to_triples(&g);
        let blanks: BTreeSet<_> = triples
            .iter()
            .filter_map(|t| match &t.subject {
                Node::Blank(b) if b.starts_with('b') => Some(b.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(blanks.len(), 4);
        assert_eq!(triples[3].object, Node::Blank("b1".into()));
    }

    #[test]
    fn local_name_encoding() {
        assert_eq!(encode_local("close:friend-of"), "close%3Afriend-of");
        assert_eq!(encode_local("?x"), "%3Fx");
        assert_eq!(encode_local("age-at-death"), "age-at-death");
        assert_eq!(encode_local("-x"), "%2Dx");
    }
}
