//! Independent checks over exported RDF: a reader for the Turtle subset the
//! exporter writes, and structural checks for collections and blank nodes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::{Node, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TurtleError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared prefix `{0}:`")]
    UndeclaredPrefix(String),
    #[error("blank node _:{0} is referenced but never described")]
    DanglingBlank(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollectionError {
    #[error("list cell {0} needs exactly one rdf:first and one rdf:rest")]
    MalformedCell(String),
    #[error("list starting at {0} does not end in rdf:nil")]
    Unterminated(String),
    #[error("list starting at {0} is cyclic")]
    Cyclic(String),
    #[error("blank node {0} is referenced but never described")]
    Dangling(String),
}

/// A triple in canonical text form: IRIs as `<...>`, blank nodes as
/// `_:label`, literals as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TextTriple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

const RDF_FIRST: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#first>";
const RDF_REST: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#rest>";
const RDF_NIL: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#nil>";
const RDF_TYPE: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

fn canonical(node: &Node) -> String {
    match node {
        Node::Iri(i) => format!("<{}>", i.full()),
        other => other.to_string(),
    }
}

impl From<&Triple> for TextTriple {
    fn from(t: &Triple) -> Self {
        TextTriple {
            subject: canonical(&t.subject),
            predicate: format!("<{}>", t.predicate.full()),
            object: canonical(&t.object),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Prefix,
    Iri(String),
    PName(String, String),
    Blank(String),
    A,
    Str(String),
    Num(String),
    Punct(char),
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn err(&self, message: impl Into<String>) -> TurtleError {
        TurtleError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn local(&mut self) -> Result<String, TurtleError> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c == '%' {
                self.bump();
                let hex: String = (0..2).filter_map(|_| self.bump()).collect();
                if hex.len() != 2 || !hex.chars().all(|h| h.is_ascii_hexdigit()) {
                    return Err(self.err("bad percent escape"));
                }
                s.push('%');
                s.push_str(&hex);
            } else if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':') {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // a trailing dot ends the statement
        while s.ends_with('.') {
            s.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        Ok(s)
    }

    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, TurtleError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    self.take_while(|c| c != '\n');
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphabetic());
                if word != "prefix" {
                    return Err(self.err(format!("unsupported directive @{word}")));
                }
                Tok::Prefix
            }
            '<' => {
                self.bump();
                let iri = self.take_while(|c| c != '>' && !c.is_whitespace());
                if self.bump() != Some('>') {
                    return Err(self.err("unterminated IRI"));
                }
                Tok::Iri(iri)
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None | Some('\n') => return Err(self.err("unterminated string")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some('r') => s.push('\r'),
                            Some('t') => s.push('\t'),
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            _ => return Err(self.err("bad string escape")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            '_' if self.chars.get(self.pos + 1) == Some(&':') => {
                self.bump();
                self.bump();
                let label = self.local()?;
                if label.is_empty() {
                    return Err(self.err("empty blank node label"));
                }
                Tok::Blank(label)
            }
            '.' | ';' | ',' | '(' | ')' | '[' | ']' => {
                self.bump();
                Tok::Punct(c)
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let mut s = String::new();
                s.push(c);
                self.bump();
                s.push_str(&self.take_while(|c| c.is_ascii_digit()));
                if self.peek() == Some('.')
                    && self
                        .chars
                        .get(self.pos + 1)
                        .is_some_and(|c| c.is_ascii_digit())
                {
                    self.bump();
                    s.push('.');
                    s.push_str(&self.take_while(|c| c.is_ascii_digit()));
                }
                if matches!(self.peek(), Some('e' | 'E')) {
                    s.push('e');
                    self.bump();
                    if let Some(sign @ ('+' | '-')) = self.peek() {
                        s.push(sign);
                        self.bump();
                    }
                    s.push_str(&self.take_while(|c| c.is_ascii_digit()));
                }
                if s.parse::<f64>().is_err() {
                    return Err(self.err(format!("bad number `{s}`")));
                }
                Tok::Num(s)
            }
            c if c.is_alphabetic() || c == ':' => {
                let prefix = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '-');
                if self.peek() == Some(':') {
                    self.bump();
                    let local = self.local()?;
                    Tok::PName(prefix, local)
                } else if prefix == "a" {
                    Tok::A
                } else {
                    return Err(self.err(format!("unexpected word `{prefix}`")));
                }
            }
            c => return Err(self.err(format!("unexpected character `{c}`"))),
        };
        Ok(Some((tok, line, column)))
    }
}

struct Reader {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    prefixes: HashMap<String, String>,
    triples: Vec<TextTriple>,
    cells: usize,
}

impl Reader {
    fn err_at(&self, message: impl Into<String>) -> TurtleError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1));
        TurtleError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> Result<(), TurtleError> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_at(format!("expected `{c}`"))),
        }
    }

    fn iri(&self, prefix: &str, local: &str) -> Result<String, TurtleError> {
        let ns = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| TurtleError::UndeclaredPrefix(prefix.to_string()))?;
        Ok(format!("<{ns}{local}>"))
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        while let Some(t) = self.peek() {
            if *t == Tok::Prefix {
                self.pos += 1;
                let Some(Tok::PName(p, local)) = self.next() else {
                    return Err(self.err_at("expected a prefix name"));
                };
                if !local.is_empty() {
                    return Err(self.err_at("prefix name must end with `:`"));
                }
                let Some(Tok::Iri(ns)) = self.next() else {
                    return Err(self.err_at("expected a namespace IRI"));
                };
                self.expect('.')?;
                self.prefixes.insert(p, ns);
            } else {
                let subject = self.node(true)?;
                self.predicate_objects(&subject)?;
                self.expect('.')?;
            }
        }
        Ok(())
    }

    fn predicate_objects(&mut self, subject: &str) -> Result<(), TurtleError> {
        loop {
            let predicate = match self.next() {
                Some(Tok::A) => RDF_TYPE.to_string(),
                Some(Tok::Iri(i)) => format!("<{i}>"),
                Some(Tok::PName(p, l)) => self.iri(&p, &l)?,
                _ => {
                    self.pos -= 1;
                    return Err(self.err_at("expected a predicate"));
                }
            };
            loop {
                let object = self.node(false)?;
                self.triples.push(TextTriple {
                    subject: subject.to_string(),
                    predicate: predicate.clone(),
                    object,
                });
                if self.peek() == Some(&Tok::Punct(',')) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek() != Some(&Tok::Punct(';')) {
                return Ok(());
            }
            while self.peek() == Some(&Tok::Punct(';')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(Tok::Punct('.')) | None) {
                return Ok(());
            }
        }
    }

    fn node(&mut self, subject: bool) -> Result<String, TurtleError> {
        match self.next() {
            Some(Tok::Iri(i)) => Ok(format!("<{i}>")),
            Some(Tok::PName(p, l)) => self.iri(&p, &l),
            Some(Tok::Blank(b)) => Ok(format!("_:{b}")),
            Some(Tok::Punct('(')) => {
                let mut items = Vec::new();
                while self.peek() != Some(&Tok::Punct(')')) {
                    if self.peek().is_none() {
                        return Err(self.err_at("unterminated collection"));
                    }
                    items.push(self.node(false)?);
                }
                self.pos += 1;
                Ok(self.collection(items))
            }
            Some(Tok::Str(s)) if !subject => Ok(super::Node::String(s).to_string()),
            Some(Tok::Num(n)) if !subject => Ok(n),
            _ => {
                self.pos -= 1;
                Err(self.err_at(if subject {
                    "expected a subject"
                } else {
                    "expected an object"
                }))
            }
        }
    }

    fn collection(&mut self, items: Vec<String>) -> String {
        if items.is_empty() {
            return RDF_NIL.to_string();
        }
        let first = self.cells;
        self.cells += items.len();
        // '#' cannot occur in a written label, so generated cells never clash
        let label = |i: usize| format!("_:#{i}");
        let n = items.len();
        for (i, item) in items.into_iter().enumerate() {
            self.triples.push(TextTriple {
                subject: label(first + i),
                predicate: RDF_FIRST.to_string(),
                object: item,
            });
            self.triples.push(TextTriple {
                subject: label(first + i),
                predicate: RDF_REST.to_string(),
                object: if i + 1 == n {
                    RDF_NIL.to_string()
                } else {
                    label(first + i + 1)
                },
            });
        }
        label(first)
    }
}

/// Reads Turtle written in the exporter's subset: `@prefix` directives,
/// IRIs, prefixed names, blank node labels, `a`, string and numeric
/// literals and collections.
pub fn parse_turtle(text: &str) -> Result<Vec<TextTriple>, TurtleError> {
    let mut lexer = Lexer {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let mut reader = Reader {
        toks,
        pos: 0,
        prefixes: HashMap::new(),
        triples: Vec::new(),
        cells: 0,
    };
    reader.document()?;
    Ok(reader.triples)
}

/// Parses the document and checks that every blank node used as an
/// object is described somewhere.
pub fn check_turtle(text: &str) -> Result<Vec<TextTriple>, TurtleError> {
    let triples = parse_turtle(text)?;
    let subjects: BTreeSet<&str> = triples.iter().map(|t| t.subject.as_str()).collect();
    for t in &triples {
        if t.object.starts_with("_:") && !subjects.contains(t.object.as_str()) {
            return Err(TurtleError::DanglingBlank(t.object[2..].to_string()));
        }
    }
    Ok(triples)
}

/// Checks list cells and blank-node closure of exported triples.
pub fn check_triples(triples: &[Triple]) -> Result<(), CollectionError> {
    let text: Vec<TextTriple> = triples.iter().map(TextTriple::from).collect();
    check_text_triples(&text)
}

pub fn check_text_triples(triples: &[TextTriple]) -> Result<(), CollectionError> {
    let mut firsts: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut rests: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut subjects = BTreeSet::new();
    let mut list_objects = BTreeSet::new();
    for t in triples {
        subjects.insert(t.subject.as_str());
        match t.predicate.as_str() {
            RDF_FIRST => firsts.entry(&t.subject).or_default().push(&t.object),
            RDF_REST => rests.entry(&t.subject).or_default().push(&t.object),
            _ => {}
        }
    }
    let cells: BTreeSet<&str> = firsts.keys().chain(rests.keys()).copied().collect();
    for cell in &cells {
        if firsts.get(cell).map(Vec::len) != Some(1) || rests.get(cell).map(Vec::len) != Some(1) {
            return Err(CollectionError::MalformedCell(cell.to_string()));
        }
        list_objects.insert(rests[cell][0]);
    }
    for t in triples {
        if t.object.starts_with("_:") && !subjects.contains(t.object.as_str()) {
            return Err(CollectionError::Dangling(t.object.clone()));
        }
    }
    // chains from every head (a cell nobody rests into)
    for head in cells.iter().filter(|c| !list_objects.contains(*c)) {
        let mut seen = BTreeSet::new();
        let mut at = *head;
        loop {
            if !seen.insert(at) {
                return Err(CollectionError::Cyclic(head.to_string()));
            }
            let next = rests[at][0];
            if next == RDF_NIL {
                break;
            }
            if !cells.contains(next) {
                return Err(CollectionError::Unterminated(head.to_string()));
            }
            at = next;
        }
    }
    // cells that are all reachable only through a cycle have no head
    let mut reached = BTreeSet::new();
    for head in cells.iter().filter(|c| !list_objects.contains(*c)) {
        let mut at = *head;
        while at != RDF_NIL {
            reached.insert(at);
            at = rests[at][0];
        }
    }
    if let Some(c) = cells.iter().find(|c| !reached.contains(*c)) {
        return Err(CollectionError::Cyclic(c.to_string()));
    }
    Ok(())
}

/// Replaces every list cell with a rendering of the list's contents, so
/// triple sets can be compared regardless of how cells were labelled.
pub fn normalize_lists(triples: &[TextTriple]) -> BTreeSet<TextTriple> {
    let mut first: HashMap<&str, &str> = HashMap::new();
    let mut rest: HashMap<&str, &str> = HashMap::new();
    for t in triples {
        match t.predicate.as_str() {
            RDF_FIRST => {
                first.insert(&t.subject, &t.object);
            }
            RDF_REST => {
                rest.insert(&t.subject, &t.object);
            }
            _ => {}
        }
    }
    fn render(
        node: &str,
        first: &HashMap<&str, &str>,
        rest: &HashMap<&str, &str>,
        depth: usize,
    ) -> String {
        if !first.contains_key(node) || depth > first.len() {
            return node.to_string();
        }
        let mut items = Vec::new();
        let mut at = node;
        let mut steps = 0;
        while let (Some(f), Some(r)) = (first.get(at), rest.get(at)) {
            items.push(render(f, first, rest, depth + 1));
            at = r;
            steps += 1;
            if steps > first.len() {
                break;
            }
        }
        format!("({})", items.join(" "))
    }
    triples
        .iter()
        .filter(|t| !first.contains_key(t.subject.as_str()))
        .map(|t| TextTriple {
            subject: render(&t.subject, &first, &rest, 0),
            predicate: t.predicate.clone(),
            object: render(&t.object, &first, &rest, 0),
        })
        .collect()
}
