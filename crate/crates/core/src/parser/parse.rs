use std::fmt;

use super::lexer::{lex, Token, TokenKind};
use crate::model::{
    AnalogyStatement, Condition, ImplicationStatement, Metadata, Name, Number, PropertyStatement,
    Qualitative, RelationStatement, Statement, Term,
};
use crate::query::{Quantifier, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Illegal character.
    Lex,
    Syntax,
    /// few/many/most query without a reference class.
    MissingFromClause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A top-level entry of a PKN document.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Statement(Statement),
    Query(Query),
}

/// A parsed value with the position of its first token.
#[derive(Debug, Clone, PartialEq)]
pub struct Located<T> {
    pub value: T,
    pub line: usize,
    pub column: usize,
}

type Result<T> = std::result::Result<T, ParseError>;

struct Cursor<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// Where errors at the end of the token slice are reported.
    end: (usize, usize),
}

impl<'t> Cursor<'t> {
    fn new(tokens: &'t [Token], end: (usize, usize)) -> Self {
        Self {
            tokens,
            pos: 0,
            end,
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn at_keyword(&self, word: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(word))
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn skip_newlines(&mut self) {
        while self.peek_kind() == Some(TokenKind::Newline) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let (line, column) = match self.peek() {
            Some(t) => (t.line, t.column),
            None => self.end,
        };
        ParseError {
            kind: ParseErrorKind::Syntax,
            message: message.into(),
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let message = match self.peek() {
            Some(t) if t.kind == TokenKind::Newline => "unexpected end of line".to_string(),
            Some(t) => format!("unexpected `{}`", t.lexeme),
            None => "unexpected end of input".to_string(),
        };
        self.error(message, expected)
    }

    fn expect(&mut self, kind: TokenKind, label: &str) -> Result<&'t Token> {
        if self.peek_kind() == Some(kind) {
            Ok(self.bump().expect("peeked"))
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<()> {
        if self.at_keyword(word) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{word}`")]))
        }
    }

    /// True if a token of `kind` (or keyword `word`) occurs outside any
    /// brackets in the remaining tokens.
    fn contains_top_level(&self, pred: impl Fn(&Token) -> bool) -> bool {
        let mut depth = 0usize;
        for t in &self.tokens[self.pos..] {
            match t.kind {
                TokenKind::LParen | TokenKind::LBrace => depth += 1,
                TokenKind::RParen | TokenKind::RBrace => depth = depth.saturating_sub(1),
                _ if depth == 0 && pred(t) => return true,
                _ => {}
            }
        }
        false
    }

    /// Index of the bracket closing the one at `open`, if present.
    fn matching(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.tokens.iter().enumerate().skip(open) {
            match t.kind {
                TokenKind::LParen | TokenKind::LBrace => depth += 1,
                TokenKind::RParen | TokenKind::RBrace => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        None
    }
}

/// Splits tokens into newline-separated segments, ignoring newlines nested
/// in brackets. Each segment carries the position of its terminator.
fn segments(tokens: &[Token], end: (usize, usize)) -> Vec<(&[Token], (usize, usize))> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        match t.kind {
            TokenKind::LParen | TokenKind::LBrace => depth += 1,
            TokenKind::RParen | TokenKind::RBrace => depth = depth.saturating_sub(1),
            TokenKind::Newline if depth == 0 => {
                if i > start {
                    out.push((&tokens[start..i], (t.line, t.column)));
                }
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < tokens.len() {
        out.push((&tokens[start..], end));
    }
    out
}

/// Position of the last character of `text`, or 1:1 for empty text.
fn last_position(text: &str) -> (usize, usize) {
    let mut pos = (1, 1);
    let (mut line, mut column) = (1, 1);
    for c in text.chars() {
        pos = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    pos
}

fn lex_error(tokens: &[Token]) -> Option<ParseError> {
    tokens
        .iter()
        .find(|t| t.kind == TokenKind::Invalid)
        .map(|t| ParseError {
            kind: ParseErrorKind::Lex,
            message: format!("illegal character or malformed number `{}`", t.lexeme),
            line: t.line,
            column: t.column,
            expected: Vec::new(),
        })
}

fn is_query_start(tokens: &[Token]) -> bool {
    matches!(tokens, [q, v, ..]
        if q.kind == TokenKind::Keyword
            && Quantifier::from_keyword(&q.lexeme).is_some()
            && v.kind == TokenKind::Variable)
}

fn parse_segment(tokens: &[Token], end: (usize, usize)) -> Result<Item> {
    if let Some(e) = lex_error(tokens) {
        return Err(e);
    }
    let mut c = Cursor::new(tokens, end);
    let item = if is_query_start(tokens) {
        Item::Query(query(&mut c)?)
    } else {
        Item::Statement(statement(&mut c)?)
    };
    finish(&c)?;
    Ok(item)
}

fn finish(c: &Cursor) -> Result<()> {
    if c.at_end() {
        Ok(())
    } else {
        Err(c.unexpected(&["end of statement"]))
    }
}

/// Parses a document of statements and queries, one per line (brackets may
/// span lines). A syntax error abandons only the statement it occurs in.
pub fn parse_items(text: &str) -> (Vec<Located<Item>>, Vec<ParseError>) {
    let tokens = lex(text);
    let mut items = Vec::new();
    let mut errors = Vec::new();
    for (segment, end) in segments(&tokens, last_position(text)) {
        match parse_segment(segment, end) {
            Ok(value) => items.push(Located {
                value,
                line: segment[0].line,
                column: segment[0].column,
            }),
            Err(e) => errors.push(e),
        }
    }
    (items, errors)
}

/// Parses a knowledge document. Queries are not statements and are
/// reported as errors here; use [`parse_items`] for mixed input.
pub fn parse_document(text: &str) -> std::result::Result<Vec<Statement>, Vec<ParseError>> {
    let (items, mut errors) = parse_items(text);
    let mut statements = Vec::new();
    for item in items {
        match item.value {
            Item::Statement(s) => statements.push(s),
            Item::Query(_) => errors.push(ParseError {
                kind: ParseErrorKind::Syntax,
                message: "query found where a statement was expected".into(),
                line: item.line,
                column: item.column,
                expected: vec!["statement".into()],
            }),
        }
    }
    errors.sort_by_key(|e| (e.line, e.column));
    if errors.is_empty() {
        Ok(statements)
    } else {
        Err(errors)
    }
}

fn single_segment(text: &str) -> Result<(Vec<Token>, (usize, usize))> {
    let tokens = lex(text);
    let end = last_position(text);
    let segs = segments(&tokens, end);
    match segs.len() {
        0 => Err(ParseError {
            kind: ParseErrorKind::Syntax,
            message: "empty input".into(),
            line: end.0,
            column: end.1,
            expected: Vec::new(),
        }),
        1 => Ok((segs[0].0.to_vec(), segs[0].1)),
        _ => {
            let t = &segs[1].0[0];
            Err(ParseError {
                kind: ParseErrorKind::Syntax,
                message: "more than one statement".into(),
                line: t.line,
                column: t.column,
                expected: vec!["end of input".into()],
            })
        }
    }
}

pub fn parse_statement(text: &str) -> Result<Statement> {
    let (tokens, end) = single_segment(text)?;
    match parse_segment(&tokens, end)? {
        Item::Statement(s) => Ok(s),
        Item::Query(_) => {
            Err(Cursor::new(&tokens, end)
                .error("expected a statement, found a query", &["statement"]))
        }
    }
}

pub fn parse_query(text: &str) -> Result<Query> {
    let (tokens, end) = single_segment(text)?;
    if !is_query_start(&tokens) {
        if let Some(e) = lex_error(&tokens) {
            return Err(e);
        }
        return Err(
            Cursor::new(&tokens, end).unexpected(&["which", "count", "few", "many", "most"])
        );
    }
    match parse_segment(&tokens, end)? {
        Item::Query(q) => Ok(q),
        Item::Statement(_) => unreachable!("query start checked"),
    }
}

/// Parses a single property or relation pattern, e.g. a supposition.
pub fn parse_condition(text: &str) -> Result<Condition> {
    let (tokens, end) = single_segment(text)?;
    if let Some(e) = lex_error(&tokens) {
        return Err(e);
    }
    let mut c = Cursor::new(&tokens, end);
    let cond = condition(&mut c, false)?;
    finish(&c)?;
    Ok(cond)
}

fn statement(c: &mut Cursor) -> Result<Statement> {
    if c.contains_top_level(|t| t.kind == TokenKind::DoubleColon) {
        return analogy(c).map(Statement::Analogy);
    }
    if c.contains_top_level(|t| t.is_keyword("implies")) {
        return implication(c).map(Statement::Implication);
    }
    Ok(condition(c, true)?.into())
}

fn implication(c: &mut Cursor) -> Result<ImplicationStatement> {
    let antecedents = conjunction(c)?;
    c.expect_keyword("implies")?;
    let consequents = conjunction(c)?;
    let metadata = if c.peek_kind() == Some(TokenKind::LParen) {
        metadata(c)?
    } else {
        Metadata::new()
    };
    Ok(ImplicationStatement {
        antecedents,
        consequents,
        metadata,
    })
}

fn conjunction(c: &mut Cursor) -> Result<Vec<Condition>> {
    let mut out = vec![condition(c, false)?];
    while c.at_keyword("and") {
        c.bump();
        out.push(condition(c, false)?);
    }
    Ok(out)
}

fn query(c: &mut Cursor) -> Result<Query> {
    let q_token = c.bump().expect("query start checked");
    let quantifier = Quantifier::from_keyword(&q_token.lexeme).expect("query start checked");
    let head_token = c.expect(TokenKind::Variable, "head variable")?;
    let head = head_token.lexeme[1..].to_string();
    if head.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            message: "query head must be a named variable".into(),
            line: head_token.line,
            column: head_token.column,
            expected: vec!["named variable".into()],
        });
    }
    c.expect_keyword("where")?;
    let conditions = conjunction(c)?;
    let from = if c.at_keyword("from") {
        c.bump();
        Some(conjunction(c)?)
    } else {
        None
    };
    finish(c)?;
    if from.is_none() && quantifier.fuzzy().is_some() {
        return Err(ParseError {
            kind: ParseErrorKind::MissingFromClause,
            message: format!("`{quantifier}` needs a `from` clause giving the reference class"),
            line: q_token.line,
            column: q_token.column,
            expected: vec!["`from`".into()],
        });
    }
    let mentions = |conds: &[Condition]| conds.iter().any(|k| k.variables().contains(&head));
    if !mentions(&conditions) || from.as_deref().is_some_and(|f| !mentions(f)) {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            message: format!("head variable `?{head}` must occur in every clause"),
            line: head_token.line,
            column: head_token.column,
            expected: Vec::new(),
        });
    }
    Ok(Query {
        quantifier,
        head,
        conditions,
        from,
    })
}

/// Property (`d of a op r, ...`) or relation (`s rel o`) with optional
/// scope and, for asserted statements, metadata.
fn condition(c: &mut Cursor, with_metadata: bool) -> Result<Condition> {
    let first = term(c, "term")?;
    let mut cond = if c.at_keyword("of") {
        c.bump();
        if !matches!(first, Term::Name(_) | Term::Variable(_)) {
            return Err(c.error("descriptor must be a name or variable", &[]));
        }
        let argument = term(c, "argument")?;
        let operator = match c.peek() {
            Some(t) if t.is_word() => {
                c.bump();
                t.lexeme.clone()
            }
            _ => return Err(c.unexpected(&["operator"])),
        };
        let mut referents = vec![term(c, "referent")?];
        while c.peek_kind() == Some(TokenKind::Comma) {
            c.bump();
            referents.push(term(c, "referent")?);
        }
        Condition::Property(PropertyStatement::new(first, argument, operator, referents))
    } else {
        let relationship = name(c, "relationship")?;
        let object = term(c, "object")?;
        Condition::Relation(RelationStatement::new(first, relationship, object))
    };
    if c.at_keyword("for") {
        c.bump();
        let mut scope = vec![Term::Name(name(c, "scope name")?)];
        while c.peek_kind() == Some(TokenKind::Comma) {
            c.bump();
            scope.push(Term::Name(name(c, "scope name")?));
        }
        match &mut cond {
            Condition::Property(p) => p.scope = scope,
            Condition::Relation(r) => r.scope = scope,
        }
    }
    if with_metadata && c.peek_kind() == Some(TokenKind::LParen) {
        let m = metadata(c)?;
        match &mut cond {
            Condition::Property(p) => p.metadata = m,
            Condition::Relation(r) => r.metadata = m,
        }
    }
    Ok(cond)
}

fn name(c: &mut Cursor, label: &str) -> Result<Name> {
    let mut parts = Vec::new();
    loop {
        match c.peek() {
            Some(t) if t.is_word() => {
                c.bump();
                parts.push(t.lexeme.clone());
            }
            _ => return Err(c.unexpected(&[label])),
        }
        if c.peek_kind() == Some(TokenKind::Colon) {
            c.bump();
        } else {
            break;
        }
    }
    let base = parts.pop().expect("at least one part");
    Ok(Name::with_prefixes(parts, base))
}

fn number(t: &Token) -> Term {
    let value: f64 = t.lexeme.parse().expect("lexer validated number");
    Term::Number(Number::new(value).expect("lexer validated finiteness"))
}

fn term(c: &mut Cursor, label: &str) -> Result<Term> {
    let Some(t) = c.peek() else {
        return Err(c.unexpected(&[label]));
    };
    match t.kind {
        TokenKind::Identifier | TokenKind::Keyword => Ok(Term::Name(name(c, label)?)),
        TokenKind::Number => {
            c.bump();
            Ok(number(t))
        }
        TokenKind::Variable if t.lexeme.len() > 1 => {
            c.bump();
            Ok(Term::Variable(t.lexeme[1..].to_string()))
        }
        TokenKind::Variable => Err(c.error(
            "anonymous `?` is only allowed as the last term of an analogy",
            &["named variable"],
        )),
        TokenKind::LBrace => sub_graph(c),
        _ => Err(c.unexpected(&[label])),
    }
}

fn sub_graph(c: &mut Cursor) -> Result<Term> {
    let open = c.pos;
    let Some(close) = c.matching(open) else {
        return Err(c.error("unclosed `{`", &["`}`"]));
    };
    let close_token = &c.tokens[close];
    if close_token.kind != TokenKind::RBrace {
        return Err(c.error("mismatched brackets", &["`}`"]));
    }
    let inner = &c.tokens[open + 1..close];
    let mut statements = Vec::new();
    for (segment, end) in segments(inner, (close_token.line, close_token.column)) {
        let mut sub = Cursor::new(segment, end);
        statements.push(statement(&mut sub)?);
        finish(&sub)?;
    }
    if statements.is_empty() {
        return Err(c.error("empty sub-graph", &["statement"]));
    }
    c.pos = close + 1;
    Ok(Term::SubGraph(statements))
}

fn analogy_term(c: &mut Cursor, label: &str, allow_anonymous: bool) -> Result<Term> {
    let Some(t) = c.peek() else {
        return Err(c.unexpected(&[label]));
    };
    let term = match t.kind {
        TokenKind::Identifier | TokenKind::Keyword => Term::name(t.lexeme.clone()),
        TokenKind::Number => number(t),
        TokenKind::Variable if t.lexeme.len() > 1 => Term::Variable(t.lexeme[1..].to_string()),
        TokenKind::Variable if allow_anonymous => Term::anonymous(),
        TokenKind::Variable => {
            return Err(c.error(
                "anonymous `?` is only allowed as the last term of an analogy",
                &["named variable"],
            ))
        }
        _ => return Err(c.unexpected(&[label])),
    };
    c.bump();
    Ok(term)
}

fn analogy(c: &mut Cursor) -> Result<AnalogyStatement> {
    let start = c.peek().map(|t| (t.line, t.column));
    let a = analogy_term(c, "analogy term", false)?;
    c.expect(TokenKind::Colon, "`:`")?;
    let b = analogy_term(c, "analogy term", false)?;
    c.expect(TokenKind::DoubleColon, "`::`")?;
    let cc = analogy_term(c, "analogy term", false)?;
    c.expect(TokenKind::Colon, "`:`")?;
    let d = analogy_term(c, "analogy term or `?`", true)?;
    let statement = AnalogyStatement::new(a, b, cc, d);
    if statement.terms().iter().filter(|t| t.is_variable()).count() > 1 {
        let (line, column) = start.unwrap_or(c.end);
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            message: "an analogy may contain at most one variable".into(),
            line,
            column,
            expected: Vec::new(),
        });
    }
    Ok(statement)
}

fn metadata(c: &mut Cursor) -> Result<Metadata> {
    c.expect(TokenKind::LParen, "`(`")?;
    let mut m = Metadata::new();
    loop {
        c.skip_newlines();
        let key = match c.peek() {
            Some(t) if t.is_word() => t,
            _ => return Err(c.unexpected(&["parameter name"])),
        };
        c.bump();
        let value = match c.peek() {
            Some(t) if t.is_word() => t,
            _ => return Err(c.unexpected(&["qualitative value"])),
        };
        let level: Qualitative = value.lexeme.parse().map_err(|_| {
            c.error(
                format!("`{}` is not a qualitative value", value.lexeme),
                &[
                    "none",
                    "very-low",
                    "low",
                    "medium",
                    "high",
                    "very-high",
                    "certain",
                ],
            )
        })?;
        c.bump();
        if !m.insert(key.lexeme.clone(), level) {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                message: format!("parameter `{}` given twice", key.lexeme),
                line: key.line,
                column: key.column,
                expected: Vec::new(),
            });
        }
        c.skip_newlines();
        match c.peek_kind() {
            Some(TokenKind::Comma) => {
                c.bump();
            }
            Some(TokenKind::RParen) => {
                c.bump();
                return Ok(m);
            }
            _ => return Err(c.unexpected(&["`,`", "`)`"])),
        }
    }
}
