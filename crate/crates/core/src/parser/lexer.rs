use std::ops::Range;

/// Words with grammatical meaning in some position. They are contextual:
/// wherever the grammar expects a name, a keyword is accepted as one.
pub const KEYWORDS: &[&str] = &[
    "of",
    "includes",
    "is",
    "implies",
    "and",
    "for",
    "where",
    "from",
    "which",
    "count",
    "few",
    "many",
    "most",
    "is-a",
    "kind-of",
    "similar-to",
    "greater-than",
    "less-than",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    Variable,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    DoubleColon,
    Newline,
    /// A character that cannot start any token.
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte range in the source text.
    pub span: Range<usize>,
    /// 1-based line.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
}

impl Token {
    pub fn is_keyword(&self, word: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == word
    }

    /// Identifiers and keywords can both serve as names.
    pub fn is_word(&self) -> bool {
        matches!(self.kind, TokenKind::Identifier | TokenKind::Keyword)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct LexError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

struct Lexer<'a> {
    text: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|(_, c)| *c)
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars
            .peek()
            .map(|(i, _)| *i)
            .unwrap_or(self.text.len())
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_digits(&mut self) -> usize {
        let mut n = 0;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
            n += 1;
        }
        n
    }

    /// JSON number grammar: `-? (0 | [1-9][0-9]*) (. [0-9]+)? ([eE] [+-]? [0-9]+)?`.
    /// Returns false if the text is not a complete number.
    fn number(&mut self) -> bool {
        if self.peek() == Some('-') {
            self.bump();
        }
        match self.peek() {
            Some('0') => {
                self.bump();
            }
            Some(c) if c.is_ascii_digit() => {
                self.eat_digits();
            }
            _ => return false,
        }
        if self.peek() == Some('.') {
            self.bump();
            if self.eat_digits() == 0 {
                return false;
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if self.eat_digits() == 0 {
                return false;
            }
        }
        true
    }

    fn next_token(&mut self) -> Option<Token> {
        loop {
            match self.peek()? {
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '#' => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let start = self.offset();
        let (line, column) = (self.line, self.column);
        let c = self.peek()?;
        let kind = match c {
            '\n' => {
                self.bump();
                TokenKind::Newline
            }
            '(' | ')' | '{' | '}' | ',' => {
                self.bump();
                match c {
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    _ => TokenKind::Comma,
                }
            }
            ':' => {
                self.bump();
                if self.peek() == Some(':') {
                    self.bump();
                    TokenKind::DoubleColon
                } else {
                    TokenKind::Colon
                }
            }
            '?' => {
                self.bump();
                if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    while matches!(self.peek(), Some(c) if is_ident_continue(c)) {
                        self.bump();
                    }
                }
                TokenKind::Variable
            }
            c if c.is_ascii_digit()
                || (c == '-' && matches!(self.peek_second(), Some(d) if d.is_ascii_digit())) =>
            {
                let complete = self.number();
                let lexeme = &self.text[start..self.offset()];
                if complete && lexeme.parse::<f64>().is_ok_and(f64::is_finite) {
                    TokenKind::Number
                } else {
                    TokenKind::Invalid
                }
            }
            c if c.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(c) if is_ident_continue(c)) {
                    self.bump();
                }
                if KEYWORDS.contains(&&self.text[start..self.offset()]) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                }
            }
            _ => {
                self.bump();
                TokenKind::Invalid
            }
        };
        let end = self.offset();
        Some(Token {
            kind,
            lexeme: self.text[start..end].to_string(),
            span: start..end,
            line,
            column,
        })
    }
}

/// Lexes the whole text, emitting `Invalid` tokens for bad characters
/// instead of stopping.
pub fn lex(text: &str) -> Vec<Token> {
    let mut lexer = Lexer {
        text,
        chars: text.char_indices().peekable(),
        line: 1,
        column: 1,
    };
    std::iter::from_fn(|| lexer.next_token()).collect()
}

/// Lexes the whole text, failing on the first illegal character.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let tokens = lex(text);
    if let Some(bad) = tokens.iter().find(|t| t.kind == TokenKind::Invalid) {
        return Err(LexError {
            message: format!("unexpected `{}`", bad.lexeme),
            line: bad.line,
            column: bad.column,
        });
    }
    Ok(tokens)
}
