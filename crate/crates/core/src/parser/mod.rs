//! Lexer, recursive-descent parser and canonical serializer for PKN text.

mod lexer;
mod parse;
mod serialize;

pub use lexer::{lex, tokenize, LexError, Token, TokenKind, KEYWORDS};
pub use parse::{
    parse_condition, parse_document, parse_items, parse_query, parse_statement, Item, Located,
    ParseError, ParseErrorKind,
};
pub use serialize::{serialize_document, serialize_term};
