//! The textual language: lexer, parser and pretty-printer.

mod ast;
mod lexer;
mod parser;
mod render;

pub use ast::*;
pub use lexer::{lex, tokenize, Comment, LexError, Lexed, Span, Token, TokenKind};
pub use parser::{
    parse_description, parse_description_str, parse_model_file, ParseError, ParseErrorKind,
    ParsedFile,
};
pub use render::{render_body, render_declaration, render_description, render_model_file, render_quality_form, render_region};
