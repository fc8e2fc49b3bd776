use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::num::{parse_rational, Rational};

/// Location of a token or diagnostic: byte range plus 1-based line/column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end.max(self.start),
            line: self.line,
            col: self.col,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    /// `?X`
    Var(String),
    Number(Rational),
    /// `80%`, stored as `0.8`.
    Percent(Rational),
    Str(String),
    /// `(Sec.)` directly after a number; raw text without parentheses.
    Unit(String),
    Lt,
    Gt,
    Le,
    Ge,
    Colon,
    /// `:<`
    SubsumedBy,
    /// `::`
    DoubleColon,
    Comma,
    /// A period that ends a declaration.
    Dot,
    /// A period glued between two names, as in `F1.object`.
    ProjDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Pipe,
    Minus,
    Amp,
    Eq,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => alloc::format!("identifier `{s}`"),
            TokenKind::Var(s) => alloc::format!("variable `?{s}`"),
            TokenKind::Number(_) => "number".to_string(),
            TokenKind::Percent(_) => "percentage".to_string(),
            TokenKind::Str(_) => "string".to_string(),
            TokenKind::Unit(u) => alloc::format!("unit `({u})`"),
            other => alloc::format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Lt => "<",
            TokenKind::Gt => ">",
            TokenKind::Le => "<=",
            TokenKind::Ge => ">=",
            TokenKind::Colon => ":",
            TokenKind::SubsumedBy => ":<",
            TokenKind::DoubleColon => "::",
            TokenKind::Comma => ",",
            TokenKind::Dot | TokenKind::ProjDot => ".",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::Pipe => "|",
            TokenKind::Minus => "-",
            TokenKind::Amp => "&",
            TokenKind::Eq => "=",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

/// Tokens plus the `//` comments that were skipped between them.
#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub comments: Vec<Comment>,
    /// Lexical errors; the lexer skips the offending text and keeps going.
    pub errors: Vec<LexError>,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut lexed = lex(text);
    if lexed.errors.is_empty() {
        Ok(lexed.tokens)
    } else {
        Err(lexed.errors.swap_remove(0))
    }
}

pub fn lex(text: &str) -> Lexed {
    Lexer::new(text).run()
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '@'
}

struct Lexer<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    line: u32,
    col: u32,
    out: Lexed,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            chars: text.char_indices().collect(),
            pos: 0,
            line: 1,
            col: 1,
            out: Lexed::default(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.text.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        let o = self.offset();
        Span {
            start: o,
            end: o,
            line: self.line,
            col: self.col,
        }
    }

    fn finish(&self, start: Span) -> Span {
        Span {
            end: self.offset(),
            ..start
        }
    }

    fn push(&mut self, kind: TokenKind, start: Span) {
        let span = self.finish(start);
        self.out.tokens.push(Token { kind, span });
    }

    fn error(&self, span: Span, message: impl Into<String>) -> LexError {
        LexError {
            span,
            message: message.into(),
        }
    }

    fn prev_glues(&self) -> bool {
        // A projection dot must touch the preceding token.
        match self.out.tokens.last() {
            Some(t) => {
                t.span.end == self.offset()
                    && matches!(
                        t.kind,
                        TokenKind::Ident(_) | TokenKind::RParen | TokenKind::RBrace | TokenKind::Gt
                    )
            }
            None => false,
        }
    }

    fn run(mut self) -> Lexed {
        while let Some(c) = self.peek() {
            let start = self.here();
            if let Err(e) = self.step(c, start) {
                self.out.errors.push(e);
            }
        }
        self.out
    }

    fn step(&mut self, c: char, start: Span) -> Result<(), LexError> {
        match c {
            c if c.is_whitespace() => {
                self.bump();
            }
            '/' if self.peek_at(1) == Some('/') => {
                self.bump();
                self.bump();
                let from = self.offset();
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                let text = self.text[from..self.offset()].trim().to_string();
                let span = self.finish(start);
                self.out.comments.push(Comment { text, span });
            }
            '"' => self.string(start)?,
            '?' => {
                self.bump();
                let from = self.offset();
                if !self.peek().is_some_and(is_ident_start) {
                    return Err(self.error(self.finish(start), "expected a variable name after `?`"));
                }
                while self.peek().is_some_and(is_ident_continue) {
                    self.bump();
                }
                let name = self.text[from..self.offset()].to_string();
                self.push(TokenKind::Var(name), start);
            }
            c if c.is_ascii_digit() => self.number(start)?,
            c if is_ident_start(c) => {
                let from = self.offset();
                while self.peek().is_some_and(is_ident_continue) {
                    self.bump();
                }
                let name = self.text[from..self.offset()].to_string();
                self.push(TokenKind::Ident(name), start);
            }
            '(' if self.after_number() && self.try_unit(start) => {}
            _ => self.punct(c, start)?,
        }
        Ok(())
    }

    fn after_number(&self) -> bool {
        matches!(
            self.out.tokens.last().map(|t| &t.kind),
            Some(TokenKind::Number(_))
        )
    }

    /// `(Sec.)` after a number becomes a unit token; anything else is left alone.
    fn try_unit(&mut self, start: Span) -> bool {
        let mut k = 1;
        while self.peek_at(k).is_some_and(|c| c == ' ' || c == '\t') {
            k += 1;
        }
        if !self.peek_at(k).is_some_and(is_ident_start) {
            return false;
        }
        let name_from = k;
        while self.peek_at(k).is_some_and(is_ident_continue) {
            k += 1;
        }
        if self.peek_at(k) == Some('.') {
            k += 1;
        }
        let raw_to = k;
        while self.peek_at(k).is_some_and(|c| c == ' ' || c == '\t') {
            k += 1;
        }
        if self.peek_at(k) != Some(')') {
            return false;
        }
        let raw: String = self.chars[self.pos + name_from..self.pos + raw_to]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        for _ in 0..=k {
            self.bump();
        }
        self.push(TokenKind::Unit(raw), start);
        true
    }

    fn string(&mut self, start: Span) -> Result<(), LexError> {
        self.bump();
        let mut value = String::new();
        let mut bad_escape = None;
        loop {
            match self.bump() {
                None => return Err(self.error(self.finish(start), "unterminated string literal")),
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('n') => value.push('\n'),
                    Some(c @ ('"' | '\\')) => value.push(c),
                    Some(c) => {
                        value.push(c);
                        bad_escape.get_or_insert(c);
                    }
                    None => return Err(self.error(self.finish(start), "unterminated string literal")),
                },
                Some(c) => value.push(c),
            }
        }
        self.push(TokenKind::Str(value), start);
        match bad_escape {
            Some(c) => Err(self.error(self.finish(start), alloc::format!("unknown escape `\\{c}`"))),
            None => Ok(()),
        }
    }

    fn number(&mut self, start: Span) -> Result<(), LexError> {
        let from = self.offset();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        } else if self.peek() == Some('/') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        let lexeme = &self.text[from..self.offset()];
        let value = parse_rational(lexeme)
            .ok_or_else(|| self.error(self.finish(start), alloc::format!("invalid number `{lexeme}`")))?;
        if self.peek() == Some('%') {
            self.bump();
            self.push(TokenKind::Percent(value / Rational::from_integer(100)), start);
        } else {
            self.push(TokenKind::Number(value), start);
        }
        Ok(())
    }

    fn punct(&mut self, c: char, start: Span) -> Result<(), LexError> {
        let next = self.peek_at(1);
        let (kind, width) = match (c, next) {
            (':', Some('<')) => (TokenKind::SubsumedBy, 2),
            (':', Some(':')) => (TokenKind::DoubleColon, 2),
            (':', _) => (TokenKind::Colon, 1),
            ('<', Some('=')) => (TokenKind::Le, 2),
            ('>', Some('=')) => (TokenKind::Ge, 2),
            ('<', _) => (TokenKind::Lt, 1),
            ('>', _) => (TokenKind::Gt, 1),
            ('.', Some(n)) if is_ident_start(n) && self.prev_glues() => (TokenKind::ProjDot, 1),
            ('.', _) => (TokenKind::Dot, 1),
            (',', _) => (TokenKind::Comma, 1),
            ('(', _) => (TokenKind::LParen, 1),
            (')', _) => (TokenKind::RParen, 1),
            ('[', _) => (TokenKind::LBracket, 1),
            (']', _) => (TokenKind::RBracket, 1),
            ('{', _) => (TokenKind::LBrace, 1),
            ('}', _) => (TokenKind::RBrace, 1),
            ('|', _) => (TokenKind::Pipe, 1),
            ('-', _) => (TokenKind::Minus, 1),
            ('&', _) => (TokenKind::Amp, 1),
            ('=', _) => (TokenKind::Eq, 1),
            _ => {
                self.bump();
                return Err(self.error(self.finish(start), alloc::format!("unexpected character `{c}`")));
            }
        };
        for _ in 0..width {
            self.bump();
        }
        self.push(kind, start);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    fn id(s: &str) -> TokenKind {
        TokenKind::Ident(s.to_string())
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").unwrap().is_empty());
    }

    #[test]
    fn slot_description_tokens() {
        assert_eq!(
            kinds("Search <actor: User>"),
            vec![id("Search"), TokenKind::Lt, id("actor"), TokenKind::Colon, id("User"), TokenKind::Gt]
        );
    }

    #[test]
    fn interval_with_unit() {
        assert_eq!(
            kinds("[0, 30 (Sec.)]"),
            vec![
                TokenKind::LBracket,
                TokenKind::Number(Rational::from_integer(0)),
                TokenKind::Comma,
                TokenKind::Number(Rational::from_integer(30)),
                TokenKind::Unit("Sec.".to_string()),
                TokenKind::RBracket,
            ]
        );
    }

    #[test]
    fn projection_dot_versus_terminator() {
        assert_eq!(kinds("F1.object"), vec![id("F1"), TokenKind::ProjDot, id("object")]);
        assert_eq!(
            kinds("A :< B.\nqc"),
            vec![id("A"), TokenKind::SubsumedBy, id("B"), TokenKind::Dot, id("qc")]
        );
    }

    #[test]
    fn percent_and_fraction() {
        assert_eq!(kinds("80%"), vec![TokenKind::Percent(Rational::new(4, 5))]);
        assert_eq!(kinds("2/3"), vec![TokenKind::Number(Rational::new(2, 3))]);
    }

    #[test]
    fn comments_are_collected() {
        let l = lex("// hello\nA // tail\n");
        assert_eq!(l.tokens.len(), 1);
        assert_eq!(l.comments.len(), 2);
        assert_eq!(l.comments[0].text, "hello");
    }

    #[test]
    fn unterminated_string_has_span() {
        let err = tokenize("goal G = \"oops").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert_eq!(err.span.col, 10);
    }

    #[test]
    fn spans_track_lines() {
        let toks = tokenize("A\n  B").unwrap();
        assert_eq!((toks[1].span.line, toks[1].span.col), (2, 3));
    }
}
