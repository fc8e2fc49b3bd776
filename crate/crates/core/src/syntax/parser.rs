//! Recursive-descent parser for descriptions and `.dsr` model files.
//!
//! Precedence, loosest first: `-` (difference), `|` (union), juxtaposition or
//! `&` (intersection), `.s` (projection). All binary forms associate to the
//! left. Fillers of `has_value_in` slots and QGC regions are read in region
//! mode, where a name denotes a region and a name after a number is a unit.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::ast::*;
use super::lexer::{lex, Comment, Span, Token, TokenKind};
use crate::model::{ElementBody, ElementKind, QualityForm};
use crate::num::Rational;
use crate::operators::{
    DeUniversalizeArgs, FocusArgs, FocusMode, OperatorArgs, OperatorKind, ScaleDirection,
    ScaleFactor, Strength,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParseErrorKind {
    Lex,
    Syntax,
    /// Valid in the wider language but not implemented (mathematical bounds).
    NotSupported,
    DuplicateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
    pub message: String,
    /// Token descriptions that would have been accepted at `span`.
    pub expected: Vec<String>,
}

/// Result of parsing a model file: everything that parsed, plus the errors.
#[derive(Debug, Clone, Default)]
pub struct ParsedFile {
    pub ast: ModelFileAst,
    pub errors: Vec<ParseError>,
}

impl ParsedFile {
    pub fn into_result(self) -> Result<ModelFileAst, Vec<ParseError>> {
        if self.errors.is_empty() {
            Ok(self.ast)
        } else {
            Err(self.errors)
        }
    }
}

type PResult<T> = Result<T, ParseError>;

pub fn parse_description(tokens: &[Token]) -> Result<Description, ParseError> {
    let mut p = Parser::new(tokens.to_vec(), eof_span_of(tokens));
    let d = p.desc(false)?;
    if p.peek().is_some() {
        return Err(p.unexpected(&["end of description"]));
    }
    Ok(d)
}

pub fn parse_description_str(text: &str) -> Result<Description, ParseError> {
    let lexed = lex(text);
    if let Some(e) = lexed.errors.into_iter().next() {
        return Err(ParseError {
            span: e.span,
            kind: ParseErrorKind::Lex,
            message: e.message,
            expected: Vec::new(),
        });
    }
    let mut p = Parser::new(lexed.tokens, eof_span(text));
    let d = p.desc(false)?;
    if p.peek().is_some() {
        return Err(p.unexpected(&["end of description"]));
    }
    Ok(d)
}

pub fn parse_model_file(text: &str) -> ParsedFile {
    let lexed = lex(text);
    let mut errors: Vec<ParseError> = lexed
        .errors
        .into_iter()
        .map(|e| ParseError {
            span: e.span,
            kind: ParseErrorKind::Lex,
            message: e.message,
            expected: Vec::new(),
        })
        .collect();
    let mut p = Parser::new(lexed.tokens, eof_span(text));
    let mut decls: Vec<(Declaration, usize)> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    while p.peek().is_some() {
        let start = p.span();
        match p.declaration() {
            Ok(item) => {
                let end = p.prev_end();
                let span = start.to(p.prev_span());
                if let Some(id) = item.declared_id() {
                    if !seen.insert(id.to_owned()) {
                        errors.push(ParseError {
                            span,
                            kind: ParseErrorKind::DuplicateId,
                            message: format!("duplicate identifier `{id}`"),
                            expected: Vec::new(),
                        });
                    }
                }
                decls.push((
                    Declaration {
                        item,
                        span,
                        comments: Vec::new(),
                    },
                    end,
                ));
            }
            Err(e) => {
                errors.push(e);
                p.recover();
            }
        }
    }
    errors.extend(p.errors);
    errors.sort_by_key(|e| (e.span.start, e.span.end));
    let ast = attach_comments(decls, lexed.comments);
    ParsedFile { ast, errors }
}

fn attach_comments(decls: Vec<(Declaration, usize)>, comments: Vec<Comment>) -> ModelFileAst {
    let mut comments = comments.into_iter().peekable();
    let mut declarations = Vec::with_capacity(decls.len());
    for (mut decl, end) in decls {
        while let Some(c) = comments.next_if(|c| c.span.start < end) {
            decl.comments.push(c.text);
        }
        declarations.push(decl);
    }
    ModelFileAst {
        declarations,
        trailing_comments: comments.map(|c| c.text).collect(),
    }
}

fn eof_span(text: &str) -> Span {
    let line = text.matches('\n').count() as u32 + 1;
    let last = text.rsplit('\n').next().unwrap_or("");
    Span {
        start: text.len(),
        end: text.len(),
        line,
        col: last.chars().count() as u32 + 1,
    }
}

fn eof_span_of(tokens: &[Token]) -> Span {
    match tokens.last() {
        Some(t) => Span {
            start: t.span.end,
            end: t.span.end,
            line: t.span.line,
            col: t.span.col + (t.span.end - t.span.start) as u32,
        },
        None => Span::default(),
    }
}

/// True for descriptions built only from regions.
pub(crate) fn region_valued(d: &Description) -> bool {
    match d {
        Description::Region(_) => true,
        Description::And(l, r) | Description::Or(l, r) | Description::Diff(l, r) => {
            region_valued(l) && region_valued(r)
        }
        _ => false,
    }
}

const ELEMENT_KEYWORDS: [&str; 9] = ["goal", "fg", "qg", "ctg", "f", "fc", "qc", "sc", "da"];
/// Keywords of the non-element declarations; `disjoint (A | B), C.` is not an operator call.
const DECL_KEYWORDS: [&str; 6] = ["axiom", "disjoint", "dimension", "part", "factor", "conflict"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: Span,
    /// Non-fatal errors found while the parse carried on.
    errors: Vec<ParseError>,
}

impl Parser {
    fn new(toks: Vec<Token>, eof: Span) -> Self {
        Parser {
            toks,
            pos: 0,
            eof,
            errors: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.kind_at(0)
    }

    fn kind_at(&self, k: usize) -> Option<&TokenKind> {
        self.toks.get(self.pos + k).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.eof, |t| t.span)
    }

    fn prev_span(&self) -> Span {
        match self.pos {
            0 => self.span(),
            n => self.toks[n - 1].span,
        }
    }

    fn prev_end(&self) -> usize {
        self.prev_span().end
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Some(TokenKind::Ident(w)) if w == word)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = match self.peek() {
            Some(k) => k.describe(),
            None => "end of input".to_string(),
        };
        let message = match expected {
            [] => format!("unexpected {found}"),
            [one] => format!("expected {one}, found {found}"),
            many => format!("expected one of {}, found {found}", many.join(", ")),
        };
        ParseError {
            span: self.span(),
            kind: ParseErrorKind::Syntax,
            message,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn invalid(&self, span: Span, message: impl Into<String>) -> ParseError {
        ParseError {
            span,
            kind: ParseErrorKind::Syntax,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn not_supported(&self, span: Span) -> ParseError {
        ParseError {
            span,
            kind: ParseErrorKind::NotSupported,
            message: "mathematical bound expressions are not supported; use a number".to_string(),
            expected: Vec::new(),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Span> {
        if self.at(&kind) {
            let span = self.span();
            self.pos += 1;
            Ok(span)
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        if self.at_word(word) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{word}`")]))
        }
    }

    /// Skips past the next declaration terminator.
    fn recover(&mut self) {
        while let Some(t) = self.bump() {
            if t.kind == TokenKind::Dot {
                break;
            }
        }
    }

    // ---- descriptions ----

    fn desc(&mut self, region: bool) -> PResult<Description> {
        let mut left = self.union(region)?;
        while self.at(&TokenKind::Minus) {
            let span = self.span();
            self.pos += 1;
            let right = self.union(region)?;
            left = self.combine(Description::diff(left, right), span)?;
        }
        Ok(left)
    }

    fn union(&mut self, region: bool) -> PResult<Description> {
        let mut left = self.intersection(region)?;
        loop {
            let span = self.span();
            if self.eat(&TokenKind::Pipe) || self.eat_word_op("or") {
                let right = self.intersection(region)?;
                left = self.combine(Description::or(left, right), span)?;
            } else {
                return Ok(left);
            }
        }
    }

    fn intersection(&mut self, region: bool) -> PResult<Description> {
        let mut left = self.postfix(region)?;
        loop {
            let span = self.span();
            if self.eat(&TokenKind::Amp) || self.eat_word_op("and") || self.starts_primary_at(0) {
                let right = self.postfix(region)?;
                left = self.combine(Description::and(left, right), span)?;
            } else {
                return Ok(left);
            }
        }
    }

    fn combine(&self, d: Description, span: Span) -> PResult<Description> {
        if let Description::And(l, r) | Description::Or(l, r) | Description::Diff(l, r) = &d {
            if region_valued(l) != region_valued(r) {
                return Err(self.invalid(span, "cannot combine a region with a concept"));
            }
        }
        Ok(d)
    }

    fn word_op_at(&self, k: usize) -> Option<&str> {
        match (self.kind_at(k), self.kind_at(k + 1), self.kind_at(k + 2)) {
            (Some(TokenKind::LParen), Some(TokenKind::Ident(w)), Some(TokenKind::RParen))
                if w == "and" || w == "or" =>
            {
                Some(w.as_str())
            }
            _ => None,
        }
    }

    fn eat_word_op(&mut self, word: &str) -> bool {
        if self.word_op_at(0) == Some(word) {
            self.pos += 3;
            true
        } else {
            false
        }
    }

    fn starts_primary_at(&self, k: usize) -> bool {
        match self.kind_at(k) {
            Some(TokenKind::Ident(_) | TokenKind::Lt | TokenKind::LBrace | TokenKind::LBracket) => {
                true
            }
            Some(TokenKind::LParen) => self.word_op_at(k).is_none(),
            _ => false,
        }
    }

    fn postfix(&mut self, region: bool) -> PResult<Description> {
        let mut d = self.primary(region)?;
        while self.eat(&TokenKind::ProjDot) {
            let slot = self.ident("slot name")?;
            d = Description::proj(d, slot);
        }
        Ok(d)
    }

    fn primary(&mut self, region: bool) -> PResult<Description> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(if region {
                    Description::Region(RegionExpr::Named(name))
                } else {
                    Description::Atom(name)
                })
            }
            Some(TokenKind::Lt) => self.slot(),
            Some(TokenKind::LBrace) => self.braces(region),
            Some(TokenKind::LBracket) => self.interval().map(Description::Region),
            Some(TokenKind::Le | TokenKind::Ge) => self.bound_region(region).map(Description::Region),
            Some(TokenKind::LParen) if self.word_op_at(0).is_none() => {
                self.pos += 1;
                let d = self.desc(region)?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(d)
            }
            _ => Err(self.unexpected(&["a description"])),
        }
    }

    fn slot(&mut self) -> PResult<Description> {
        self.expect(TokenKind::Lt, "`<`")?;
        let name = self.ident("slot name")?;
        if self.at(&TokenKind::SubsumedBy) {
            // `<a:<b: C>>` lexes `:<` as one token; split it back.
            let span = self.span();
            self.toks[self.pos].kind = TokenKind::Colon;
            let lt = Span {
                start: span.start + 1,
                col: span.col + 1,
                ..span
            };
            self.toks.insert(self.pos + 1, Token { kind: TokenKind::Lt, span: lt });
        }
        self.expect(TokenKind::Colon, "`:`")?;
        let region = name == "has_value_in";
        let modifier = self.modifier(region)?;
        let filler = self.desc(region)?;
        self.expect(TokenKind::Gt, "`>`")?;
        Ok(Description::slot(name, modifier, filler))
    }

    fn modifier(&mut self, region: bool) -> PResult<CardModifier> {
        match self.peek() {
            Some(TokenKind::Ident(w)) if w == "ONLY" || w == "SOME" => {
                let word_is_filler = matches!(
                    self.kind_at(1),
                    None | Some(
                        TokenKind::Gt
                            | TokenKind::Pipe
                            | TokenKind::Minus
                            | TokenKind::Amp
                            | TokenKind::ProjDot
                    )
                );
                if word_is_filler {
                    return Ok(CardModifier::ExactlyOne);
                }
                let m = if w == "ONLY" { CardModifier::Only } else { CardModifier::Some };
                self.pos += 1;
                Ok(m)
            }
            Some(TokenKind::Le | TokenKind::Ge) if !region => {
                if matches!(self.kind_at(1), Some(TokenKind::Ident(_)))
                    && self.kind_at(2) == Some(&TokenKind::LParen)
                {
                    return Err(self.not_supported(self.span()));
                }
                if !matches!(self.kind_at(1), Some(TokenKind::Number(_))) || !self.starts_primary_at(2) {
                    return Ok(CardModifier::ExactlyOne);
                }
                let le = self.at(&TokenKind::Le);
                self.pos += 1;
                let n = self.count(if le { 0 } else { 1 })?;
                Ok(if le { CardModifier::AtMost(n) } else { CardModifier::AtLeast(n) })
            }
            Some(TokenKind::Number(_)) if !region => {
                if !self.starts_primary_at(1) {
                    return Err(self.unexpected(&["a description"]));
                }
                Ok(CardModifier::Exactly(self.count(1)?))
            }
            _ => Ok(CardModifier::ExactlyOne),
        }
    }

    fn count(&mut self, min: u32) -> PResult<u32> {
        let span = self.span();
        let value = match self.peek() {
            Some(TokenKind::Number(v)) => *v,
            _ => return Err(self.unexpected(&["a number"])),
        };
        self.pos += 1;
        let n = if value.is_integer() { value.to_integer().to_u32() } else { None };
        match n {
            Some(n) if n >= min => Ok(n),
            _ => Err(self.invalid(
                span,
                format!("cardinality must be an integer of at least {min}"),
            )),
        }
    }

    fn number(&mut self) -> PResult<Rational> {
        match self.peek() {
            Some(TokenKind::Number(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            Some(TokenKind::Ident(_)) if self.kind_at(1) == Some(&TokenKind::LParen) => {
                Err(self.not_supported(self.span()))
            }
            _ => Err(self.unexpected(&["a number"])),
        }
    }

    fn unit(&mut self, bare_ident: bool) -> Option<String> {
        match self.peek() {
            Some(TokenKind::Unit(u)) => {
                let u = normalize_unit(u);
                self.pos += 1;
                Some(u)
            }
            Some(TokenKind::Ident(u)) if bare_ident => {
                let u = normalize_unit(u);
                self.pos += 1;
                Some(u)
            }
            _ => None,
        }
    }

    /// `<= n` is `[0, n]`; `>= n` is open above.
    fn bound_region(&mut self, region: bool) -> PResult<RegionExpr> {
        let le = self.at(&TokenKind::Le);
        self.pos += 1;
        let n = self.number()?;
        let unit = self.unit(region);
        Ok(if le {
            RegionExpr::Interval {
                lo: Rational::zero(),
                hi: Some(n),
                unit,
            }
        } else {
            RegionExpr::Interval { lo: n, hi: None, unit }
        })
    }

    fn interval(&mut self) -> PResult<RegionExpr> {
        let open = self.expect(TokenKind::LBracket, "`[`")?;
        if let Some(TokenKind::Percent(lo)) = self.peek() {
            let lo = *lo;
            self.pos += 1;
            self.expect(TokenKind::Comma, "`,`")?;
            let hi = match self.peek() {
                Some(TokenKind::Percent(hi)) => *hi,
                _ => return Err(self.unexpected(&["a percentage"])),
            };
            self.pos += 1;
            let close = self.expect(TokenKind::RBracket, "`]`")?;
            let zero = Rational::zero();
            let one = Rational::from_integer(1);
            if lo < zero || hi > one || lo > hi {
                return Err(self.invalid(open.to(close), "percent range must satisfy 0% <= lo <= hi <= 100%"));
            }
            return Ok(RegionExpr::Percent { lo, hi });
        }
        let lo = self.number()?;
        self.expect(TokenKind::Comma, "`,`")?;
        let hi = self.number()?;
        let unit = self.unit(true);
        let close = self.expect(TokenKind::RBracket, "`]`")?;
        if lo > hi {
            return Err(self.invalid(open.to(close), "interval lower bound exceeds upper bound"));
        }
        Ok(RegionExpr::Interval { lo, hi: Some(hi), unit })
    }

    fn braces(&mut self, region: bool) -> PResult<Description> {
        let open = self.expect(TokenKind::LBrace, "`{`")?;
        let mut items: Vec<Literal> = Vec::new();
        loop {
            let item = match self.peek() {
                Some(TokenKind::Ident(s)) => Literal::Symbol(s.clone()),
                Some(TokenKind::Number(n)) => Literal::Number(*n),
                Some(TokenKind::Str(s)) => Literal::Text(s.clone()),
                _ => return Err(self.unexpected(&["identifier", "number", "string"])),
            };
            self.pos += 1;
            items.push(item);
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        let close = self.expect(TokenKind::RBrace, "`}`")?;
        let all_symbols = items.iter().all(|l| matches!(l, Literal::Symbol(_)));
        if all_symbols && !region {
            let mut members = Vec::with_capacity(items.len());
            for l in items {
                if let Literal::Symbol(s) = l {
                    if members.contains(&s) {
                        return Err(self.invalid(open.to(close), format!("individual `{s}` listed twice")));
                    }
                    members.push(s);
                }
            }
            return Ok(Description::Enum(members));
        }
        Ok(Description::Region(RegionExpr::ValueSet(items)))
    }

    // ---- declarations ----

    fn declaration(&mut self) -> PResult<DeclItem> {
        let word = match self.peek() {
            Some(TokenKind::Ident(w)) => w.clone(),
            _ => return Err(self.unexpected(&["a declaration"])),
        };
        let item = if self.kind_at(1) == Some(&TokenKind::LParen) && !DECL_KEYWORDS.contains(&word.as_str()) {
            match word.parse::<OperatorKind>() {
                Ok(op) => {
                    self.pos += 1;
                    DeclItem::Application(self.application(op)?)
                }
                Err(()) => return Err(self.invalid(self.span(), format!("unknown operator `{word}`"))),
            }
        } else if ELEMENT_KEYWORDS.contains(&word.as_str()) {
            let kind: ElementKind = word.parse().expect("keyword");
            self.pos += 1;
            let id = self.ident("element identifier")?;
            self.expect(TokenKind::Eq, "`=`")?;
            let body = self.body(kind)?;
            DeclItem::Element { kind, id, body }
        } else {
            self.pos += 1;
            match word.as_str() {
                "axiom" => {
                    let lhs = self.desc(false)?;
                    self.expect(TokenKind::SubsumedBy, "`:<`")?;
                    let rhs = self.desc(false)?;
                    DeclItem::Axiom { lhs, rhs }
                }
                "disjoint" => {
                    let a = self.desc(false)?;
                    self.expect(TokenKind::Comma, "`,`")?;
                    let b = self.desc(false)?;
                    DeclItem::Disjoint(a, b)
                }
                "dimension" | "part" => {
                    let child = self.ident("identifier")?;
                    self.keyword("of")?;
                    let parent = self.ident("identifier")?;
                    if word == "dimension" {
                        DeclItem::Dimension { child, parent }
                    } else {
                        DeclItem::Part { child, parent }
                    }
                }
                "factor" => {
                    let name = self.ident("factor name")?;
                    let direction = if self.at_word("weakens") {
                        ScaleDirection::Weakens
                    } else if self.at_word("strengthens") {
                        ScaleDirection::Strengthens
                    } else {
                        return Err(self.unexpected(&["`weakens`", "`strengthens`"]));
                    };
                    self.pos += 1;
                    DeclItem::Factor { name, direction }
                }
                "conflict" => DeclItem::Conflict(self.id_set()?),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected(&["a declaration keyword"]));
                }
            }
        };
        self.expect(TokenKind::Dot, "`.`")?;
        Ok(item)
    }

    fn id_set(&mut self) -> PResult<Vec<String>> {
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut ids = Vec::new();
        if self.eat(&TokenKind::RBrace) {
            return Ok(ids);
        }
        loop {
            ids.push(self.ident("identifier")?);
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RBrace, "`}`")?;
        Ok(ids)
    }

    fn body(&mut self, kind: ElementKind) -> PResult<ElementBody> {
        if let Some(TokenKind::Str(text)) = self.peek() {
            let text = text.clone();
            self.pos += 1;
            return Ok(ElementBody::NLText(text));
        }
        if self.at_quality_form() {
            return self.quality_form().map(ElementBody::QualityForm);
        }
        let start = self.span();
        let lhs = self.desc(false)?;
        if self.eat(&TokenKind::SubsumedBy) {
            let rhs = self.desc(false)?;
            return Ok(ElementBody::SubsumptionForm { lhs, rhs });
        }
        if kind == ElementKind::F {
            if let Some(body) = self.function_form(&lhs, start)? {
                return Ok(body);
            }
        }
        Ok(ElementBody::Concept(lhs))
    }

    fn function_form(&self, d: &Description, start: Span) -> PResult<Option<ElementBody>> {
        let parts = d.conjuncts();
        let name = match parts[0] {
            Description::Atom(n) => n.clone(),
            _ => return Ok(None),
        };
        let mut slots = Vec::new();
        let mut names = BTreeSet::new();
        for p in &parts[1..] {
            match p {
                Description::Slot { slot, .. } => {
                    if !names.insert(slot.clone()) {
                        return Err(self.invalid(
                            start.to(self.prev_span()),
                            format!("slot `{slot}` appears twice in function `{name}`"),
                        ));
                    }
                    slots.push((*p).clone());
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(ElementBody::FunctionDesc { name, slots }))
    }

    /// `Ident ( ... ) ::`
    fn at_quality_form(&self) -> bool {
        if !matches!(self.peek(), Some(TokenKind::Ident(_))) || self.kind_at(1) != Some(&TokenKind::LParen) {
            return false;
        }
        let mut depth = 0usize;
        let mut k = 1;
        while let Some(t) = self.kind_at(k) {
            match t {
                TokenKind::LParen => depth += 1,
                TokenKind::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return self.kind_at(k + 1) == Some(&TokenKind::DoubleColon);
                    }
                }
                TokenKind::Dot => return false,
                _ => {}
            }
            k += 1;
        }
        false
    }

    fn quality_form(&mut self) -> PResult<QualityForm> {
        let quality = self.ident("quality name")?;
        self.expect(TokenKind::LParen, "`(`")?;
        let subject = self.desc(false)?;
        self.expect(TokenKind::RParen, "`)`")?;
        self.expect(TokenKind::DoubleColon, "`::`")?;
        let region = self.region_primary()?;
        let mut form = QualityForm::new(quality, subject, region);
        if self.at(&TokenKind::Lt) {
            let span = self.span();
            match self.slot()? {
                Description::Slot { slot, modifier: CardModifier::ExactlyOne, filler } if slot == "observed_by" => {
                    form.observer = Some(*filler);
                }
                _ => return Err(self.invalid(span.to(self.prev_span()), "expected `<observed_by: ...>`")),
            }
        }
        Ok(form)
    }

    fn region_primary(&mut self) -> PResult<RegionExpr> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let r = RegionExpr::Named(name.clone());
                self.pos += 1;
                Ok(r)
            }
            Some(TokenKind::LBracket) => self.interval(),
            Some(TokenKind::Le | TokenKind::Ge) => self.bound_region(true),
            Some(TokenKind::LBrace) => match self.braces(true)? {
                Description::Region(r) => Ok(r),
                _ => unreachable!("braces in region mode yield a value set"),
            },
            _ => Err(self.unexpected(&["a region"])),
        }
    }

    // ---- applications ----

    fn application(&mut self, op: OperatorKind) -> PResult<ApplicationDecl> {
        self.expect(TokenKind::LParen, "`(`")?;
        let (inputs, args) = match op {
            OperatorKind::Reduce | OperatorKind::Interpret | OperatorKind::Operationalize => {
                (vec![self.ident("element identifier")?], OperatorArgs::None)
            }
            OperatorKind::Resolve => {
                let ids = if self.at(&TokenKind::LBrace) {
                    self.id_set()?
                } else {
                    let mut ids = vec![self.ident("element identifier")?];
                    while self.eat(&TokenKind::Comma) {
                        ids.push(self.ident("element identifier")?);
                    }
                    ids
                };
                (ids, OperatorArgs::None)
            }
            OperatorKind::Focus => {
                let input = self.ident("element identifier")?;
                self.expect(TokenKind::Comma, "`,`")?;
                let mode = if self.at_word("quality") {
                    Some(FocusMode::Quality)
                } else if self.at_word("subject") {
                    Some(FocusMode::Subject)
                } else {
                    None
                };
                if mode.is_some() {
                    self.pos += 1;
                }
                let targets = self.id_set()?;
                (vec![input], OperatorArgs::Focus(FocusArgs { mode, targets }))
            }
            OperatorKind::ScaleUp | OperatorKind::ScaleDown => {
                let input = self.ident("element identifier")?;
                self.expect(TokenKind::Comma, "`,`")?;
                let factor = if self.eat(&TokenKind::LParen) {
                    let lo = self.number()?;
                    self.expect(TokenKind::Comma, "`,`")?;
                    let hi = self.number()?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    ScaleFactor::Quantitative { lo, hi }
                } else {
                    ScaleFactor::Qualitative(self.ident("scale factor")?)
                };
                (vec![input], OperatorArgs::Scale(factor))
            }
            OperatorKind::DeUniversalize => {
                let var = match self.peek() {
                    Some(TokenKind::Var(v)) => v.clone(),
                    _ => return Err(self.unexpected(&["a variable"])),
                };
                self.pos += 1;
                self.expect(TokenKind::Comma, "`,`")?;
                let input = self.ident("element identifier")?;
                self.expect(TokenKind::Comma, "`,`")?;
                let slot_path = self.var_path(&var)?;
                self.expect(TokenKind::Comma, "`,`")?;
                let pct = match self.peek() {
                    Some(TokenKind::Percent(p)) => *p,
                    _ => return Err(self.unexpected(&["a percentage"])),
                };
                self.pos += 1;
                (
                    vec![input],
                    OperatorArgs::DeUniversalize(DeUniversalizeArgs { var, slot_path, pct }),
                )
            }
            OperatorKind::Observe => {
                let input = self.ident("element identifier")?;
                self.expect(TokenKind::Comma, "`,`")?;
                let observer = self.desc(false)?;
                (vec![input], OperatorArgs::Observe { observer })
            }
        };
        self.expect(TokenKind::RParen, "`)`")?;
        self.expect(TokenKind::LBracket, "`[`")?;
        let strength = match self.peek() {
            Some(TokenKind::Ident(t)) => Strength::from_tag(t),
            _ => None,
        }
        .ok_or_else(|| self.unexpected(&["`s`", "`w`", "`e`"]))?;
        self.pos += 1;
        self.expect(TokenKind::RBracket, "`]`")?;
        self.expect(TokenKind::Eq, "`=`")?;
        let outputs = self.id_set()?;
        Ok(ApplicationDecl {
            op,
            inputs,
            args,
            strength,
            outputs,
        })
    }

    /// `<s1: <s2: ?X>>` gives `[s1, s2]`.
    fn var_path(&mut self, var: &str) -> PResult<Vec<String>> {
        let mut path = Vec::new();
        let mut depth = 0;
        let mut need_lt = true;
        loop {
            if need_lt {
                self.expect(TokenKind::Lt, "`<`")?;
            }
            path.push(self.ident("slot name")?);
            depth += 1;
            // `:<` is a colon followed by the next opening bracket.
            need_lt = !self.eat(&TokenKind::SubsumedBy);
            if !need_lt {
                continue;
            }
            self.expect(TokenKind::Colon, "`:`")?;
            if let Some(TokenKind::Var(v)) = self.peek() {
                if v != var {
                    return Err(self.invalid(self.span(), format!("expected `?{var}`, found `?{v}`")));
                }
                self.pos += 1;
                break;
            }
        }
        for _ in 0..depth {
            self.expect(TokenKind::Gt, "`>`")?;
        }
        Ok(path)
    }
}
