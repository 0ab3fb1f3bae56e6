//! Character cursor with line/column tracking, shared by the text parsers.

use std::collections::HashMap;

use super::ParseError;
use crate::rdf::BlankNode;

pub(crate) struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Scanner {
    pub fn new(text: &str) -> Self {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        Self {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    pub fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    /// Case-insensitive keyword check that also requires a delimiter after.
    pub fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|p| p.eq_ignore_ascii_case(&c)))
            && self
                .peek_at(n)
                .is_none_or(|c| c.is_whitespace() || c == '<' || c == '#')
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::syntax(self.line, self.column, message)
    }

    pub fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some('\n') | None if expected == "'.'" => self.error("missing terminating '.'"),
            Some(c) => self.error(format!("expected {expected}, found {c:?}")),
            None => self.error(format!("expected {expected}, found end of input")),
        }
    }

    /// Skips spaces and tabs only.
    pub fn skip_inline_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
        }
    }

    /// Skips all whitespace and `#` comments.
    pub fn skip_ws_and_comments(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    /// Reads `<...>` content with `\u`/`\U` escapes decoded.
    pub fn read_iri_ref(&mut self) -> Result<String, ParseError> {
        self.expect('<')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.read_hex(4)?),
                    Some('U') => out.push(self.read_hex(8)?),
                    _ => return Err(self.error("invalid escape in IRI")),
                },
                Some(c) if c == '\n' || c == '<' || c == '"' || c == ' ' => {
                    return Err(self.error(format!("character {c:?} not allowed in IRI")))
                }
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
    }

    pub fn read_hex(&mut self, digits: usize) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error("invalid hex escape"))?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.error("escape is not a valid code point"))
    }

    /// Decodes a string escape after the backslash has been consumed.
    pub fn read_string_escape(&mut self) -> Result<char, ParseError> {
        match self.bump() {
            Some('t') => Ok('\t'),
            Some('b') => Ok('\u{8}'),
            Some('n') => Ok('\n'),
            Some('r') => Ok('\r'),
            Some('f') => Ok('\u{c}'),
            Some('"') => Ok('"'),
            Some('\'') => Ok('\''),
            Some('\\') => Ok('\\'),
            Some('u') => self.read_hex(4),
            Some('U') => self.read_hex(8),
            _ => Err(self.error("invalid string escape")),
        }
    }

    pub fn read_langtag(&mut self) -> String {
        let mut tag = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                tag.push(c);
                self.bump();
            } else {
                break;
            }
        }
        tag
    }

    /// Reads the name after `_:`.
    pub fn read_bnode_label(&mut self) -> Result<String, ParseError> {
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        if label.is_empty() {
            return Err(self.error("empty blank node label"));
        }
        Ok(label)
    }
}

/// Maps document labels to fresh `b<n>` labels in order of appearance.
#[derive(Default)]
pub(crate) struct BlankNodes {
    by_label: HashMap<String, BlankNode>,
    counter: usize,
}

impl BlankNodes {
    pub fn named(&mut self, label: &str) -> BlankNode {
        if let Some(b) = self.by_label.get(label) {
            return b.clone();
        }
        let b = self.fresh();
        self.by_label.insert(label.to_string(), b.clone());
        b
    }

    pub fn fresh(&mut self) -> BlankNode {
        let b = BlankNode::new(format!("b{}", self.counter)).expect("generated label is valid");
        self.counter += 1;
        b
    }
}
