//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | "true" | "false" | IDENT
//! ```

use super::{Formula, Vocabulary};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown atom `{name}` at offset {offset}")]
    UnknownAtom { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownAtom { offset, .. } => *offset,
        }
    }

    /// Same error with its offset moved by `delta`.
    pub fn shifted(self, delta: usize) -> Self {
        match self {
            ParseError::Syntax { offset, message } => ParseError::Syntax {
                offset: offset + delta,
                message,
            },
            ParseError::UnknownAtom { name, offset } => ParseError::UnknownAtom {
                name,
                offset: offset + delta,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Ident(&'a str),
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    /// End of input, or a character outside the formula alphabet.
    End,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Token at the current position and its byte length, without consuming.
    fn peek(&mut self) -> (Tok<'a>, usize, usize) {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let start = self.pos;
        let mut chars = rest.chars();
        let tok = match chars.next() {
            None => (Tok::End, 0),
            Some('!') => (Tok::Not, 1),
            Some('&') => (Tok::And, 1),
            Some('|') => (Tok::Or, 1),
            Some('(') => (Tok::LParen, 1),
            Some(')') => (Tok::RParen, 1),
            Some('-') if rest.starts_with("->") => (Tok::Arrow, 2),
            Some('<') if rest.starts_with("<->") => (Tok::DoubleArrow, 3),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let len = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                (Tok::Ident(&rest[..len]), len)
            }
            Some(_) => (Tok::End, 0),
        };
        (tok.0, start, tok.1)
    }

    fn bump(&mut self, len: usize) {
        self.pos += len;
    }
}

struct Parser<'a, 'v> {
    lex: Lexer<'a>,
    vocab: &'v Vocabulary,
}

impl Parser<'_, '_> {
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        loop {
            let (tok, _, len) = self.lex.peek();
            if tok != Tok::DoubleArrow {
                return Ok(lhs);
            }
            self.lex.bump(len);
            let rhs = self.imp()?;
            lhs = lhs.iff(rhs);
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        let (tok, _, len) = self.lex.peek();
        if tok == Tok::Arrow {
            self.lex.bump(len);
            let rhs = self.imp()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        loop {
            let (tok, _, len) = self.lex.peek();
            if tok != Tok::Or {
                return Ok(lhs);
            }
            self.lex.bump(len);
            lhs = lhs.or(self.and()?);
        }
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let (tok, _, len) = self.lex.peek();
            if tok != Tok::And {
                return Ok(lhs);
            }
            self.lex.bump(len);
            lhs = lhs.and(self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let (tok, start, len) = self.lex.peek();
        match tok {
            Tok::Not => {
                self.lex.bump(len);
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.lex.bump(len);
                let inner = self.formula()?;
                let (close, at, len) = self.lex.peek();
                if close != Tok::RParen {
                    return Err(ParseError::Syntax {
                        offset: at,
                        message: "expected `)`".into(),
                    });
                }
                self.lex.bump(len);
                Ok(inner)
            }
            Tok::Ident("true") => {
                self.lex.bump(len);
                Ok(Formula::top())
            }
            Tok::Ident("false") => {
                self.lex.bump(len);
                Ok(Formula::bottom())
            }
            Tok::Ident(name) => {
                let index = self
                    .vocab
                    .index_of(name)
                    .ok_or_else(|| ParseError::UnknownAtom {
                        name: name.to_string(),
                        offset: start,
                    })?;
                self.lex.bump(len);
                Ok(Formula::Atom(index))
            }
            _ => Err(ParseError::Syntax {
                offset: start,
                message: "expected a formula".into(),
            }),
        }
    }
}

/// Parses all of `text` as one formula.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let (formula, end) = parse_formula_prefix(text, vocab)?;
    if end < text.len() {
        let found = text[end..].chars().next().unwrap_or(' ');
        return Err(ParseError::Syntax {
            offset: end,
            message: format!("unexpected `{found}`"),
        });
    }
    Ok(formula)
}

/// Parses the longest formula at the start of `text`, returning it with the
/// byte offset where parsing stopped (trailing whitespace skipped). Used by
/// line formats that embed formulas between other punctuation.
pub fn parse_formula_prefix(
    text: &str,
    vocab: &Vocabulary,
) -> Result<(Formula, usize), ParseError> {
    let mut parser = Parser {
        lex: Lexer { text, pos: 0 },
        vocab,
    };
    let formula = parser.formula()?;
    parser.lex.skip_ws();
    Ok((formula, parser.lex.pos))
}
