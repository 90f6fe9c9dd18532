//! Line-oriented knowledge-base files.
//!
//! ```text
//! # comment
//! atoms a b c d
//! axiom d -> !b
//! fact c
//! default a : b / b
//! prob a = 0.8
//! prob b given a in [0.5, 0.9]
//! partition { a : 0.8 ; !a : 0.2 }
//! expert alice { a : 0.7 ; b : 0.4 }
//! ```
//!
//! The `atoms` line may appear anywhere; every other statement is parsed
//! against it. Each statement occupies one line.

use std::fmt;
use std::path::Path;

use ipw_core::credal::{CredalConstraint, ExpertAssessment};
use ipw_core::defaults::{DefaultError, DefaultRule, DefaultTheory};
use ipw_core::logic::{models_in, parse_formula_prefix, Formula, ParseError, Vocabulary, WorldSet};
use ipw_core::num::is_probability;
use ipw_core::policy::Partition;
use ipw_core::Scalar;
use thiserror::Error;

/// Names that would make `prob` lines ambiguous.
const RESERVED: [&str; 2] = ["given", "in"];

#[derive(Debug, Clone)]
pub struct KnowledgeBase<S> {
    pub vocab: Vocabulary,
    pub axioms: Vec<Formula>,
    pub facts: Vec<Formula>,
    pub partition: Option<Partition<S>>,
    pub constraints: Vec<CredalConstraint<S>>,
    pub defaults: Vec<DefaultRule>,
    pub experts: Vec<ExpertAssessment<S>>,
}

impl<S: Scalar> KnowledgeBase<S> {
    /// Worlds satisfying every axiom.
    pub fn worlds(&self) -> WorldSet {
        models_in(
            &Formula::conjunction(self.axioms.iter().cloned()),
            self.vocab.len(),
        )
    }

    pub fn theory(&self) -> Result<DefaultTheory, DefaultError> {
        DefaultTheory::new(
            self.vocab.clone(),
            self.facts.clone(),
            self.axioms.clone(),
            self.defaults.clone(),
        )
    }
}

/// A diagnostic with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("syntax error at {0}")]
    Syntax(Diagnostic),
    #[error("{0}")]
    Semantic(Diagnostic),
}

impl KbError {
    pub fn diagnostic(&self) -> Option<&Diagnostic> {
        match self {
            KbError::Io { .. } => None,
            KbError::Syntax(d) | KbError::Semantic(d) => Some(d),
        }
    }
}

pub fn load_kb<S: Scalar>(path: &Path) -> Result<KnowledgeBase<S>, KbError> {
    let text = std::fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_kb(&text)
}

/// Lines with comments removed, numbered from 1, blank lines dropped.
fn statements(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let code = line.split('#').next().unwrap_or("");
        (!code.trim().is_empty()).then_some((i + 1, code))
    })
}

pub fn parse_kb<S: Scalar>(text: &str) -> Result<KnowledgeBase<S>, KbError> {
    let mut vocab: Option<(usize, Vocabulary)> = None;
    for (line, code) in statements(text) {
        let mut cur = Cursor::new(code, line);
        if cur.keyword()? != "atoms" {
            continue;
        }
        if let Some((first, _)) = vocab {
            return Err(cur.semantic(format!("atoms already declared on line {first}")));
        }
        let mut names = Vec::new();
        while !cur.at_end() {
            let col = cur.column();
            let name = cur.ident()?;
            if RESERVED.contains(&name) {
                return Err(cur.semantic_at(col, format!("`{name}` is a reserved word")));
            }
            names.push(name);
        }
        let v = Vocabulary::new(names).map_err(|e| cur.semantic(e.to_string()))?;
        vocab = Some((line, v));
    }
    let Some((_, vocab)) = vocab else {
        return Err(KbError::Semantic(Diagnostic {
            line: 1,
            column: 1,
            message: "missing atoms declaration".into(),
        }));
    };

    let mut kb = KnowledgeBase {
        vocab,
        axioms: Vec::new(),
        facts: Vec::new(),
        partition: None,
        constraints: Vec::new(),
        defaults: Vec::new(),
        experts: Vec::new(),
    };
    let mut partition_line = None;
    for (line, code) in statements(text) {
        let mut cur = Cursor::new(code, line);
        let start = cur.column();
        match cur.keyword()? {
            "atoms" => continue,
            "axiom" => {
                let f = cur.formula(&kb.vocab)?;
                kb.axioms.push(f);
            }
            "fact" => {
                let f = cur.formula(&kb.vocab)?;
                kb.facts.push(f);
            }
            "default" => {
                let pre = cur.formula(&kb.vocab)?;
                cur.expect(":")?;
                let just_col = cur.column();
                let just = cur.formula(&kb.vocab)?;
                cur.expect("/")?;
                let cons = cur.formula(&kb.vocab)?;
                if just != cons {
                    return Err(cur.semantic_at(
                        just_col,
                        "only normal defaults are supported: justification must equal consequent"
                            .into(),
                    ));
                }
                kb.defaults.push(DefaultRule::normal(pre, cons));
            }
            "prob" => {
                let target = cur.formula(&kb.vocab)?;
                let given = if cur.eat_word("given") {
                    cur.formula(&kb.vocab)?
                } else {
                    Formula::top()
                };
                let (lo, hi) = if cur.eat("=") {
                    let p: S = cur.probability()?;
                    (p.clone(), p)
                } else if cur.eat_word("in") {
                    cur.expect("[")?;
                    let col = cur.column();
                    let lo: S = cur.probability()?;
                    cur.expect(",")?;
                    let hi: S = cur.probability()?;
                    cur.expect("]")?;
                    if lo > hi {
                        return Err(cur.semantic_at(col, format!("empty interval [{lo}, {hi}]")));
                    }
                    (lo, hi)
                } else {
                    return Err(cur.syntax("expected `given`, `=` or `in`"));
                };
                let c = CredalConstraint::new(target, given, lo, hi)
                    .map_err(|e| cur.semantic_at(start, e.to_string()))?;
                kb.constraints.push(c);
            }
            "partition" => {
                if let Some(first) = partition_line {
                    return Err(cur.semantic_at(
                        start,
                        format!("duplicate partition (first declared on line {first})"),
                    ));
                }
                let cells = cur.judgments(&kb.vocab)?;
                let p = Partition::new(cells).map_err(|e| cur.semantic_at(start, e.to_string()))?;
                kb.partition = Some(p);
                partition_line = Some(line);
            }
            "expert" => {
                let name = cur.ident()?.to_string();
                let judgments = cur.judgments(&kb.vocab)?;
                kb.experts.push(ExpertAssessment::new(name, judgments));
            }
            other => {
                return Err(cur.syntax_at(start, format!("unknown statement `{other}`")));
            }
        }
        cur.finish()?;
    }
    Ok(kb)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        let mut cur = Cursor { text, pos: 0, line };
        cur.skip_ws();
        cur
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn at_end(&self) -> bool {
        self.rest().is_empty()
    }

    fn diagnostic(&self, column: usize, message: String) -> Diagnostic {
        Diagnostic {
            line: self.line,
            column,
            message,
        }
    }

    fn syntax_at(&self, column: usize, message: String) -> KbError {
        KbError::Syntax(self.diagnostic(column, message))
    }

    fn syntax(&self, message: &str) -> KbError {
        self.syntax_at(self.column(), message.to_string())
    }

    fn semantic_at(&self, column: usize, message: String) -> KbError {
        KbError::Semantic(self.diagnostic(column, message))
    }

    fn semantic(&self, message: String) -> KbError {
        self.semantic_at(1, message)
    }

    fn ident(&mut self) -> Result<&'a str, KbError> {
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 || !rest.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return Err(self.syntax("expected an identifier"));
        }
        self.pos += len;
        let word = &rest[..len];
        self.skip_ws();
        Ok(word)
    }

    fn keyword(&mut self) -> Result<&'a str, KbError> {
        self.ident()
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            self.skip_ws();
            true
        } else {
            false
        }
    }

    /// Consumes `word` only when it is not the prefix of a longer identifier.
    fn eat_word(&mut self, word: &str) -> bool {
        let rest = self.rest();
        let boundary = rest[word.len().min(rest.len())..]
            .chars()
            .next()
            .is_none_or(|c| !(c.is_ascii_alphanumeric() || c == '_'));
        rest.starts_with(word) && boundary && self.eat(word)
    }

    fn expect(&mut self, token: &str) -> Result<(), KbError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{token}`")))
        }
    }

    fn finish(&self) -> Result<(), KbError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input"))
        }
    }

    fn formula(&mut self, vocab: &Vocabulary) -> Result<Formula, KbError> {
        let base = self.pos;
        match parse_formula_prefix(self.rest(), vocab) {
            Ok((f, end)) => {
                self.pos += end;
                Ok(f)
            }
            Err(e) => {
                let e = e.shifted(base);
                let column = self.text[..e.offset().min(self.text.len())].chars().count() + 1;
                Err(match e {
                    ParseError::Syntax { message, .. } => self.syntax_at(column, message),
                    ParseError::UnknownAtom { name, .. } => {
                        self.semantic_at(column, format!("unknown atom `{name}`"))
                    }
                })
            }
        }
    }

    fn number<S: Scalar>(&mut self) -> Result<(S, usize), KbError> {
        let column = self.column();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(rest.len());
        let literal = &rest[..len];
        let value = S::parse_decimal(literal)
            .ok_or_else(|| self.syntax_at(column, "expected a number".into()))?;
        self.pos += len;
        self.skip_ws();
        Ok((value, column))
    }

    fn probability<S: Scalar>(&mut self) -> Result<S, KbError> {
        let (p, column) = self.number::<S>()?;
        if !is_probability(&p) {
            return Err(self.semantic_at(column, format!("probability {p} outside [0, 1]")));
        }
        Ok(p)
    }

    /// `{ formula : NUM (; formula : NUM)* }`
    fn judgments<S: Scalar>(&mut self, vocab: &Vocabulary) -> Result<Vec<(Formula, S)>, KbError> {
        self.expect("{")?;
        let mut out = Vec::new();
        loop {
            let f = self.formula(vocab)?;
            self.expect(":")?;
            let p = self.probability()?;
            out.push((f, p));
            if self.eat("}") {
                return Ok(out);
            }
            self.expect(";")?;
        }
    }
}
