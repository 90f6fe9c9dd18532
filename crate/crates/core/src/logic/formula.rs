use std::collections::HashMap;
use std::fmt;

use super::LogicError;

/// Upper bound on vocabulary size; dense world sets hold `2^n` bits.
pub const MAX_ATOMS: usize = 20;

const RESERVED: [&str; 2] = ["true", "false"];

/// Ordered set of atom names. The position of an atom is its bit in a world index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new<I, S>(names: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = Vocabulary {
            atoms: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            vocab.push(name.into())?;
        }
        if vocab.atoms.is_empty() {
            return Err(LogicError::EmptyVocabulary);
        }
        Ok(vocab)
    }

    /// Returns a copy with `names` appended after the existing atoms, so
    /// formulas over `self` stay valid over the result.
    pub fn extended<I, S>(&self, names: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = self.clone();
        for name in names {
            vocab.push(name.into())?;
        }
        Ok(vocab)
    }

    fn push(&mut self, name: String) -> Result<(), LogicError> {
        if !is_identifier(&name) || RESERVED.contains(&name.as_str()) {
            return Err(LogicError::InvalidAtomName(name));
        }
        if self.index.contains_key(&name) {
            return Err(LogicError::DuplicateAtom(name));
        }
        if self.atoms.len() == MAX_ATOMS {
            return Err(LogicError::TooManyAtoms {
                requested: self.atoms.len() + 1,
            });
        }
        self.index.insert(name.clone(), self.atoms.len());
        self.atoms.push(name);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.atoms
    }

    pub fn name(&self, index: usize) -> &str {
        &self.atoms[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Formula for the named atom.
    pub fn atom(&self, name: &str) -> Result<Formula, LogicError> {
        self.index_of(name)
            .map(Formula::Atom)
            .ok_or_else(|| LogicError::UnknownAtom(name.to_string()))
    }

    /// Number of worlds, `2^len`.
    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    /// Errors if `formula` mentions an atom index outside this vocabulary.
    pub fn check(&self, formula: &Formula) -> Result<(), LogicError> {
        match formula.max_atom() {
            Some(i) if i >= self.len() => Err(LogicError::AtomOutOfRange {
                index: i,
                size: self.len(),
            }),
            _ => Ok(()),
        }
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Propositional formula over atom indices of some [`Vocabulary`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const(bool),
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn top() -> Self {
        Formula::Const(true)
    }

    pub fn bottom() -> Self {
        Formula::Const(false)
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Truth value under the assignment encoded by `world` (bit `i` = atom `i`).
    pub fn eval(&self, world: usize) -> bool {
        match self {
            Formula::Const(v) => *v,
            Formula::Atom(i) => (world >> i) & 1 == 1,
            Formula::Not(f) => !f.eval(world),
            Formula::And(l, r) => l.eval(world) && r.eval(world),
            Formula::Or(l, r) => l.eval(world) || r.eval(world),
            Formula::Implies(l, r) => !l.eval(world) || r.eval(world),
            Formula::Iff(l, r) => l.eval(world) == r.eval(world),
        }
    }

    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::Const(_) => None,
            Formula::Atom(i) => Some(*i),
            Formula::Not(f) => f.max_atom(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => match (l.max_atom(), r.max_atom()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }

    /// Rewrites atom indices through `map`.
    pub fn relabel(&self, map: &impl Fn(usize) -> usize) -> Formula {
        match self {
            Formula::Const(v) => Formula::Const(*v),
            Formula::Atom(i) => Formula::Atom(map(*i)),
            Formula::Not(f) => f.relabel(map).not(),
            Formula::And(l, r) => l.relabel(map).and(r.relabel(map)),
            Formula::Or(l, r) => l.relabel(map).or(r.relabel(map)),
            Formula::Implies(l, r) => l.relabel(map).implies(r.relabel(map)),
            Formula::Iff(l, r) => l.relabel(map).iff(r.relabel(map)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Const(_) | Formula::Atom(_) => 6,
        }
    }

    /// Canonical text with minimal parentheses; parses back to an equal tree.
    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut out = String::new();
        self.write_to(vocab, &mut out);
        out
    }

    /// Borrowing adapter for `format!`.
    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> DisplayFormula<'a> {
        DisplayFormula {
            formula: self,
            vocab,
        }
    }

    fn write_to(&self, vocab: &Vocabulary, out: &mut String) {
        let child = |f: &Formula, parens: bool, out: &mut String| {
            if parens {
                out.push('(');
                f.write_to(vocab, out);
                out.push(')');
            } else {
                f.write_to(vocab, out);
            }
        };
        let prec = self.precedence();
        match self {
            Formula::Const(true) => out.push_str("true"),
            Formula::Const(false) => out.push_str("false"),
            Formula::Atom(i) => out.push_str(vocab.name(*i)),
            Formula::Not(f) => {
                out.push('!');
                child(f, f.precedence() < prec, out);
            }
            Formula::Implies(l, r) => {
                // right-associative
                child(l, l.precedence() <= prec, out);
                out.push_str(" -> ");
                child(r, r.precedence() < prec, out);
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                let op = match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " <-> ",
                };
                child(l, l.precedence() < prec, out);
                out.push_str(op);
                child(r, r.precedence() <= prec, out);
            }
        }
    }
}

pub struct DisplayFormula<'a> {
    formula: &'a Formula,
    vocab: &'a Vocabulary,
}

impl fmt::Display for DisplayFormula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula.render(self.vocab))
    }
}
