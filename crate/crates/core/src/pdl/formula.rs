//! PDL formulas and programs.
//!
//! The core connectives are `true`, atoms, `or`, `not` and diamonds; `and`,
//! `false`, implication and boxes are built from them by the constructor
//! helpers and recognized again by the printer.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::alphabet::LetterKind;
use crate::error::{Error, Result};
use crate::mvpa::Mvpa;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    Atom(String),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Diamond(Program, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program {
    Regex(Regex),
    Automaton(AutomatonProgram),
}

/// Regular expression over letters and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    Epsilon,
    Letter(String),
    Test(Box<Formula>),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

/// An automaton used as a program. Internal letters listed in `tests` are
/// test tokens: reading one stays at the current world and requires the
/// attached formula to hold there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonProgram {
    pub name: String,
    pub machine: Arc<Mvpa>,
    pub tests: BTreeMap<String, Formula>,
}

impl AutomatonProgram {
    pub fn new(name: impl Into<String>, machine: Mvpa) -> Self {
        AutomatonProgram {
            name: name.into(),
            machine: Arc::new(machine),
            tests: BTreeMap::new(),
        }
    }

    /// Attaches formula `test` to the internal letter `letter`.
    pub fn with_test(mut self, letter: &str, test: Formula) -> Result<Self> {
        match self.machine.alphabet().classify(letter)? {
            LetterKind::Internal => {
                self.tests.insert(letter.to_string(), test);
                Ok(self)
            }
            kind => Err(Error::InvalidAutomaton(format!(
                "test token `{letter}` must be an internal letter, not a {kind}"
            ))),
        }
    }
}

impl Formula {
    pub fn atom(p: impl Into<String>) -> Self {
        Formula::Atom(p.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn falsity() -> Self {
        Formula::not(Formula::True)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn diamond(p: Program, f: Formula) -> Self {
        Formula::Diamond(p, Box::new(f))
    }

    pub fn boxed(p: Program, f: Formula) -> Self {
        Formula::not(Formula::diamond(p, Formula::not(f)))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::falsity)
    }

    /// `Some((a, b))` if this is the encoding of `a and b`.
    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Or(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Formula::Not(a), Formula::Not(b)) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// `Some((p, f))` if this is the encoding of `[p] f`.
    pub fn as_box(&self) -> Option<(&Program, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Diamond(p, f) => match f.as_ref() {
                    Formula::Not(f) => Some((p, f)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Flattens nested `and`s into their operands.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self.as_and() {
            Some((a, b)) => {
                let mut out = a.conjuncts();
                out.extend(b.conjuncts());
                out
            }
            None => vec![self],
        }
    }

    /// Every automaton program occurring anywhere in the formula.
    pub fn automata(&self) -> Vec<&AutomatonProgram> {
        let mut out = Vec::new();
        self.collect_automata(&mut out);
        out
    }

    fn collect_automata<'a>(&'a self, out: &mut Vec<&'a AutomatonProgram>) {
        match self {
            Formula::True | Formula::Atom(_) => {}
            Formula::Or(a, b) => {
                a.collect_automata(out);
                b.collect_automata(out);
            }
            Formula::Not(a) => a.collect_automata(out),
            Formula::Diamond(p, f) => {
                match p {
                    Program::Regex(r) => r.collect_automata(out),
                    Program::Automaton(a) => {
                        out.push(a);
                        for t in a.tests.values() {
                            t.collect_automata(out);
                        }
                    }
                }
                f.collect_automata(out);
            }
        }
    }

    /// Largest phase bound among the automaton programs, if any.
    pub fn max_phase_bound(&self) -> Option<usize> {
        self.automata().iter().map(|a| a.machine.phase_bound()).max()
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 1,
            Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::Diamond(p, f) => {
                1 + f.size()
                    + match p {
                        Program::Regex(r) => r.size(),
                        Program::Automaton(a) => 1 + a.tests.values().map(Formula::size).sum::<usize>(),
                    }
            }
        }
    }
}

impl Regex {
    pub fn letter(a: impl Into<String>) -> Self {
        Regex::Letter(a.into())
    }

    pub fn test(f: Formula) -> Self {
        Regex::Test(Box::new(f))
    }

    pub fn concat(a: Regex, b: Regex) -> Self {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: Regex, b: Regex) -> Self {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Self {
        Regex::Star(Box::new(a))
    }

    /// One or more repetitions, as `a a*`.
    pub fn plus(a: Regex) -> Self {
        Regex::concat(a.clone(), Regex::star(a))
    }

    /// Left-nested concatenation of the parts, with concatenations inside
    /// the parts flattened; epsilon when empty.
    pub fn seq(parts: impl IntoIterator<Item = Regex>) -> Self {
        let mut leaves = Vec::new();
        for p in parts {
            p.concat_leaves(&mut leaves);
        }
        leaves.into_iter().reduce(Regex::concat).unwrap_or(Regex::Epsilon)
    }

    fn concat_leaves(self, out: &mut Vec<Regex>) {
        match self {
            Regex::Concat(a, b) => {
                a.concat_leaves(out);
                b.concat_leaves(out);
            }
            r => out.push(r),
        }
    }

    /// Left-nested union. Panics on an empty iterator: the empty language
    /// has no syntax here.
    pub fn any(parts: impl IntoIterator<Item = Regex>) -> Self {
        parts.into_iter().reduce(Regex::union).expect("union of no expressions")
    }

    /// Concatenation of the letters of a word.
    pub fn word<S: AsRef<str>>(letters: &[S]) -> Self {
        Regex::seq(letters.iter().map(|a| Regex::letter(a.as_ref())))
    }

    /// `n` copies of `self` in sequence.
    pub fn power(&self, n: usize) -> Self {
        Regex::seq(std::iter::repeat(self.clone()).take(n))
    }

    fn collect_automata<'a>(&'a self, out: &mut Vec<&'a AutomatonProgram>) {
        match self {
            Regex::Epsilon | Regex::Letter(_) => {}
            Regex::Test(f) => f.collect_automata(out),
            Regex::Concat(a, b) | Regex::Union(a, b) => {
                a.collect_automata(out);
                b.collect_automata(out);
            }
            Regex::Star(a) => a.collect_automata(out),
        }
    }

    /// Tests occurring in the expression, in left-to-right order.
    pub fn tests(&self) -> Vec<&Formula> {
        match self {
            Regex::Epsilon | Regex::Letter(_) => vec![],
            Regex::Test(f) => vec![f],
            Regex::Concat(a, b) | Regex::Union(a, b) => {
                let mut v = a.tests();
                v.extend(b.tests());
                v
            }
            Regex::Star(a) => a.tests(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Regex::Epsilon | Regex::Letter(_) => 1,
            Regex::Test(f) => 1 + f.size(),
            Regex::Concat(a, b) | Regex::Union(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
        }
    }
}

impl From<Regex> for Program {
    fn from(r: Regex) -> Self {
        Program::Regex(r)
    }
}

impl From<AutomatonProgram> for Program {
    fn from(a: AutomatonProgram) -> Self {
        Program::Automaton(a)
    }
}
