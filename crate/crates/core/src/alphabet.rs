//! Call-return alphabets: the partition of input letters into per-stack
//! calls, per-stack returns and internal letters.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a letter inside its [`CallReturnAlphabet`].
pub type LetterId = usize;

/// What a letter does to the stacks. Stack indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    Call(usize),
    Return(usize),
    Internal,
}

impl LetterKind {
    pub fn stack(self) -> Option<usize> {
        match self {
            LetterKind::Call(i) | LetterKind::Return(i) => Some(i),
            LetterKind::Internal => None,
        }
    }
}

impl fmt::Display for LetterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LetterKind::Call(i) => write!(f, "call of stack {i}"),
            LetterKind::Return(i) => write!(f, "return of stack {i}"),
            LetterKind::Internal => write!(f, "internal"),
        }
    }
}

/// An `n`-stack call-return alphabet.
///
/// Letters are interned in declaration order: calls of stack 1..n, then
/// returns of stack 1..n, then internals. Two alphabets are equal when their
/// component sets are equal.
#[derive(Debug, Clone)]
pub struct CallReturnAlphabet {
    calls: Vec<BTreeSet<String>>,
    returns: Vec<BTreeSet<String>>,
    internals: BTreeSet<String>,
    letters: Vec<String>,
    kinds: Vec<LetterKind>,
    index: HashMap<String, LetterId>,
}

impl PartialEq for CallReturnAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.calls == other.calls
            && self.returns == other.returns
            && self.internals == other.internals
    }
}

impl Eq for CallReturnAlphabet {}

impl CallReturnAlphabet {
    /// Builds an alphabet from `n` call sets, `n` return sets and the
    /// internal letters. Fails if any letter occurs in two components.
    pub fn new<S: AsRef<str>>(
        calls: &[Vec<S>],
        returns: &[Vec<S>],
        internals: &[S],
    ) -> Result<Self> {
        if calls.len() != returns.len() {
            return Err(Error::InvalidAutomaton(format!(
                "{} call sets but {} return sets",
                calls.len(),
                returns.len()
            )));
        }
        let mut letters = Vec::new();
        let mut kinds: Vec<LetterKind> = Vec::new();
        let mut index: HashMap<String, LetterId> = HashMap::new();
        let mut add = |letter: &str, kind: LetterKind| -> Result<()> {
            if letter.is_empty() || letter.chars().any(char::is_whitespace) {
                return Err(Error::format(
                    "letter",
                    format!("`{letter}` must be non-empty and free of whitespace"),
                ));
            }
            if let Some(&prev) = index.get(letter) {
                if kinds[prev] == kind {
                    return Ok(());
                }
                return Err(Error::OverlappingAlphabet {
                    letter: letter.to_string(),
                    first: kinds[prev].to_string(),
                    second: kind.to_string(),
                });
            }
            index.insert(letter.to_string(), letters.len());
            letters.push(letter.to_string());
            kinds.push(kind);
            Ok(())
        };
        for (i, set) in calls.iter().enumerate() {
            for a in set {
                add(a.as_ref(), LetterKind::Call(i + 1))?;
            }
        }
        for (i, set) in returns.iter().enumerate() {
            for a in set {
                add(a.as_ref(), LetterKind::Return(i + 1))?;
            }
        }
        for a in internals {
            add(a.as_ref(), LetterKind::Internal)?;
        }
        let collect = |sets: &[Vec<S>]| -> Vec<BTreeSet<String>> {
            sets.iter()
                .map(|s| s.iter().map(|a| a.as_ref().to_string()).collect())
                .collect()
        };
        Ok(CallReturnAlphabet {
            calls: collect(calls),
            returns: collect(returns),
            internals: internals.iter().map(|a| a.as_ref().to_string()).collect(),
            letters,
            kinds,
            index,
        })
    }

    /// Number of stacks `n`.
    pub fn stacks(&self) -> usize {
        self.calls.len()
    }

    pub fn calls(&self, stack: usize) -> &BTreeSet<String> {
        &self.calls[stack - 1]
    }

    pub fn returns(&self, stack: usize) -> &BTreeSet<String> {
        &self.returns[stack - 1]
    }

    pub fn internals(&self) -> &BTreeSet<String> {
        &self.internals
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, id: LetterId) -> &str {
        &self.letters[id]
    }

    pub fn id(&self, letter: &str) -> Option<LetterId> {
        self.index.get(letter).copied()
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.index.contains_key(letter)
    }

    pub fn kind_of(&self, id: LetterId) -> LetterKind {
        self.kinds[id]
    }

    /// Total kind lookup over the alphabet.
    pub fn classify(&self, letter: &str) -> Result<LetterKind> {
        self.id(letter)
            .map(|id| self.kinds[id])
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))
    }

    /// Interns a word of letter names.
    pub fn encode<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<LetterId>> {
        word.iter()
            .map(|a| {
                self.id(a.as_ref())
                    .ok_or_else(|| Error::UnknownLetter(a.as_ref().to_string()))
            })
            .collect()
    }

    pub fn decode(&self, word: &[LetterId]) -> Vec<String> {
        word.iter().map(|&a| self.letters[a].clone()).collect()
    }
}

/// Splits a whitespace-separated word into letter tokens.
pub fn tokenize_word(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}
