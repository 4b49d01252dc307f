//! Phase decomposition of words.
//!
//! A phase may contain calls and internals freely but returns of one stack
//! only. The greedy decomposition below opens a new phase exactly when a
//! return of a stack other than the current phase's committed stack is read;
//! a phase that has seen no return yet is compatible with every stack.

use crate::alphabet::{CallReturnAlphabet, LetterId, LetterKind};
use crate::error::Result;

/// Incremental greedy phase counter. Feeding it a word letter by letter
/// yields the minimum number of phases of every prefix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseCounter {
    phases: usize,
    committed: Option<usize>,
}

impl PhaseCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phases(&self) -> usize {
        self.phases
    }

    pub fn committed_stack(&self) -> Option<usize> {
        self.committed
    }

    pub fn advance(self, kind: LetterKind) -> Self {
        let mut next = self;
        if next.phases == 0 {
            next.phases = 1;
        }
        if let LetterKind::Return(i) = kind {
            match next.committed {
                None => next.committed = Some(i),
                Some(j) if j == i => {}
                Some(_) => {
                    next.phases += 1;
                    next.committed = Some(i);
                }
            }
        }
        next
    }
}

/// Minimum number of phases whose concatenation is `word`.
pub fn min_phases_ids(alphabet: &CallReturnAlphabet, word: &[LetterId]) -> usize {
    word.iter()
        .fold(PhaseCounter::new(), |acc, &a| acc.advance(alphabet.kind_of(a)))
        .phases()
}

/// Like [`min_phases_ids`] over letter names.
pub fn min_phases<S: AsRef<str>>(alphabet: &CallReturnAlphabet, word: &[S]) -> Result<usize> {
    Ok(min_phases_ids(alphabet, &alphabet.encode(word)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::tokenize_word;

    fn sigma() -> CallReturnAlphabet {
        CallReturnAlphabet::new(
            &[vec!["a1"], vec!["a2"]],
            &[vec!["b1"], vec!["b2"]],
            &["c", "d"],
        )
        .unwrap()
    }

    fn phases(w: &str) -> usize {
        min_phases(&sigma(), &tokenize_word(w)).unwrap()
    }

    #[test]
    fn empty_word_has_zero_phases() {
        assert_eq!(phases(""), 0);
    }

    #[test]
    fn known_values() {
        // frozen from the split-point DP oracle in tests/phases.rs
        assert_eq!(phases("a1 b2 d a2 b1 a2 b1 c"), 2);
        assert_eq!(phases("b1 b2 b1"), 3);
        assert_eq!(phases("a1 a2 c d"), 1);
    }

    #[test]
    fn lazy_commitment() {
        assert_eq!(phases("a1 c b2 b2 a2"), 1);
        assert_eq!(phases("c b1"), 1);
    }

    #[test]
    fn unknown_letters_are_rejected() {
        assert!(min_phases(&sigma(), &["a1", "zz"]).is_err());
    }
}
