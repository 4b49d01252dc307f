//! The six fixed two-stack languages used by the tiling reduction, as
//! explicit deterministic 2-phase automata and as direct set-builder
//! predicates.
//!
//! With `w0 = a1 b2`, `w1 = a2 b1`, `e0 = d` and `e1 = c`:
//!
//! * plain `L_l`: `w_l^i e_l w_{1-l}^j e_{1-l}` with `j != i + 1`
//! * horizontal `L_l^h`: `w_l^i e_l w_{1-l}^(i+l+1)`
//! * vertical `L_l^v`: `w_l^i e_l w_{1-l}^(i-l+2)`

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::alphabet::CallReturnAlphabet;
use crate::error::{Error, Result};
use crate::mvpa::{Mvpa, BOTTOM};

pub const A1: &str = "a1";
pub const A2: &str = "a2";
pub const B1: &str = "b1";
pub const B2: &str = "b2";
pub const C: &str = "c";
pub const D: &str = "d";

/// Letters in interning order of [`reduction_alphabet`].
pub const LETTERS: [&str; 6] = [A1, A2, B1, B2, C, D];

/// The fixed two-stack alphabet: calls `a1`, `a2`, returns `b1`, `b2`,
/// internals `c`, `d`.
pub fn reduction_alphabet() -> CallReturnAlphabet {
    CallReturnAlphabet::new(&[vec![A1], vec![A2]], &[vec![B1], vec![B2]], &[C, D])
        .expect("fixed alphabet is a partition")
}

/// The letter swap `a1<->a2`, `b1<->b2`, `c<->d` exchanging `l = 0` and `l = 1`.
pub fn swap_letters() -> BTreeMap<String, String> {
    [(A1, A2), (A2, A1), (B1, B2), (B2, B1), (C, D), (D, C)]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// `w_l` as a pair of letters.
pub fn pair(l: u8) -> [&'static str; 2] {
    if l == 0 {
        [A1, B2]
    } else {
        [A2, B1]
    }
}

/// `e_l`.
pub fn marker(l: u8) -> &'static str {
    if l == 0 {
        D
    } else {
        C
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Plain,
    Horizontal,
    Vertical,
}

/// One of the six reduction languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageId {
    family: Family,
    level: u8,
}

impl LanguageId {
    pub fn new(family: Family, level: u8) -> Result<Self> {
        if level > 1 {
            return Err(Error::format("language level", format!("{level} is not 0 or 1")));
        }
        Ok(LanguageId { family, level })
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn level(self) -> u8 {
        self.level
    }

    pub fn all() -> [LanguageId; 6] {
        let id = |family, level| LanguageId { family, level };
        [
            id(Family::Plain, 0),
            id(Family::Plain, 1),
            id(Family::Horizontal, 0),
            id(Family::Horizontal, 1),
            id(Family::Vertical, 0),
            id(Family::Vertical, 1),
        ]
    }

    /// Exponent of the second block for the single-exponent families.
    fn second_exponent(self, i: usize) -> Option<usize> {
        let l = self.level as usize;
        match self.family {
            Family::Plain => None,
            Family::Horizontal => Some(i + l + 1),
            Family::Vertical => Some(i + 2 - l),
        }
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.family {
            Family::Plain => "",
            Family::Horizontal => "_h",
            Family::Vertical => "_v",
        };
        write!(f, "L{}{}", self.level, suffix)
    }
}

impl FromStr for LanguageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LanguageId::all()
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::format("language", format!("unknown language `{s}`")))
    }
}

// Transcriptions of the three drawn l = 0 machines, edge for edge.

fn plain_level0() -> Mvpa {
    Mvpa::builder(reduction_alphabet())
        .states(["q0", "q1", "q2", "q3", "q4", "q5", "q6", "p"])
        .initial("q0")
        .accepting("p")
        .stack_symbol("x")
        .call("q0", A1, "q1", "x")
        .ret("q1", B2, BOTTOM, "q0")
        .internal("q0", D, "q2")
        .call("q2", A2, "q3", "x")
        .ret("q3", B1, "x", "q2")
        .ret("q3", B1, BOTTOM, "q4")
        .call("q4", A2, "q6", "x")
        .call("q5", A2, "q6", "x")
        .ret("q6", B1, BOTTOM, "q5")
        .internal("q5", C, "p")
        .internal("q2", C, "p")
        .phase_bound(2)
        .build()
        .expect("drawn machine is well-formed")
}

fn horizontal_level0() -> Mvpa {
    Mvpa::builder(reduction_alphabet())
        .states(["q0", "q1", "q2", "q3", "p"])
        .initial("q0")
        .accepting("p")
        .stack_symbol("x")
        .internal("q0", D, "q2")
        .call("q0", A1, "q1", "x")
        .ret("q1", B2, BOTTOM, "q0")
        .call("q2", A2, "q3", "x")
        .ret("q3", B1, "x", "q2")
        .ret("q3", B1, BOTTOM, "p")
        .phase_bound(2)
        .build()
        .expect("drawn machine is well-formed")
}

fn vertical_level0() -> Mvpa {
    Mvpa::builder(reduction_alphabet())
        .states(["q0", "q1", "q2", "q3", "q4", "q5", "p"])
        .initial("q0")
        .accepting("p")
        .stack_symbol("x")
        .internal("q0", D, "q2")
        .call("q0", A1, "q1", "x")
        .ret("q1", B2, BOTTOM, "q0")
        .call("q2", A2, "q3", "x")
        .ret("q3", B1, "x", "q2")
        .ret("q3", B1, BOTTOM, "q4")
        .call("q4", A2, "q5", "x")
        .ret("q5", B1, BOTTOM, "p")
        .phase_bound(2)
        .build()
        .expect("drawn machine is well-formed")
}

/// Swaps the letters of an `l = 0` machine to obtain its `l = 1` image.
pub fn swap_machine(m: &Mvpa) -> Mvpa {
    m.rename(&swap_letters(), &reduction_alphabet())
        .expect("swap is a kind-preserving bijection")
}

/// The `l = 0` machine whose letter swap recognizes `id`.
///
/// Swapping turns `w_0^i d w_1^(i+1)` into `w_1^i c w_0^(i+1)`, which is the
/// vertical language at level 1, and `w_0^i d w_1^(i+2)` into the
/// horizontal one, so the two single-exponent families trade places.
pub fn swap_source(id: LanguageId) -> LanguageId {
    let family = match (id.family, id.level) {
        (f, 0) => f,
        (Family::Plain, _) => Family::Plain,
        (Family::Horizontal, _) => Family::Vertical,
        (Family::Vertical, _) => Family::Horizontal,
    };
    LanguageId { family, level: 0 }
}

/// Deterministic 2-phase automaton for `id`.
pub fn build_automaton(id: LanguageId) -> Mvpa {
    let base = |family| match family {
        Family::Plain => plain_level0(),
        Family::Horizontal => horizontal_level0(),
        Family::Vertical => vertical_level0(),
    };
    if id.level == 0 {
        base(id.family)
    } else {
        swap_machine(&base(swap_source(id).family))
    }
}

/// Counts leading repetitions of `pair` in `word` starting at `from`.
fn count_pairs(word: &[&str], from: usize, pair: [&str; 2]) -> (usize, usize) {
    let mut pos = from;
    let mut count = 0;
    while pos + 1 < word.len() && word[pos] == pair[0] && word[pos + 1] == pair[1] {
        pos += 2;
        count += 1;
    }
    (count, pos)
}

/// Decides membership straight from the set-builder definition.
pub fn oracle_member<S: AsRef<str>>(id: LanguageId, word: &[S]) -> bool {
    let word: Vec<&str> = word.iter().map(AsRef::as_ref).collect();
    let l = id.level;
    let (i, pos) = count_pairs(&word, 0, pair(l));
    if word.get(pos) != Some(&marker(l)) {
        return false;
    }
    let (j, pos) = count_pairs(&word, pos + 1, pair(1 - l));
    match id.family {
        Family::Plain => pos + 1 == word.len() && word[pos] == marker(1 - l) && j != i + 1,
        _ => pos == word.len() && Some(j) == id.second_exponent(i),
    }
}

fn member_word(id: LanguageId, i: usize, j: usize) -> Vec<String> {
    let l = id.level;
    let mut w = Vec::with_capacity(2 * (i + j) + 2);
    for _ in 0..i {
        w.extend(pair(l).map(str::to_string));
    }
    w.push(marker(l).to_string());
    for _ in 0..j {
        w.extend(pair(1 - l).map(str::to_string));
    }
    if id.family == Family::Plain {
        w.push(marker(1 - l).to_string());
    }
    w
}

/// All members whose exponents are at most `max_exponent`, in
/// lexicographic `(i, j)` order. For the single-exponent families only `i`
/// is bounded.
pub fn enumerate(id: LanguageId, max_exponent: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..=max_exponent {
        match id.second_exponent(i) {
            Some(j) => out.push(member_word(id, i, j)),
            None => {
                for j in (0..=max_exponent).filter(|&j| j != i + 1) {
                    out.push(member_word(id, i, j));
                }
            }
        }
    }
    out
}
