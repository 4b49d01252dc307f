//! Multi-stack visibly pushdown automata with a phase bound.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::alphabet::{CallReturnAlphabet, LetterId, LetterKind};
use crate::error::{Error, Result};
use crate::phase::min_phases_ids;

/// Reserved name of the bottom-of-stack symbol.
pub const BOTTOM: &str = "_bot";

pub type StateId = usize;
/// Stack symbol index; `0` is always the bottom symbol.
pub type StackSymbolId = usize;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CallTransition {
    pub from: String,
    pub letter: String,
    pub to: String,
    pub push: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReturnTransition {
    pub from: String,
    pub letter: String,
    pub pop: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InternalTransition {
    pub from: String,
    pub letter: String,
    pub to: String,
}

/// One outgoing move from a state on a letter. The stack it acts on is
/// determined by the letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Push { to: StateId, symbol: StackSymbolId },
    Pop { symbol: StackSymbolId, to: StateId },
    Internal { to: StateId },
}

/// Control state plus one stack per stack index. Stacks are stored
/// bottom-first with the bottom symbol at index 0; [`Configuration::stack_word`]
/// gives the top-first view.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    stacks: Vec<Vec<StackSymbolId>>,
}

impl Configuration {
    pub fn initial(state: StateId, stacks: usize) -> Self {
        Configuration {
            state,
            stacks: vec![vec![0]; stacks],
        }
    }

    /// Stack `i` (1-based) as a word with the top at the left.
    pub fn stack_word(&self, i: usize) -> Vec<StackSymbolId> {
        self.stacks[i - 1].iter().rev().copied().collect()
    }

    pub fn stack_height(&self, i: usize) -> usize {
        self.stacks[i - 1].len() - 1
    }

    pub fn top(&self, i: usize) -> StackSymbolId {
        *self.stacks[i - 1].last().expect("stack always holds the bottom symbol")
    }

    pub fn stack_count(&self) -> usize {
        self.stacks.len()
    }

    /// True if every stack lies in `(Γ \ {⊥})* · ⊥`.
    pub fn is_well_formed(&self) -> bool {
        self.stacks
            .iter()
            .all(|s| s.first() == Some(&0) && s[1..].iter().all(|&g| g != 0))
    }
}

/// Human-readable configuration: state name and top-first stack words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationView {
    pub state: String,
    pub stacks: Vec<Vec<String>>,
}

/// A run on an input word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Run {
    pub input: Vec<String>,
    pub configurations: Vec<ConfigurationView>,
    pub accepted: bool,
}

/// A multi-stack visibly pushdown automaton restricted to `phase_bound`
/// phases.
#[derive(Debug, Clone)]
pub struct Mvpa {
    alphabet: CallReturnAlphabet,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    initial: BTreeSet<String>,
    finals: BTreeSet<String>,
    stack_symbols: Vec<String>,
    symbol_index: HashMap<String, StackSymbolId>,
    calls: BTreeSet<CallTransition>,
    returns: BTreeSet<ReturnTransition>,
    internals: BTreeSet<InternalTransition>,
    phase_bound: usize,
    // derived
    initial_ids: Vec<StateId>,
    final_ids: Vec<bool>,
    table: Vec<Vec<Move>>,
    deterministic: bool,
}

impl PartialEq for Mvpa {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.state_set() == other.state_set()
            && self.initial == other.initial
            && self.finals == other.finals
            && self.stack_set() == other.stack_set()
            && self.calls == other.calls
            && self.returns == other.returns
            && self.internals == other.internals
            && self.phase_bound == other.phase_bound
    }
}

impl Eq for Mvpa {}

/// Incremental constructor for [`Mvpa`]; all checks happen in [`MvpaBuilder::build`].
#[derive(Debug, Clone)]
pub struct MvpaBuilder {
    alphabet: CallReturnAlphabet,
    states: Vec<String>,
    initial: BTreeSet<String>,
    finals: BTreeSet<String>,
    stack_symbols: Vec<String>,
    calls: BTreeSet<CallTransition>,
    returns: BTreeSet<ReturnTransition>,
    internals: BTreeSet<InternalTransition>,
    phase_bound: usize,
}

impl MvpaBuilder {
    pub fn state(mut self, q: impl Into<String>) -> Self {
        let q = q.into();
        if !self.states.contains(&q) {
            self.states.push(q);
        }
        self
    }

    pub fn states<I, S>(mut self, qs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for q in qs {
            self = self.state(q);
        }
        self
    }

    pub fn initial(mut self, q: impl Into<String>) -> Self {
        self.initial.insert(q.into());
        self
    }

    pub fn accepting(mut self, q: impl Into<String>) -> Self {
        self.finals.insert(q.into());
        self
    }

    /// Declares a stack symbol. The bottom symbol is always present.
    pub fn stack_symbol(mut self, g: impl Into<String>) -> Self {
        let g = g.into();
        if !self.stack_symbols.contains(&g) {
            self.stack_symbols.push(g);
        }
        self
    }

    pub fn call(mut self, from: &str, letter: &str, to: &str, push: &str) -> Self {
        self.calls.insert(CallTransition {
            from: from.into(),
            letter: letter.into(),
            to: to.into(),
            push: push.into(),
        });
        self
    }

    pub fn ret(mut self, from: &str, letter: &str, pop: &str, to: &str) -> Self {
        self.returns.insert(ReturnTransition {
            from: from.into(),
            letter: letter.into(),
            pop: pop.into(),
            to: to.into(),
        });
        self
    }

    pub fn internal(mut self, from: &str, letter: &str, to: &str) -> Self {
        self.internals.insert(InternalTransition {
            from: from.into(),
            letter: letter.into(),
            to: to.into(),
        });
        self
    }

    pub fn phase_bound(mut self, k: usize) -> Self {
        self.phase_bound = k;
        self
    }

    pub fn build(self) -> Result<Mvpa> {
        let invalid = |msg: String| Err(Error::InvalidAutomaton(msg));
        if self.phase_bound == 0 {
            return invalid("phase bound k must be at least 1".into());
        }
        let state_index: HashMap<String, StateId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.clone(), i))
            .collect();
        let symbol_index: HashMap<String, StackSymbolId> = self
            .stack_symbols
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        for g in &self.stack_symbols {
            if self.alphabet.contains(g) {
                return invalid(format!("stack symbol `{g}` is also an input letter"));
            }
        }
        let state = |q: &str| -> Result<StateId> {
            state_index
                .get(q)
                .copied()
                .ok_or_else(|| Error::InvalidAutomaton(format!("undeclared state `{q}`")))
        };
        let symbol = |g: &str| -> Result<StackSymbolId> {
            symbol_index
                .get(g)
                .copied()
                .ok_or_else(|| Error::InvalidAutomaton(format!("undeclared stack symbol `{g}`")))
        };
        let letter = |a: &str, want: fn(LetterKind) -> bool, sort: &str| -> Result<LetterId> {
            let id = self
                .alphabet
                .id(a)
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown letter `{a}`")))?;
            if !want(self.alphabet.kind_of(id)) {
                return Err(Error::InvalidAutomaton(format!(
                    "letter `{a}` is a {} but is used in a {sort} transition",
                    self.alphabet.kind_of(id)
                )));
            }
            Ok(id)
        };

        let initial_ids = self
            .initial
            .iter()
            .map(|q| state(q))
            .collect::<Result<Vec<_>>>()?;
        let mut final_ids = vec![false; self.states.len()];
        for q in &self.finals {
            final_ids[state(q)?] = true;
        }

        let width = self.alphabet.len();
        let mut table = vec![Vec::new(); self.states.len() * width];
        for t in &self.calls {
            let from = state(&t.from)?;
            let a = letter(&t.letter, |k| matches!(k, LetterKind::Call(_)), "call")?;
            let push = symbol(&t.push)?;
            if push == 0 {
                return invalid(format!("call transition on `{}` pushes the bottom symbol", t.letter));
            }
            table[from * width + a].push(Move::Push {
                to: state(&t.to)?,
                symbol: push,
            });
        }
        for t in &self.returns {
            let from = state(&t.from)?;
            let a = letter(&t.letter, |k| matches!(k, LetterKind::Return(_)), "return")?;
            table[from * width + a].push(Move::Pop {
                symbol: symbol(&t.pop)?,
                to: state(&t.to)?,
            });
        }
        for t in &self.internals {
            let from = state(&t.from)?;
            let a = letter(&t.letter, |k| k == LetterKind::Internal, "internal")?;
            table[from * width + a].push(Move::Internal { to: state(&t.to)? });
        }

        let deterministic = deterministic(&initial_ids, &table);
        Ok(Mvpa {
            alphabet: self.alphabet,
            states: self.states,
            state_index,
            initial: self.initial,
            finals: self.finals,
            stack_symbols: self.stack_symbols,
            symbol_index,
            calls: self.calls,
            returns: self.returns,
            internals: self.internals,
            phase_bound: self.phase_bound,
            initial_ids,
            final_ids,
            table,
            deterministic,
        })
    }
}

impl Mvpa {
    /// Starts a builder with phase bound 1 and only the bottom stack symbol.
    pub fn builder(alphabet: CallReturnAlphabet) -> MvpaBuilder {
        MvpaBuilder {
            alphabet,
            states: Vec::new(),
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
            stack_symbols: vec![BOTTOM.to_string()],
            calls: BTreeSet::new(),
            returns: BTreeSet::new(),
            internals: BTreeSet::new(),
            phase_bound: 1,
        }
    }

    /// A builder pre-filled with this machine's components.
    pub fn to_builder(&self) -> MvpaBuilder {
        MvpaBuilder {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            stack_symbols: self.stack_symbols.clone(),
            calls: self.calls.clone(),
            returns: self.returns.clone(),
            internals: self.internals.clone(),
            phase_bound: self.phase_bound,
        }
    }

    pub fn alphabet(&self) -> &CallReturnAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_set(&self) -> BTreeSet<&str> {
        self.states.iter().map(String::as_str).collect()
    }

    pub fn state_id(&self, q: &str) -> Option<StateId> {
        self.state_index.get(q).copied()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn initial_states(&self) -> &BTreeSet<String> {
        &self.initial
    }

    pub fn final_states(&self) -> &BTreeSet<String> {
        &self.finals
    }

    pub fn initial_ids(&self) -> &[StateId] {
        &self.initial_ids
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.final_ids[q]
    }

    /// Stack alphabet, bottom symbol first.
    pub fn stack_symbols(&self) -> &[String] {
        &self.stack_symbols
    }

    fn stack_set(&self) -> BTreeSet<&str> {
        self.stack_symbols.iter().map(String::as_str).collect()
    }

    pub fn stack_symbol_id(&self, g: &str) -> Option<StackSymbolId> {
        self.symbol_index.get(g).copied()
    }

    pub fn call_transitions(&self) -> &BTreeSet<CallTransition> {
        &self.calls
    }

    pub fn return_transitions(&self) -> &BTreeSet<ReturnTransition> {
        &self.returns
    }

    pub fn internal_transitions(&self) -> &BTreeSet<InternalTransition> {
        &self.internals
    }

    pub fn phase_bound(&self) -> usize {
        self.phase_bound
    }

    /// Same machine with a different phase bound.
    pub fn with_phase_bound(&self, k: usize) -> Result<Mvpa> {
        self.to_builder().phase_bound(k).build()
    }

    pub fn moves(&self, q: StateId, a: LetterId) -> &[Move] {
        &self.table[q * self.alphabet.len() + a]
    }

    pub fn initial_configurations(&self) -> impl Iterator<Item = Configuration> + '_ {
        let n = self.alphabet.stacks();
        self.initial_ids
            .iter()
            .map(move |&q| Configuration::initial(q, n))
    }

    /// All configurations reachable from `c` in one move on letter `a`.
    /// An empty result means the configuration is stuck.
    pub fn step(&self, c: &Configuration, a: LetterId) -> Vec<Configuration> {
        let kind = self.alphabet.kind_of(a);
        let mut out = Vec::new();
        for mv in self.moves(c.state, a) {
            match (*mv, kind) {
                (Move::Push { to, symbol }, LetterKind::Call(i)) => {
                    let mut next = c.clone();
                    next.state = to;
                    next.stacks[i - 1].push(symbol);
                    out.push(next);
                }
                (Move::Pop { symbol, to }, LetterKind::Return(i)) => {
                    let stack = &c.stacks[i - 1];
                    if symbol == 0 {
                        if stack.len() == 1 {
                            let mut next = c.clone();
                            next.state = to;
                            out.push(next);
                        }
                    } else if stack.len() > 1 && stack[stack.len() - 1] == symbol {
                        let mut next = c.clone();
                        next.state = to;
                        next.stacks[i - 1].pop();
                        out.push(next);
                    }
                }
                (Move::Internal { to }, LetterKind::Internal) => {
                    let mut next = c.clone();
                    next.state = to;
                    out.push(next);
                }
                _ => unreachable!("transition table is sorted by letter kind"),
            }
        }
        out
    }

    /// Like [`Mvpa::step`] over a letter name.
    pub fn step_letter(&self, c: &Configuration, letter: &str) -> Result<Vec<Configuration>> {
        let a = self
            .alphabet
            .id(letter)
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))?;
        Ok(self.step(c, a))
    }

    /// Whether some run on `word` ends in a final state, ignoring the phase
    /// bound.
    pub fn has_accepting_run(&self, word: &[LetterId]) -> bool {
        if self.is_deterministic() {
            let Some(mut c) = self.initial_configurations().next() else {
                return false;
            };
            for &a in word {
                match self.step(&c, a).pop() {
                    Some(next) => c = next,
                    None => return false,
                }
            }
            return self.is_final(c.state);
        }
        let mut frontier: HashSet<Configuration> = self.initial_configurations().collect();
        for &a in word {
            frontier = frontier.iter().flat_map(|c| self.step(c, a)).collect();
            if frontier.is_empty() {
                return false;
            }
        }
        frontier.iter().any(|c| self.is_final(c.state))
    }

    /// Membership in `L(M)`: the word is a `k`-phase and some run accepts.
    pub fn accepts(&self, word: &[LetterId]) -> bool {
        min_phases_ids(&self.alphabet, word) <= self.phase_bound && self.has_accepting_run(word)
    }

    /// Membership over letter names.
    pub fn membership<S: AsRef<str>>(&self, word: &[S]) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.encode(word)?))
    }

    /// Membership with a witness. Returns an accepting run when the word is
    /// in the language; otherwise the longest run prefix explored, marked
    /// not accepted (`None` if no initial state exists).
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Result<Option<Run>> {
        let ids = self.alphabet.encode(word)?;
        let phase_ok = min_phases_ids(&self.alphabet, &ids) <= self.phase_bound;
        // breadth-first over (position, configuration); each layer keeps a
        // parent index into the previous one
        let mut layers: Vec<Vec<(Configuration, usize)>> = Vec::new();
        let mut seen: HashSet<Configuration> = HashSet::new();
        let first: Vec<_> = self
            .initial_configurations()
            .filter(|c| seen.insert(c.clone()))
            .map(|c| (c, usize::MAX))
            .collect();
        if first.is_empty() {
            return Ok(None);
        }
        layers.push(first);
        for &a in &ids {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for (parent, (c, _)) in layers.last().unwrap().iter().enumerate() {
                for succ in self.step(c, a) {
                    if seen.insert(succ.clone()) {
                        next.push((succ, parent));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        let complete = layers.len() == ids.len() + 1;
        let last = layers.last().unwrap();
        let pick = if complete {
            last.iter().position(|(c, _)| self.is_final(c.state))
        } else {
            None
        };
        let accepted = complete && phase_ok && pick.is_some();
        let mut index = pick.unwrap_or(0);
        let mut trace = Vec::with_capacity(layers.len());
        for layer in layers.iter().rev() {
            let (c, parent) = &layer[index];
            trace.push(self.view(c));
            index = *parent;
        }
        trace.reverse();
        Ok(Some(Run {
            input: self.alphabet.decode(&ids),
            configurations: trace,
            accepted,
        }))
    }

    pub fn view(&self, c: &Configuration) -> ConfigurationView {
        ConfigurationView {
            state: self.states[c.state].clone(),
            stacks: (1..=c.stack_count())
                .map(|i| {
                    c.stack_word(i)
                        .into_iter()
                        .map(|g| self.stack_symbols[g].clone())
                        .collect()
                })
                .collect(),
        }
    }

    /// One initial state, and at most one transition per (state, letter)
    /// for calls and internals and per (state, letter, popped symbol) for
    /// returns.
    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// Renames letters by the bijection `sigma` onto `target`.
    ///
    /// `sigma` must map every letter of this machine's alphabet onto a
    /// distinct letter of `target`, calls to calls, returns to returns and
    /// internals to internals, and must move whole stacks: if a call of
    /// stack `i` lands on stack `j`, every call and return of `i` lands on
    /// `j`.
    pub fn rename(&self, sigma: &BTreeMap<String, String>, target: &CallReturnAlphabet) -> Result<Mvpa> {
        let source = &self.alphabet;
        if source.len() != target.len() {
            return Err(Error::KindViolation(format!(
                "source alphabet has {} letters, target has {}",
                source.len(),
                target.len()
            )));
        }
        let mut image = BTreeSet::new();
        let mut stack_map: BTreeMap<usize, usize> = BTreeMap::new();
        for a in source.letters() {
            let b = sigma
                .get(a)
                .ok_or_else(|| Error::KindViolation(format!("`{a}` has no image")))?;
            let to_kind = target
                .classify(b)
                .map_err(|_| Error::KindViolation(format!("image `{b}` of `{a}` is not a target letter")))?;
            if !image.insert(b.clone()) {
                return Err(Error::KindViolation(format!("`{b}` is the image of two letters")));
            }
            let from_kind = source.classify(a)?;
            let ok = match (from_kind, to_kind) {
                (LetterKind::Call(i), LetterKind::Call(j))
                | (LetterKind::Return(i), LetterKind::Return(j)) => {
                    *stack_map.entry(i).or_insert(j) == j
                }
                (LetterKind::Internal, LetterKind::Internal) => true,
                _ => false,
            };
            if !ok {
                return Err(Error::KindViolation(format!(
                    "`{a}` ({from_kind}) cannot map to `{b}` ({to_kind})"
                )));
            }
        }
        let mapped: BTreeSet<usize> = stack_map.values().copied().collect();
        if mapped.len() != stack_map.len() {
            return Err(Error::KindViolation("two stacks map onto the same stack".into()));
        }
        let sub = |a: &String| sigma[a].clone();
        let mut b = self.to_builder();
        b.alphabet = target.clone();
        b.calls = self
            .calls
            .iter()
            .map(|t| CallTransition {
                letter: sub(&t.letter),
                ..t.clone()
            })
            .collect();
        b.returns = self
            .returns
            .iter()
            .map(|t| ReturnTransition {
                letter: sub(&t.letter),
                ..t.clone()
            })
            .collect();
        b.internals = self
            .internals
            .iter()
            .map(|t| InternalTransition {
                letter: sub(&t.letter),
                ..t.clone()
            })
            .collect();
        b.build()
    }
}

fn deterministic(initial_ids: &[StateId], table: &[Vec<Move>]) -> bool {
    if initial_ids.len() != 1 {
        return false;
    }
    table.iter().all(|moves| {
        let mut pops = BTreeSet::new();
        let mut others = 0;
        for mv in moves {
            match mv {
                Move::Pop { symbol, .. } => {
                    if !pops.insert(*symbol) {
                        return false;
                    }
                }
                _ => others += 1,
            }
        }
        others <= 1
    })
}
