//! Evaluation of formulas and programs over finite Kripke structures.
//!
//! Regular programs are evaluated exactly through the product of their
//! Thompson automaton with the structure. Automaton programs are evaluated
//! by a breadth-first witness search over (world, configuration, phase
//! count) limited to words of length at most the bound; the diamond is then
//! an under-approximation and results are tagged [`Precision::Bounded`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::marker::PhantomData;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::alphabet::LetterKind;
use crate::error::{Error, Result};
use crate::mvpa::Configuration;
use crate::pdl::formula::{AutomatonProgram, Formula, Program, Regex};
use crate::pdl::kripke::{KripkeStructure, WorldId, WorldRelation};
use crate::pdl::nfa::{Label, Nfa};
use crate::pdl::syntax::print_formula;
use crate::phase::PhaseCounter;

/// Maximum witness length for automaton programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundPolicy {
    /// No bound: automaton programs are rejected.
    Exact,
    /// Witness words of length at most this many symbols.
    Witness(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Exact,
    Bounded(usize),
}

impl Precision {
    pub fn join(self, other: Precision) -> Precision {
        self.max(other)
    }

    pub fn is_exact(self) -> bool {
        self == Precision::Exact
    }
}

/// Set of worlds with the strength of the computation that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub worlds: FixedBitSet,
    pub precision: Precision,
}

impl Evaluation {
    pub fn contains(&self, w: WorldId) -> bool {
        self.worlds.contains(w)
    }

    pub fn names<'k>(&self, k: &'k KripkeStructure) -> Vec<&'k str> {
        self.worlds.ones().map(|w| k.world_name(w)).collect()
    }
}

/// Relation denoted by a program, with its precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramEvaluation {
    pub relation: WorldRelation,
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Holds,
    Fails,
    BoundedHolds { bound: usize },
    BoundedFails { bound: usize },
}

impl Verdict {
    pub fn from_parts(holds: bool, precision: Precision) -> Self {
        match (holds, precision) {
            (true, Precision::Exact) => Verdict::Holds,
            (false, Precision::Exact) => Verdict::Fails,
            (true, Precision::Bounded(bound)) => Verdict::BoundedHolds { bound },
            (false, Precision::Bounded(bound)) => Verdict::BoundedFails { bound },
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::BoundedHolds { .. })
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Verdict::BoundedHolds { .. } | Verdict::BoundedFails { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
            Verdict::BoundedHolds { .. } => "BoundedHolds",
            Verdict::BoundedFails { .. } => "BoundedFails",
        };
        f.write_str(s)
    }
}

/// A symbol of a word over letters and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symbol {
    Letter(String),
    Test(Formula),
}

/// One step of a diamond witness: the symbol read and the world reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    pub symbol: String,
    pub world: String,
}

/// `[[phi]]_K`.
pub fn eval_formula(k: &KripkeStructure, f: &Formula, bound: BoundPolicy) -> Result<Evaluation> {
    Evaluator::new(k, bound).formula(f)
}

/// `[[chi]]_K`.
pub fn eval_program(k: &KripkeStructure, p: &Program, bound: BoundPolicy) -> Result<ProgramEvaluation> {
    Evaluator::new(k, bound).program(p)
}

/// `[[w]]_K` for a word over letters and tests, composed left to right.
/// Tests are evaluated without a bound.
pub fn eval_word(k: &KripkeStructure, word: &[Symbol]) -> Result<WorldRelation> {
    let mut ev = Evaluator::new(k, BoundPolicy::Exact);
    let mut rel = WorldRelation::identity(k.world_count());
    for s in word {
        let step = match s {
            Symbol::Letter(a) => letter_relation(k, k.letter(a)?),
            Symbol::Test(f) => WorldRelation::diagonal(&ev.formula(f)?.worlds),
        };
        rel = rel.then(&step);
    }
    Ok(rel)
}

/// `(K, x) |= phi`, tagged with the precision of the evaluation.
pub fn satisfies(k: &KripkeStructure, x: &str, f: &Formula, bound: BoundPolicy) -> Result<Verdict> {
    let x = k.world(x)?;
    let e = eval_formula(k, f, bound)?;
    Ok(Verdict::from_parts(e.contains(x), e.precision))
}

/// A path from `x` along a word of `p` to a world satisfying
/// `target`, if one exists (within the bound for automaton programs).
pub fn witness(
    k: &KripkeStructure,
    x: &str,
    p: &Program,
    target: &Formula,
    bound: BoundPolicy,
) -> Result<Option<Vec<WitnessStep>>> {
    let x = k.world(x)?;
    let mut ev = Evaluator::new(k, bound);
    let goal = ev.formula(target)?;
    match p {
        Program::Regex(r) => {
            let g = ev.product(r)?;
            Ok(g.witness(k, x, &goal.worlds))
        }
        Program::Automaton(a) => {
            let view = ev.automaton(a)?;
            let search = view.search(k, x, ev.limit(a)?);
            Ok(search.witness(k, &view, &goal.worlds))
        }
    }
}

pub(crate) fn letter_relation(k: &KripkeStructure, a: usize) -> WorldRelation {
    let mut rel = WorldRelation::empty(k.world_count());
    for &(x, b, y) in k.edges() {
        if a == b {
            rel.insert(x, y);
        }
    }
    rel
}

/// Per-call evaluator; memoizes subformula results by address, which is
/// stable because every formula it sees is borrowed for `'f`.
struct Evaluator<'k, 'f> {
    k: &'k KripkeStructure,
    bound: BoundPolicy,
    memo: HashMap<*const Formula, Evaluation>,
    _formulas: PhantomData<&'f Formula>,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Epsilon,
    Letter(usize),
    Guard(usize),
}

/// Thompson automaton of a regular program with tests already evaluated.
struct Product<'f> {
    nfa: Nfa<'f>,
    edges: Vec<Vec<(Step, usize)>>,
    guards: Vec<FixedBitSet>,
    precision: Precision,
}

impl<'k, 'f> Evaluator<'k, 'f> {
    fn new(k: &'k KripkeStructure, bound: BoundPolicy) -> Self {
        Evaluator {
            k,
            bound,
            memo: HashMap::new(),
            _formulas: PhantomData,
        }
    }

    fn formula(&mut self, f: &'f Formula) -> Result<Evaluation> {
        let key = f as *const Formula;
        if let Some(e) = self.memo.get(&key) {
            return Ok(e.clone());
        }
        let k = self.k;
        let e = match f {
            Formula::True => Evaluation {
                worlds: k.full_set(),
                precision: Precision::Exact,
            },
            Formula::Atom(p) => {
                let mut worlds = k.empty_set();
                for w in 0..k.world_count() {
                    worlds.set(w, k.has_prop(w, p));
                }
                Evaluation {
                    worlds,
                    precision: Precision::Exact,
                }
            }
            Formula::Or(a, b) => {
                let mut ea = self.formula(a)?;
                let eb = self.formula(b)?;
                ea.worlds.union_with(&eb.worlds);
                ea.precision = ea.precision.join(eb.precision);
                ea
            }
            Formula::Not(a) => {
                let ea = self.formula(a)?;
                let mut worlds = k.full_set();
                worlds.difference_with(&ea.worlds);
                Evaluation {
                    worlds,
                    precision: ea.precision,
                }
            }
            Formula::Diamond(p, body) => {
                let target = self.formula(body)?;
                let mut e = self.diamond(p, &target.worlds)?;
                e.precision = e.precision.join(target.precision);
                e
            }
        };
        self.memo.insert(key, e.clone());
        Ok(e)
    }

    fn limit(&self, a: &AutomatonProgram) -> Result<usize> {
        match self.bound {
            BoundPolicy::Exact => Err(Error::BoundRequired(a.name.clone())),
            BoundPolicy::Witness(b) => Ok(b),
        }
    }

    fn diamond(&mut self, p: &'f Program, target: &FixedBitSet) -> Result<Evaluation> {
        match p {
            Program::Regex(r) => {
                let g = self.product(r)?;
                Ok(Evaluation {
                    worlds: g.backward(self.k, target),
                    precision: g.precision,
                })
            }
            Program::Automaton(a) => {
                let bound = self.limit(a)?;
                let view = self.automaton(a)?;
                let mut worlds = self.k.empty_set();
                for x in 0..self.k.world_count() {
                    let search = view.search(self.k, x, bound);
                    if search.reached().any(|y| target.contains(y)) {
                        worlds.insert(x);
                    }
                }
                Ok(Evaluation {
                    worlds,
                    precision: view.precision.join(Precision::Bounded(bound)),
                })
            }
        }
    }

    fn program(&mut self, p: &'f Program) -> Result<ProgramEvaluation> {
        let n = self.k.world_count();
        let mut relation = WorldRelation::empty(n);
        let precision = match p {
            Program::Regex(r) => {
                let g = self.product(r)?;
                for x in 0..n {
                    relation.set_row(x, g.forward(self.k, x));
                }
                g.precision
            }
            Program::Automaton(a) => {
                let bound = self.limit(a)?;
                let view = self.automaton(a)?;
                for x in 0..n {
                    for y in view.search(self.k, x, bound).reached() {
                        relation.insert(x, y);
                    }
                }
                view.precision.join(Precision::Bounded(bound))
            }
        };
        Ok(ProgramEvaluation { relation, precision })
    }

    fn product(&mut self, r: &'f Regex) -> Result<Product<'f>> {
        let nfa = Nfa::compile(r, self.k)?;
        let mut guards = Vec::new();
        let mut precision = Precision::Exact;
        let mut edges = Vec::with_capacity(nfa.len());
        for out in &nfa.edges {
            let mut row = Vec::with_capacity(out.len());
            for &(label, to) in out {
                let step = match label {
                    Label::Epsilon => Step::Epsilon,
                    Label::Letter(a) => Step::Letter(a),
                    Label::Test(f) => {
                        let e = self.formula(f)?;
                        precision = precision.join(e.precision);
                        guards.push(e.worlds);
                        Step::Guard(guards.len() - 1)
                    }
                };
                row.push((step, to));
            }
            edges.push(row);
        }
        Ok(Product {
            nfa,
            edges,
            guards,
            precision,
        })
    }

    fn automaton(&mut self, a: &'f AutomatonProgram) -> Result<AutomatonView<'f>> {
        let alphabet = a.machine.alphabet();
        let mut letters = Vec::with_capacity(alphabet.len());
        let mut precision = Precision::Exact;
        for (id, name) in alphabet.letters().iter().enumerate() {
            let kind = alphabet.kind_of(id);
            let action = match a.tests.get(name) {
                Some(test) => {
                    let e = self.formula(test)?;
                    precision = precision.join(e.precision);
                    Action::Guard(e.worlds)
                }
                None => Action::Move(self.k.letter(name)?),
            };
            letters.push((kind, action));
        }
        Ok(AutomatonView {
            program: a,
            letters,
            precision,
        })
    }
}

impl Product<'_> {
    fn index(&self, s: usize, w: WorldId, n: usize) -> usize {
        s * n + w
    }

    /// Worlds from which an accepting pair `(accept, y)` with `y` in
    /// `target` is reachable.
    fn backward(&self, k: &KripkeStructure, target: &FixedBitSet) -> FixedBitSet {
        let n = k.world_count();
        let states = self.edges.len();
        let mut rev: Vec<Vec<(Step, usize)>> = vec![Vec::new(); states];
        for (s, out) in self.edges.iter().enumerate() {
            for &(step, t) in out {
                rev[t].push((step, s));
            }
        }
        let mut seen = FixedBitSet::with_capacity(states * n);
        let mut queue = VecDeque::new();
        for y in target.ones() {
            seen.insert(self.index(self.nfa.accept, y, n));
            queue.push_back((self.nfa.accept, y));
        }
        while let Some((t, y)) = queue.pop_front() {
            for &(step, s) in &rev[t] {
                let mut visit = |x: WorldId| {
                    let i = self.index(s, x, n);
                    if !seen.put(i) {
                        queue.push_back((s, x));
                    }
                };
                match step {
                    Step::Epsilon => visit(y),
                    Step::Guard(g) => {
                        if self.guards[g].contains(y) {
                            visit(y)
                        }
                    }
                    Step::Letter(a) => {
                        for &x in k.predecessors(y, a) {
                            visit(x);
                        }
                    }
                }
            }
        }
        let mut out = k.empty_set();
        for x in 0..n {
            if seen.contains(self.index(self.nfa.start, x, n)) {
                out.insert(x);
            }
        }
        out
    }

    fn successors(&self, k: &KripkeStructure, s: usize, y: WorldId, mut f: impl FnMut(Step, usize, WorldId)) {
        for &(step, t) in &self.edges[s] {
            match step {
                Step::Epsilon => f(step, t, y),
                Step::Guard(g) => {
                    if self.guards[g].contains(y) {
                        f(step, t, y)
                    }
                }
                Step::Letter(a) => {
                    for &z in k.successors(y, a) {
                        f(step, t, z);
                    }
                }
            }
        }
    }

    /// Worlds `y` with `(x, y)` in the program's relation.
    fn forward(&self, k: &KripkeStructure, x: WorldId) -> FixedBitSet {
        let n = k.world_count();
        let mut seen = FixedBitSet::with_capacity(self.edges.len() * n);
        let mut queue = VecDeque::from([(self.nfa.start, x)]);
        seen.insert(self.index(self.nfa.start, x, n));
        let mut out = k.empty_set();
        while let Some((s, y)) = queue.pop_front() {
            if s == self.nfa.accept {
                out.insert(y);
            }
            self.successors(k, s, y, |_, t, z| {
                if !seen.put(self.index(t, z, n)) {
                    queue.push_back((t, z));
                }
            });
        }
        out
    }

    fn witness(&self, k: &KripkeStructure, x: WorldId, target: &FixedBitSet) -> Option<Vec<WitnessStep>> {
        let n = k.world_count();
        let mut parent: HashMap<(usize, WorldId), ((usize, WorldId), Step)> = HashMap::new();
        let mut seen = FixedBitSet::with_capacity(self.edges.len() * n);
        // letters cost one, epsilon and tests cost nothing: 0-1 BFS
        let mut queue = VecDeque::from([(self.nfa.start, x)]);
        seen.insert(self.index(self.nfa.start, x, n));
        while let Some((s, y)) = queue.pop_front() {
            if s == self.nfa.accept && target.contains(y) {
                let mut steps = Vec::new();
                let mut cur = (s, y);
                while let Some(&(prev, step)) = parent.get(&cur) {
                    match step {
                        Step::Letter(a) => steps.push(WitnessStep {
                            symbol: k.letters()[a].clone(),
                            world: k.world_name(cur.1).to_string(),
                        }),
                        Step::Guard(g) => steps.push(WitnessStep {
                            symbol: format!("(? {})", print_formula(self.test_formula(g))),
                            world: k.world_name(cur.1).to_string(),
                        }),
                        Step::Epsilon => {}
                    }
                    cur = prev;
                }
                steps.reverse();
                return Some(steps);
            }
            self.successors(k, s, y, |step, t, z| {
                if !seen.put(self.index(t, z, n)) {
                    parent.insert((t, z), ((s, y), step));
                    match step {
                        Step::Letter(_) => queue.push_back((t, z)),
                        _ => queue.push_front((t, z)),
                    }
                }
            });
        }
        None
    }

    fn test_formula(&self, guard: usize) -> &Formula {
        self.nfa
            .edges
            .iter()
            .flatten()
            .filter_map(|(label, _)| match label {
                Label::Test(f) => Some(*f),
                _ => None,
            })
            .nth(guard)
            .expect("guards are numbered in edge order")
    }
}

enum Action {
    Move(usize),
    Guard(FixedBitSet),
}

/// An automaton program with its letters resolved against a structure.
struct AutomatonView<'f> {
    program: &'f AutomatonProgram,
    letters: Vec<(LetterKind, Action)>,
    precision: Precision,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    world: WorldId,
    config: Configuration,
    phase: PhaseCounter,
}

struct Search {
    nodes: Vec<(Node, Option<(usize, usize)>)>,
    accepting: Vec<usize>,
}

impl Search {
    fn reached(&self) -> impl Iterator<Item = WorldId> + '_ {
        self.accepting.iter().map(|&i| self.nodes[i].0.world)
    }

    fn witness(&self, k: &KripkeStructure, view: &AutomatonView<'_>, target: &FixedBitSet) -> Option<Vec<WitnessStep>> {
        let &end = self
            .accepting
            .iter()
            .find(|&&i| target.contains(self.nodes[i].0.world))?;
        let alphabet = view.program.machine.alphabet();
        let mut steps = Vec::new();
        let mut cur = end;
        while let Some((prev, letter)) = self.nodes[cur].1 {
            steps.push(WitnessStep {
                symbol: alphabet.letter(letter).to_string(),
                world: k.world_name(self.nodes[cur].0.world).to_string(),
            });
            cur = prev;
        }
        steps.reverse();
        Some(steps)
    }
}

impl AutomatonView<'_> {
    /// Breadth-first search over words of length at most `bound` from `x`.
    /// The first visit of a node is at its minimal depth, so a global
    /// visited set loses no witness.
    fn search(&self, k: &KripkeStructure, x: WorldId, bound: usize) -> Search {
        let machine = &self.program.machine;
        let k_bound = machine.phase_bound();
        let mut nodes: Vec<(Node, Option<(usize, usize)>)> = Vec::new();
        let mut seen: HashSet<Node> = HashSet::new();
        for config in machine.initial_configurations() {
            let node = Node {
                world: x,
                config,
                phase: PhaseCounter::new(),
            };
            if seen.insert(node.clone()) {
                nodes.push((node, None));
            }
        }
        let mut layer_start = 0;
        for _ in 0..bound {
            let layer_end = nodes.len();
            if layer_start == layer_end {
                break;
            }
            for i in layer_start..layer_end {
                let node = nodes[i].0.clone();
                for (letter, (kind, action)) in self.letters.iter().enumerate() {
                    let phase = node.phase.advance(*kind);
                    if phase.phases() > k_bound {
                        continue;
                    }
                    let configs = machine.step(&node.config, letter);
                    if configs.is_empty() {
                        continue;
                    }
                    let targets: Vec<WorldId> = match action {
                        Action::Move(a) => k.successors(node.world, *a).to_vec(),
                        Action::Guard(g) if g.contains(node.world) => vec![node.world],
                        Action::Guard(_) => vec![],
                    };
                    for world in targets {
                        for config in &configs {
                            let next = Node {
                                world,
                                config: config.clone(),
                                phase,
                            };
                            if seen.insert(next.clone()) {
                                nodes.push((next, Some((i, letter))));
                            }
                        }
                    }
                }
            }
            layer_start = layer_end;
        }
        let accepting = (0..nodes.len())
            .filter(|&i| machine.is_final(nodes[i].0.config.state))
            .collect();
        Search { nodes, accepting }
    }
}
