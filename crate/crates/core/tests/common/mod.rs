//! Independent oracles and random generators shared by the integration
//! tests. Nothing here calls into the evaluator under test.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use mvpa_pdl::pdl::{Formula, KripkeStructure, Program, Regex};
use mvpa_pdl::{CallReturnAlphabet, LetterKind, Mvpa, BOTTOM};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------- phases

/// Minimum number of contiguous segments whose returns all belong to one
/// stack, by dynamic programming over segment end points.
pub fn dp_min_phases(alphabet: &CallReturnAlphabet, word: &[String]) -> usize {
    let kinds: Vec<LetterKind> = word.iter().map(|a| alphabet.classify(a).unwrap()).collect();
    let n = kinds.len();
    let mut best = vec![usize::MAX; n + 1];
    best[0] = 0;
    for end in 1..=n {
        for start in 0..end {
            if best[start] == usize::MAX {
                continue;
            }
            let stacks: BTreeSet<usize> = kinds[start..end]
                .iter()
                .filter_map(|k| match k {
                    LetterKind::Return(i) => Some(*i),
                    _ => None,
                })
                .collect();
            if stacks.len() <= 1 {
                best[end] = best[end].min(best[start] + 1);
            }
        }
    }
    best[n]
}

// ------------------------------------------------- derivative-based regexes

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Letter(String),
    Test(usize),
}

/// Regular expressions normalised modulo associativity, commutativity and
/// idempotence of union, so that iterated derivatives stay finite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Re {
    Empty,
    Eps,
    Sym(Sym),
    Cat(Box<Re>, Box<Re>),
    Alt(BTreeSet<Re>),
    Star(Box<Re>),
}

fn cat(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Empty, _) | (_, Re::Empty) => Re::Empty,
        (Re::Eps, r) | (r, Re::Eps) => r,
        (Re::Cat(x, y), r) => cat(*x, cat(*y, r)),
        (a, b) => Re::Cat(Box::new(a), Box::new(b)),
    }
}

fn alt(a: Re, b: Re) -> Re {
    let mut set = BTreeSet::new();
    for r in [a, b] {
        match r {
            Re::Empty => {}
            Re::Alt(s) => set.extend(s),
            r => {
                set.insert(r);
            }
        }
    }
    match set.len() {
        0 => Re::Empty,
        1 => set.into_iter().next().unwrap(),
        _ => Re::Alt(set),
    }
}

fn star(a: Re) -> Re {
    match a {
        Re::Empty | Re::Eps => Re::Eps,
        Re::Star(r) => Re::Star(r),
        r => Re::Star(Box::new(r)),
    }
}

fn nullable(r: &Re) -> bool {
    match r {
        Re::Empty | Re::Sym(_) => false,
        Re::Eps | Re::Star(_) => true,
        Re::Cat(a, b) => nullable(a) && nullable(b),
        Re::Alt(s) => s.iter().any(nullable),
    }
}

fn derive(r: &Re, s: &Sym) -> Re {
    match r {
        Re::Empty | Re::Eps => Re::Empty,
        Re::Sym(t) => {
            if t == s {
                Re::Eps
            } else {
                Re::Empty
            }
        }
        Re::Cat(a, b) => {
            let left = cat(derive(a, s), (**b).clone());
            if nullable(a) {
                alt(left, derive(b, s))
            } else {
                left
            }
        }
        Re::Alt(set) => set.iter().fold(Re::Empty, |acc, x| alt(acc, derive(x, s))),
        Re::Star(a) => cat(derive(a, s), Re::Star(a.clone())),
    }
}

/// Oracle view of a formula: tests are numbered in a side table.
pub struct Oracle<'k> {
    k: &'k KripkeStructure,
    tests: Vec<Formula>,
}

impl<'k> Oracle<'k> {
    pub fn new(k: &'k KripkeStructure) -> Self {
        Oracle { k, tests: Vec::new() }
    }

    fn test_id(&mut self, f: &Formula) -> usize {
        if let Some(i) = self.tests.iter().position(|g| g == f) {
            return i;
        }
        self.tests.push(f.clone());
        self.tests.len() - 1
    }

    pub fn lower(&mut self, r: &Regex) -> Re {
        match r {
            Regex::Epsilon => Re::Eps,
            Regex::Letter(a) => Re::Sym(Sym::Letter(a.clone())),
            Regex::Test(f) => Re::Sym(Sym::Test(self.test_id(f))),
            Regex::Concat(a, b) => {
                let a = self.lower(a);
                cat(a, self.lower(b))
            }
            Regex::Union(a, b) => {
                let a = self.lower(a);
                alt(a, self.lower(b))
            }
            Regex::Star(a) => star(self.lower(a)),
        }
    }

    /// Worlds satisfying `f`; regular programs only.
    pub fn formula(&mut self, f: &Formula) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = (0..self.k.world_count()).collect();
        match f {
            Formula::True => all,
            Formula::Atom(p) => all.into_iter().filter(|&w| self.k.has_prop(w, p)).collect(),
            Formula::Or(a, b) => {
                let mut s = self.formula(a);
                s.extend(self.formula(b));
                s
            }
            Formula::Not(a) => {
                let s = self.formula(a);
                all.difference(&s).copied().collect()
            }
            Formula::Diamond(p, body) => {
                let Program::Regex(r) = p else {
                    panic!("oracle handles regular programs only")
                };
                let target = self.formula(body);
                self.relation(r, None)
                    .into_iter()
                    .filter(|(_, y)| target.contains(y))
                    .map(|(x, _)| x)
                    .collect()
            }
        }
    }

    /// Pairs `(x, y)` joined by a path whose label (letters and tests) lies
    /// in `L(r)`. With `cap = Some(n)` only labels of at most `n` symbols
    /// are explored; with `None` the
    /// search runs over (world, derivative) states until saturation.
    pub fn relation(&mut self, r: &Regex, cap: Option<usize>) -> BTreeSet<(usize, usize)> {
        let re = self.lower(r);
        let syms = self.symbols(&re);
        let mut test_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.tests.len()];
        for s in &syms {
            if let Sym::Test(i) = s {
                let f = self.tests[*i].clone();
                test_sets[*i] = self.formula(&f);
            }
        }
        let mut out = BTreeSet::new();
        for x in 0..self.k.world_count() {
            match cap {
                Some(n) => self.enumerate(x, &re, n, &syms, &test_sets, &mut out),
                None => self.saturate(x, &re, &syms, &test_sets, &mut out),
            }
        }
        out
    }

    fn symbols(&self, re: &Re) -> Vec<Sym> {
        fn walk(r: &Re, out: &mut BTreeSet<Sym>) {
            match r {
                Re::Empty | Re::Eps => {}
                Re::Sym(s) => {
                    out.insert(s.clone());
                }
                Re::Cat(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Re::Alt(s) => s.iter().for_each(|x| walk(x, out)),
                Re::Star(a) => walk(a, out),
            }
        }
        let mut set = BTreeSet::new();
        walk(re, &mut set);
        set.into_iter().collect()
    }

    fn moves(&self, w: usize, s: &Sym, tests: &[BTreeSet<usize>]) -> Vec<usize> {
        match s {
            Sym::Letter(a) => match self.k.letter(a) {
                Ok(id) => self.k.successors(w, id).to_vec(),
                Err(_) => Vec::new(),
            },
            Sym::Test(i) => {
                if tests[*i].contains(&w) {
                    vec![w]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Layered enumeration of all labels of at most `budget` symbols;
    /// paths that agree on (world, residual expression) are merged per
    /// layer.
    fn enumerate(
        &self,
        x: usize,
        re: &Re,
        budget: usize,
        syms: &[Sym],
        tests: &[BTreeSet<usize>],
        out: &mut BTreeSet<(usize, usize)>,
    ) {
        let mut layer: HashSet<(usize, Re)> = HashSet::from([(x, re.clone())]);
        let mut derivs: HashMap<(Re, Sym), Re> = HashMap::new();
        for depth in 0..=budget {
            let mut next_layer = HashSet::new();
            for (w, r) in &layer {
                if nullable(r) {
                    out.insert((x, *w));
                }
                if depth == budget {
                    continue;
                }
                for s in syms {
                    let next = derivs
                        .entry((r.clone(), s.clone()))
                        .or_insert_with(|| derive(r, s))
                        .clone();
                    if next == Re::Empty {
                        continue;
                    }
                    for y in self.moves(*w, s, tests) {
                        next_layer.insert((y, next.clone()));
                    }
                }
            }
            layer = next_layer;
        }
    }

    fn saturate(
        &self,
        x: usize,
        re: &Re,
        syms: &[Sym],
        tests: &[BTreeSet<usize>],
        out: &mut BTreeSet<(usize, usize)>,
    ) {
        let mut seen: HashSet<(usize, Re)> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut derivs: HashMap<(Re, Sym), Re> = HashMap::new();
        seen.insert((x, re.clone()));
        queue.push_back((x, re.clone()));
        while let Some((w, r)) = queue.pop_front() {
            if nullable(&r) {
                out.insert((x, w));
            }
            for s in syms {
                let next = derivs
                    .entry((r.clone(), s.clone()))
                    .or_insert_with(|| derive(&r, s))
                    .clone();
                if next == Re::Empty {
                    continue;
                }
                for y in self.moves(w, s, tests) {
                    if seen.insert((y, next.clone())) {
                        queue.push_back((y, next.clone()));
                    }
                }
            }
        }
    }
}

// ------------------------------------------------------------ generators

pub fn random_kripke(rng: &mut StdRng, max_worlds: usize, letters: &[&str], props: &[&str]) -> KripkeStructure {
    let mut k = KripkeStructure::new(letters.iter().copied()).unwrap();
    let n = rng.gen_range(1..=max_worlds);
    for w in 0..n {
        let ps: Vec<&str> = props.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
        k.add_world(format!("w{w}"), ps).unwrap();
    }
    let density = rng.gen_range(0.1..0.5);
    for x in 0..n {
        for a in letters {
            for y in 0..n {
                if rng.gen_bool(density) {
                    k.add_edge(&format!("w{x}"), a, &format!("w{y}")).unwrap();
                }
            }
        }
    }
    k
}

fn random_test(rng: &mut StdRng, props: &[&str], letters: &[&str]) -> Formula {
    let p = Formula::atom(*props.choose(rng).unwrap());
    match rng.gen_range(0..4) {
        0 => p,
        1 => Formula::not(p),
        2 => Formula::or(p, Formula::atom(*props.choose(rng).unwrap())),
        _ => Formula::diamond(Regex::letter(*letters.choose(rng).unwrap()).into(), p),
    }
}

/// A random expression with at most `depth` levels and star height at most
/// `star_height`.
pub fn random_regex(rng: &mut StdRng, depth: usize, star_height: usize, letters: &[&str], props: &[&str]) -> Regex {
    if depth == 0 {
        return match rng.gen_range(0..10) {
            0 => Regex::Epsilon,
            1 => Regex::test(random_test(rng, props, letters)),
            _ => Regex::letter(*letters.choose(rng).unwrap()),
        };
    }
    let choice = rng.gen_range(0..if star_height > 0 { 5 } else { 4 });
    match choice {
        0 | 1 => Regex::concat(
            random_regex(rng, depth - 1, star_height, letters, props),
            random_regex(rng, depth - 1, star_height, letters, props),
        ),
        2 => Regex::union(
            random_regex(rng, depth - 1, star_height, letters, props),
            random_regex(rng, depth - 1, star_height, letters, props),
        ),
        3 => random_regex(rng, 0, star_height, letters, props),
        _ => Regex::star(random_regex(rng, depth - 1, star_height - 1, letters, props)),
    }
}

/// A random formula over regular programs.
pub fn random_formula(rng: &mut StdRng, depth: usize, letters: &[&str], props: &[&str]) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Formula::True,
            _ => Formula::atom(*props.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(random_formula(rng, depth - 1, letters, props)),
        1 => Formula::or(
            random_formula(rng, depth - 1, letters, props),
            random_formula(rng, depth - 1, letters, props),
        ),
        2 => Formula::diamond(
            random_regex(rng, 2, 1, letters, props).into(),
            random_formula(rng, depth - 1, letters, props),
        ),
        3 => Formula::boxed(
            random_regex(rng, 2, 1, letters, props).into(),
            random_formula(rng, depth - 1, letters, props),
        ),
        _ => random_formula(rng, 0, letters, props),
    }
}

/// A random two-stack alphabet with disjoint letter names.
pub fn random_alphabet(rng: &mut StdRng) -> CallReturnAlphabet {
    let stacks = rng.gen_range(0..=2);
    let mut next = 0;
    let mut fresh = |prefix: &str, count: usize| -> Vec<String> {
        (0..count)
            .map(|_| {
                next += 1;
                format!("{prefix}{next}")
            })
            .collect()
    };
    let calls: Vec<Vec<String>> = (0..stacks).map(|_| fresh("c", rng.gen_range(1..=2))).collect();
    let returns: Vec<Vec<String>> = (0..stacks).map(|_| fresh("r", rng.gen_range(1..=2))).collect();
    let internals = fresh("i", rng.gen_range(1..=2));
    CallReturnAlphabet::new(&calls, &returns, &internals).unwrap()
}

/// A random automaton over `alphabet`.
pub fn random_mvpa(rng: &mut StdRng, alphabet: &CallReturnAlphabet) -> Mvpa {
    let n = rng.gen_range(1..=4);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let symbols: Vec<String> = (0..rng.gen_range(1..=2)).map(|i| format!("g{i}")).collect();
    let mut b = Mvpa::builder(alphabet.clone())
        .states(states.clone())
        .phase_bound(rng.gen_range(1..=3));
    for q in &states {
        if rng.gen_bool(0.3) {
            b = b.initial(q);
        }
        if rng.gen_bool(0.4) {
            b = b.accepting(q);
        }
    }
    b = b.initial(&states[0]);
    for g in &symbols {
        b = b.stack_symbol(g);
    }
    let mut pops: Vec<String> = symbols.clone();
    pops.push(BOTTOM.to_string());
    for a in alphabet.letters() {
        let kind = alphabet.classify(a).unwrap();
        for from in &states {
            for to in &states {
                if !rng.gen_bool(0.25) {
                    continue;
                }
                b = match kind {
                    LetterKind::Call(_) => b.call(from, a, to, symbols.choose(rng).unwrap()),
                    LetterKind::Return(_) => b.ret(from, a, pops.choose(rng).unwrap(), to),
                    LetterKind::Internal => b.internal(from, a, to),
                };
            }
        }
    }
    b.build().unwrap()
}

/// A random word of length `len` over the letters of `alphabet`.
pub fn random_word(rng: &mut StdRng, alphabet: &CallReturnAlphabet, len: usize) -> Vec<String> {
    (0..len)
        .map(|_| alphabet.letters().choose(rng).unwrap().clone())
        .collect()
}
