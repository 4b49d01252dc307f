//! Thompson construction for program expressions, with letters resolved
//! against a Kripke structure.

use crate::error::Result;
use crate::pdl::formula::{Formula, Regex};
use crate::pdl::kripke::KripkeStructure;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Label<'f> {
    Epsilon,
    Letter(usize),
    Test(&'f Formula),
}

/// Automaton with a single start and a single accepting state.
#[derive(Debug)]
pub(crate) struct Nfa<'f> {
    pub start: usize,
    pub accept: usize,
    pub edges: Vec<Vec<(Label<'f>, usize)>>,
}

impl<'f> Nfa<'f> {
    pub fn compile(regex: &'f Regex, k: &KripkeStructure) -> Result<Self> {
        let mut nfa = Nfa {
            start: 0,
            accept: 0,
            edges: Vec::new(),
        };
        let (s, t) = nfa.fragment(regex, k)?;
        nfa.start = s;
        nfa.accept = t;
        Ok(nfa)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    fn fresh(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    fn edge(&mut self, from: usize, label: Label<'f>, to: usize) {
        self.edges[from].push((label, to));
    }

    fn fragment(&mut self, regex: &'f Regex, k: &KripkeStructure) -> Result<(usize, usize)> {
        let s = self.fresh();
        let t = self.fresh();
        match regex {
            Regex::Epsilon => self.edge(s, Label::Epsilon, t),
            Regex::Letter(a) => {
                let a = k.letter(a)?;
                self.edge(s, Label::Letter(a), t);
            }
            Regex::Test(f) => self.edge(s, Label::Test(f), t),
            Regex::Concat(a, b) => {
                let (s1, t1) = self.fragment(a, k)?;
                let (s2, t2) = self.fragment(b, k)?;
                self.edge(s, Label::Epsilon, s1);
                self.edge(t1, Label::Epsilon, s2);
                self.edge(t2, Label::Epsilon, t);
            }
            Regex::Union(a, b) => {
                let (s1, t1) = self.fragment(a, k)?;
                let (s2, t2) = self.fragment(b, k)?;
                self.edge(s, Label::Epsilon, s1);
                self.edge(s, Label::Epsilon, s2);
                self.edge(t1, Label::Epsilon, t);
                self.edge(t2, Label::Epsilon, t);
            }
            Regex::Star(a) => {
                let (s1, t1) = self.fragment(a, k)?;
                self.edge(s, Label::Epsilon, t);
                self.edge(s, Label::Epsilon, s1);
                self.edge(t1, Label::Epsilon, s1);
                self.edge(t1, Label::Epsilon, t);
            }
        }
        Ok((s, t))
    }
}
