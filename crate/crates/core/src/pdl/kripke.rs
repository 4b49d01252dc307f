use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type WorldId = usize;

/// A finite Kripke structure over an explicitly declared letter set.
///
/// Worlds and letters keep their declaration order. Letters that label no
/// edge denote the empty relation.
#[derive(Debug, Clone, Default)]
pub struct KripkeStructure {
    worlds: Vec<String>,
    world_index: HashMap<String, WorldId>,
    props: Vec<BTreeSet<String>>,
    letters: Vec<String>,
    letter_index: HashMap<String, usize>,
    edges: BTreeSet<(WorldId, usize, WorldId)>,
    succ: Vec<Vec<Vec<WorldId>>>,
    pred: Vec<Vec<Vec<WorldId>>>,
}

impl PartialEq for KripkeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.worlds == other.worlds
            && self.props == other.props
            && self.letters == other.letters
            && self.edges == other.edges
    }
}

impl Eq for KripkeStructure {}

impl KripkeStructure {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut k = KripkeStructure::default();
        for a in letters {
            let a = a.into();
            if a.is_empty() || a.chars().any(char::is_whitespace) {
                return Err(Error::InvalidKripke(format!("bad letter `{a}`")));
            }
            if k.letter_index.contains_key(&a) {
                return Err(Error::InvalidKripke(format!("letter `{a}` declared twice")));
            }
            k.letter_index.insert(a.clone(), k.letters.len());
            k.letters.push(a);
            k.succ.push(Vec::new());
            k.pred.push(Vec::new());
        }
        Ok(k)
    }

    pub fn add_world<I, S>(&mut self, id: impl Into<String>, props: I) -> Result<WorldId>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let id = id.into();
        if self.world_index.contains_key(&id) {
            return Err(Error::InvalidKripke(format!("world `{id}` declared twice")));
        }
        let w = self.worlds.len();
        self.world_index.insert(id.clone(), w);
        self.worlds.push(id);
        self.props.push(props.into_iter().map(Into::into).collect());
        for a in 0..self.letters.len() {
            self.succ[a].push(Vec::new());
            self.pred[a].push(Vec::new());
        }
        Ok(w)
    }

    pub fn add_edge(&mut self, from: &str, letter: &str, to: &str) -> Result<()> {
        let x = self.world(from)?;
        let y = self.world(to)?;
        let a = self.letter(letter)?;
        self.add_edge_ids(x, a, y);
        Ok(())
    }

    pub fn add_edge_ids(&mut self, x: WorldId, a: usize, y: WorldId) {
        if self.edges.insert((x, a, y)) {
            self.succ[a][x].push(y);
            self.pred[a][y].push(x);
        }
    }

    pub fn world(&self, id: &str) -> Result<WorldId> {
        self.world_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownWorld(id.to_string()))
    }

    pub fn letter(&self, a: &str) -> Result<usize> {
        self.letter_index
            .get(a)
            .copied()
            .ok_or_else(|| Error::UnknownLetter(a.to_string()))
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_name(&self, w: WorldId) -> &str {
        &self.worlds[w]
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn props(&self, w: WorldId) -> &BTreeSet<String> {
        &self.props[w]
    }

    pub fn has_prop(&self, w: WorldId, p: &str) -> bool {
        self.props[w].contains(p)
    }

    /// Edges as `(from, letter, to)` index triples, sorted.
    pub fn edges(&self) -> &BTreeSet<(WorldId, usize, WorldId)> {
        &self.edges
    }

    pub fn successors(&self, x: WorldId, a: usize) -> &[WorldId] {
        &self.succ[a][x]
    }

    pub fn predecessors(&self, y: WorldId, a: usize) -> &[WorldId] {
        &self.pred[a][y]
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.worlds.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }
}

/// A binary relation on the worlds of one structure, stored as one
/// successor set per source world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldRelation {
    rows: Vec<FixedBitSet>,
}

impl WorldRelation {
    pub fn empty(worlds: usize) -> Self {
        WorldRelation {
            rows: vec![FixedBitSet::with_capacity(worlds); worlds],
        }
    }

    pub fn identity(worlds: usize) -> Self {
        let mut r = Self::empty(worlds);
        for x in 0..worlds {
            r.rows[x].insert(x);
        }
        r
    }

    pub fn diagonal(set: &FixedBitSet) -> Self {
        let mut r = Self::empty(set.len());
        for x in set.ones() {
            r.rows[x].insert(x);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, x: WorldId, y: WorldId) {
        self.rows[x].insert(y);
    }

    pub fn contains(&self, x: WorldId, y: WorldId) -> bool {
        self.rows[x].contains(y)
    }

    pub fn row(&self, x: WorldId) -> &FixedBitSet {
        &self.rows[x]
    }

    pub fn set_row(&mut self, x: WorldId, row: FixedBitSet) {
        self.rows[x] = row;
    }

    pub fn union_with(&mut self, other: &WorldRelation) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
    }

    /// `self ∘ other`: first `self`, then `other`.
    pub fn then(&self, other: &WorldRelation) -> WorldRelation {
        let mut out = Self::empty(self.rows.len());
        for (x, row) in self.rows.iter().enumerate() {
            for y in row.ones() {
                out.rows[x].union_with(&other.rows[y]);
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_clear())
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (WorldId, WorldId)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.ones().map(move |y| (x, y)))
    }

    /// Pairs as world names, sorted.
    pub fn named_pairs(&self, k: &KripkeStructure) -> BTreeSet<(String, String)> {
        self.pairs()
            .map(|(x, y)| (k.world_name(x).to_string(), k.world_name(y).to_string()))
            .collect()
    }

    /// True if every pair is of the form `(x, x)`.
    pub fn is_sub_identity(&self) -> bool {
        self.pairs().all(|(x, y)| x == y)
    }
}
