//! JSON file formats for automata, Kripke structures, tiling systems and
//! grids.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::alphabet::CallReturnAlphabet;
use crate::error::{Error, Result};
use crate::mvpa::{CallTransition, InternalTransition, Mvpa, ReturnTransition, BOTTOM};
use crate::pdl::KripkeStructure;
use crate::tiling::{SolutionGrid, TilingSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub stacks: usize,
    pub calls: Vec<Vec<String>>,
    pub returns: Vec<Vec<String>>,
    pub internals: Vec<String>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub finals: Vec<String>,
    pub stack_alphabet: Vec<String>,
    pub k: usize,
    pub transitions: TransitionsFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionsFile {
    #[serde(default)]
    pub call: Vec<CallTransition>,
    #[serde(default)]
    pub ret: Vec<ReturnTransition>,
    #[serde(default)]
    pub int: Vec<InternalTransition>,
}

impl From<&Mvpa> for AutomatonFile {
    fn from(m: &Mvpa) -> Self {
        let a = m.alphabet();
        let sorted = |s: &std::collections::BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>();
        AutomatonFile {
            stacks: a.stacks(),
            calls: (1..=a.stacks()).map(|i| sorted(a.calls(i))).collect(),
            returns: (1..=a.stacks()).map(|i| sorted(a.returns(i))).collect(),
            internals: sorted(a.internals()),
            states: m.states().to_vec(),
            initial: sorted(m.initial_states()),
            finals: sorted(m.final_states()),
            stack_alphabet: m.stack_symbols().to_vec(),
            k: m.phase_bound(),
            transitions: TransitionsFile {
                call: m.call_transitions().iter().cloned().collect(),
                ret: m.return_transitions().iter().cloned().collect(),
                int: m.internal_transitions().iter().cloned().collect(),
            },
        }
    }
}

impl TryFrom<AutomatonFile> for Mvpa {
    type Error = Error;

    fn try_from(f: AutomatonFile) -> Result<Mvpa> {
        if f.calls.len() != f.stacks {
            return Err(Error::format("calls", format!("expected {} arrays, found {}", f.stacks, f.calls.len())));
        }
        if f.returns.len() != f.stacks {
            return Err(Error::format(
                "returns",
                format!("expected {} arrays, found {}", f.stacks, f.returns.len()),
            ));
        }
        if !f.stack_alphabet.iter().any(|g| g == BOTTOM) {
            return Err(Error::format("stack_alphabet", format!("must contain `{BOTTOM}`")));
        }
        let alphabet = CallReturnAlphabet::new(&f.calls, &f.returns, &f.internals)?;
        let mut b = Mvpa::builder(alphabet).states(f.states).phase_bound(f.k);
        for q in &f.initial {
            b = b.initial(q);
        }
        for q in &f.finals {
            b = b.accepting(q);
        }
        for g in f.stack_alphabet {
            b = b.stack_symbol(g);
        }
        for t in &f.transitions.call {
            b = b.call(&t.from, &t.letter, &t.to, &t.push);
        }
        for t in &f.transitions.ret {
            b = b.ret(&t.from, &t.letter, &t.pop, &t.to);
        }
        for t in &f.transitions.int {
            b = b.internal(&t.from, &t.letter, &t.to);
        }
        b.build()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldEntry {
    pub id: String,
    #[serde(default)]
    pub props: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: String,
    pub letter: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KripkeFile {
    pub worlds: Vec<WorldEntry>,
    pub letters: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

impl KripkeFile {
    pub fn from_structure(k: &KripkeStructure, root: Option<&str>) -> Self {
        KripkeFile {
            worlds: (0..k.world_count())
                .map(|w| WorldEntry {
                    id: k.world_name(w).to_string(),
                    props: k.props(w).iter().cloned().collect(),
                })
                .collect(),
            letters: k.letters().to_vec(),
            edges: k
                .edges()
                .iter()
                .map(|&(x, a, y)| EdgeEntry {
                    from: k.world_name(x).to_string(),
                    letter: k.letters()[a].clone(),
                    to: k.world_name(y).to_string(),
                })
                .collect(),
            root: root.map(str::to_string),
        }
    }

    pub fn to_structure(&self) -> Result<KripkeStructure> {
        let mut k = KripkeStructure::new(self.letters.iter().cloned())?;
        for w in &self.worlds {
            k.add_world(w.id.clone(), w.props.iter().cloned())?;
        }
        for e in &self.edges {
            k.add_edge(&e.from, &e.letter, &e.to)?;
        }
        if let Some(r) = &self.root {
            k.world(r).map_err(|_| Error::format("root", format!("unknown world `{r}`")))?;
        }
        Ok(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingFile {
    pub tiles: Vec<String>,
    pub h: Vec<(String, String)>,
    pub v: Vec<(String, String)>,
    pub t0: String,
}

impl From<&TilingSystem> for TilingFile {
    fn from(t: &TilingSystem) -> Self {
        TilingFile {
            tiles: t.tiles().to_vec(),
            h: t.horizontal().iter().cloned().collect(),
            v: t.vertical().iter().cloned().collect(),
            t0: t.t0().to_string(),
        }
    }
}

impl TryFrom<TilingFile> for TilingSystem {
    type Error = Error;

    fn try_from(f: TilingFile) -> Result<TilingSystem> {
        TilingSystem::new(f.tiles, f.h, f.v, f.t0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub n: usize,
    pub m: usize,
    pub tile: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    #[serde(rename = "R")]
    pub size: usize,
    pub cells: Vec<CellEntry>,
}

impl From<&SolutionGrid> for GridFile {
    fn from(g: &SolutionGrid) -> Self {
        GridFile {
            size: g.size(),
            cells: g
                .cells()
                .iter()
                .map(|(&(n, m), t)| CellEntry { n, m, tile: t.clone() })
                .collect(),
        }
    }
}

impl TryFrom<GridFile> for SolutionGrid {
    type Error = Error;

    fn try_from(f: GridFile) -> Result<SolutionGrid> {
        let mut cells = BTreeMap::new();
        for c in f.cells {
            if cells.insert((c.n, c.m), c.tile).is_some() {
                return Err(Error::format("cells", format!("cell ({}, {}) given twice", c.n, c.m)));
            }
        }
        SolutionGrid::new(f.size, cells)
    }
}

pub fn from_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::format(what, e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types serialize")
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn parse_automaton(text: &str) -> Result<Mvpa> {
    from_json::<AutomatonFile>("automaton", text)?.try_into()
}

pub fn write_automaton(m: &Mvpa) -> String {
    to_json(&AutomatonFile::from(m))
}

/// Parses a Kripke file, returning the structure and its optional root.
pub fn parse_kripke(text: &str) -> Result<(KripkeStructure, Option<String>)> {
    let f: KripkeFile = from_json("kripke", text)?;
    Ok((f.to_structure()?, f.root))
}

pub fn write_kripke(k: &KripkeStructure, root: Option<&str>) -> String {
    to_json(&KripkeFile::from_structure(k, root))
}

pub fn parse_tiling(text: &str) -> Result<TilingSystem> {
    from_json::<TilingFile>("tiling", text)?.try_into()
}

pub fn write_tiling(t: &TilingSystem) -> String {
    to_json(&TilingFile::from(t))
}

pub fn parse_grid(text: &str) -> Result<SolutionGrid> {
    from_json::<GridFile>("grid", text)?.try_into()
}

pub fn write_grid(g: &SolutionGrid) -> String {
    to_json(&GridFile::from(g))
}
