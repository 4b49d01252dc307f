use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A recurring tiling system `(T, H, V, t0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSystem {
    tiles: Vec<String>,
    horizontal: BTreeSet<(String, String)>,
    vertical: BTreeSet<(String, String)>,
    t0: String,
}

impl TilingSystem {
    pub fn new<S: Into<String>>(
        tiles: impl IntoIterator<Item = S>,
        horizontal: impl IntoIterator<Item = (S, S)>,
        vertical: impl IntoIterator<Item = (S, S)>,
        t0: impl Into<String>,
    ) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        for t in tiles {
            let t = t.into();
            if t.is_empty() || t.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '"')) {
                return Err(Error::InvalidTiling(format!("bad tile name `{t}`")));
            }
            if names.contains(&t) {
                return Err(Error::InvalidTiling(format!("tile `{t}` declared twice")));
            }
            names.push(t);
        }
        if names.is_empty() {
            return Err(Error::InvalidTiling("no tiles".into()));
        }
        let known = |set: &str, pairs: Vec<(String, String)>| -> Result<BTreeSet<(String, String)>> {
            for (a, b) in &pairs {
                for t in [a, b] {
                    if !names.contains(t) {
                        return Err(Error::InvalidTiling(format!("{set} mentions undeclared tile `{t}`")));
                    }
                }
            }
            Ok(pairs.into_iter().collect())
        };
        let horizontal = known("h", horizontal.into_iter().map(|(a, b)| (a.into(), b.into())).collect())?;
        let vertical = known("v", vertical.into_iter().map(|(a, b)| (a.into(), b.into())).collect())?;
        let t0 = t0.into();
        if !names.contains(&t0) {
            return Err(Error::InvalidTiling(format!("t0 `{t0}` is not a tile")));
        }
        Ok(TilingSystem {
            tiles: names,
            horizontal,
            vertical,
            t0,
        })
    }

    /// The one-tile system whose tile matches itself both ways.
    pub fn singleton(t0: &str) -> Self {
        TilingSystem::new([t0], [(t0, t0)], [(t0, t0)], t0).expect("valid singleton")
    }

    pub fn tiles(&self) -> &[String] {
        &self.tiles
    }

    pub fn horizontal(&self) -> &BTreeSet<(String, String)> {
        &self.horizontal
    }

    pub fn vertical(&self) -> &BTreeSet<(String, String)> {
        &self.vertical
    }

    pub fn t0(&self) -> &str {
        &self.t0
    }

    pub fn h_allows(&self, a: &str, b: &str) -> bool {
        self.horizontal.contains(&(a.to_string(), b.to_string()))
    }

    pub fn v_allows(&self, a: &str, b: &str) -> bool {
        self.vertical.contains(&(a.to_string(), b.to_string()))
    }

    /// Right neighbours `t'` with `(t, t') in H`, in tile order.
    pub fn h_successors(&self, t: &str) -> Vec<&str> {
        self.tiles.iter().filter(|u| self.h_allows(t, u)).map(String::as_str).collect()
    }

    /// Upper neighbours `t'` with `(t, t') in V`, in tile order.
    pub fn v_successors(&self, t: &str) -> Vec<&str> {
        self.tiles.iter().filter(|u| self.v_allows(t, u)).map(String::as_str).collect()
    }
}

/// A tiling of the triangle `{(n, m) | n + m <= R}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionGrid {
    size: usize,
    cells: BTreeMap<(usize, usize), String>,
}

impl SolutionGrid {
    pub fn new(size: usize, cells: BTreeMap<(usize, usize), String>) -> Result<Self> {
        if let Some(&(n, m)) = cells.keys().find(|(n, m)| n + m > size) {
            return Err(Error::format("cells", format!("({n}, {m}) lies outside n + m <= {size}")));
        }
        for m in 0..=size {
            for n in 0..=size - m {
                if !cells.contains_key(&(n, m)) {
                    return Err(Error::IncompleteGrid { n, m });
                }
            }
        }
        Ok(SolutionGrid { size, cells })
    }

    pub fn uniform(size: usize, tile: &str) -> Self {
        let cells = triangle(size).map(|c| (c, tile.to_string())).collect();
        SolutionGrid { size, cells }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, n: usize, m: usize) -> Option<&str> {
        self.cells.get(&(n, m)).map(String::as_str)
    }

    pub fn cells(&self) -> &BTreeMap<(usize, usize), String> {
        &self.cells
    }

    /// Same grid with one cell replaced.
    pub fn with_cell(&self, n: usize, m: usize, tile: &str) -> Result<Self> {
        if n + m > self.size {
            return Err(Error::format("cells", format!("({n}, {m}) lies outside n + m <= {}", self.size)));
        }
        let mut g = self.clone();
        g.cells.insert((n, m), tile.to_string());
        Ok(g)
    }

    /// Restriction to the smaller triangle `n + m <= size`.
    pub fn truncate(&self, size: usize) -> Result<Self> {
        if size > self.size {
            return Err(Error::IncompleteGrid { n: 0, m: self.size + 1 });
        }
        let cells = self
            .cells
            .iter()
            .filter(|((n, m), _)| n + m <= size)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Ok(SolutionGrid { size, cells })
    }
}

/// Cells of the triangle, row by row.
pub fn triangle(size: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=size).flat_map(move |m| (0..=size - m).map(move |n| (n, m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// A neighbouring pair outside `H` (horizontal) or `V` (vertical). The
/// cell `(n, m)` is the left or lower one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub n: usize,
    pub m: usize,
    pub direction: Direction,
    pub from: String,
    pub to: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = match self.direction {
            Direction::Horizontal => "H",
            Direction::Vertical => "V",
        };
        write!(f, "({}, {}): ({}, {}) not in {set}", self.n, self.m, self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub violations: Vec<Violation>,
    /// Cells `(0, m)` holding `t0`; recurrence cannot be decided on a
    /// finite grid, so it is only counted.
    pub t0_in_column_zero: usize,
}

/// Checks every in-triangle neighbouring pair against `H` and `V`.
pub fn check_grid(system: &TilingSystem, grid: &SolutionGrid) -> GridReport {
    let r = grid.size();
    let mut violations = Vec::new();
    for (n, m) in triangle(r) {
        let here = grid.get(n, m).expect("grid is total");
        if n + 1 + m <= r {
            let right = grid.get(n + 1, m).expect("grid is total");
            if !system.h_allows(here, right) {
                violations.push(Violation {
                    n,
                    m,
                    direction: Direction::Horizontal,
                    from: here.to_string(),
                    to: right.to_string(),
                });
            }
        }
        if n + m < r {
            let up = grid.get(n, m + 1).expect("grid is total");
            if !system.v_allows(here, up) {
                violations.push(Violation {
                    n,
                    m,
                    direction: Direction::Vertical,
                    from: here.to_string(),
                    to: up.to_string(),
                });
            }
        }
    }
    violations.sort();
    let t0_in_column_zero = (0..=r).filter(|&m| grid.get(0, m) == Some(system.t0())).count();
    GridReport {
        violations,
        t0_in_column_zero,
    }
}

/// Backtracking search for a violation-free tiling of the triangle of size
/// `size`. Cells are filled row by row, tiles tried in declaration order.
/// With `force_column_zero`, every cell `(0, m)` must hold `t0`.
pub fn bounded_tiler(system: &TilingSystem, size: usize, force_column_zero: bool) -> Option<SolutionGrid> {
    let order: Vec<(usize, usize)> = triangle(size).collect();
    let mut cells: BTreeMap<(usize, usize), String> = BTreeMap::new();
    if extend(system, &order, 0, force_column_zero, &mut cells) {
        Some(SolutionGrid { size, cells })
    } else {
        None
    }
}

fn extend(
    system: &TilingSystem,
    order: &[(usize, usize)],
    next: usize,
    force: bool,
    cells: &mut BTreeMap<(usize, usize), String>,
) -> bool {
    let Some(&(n, m)) = order.get(next) else {
        return true;
    };
    for t in system.tiles() {
        if force && n == 0 && t != system.t0() {
            continue;
        }
        if n > 0 && !system.h_allows(&cells[&(n - 1, m)], t) {
            continue;
        }
        if m > 0 && !system.v_allows(&cells[&(n, m - 1)], t) {
            continue;
        }
        cells.insert((n, m), t.clone());
        if extend(system, order, next + 1, force, cells) {
            return true;
        }
        cells.remove(&(n, m));
    }
    false
}
