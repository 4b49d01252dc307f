//! The diagonal bijection, snake words, and the finite truncation of the
//! model built from a solution grid.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::languages::{pair, LETTERS, C, D};
use crate::pdl::{eval_formula, eval_program, BoundPolicy, Formula, KripkeStructure, Precision, Program, Verdict, WorldId};
use crate::pdl::syntax::print_formula;
use crate::tiling::system::{triangle, SolutionGrid, TilingSystem};

/// `pi(n, m) = (n + m, m)`.
pub fn pi(n: usize, m: usize) -> (usize, usize) {
    (n + m, m)
}

/// `pi^-1(i, j) = (i - j, j)` for `j <= i`.
pub fn pi_inv(i: usize, j: usize) -> Result<(usize, usize)> {
    if j > i {
        return Err(Error::OutsideTriangle { i, j });
    }
    Ok((i - j, j))
}

/// Block `r >= 1` of the snake: `c (a1 b2)^r` for odd `r`, `d (a2 b1)^r`
/// for even `r`.
pub fn snake_block(r: usize) -> Vec<&'static str> {
    let (marker, w) = if r % 2 == 1 { (C, pair(0)) } else { (D, pair(1)) };
    let mut out = Vec::with_capacity(2 * r + 1);
    out.push(marker);
    for _ in 0..r {
        out.extend(w);
    }
    out
}

/// The first `segments` blocks of the snake.
pub fn snake_prefix(segments: usize) -> Vec<&'static str> {
    (1..=segments).flat_map(snake_block).collect()
}

/// World name of `x_{i,j}`.
pub fn world_name(i: usize, j: usize) -> String {
    format!("x_{i}_{j}")
}

pub const ROOT: &str = "x";

/// A finite truncation of the snake model: diagonals `0..=size`.
#[derive(Debug, Clone)]
pub struct SnakeModel {
    pub kripke: KripkeStructure,
    pub root: WorldId,
    pub size: usize,
    named: BTreeMap<(usize, usize), WorldId>,
    path: Vec<WorldId>,
    labels: Vec<&'static str>,
    diagonal: Vec<usize>,
}

impl SnakeModel {
    /// `x_{i,j}`, if it lies in the truncation.
    pub fn named(&self, i: usize, j: usize) -> Option<WorldId> {
        self.named.get(&(i, j)).copied()
    }

    pub fn named_worlds(&self) -> &BTreeMap<(usize, usize), WorldId> {
        &self.named
    }

    /// Worlds along the maximal path from the root, root first.
    pub fn path(&self) -> &[WorldId] {
        &self.path
    }

    /// Letters along the maximal path from the root.
    pub fn path_label(&self) -> &[&'static str] {
        &self.labels
    }

    /// The diagonal of the first named world at or after `w` on the path.
    pub fn diagonal(&self, w: WorldId) -> usize {
        self.diagonal[w]
    }

    /// Worlds whose diagonal is at most `size - 2`; all bounded
    /// continuations used by the formula stay inside the truncation there.
    pub fn is_interior(&self, w: WorldId) -> bool {
        self.diagonal[w] + 2 <= self.size
    }

    pub fn world_of_cell(&self, n: usize, m: usize) -> Option<WorldId> {
        let (i, j) = pi(n, m);
        self.named(i, j)
    }
}

/// Builds the truncated model for `grid`: root `x`, the named worlds
/// `x_i_j` with `i <= size`, and intermediates `b_<path index>` labelled
/// `t0`. The root is labelled `t0` as well.
pub fn build_model(system: &TilingSystem, grid: &SolutionGrid) -> Result<SnakeModel> {
    let size = grid.size();
    for (n, m) in triangle(size) {
        match grid.get(n, m) {
            Some(t) if system.tiles().iter().any(|u| u == t) => {}
            Some(t) => return Err(Error::InvalidTiling(format!("grid cell ({n},{m}) holds unknown tile `{t}`"))),
            None => return Err(Error::IncompleteGrid { n, m }),
        }
    }
    let t0 = system.t0();
    let mut k = KripkeStructure::new(LETTERS)?;
    let root = k.add_world(ROOT, [t0])?;
    let mut named = BTreeMap::new();
    let mut path = vec![root];
    let mut labels = Vec::new();
    let mut pending: Vec<WorldId> = vec![root];
    let mut diagonal = vec![0];
    let mut current = root;
    for i in 0..=size {
        let block = snake_block(i + 1);
        // The marker and first pair enter the diagonal; each later pair moves one cell.
        let cells: Vec<usize> = if i % 2 == 0 { (0..=i).rev().collect() } else { (0..=i).collect() };
        let mut letters = block.into_iter();
        for (step, &j) in cells.iter().enumerate() {
            let take = if step == 0 { 3 } else { 2 };
            let segment: Vec<&str> = letters.by_ref().take(take).collect();
            for (pos, &a) in segment.iter().enumerate() {
                let next = if pos + 1 == segment.len() {
                    let (n, m) = pi_inv(i, j)?;
                    let tile = grid.get(n, m).expect("checked above");
                    let w = k.add_world(world_name(i, j), [tile])?;
                    named.insert((i, j), w);
                    diagonal.push(i);
                    for p in pending.drain(..) {
                        diagonal[p] = i;
                    }
                    w
                } else {
                    let w = k.add_world(format!("b_{}", path.len()), [t0])?;
                    diagonal.push(i);
                    pending.push(w);
                    w
                };
                k.add_edge_ids(current, k.letter(a)?, next);
                path.push(next);
                labels.push(a);
                current = next;
            }
        }
    }
    Ok(SnakeModel {
        kripke: k,
        root,
        size,
        named,
        path,
        labels,
        diagonal,
    })
}

/// Worlds `y` on the path with `c a1 b2` ending in `y`, or with an outgoing
/// `c`.
pub fn first_column_worlds(model: &SnakeModel) -> Vec<WorldId> {
    let path = model.path();
    let labels = model.path_label();
    let mut out = Vec::new();
    for (idx, &y) in path.iter().enumerate() {
        let after = idx >= 3 && labels[idx - 3..idx] == [C, "a1", "b2"];
        let before = labels.get(idx) == Some(&C);
        if after || before {
            out.push(y);
        }
    }
    out.sort_unstable();
    out
}

/// Outcome of checking one top-level conjunct of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseReport {
    pub clause: String,
    pub verdict: Verdict,
    /// Number of worlds the clause body was checked at.
    pub checked: usize,
    pub failing: Vec<String>,
}

/// Checks every top-level conjunct of `formula` at the root. A conjunct
/// `[P] psi` with a regular `P` is checked by evaluating `psi` at the
/// interior `P`-successors of the root only; other conjuncts are evaluated
/// at the root.
pub fn check_interior(model: &SnakeModel, formula: &Formula, bound: usize) -> Result<Vec<ClauseReport>> {
    let k = &model.kripke;
    let policy = BoundPolicy::Witness(bound);
    let mut out = Vec::new();
    for clause in formula.conjuncts() {
        let report = match clause.as_box() {
            Some((p @ Program::Regex(_), body)) => {
                let reach = eval_program(k, p, BoundPolicy::Exact)?.relation;
                let sat = eval_formula(k, body, policy)?;
                let targets: Vec<WorldId> = reach.row(model.root).ones().filter(|&w| model.is_interior(w)).collect();
                let failing: Vec<String> = targets
                    .iter()
                    .filter(|&&w| !sat.contains(w))
                    .map(|&w| k.world_name(w).to_string())
                    .collect();
                ClauseReport {
                    clause: print_formula(clause),
                    verdict: Verdict::from_parts(failing.is_empty(), sat.precision),
                    checked: targets.len(),
                    failing,
                }
            }
            _ => {
                let sat = eval_formula(k, clause, policy)?;
                let holds = sat.contains(model.root);
                ClauseReport {
                    clause: print_formula(clause),
                    verdict: Verdict::from_parts(holds, sat.precision),
                    checked: 1,
                    failing: if holds { Vec::new() } else { vec![ROOT.to_string()] },
                }
            }
        };
        out.push(report);
    }
    Ok(out)
}

/// Combined verdict of a list of clause reports.
pub fn overall(reports: &[ClauseReport]) -> Verdict {
    let holds = reports.iter().all(|r| r.verdict.holds());
    let precision = reports
        .iter()
        .map(|r| match r.verdict {
            Verdict::BoundedHolds { bound } | Verdict::BoundedFails { bound } => Precision::Bounded(bound),
            _ => Precision::Exact,
        })
        .fold(Precision::Exact, Precision::join);
    Verdict::from_parts(holds, precision)
}
