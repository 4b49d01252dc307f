//! Recurring tiling systems and their encoding into formulas over the
//! reduction alphabet.

pub mod compile;
pub mod model;
pub mod system;

pub use compile::{compile, ReductionFormula, SnakeVariant};
pub use model::{
    build_model, check_interior, first_column_worlds, overall, pi, pi_inv, snake_block, snake_prefix, ClauseReport,
    SnakeModel,
};
pub use system::{bounded_tiler, check_grid, triangle, Direction, GridReport, SolutionGrid, TilingSystem, Violation};
