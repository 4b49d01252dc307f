//! Multi-stack visibly pushdown automata with bounded phases, PDL over
//! finite Kripke structures with automaton programs, and the encoding of
//! recurring tiling systems into such formulas.

pub mod alphabet;
pub mod cli;
pub mod dot;
pub mod error;
pub mod io;
pub mod languages;
pub mod mvpa;
pub mod pdl;
pub mod phase;
pub mod tiling;

pub use alphabet::{CallReturnAlphabet, LetterId, LetterKind};
pub use error::{Error, Result};
pub use mvpa::{Configuration, Mvpa, Run, BOTTOM};
