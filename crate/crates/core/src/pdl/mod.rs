//! Propositional dynamic logic over finite Kripke structures, with regular
//! and multi-stack automaton programs.

pub mod eval;
pub mod formula;
pub mod kripke;
mod nfa;
pub mod syntax;

pub use eval::{
    eval_formula, eval_program, eval_word, satisfies, witness, BoundPolicy, Evaluation, Precision,
    ProgramEvaluation, Symbol, Verdict, WitnessStep,
};
pub use formula::{AutomatonProgram, Formula, Program, Regex};
pub use kripke::{KripkeStructure, WorldId, WorldRelation};
