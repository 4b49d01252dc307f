//! Translation of a tiling system into a formula over the fixed two-stack
//! alphabet whose models contain a snake through the plane carrying a
//! tiling.

use crate::languages::{build_automaton, pair, Family, LanguageId, A1, B2, C, D, LETTERS};
use crate::pdl::{AutomatonProgram, Formula, Program, Regex};
use crate::tiling::system::TilingSystem;

/// Shape of the existential part of the snake-forcing conjunct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnakeVariant {
    /// `<(a1 b2)* d> true` and `<(a2 b1)* c> true`.
    #[default]
    Star,
    /// `<(a1 b2)+ d> true` and `<(a2 b1)+ c> true`.
    Plus,
}

/// The four conjuncts of the reduction formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionFormula {
    pub snake: Formula,
    pub recur: Formula,
    pub tile: Formula,
    pub matching: Formula,
}

impl ReductionFormula {
    pub const NAMES: [&'static str; 4] = ["snake", "recur", "tile", "matching"];

    pub fn parts(&self) -> [(&'static str, &Formula); 4] {
        [
            ("snake", &self.snake),
            ("recur", &self.recur),
            ("tile", &self.tile),
            ("matching", &self.matching),
        ]
    }

    pub fn to_formula(&self) -> Formula {
        Formula::conjunction([
            self.snake.clone(),
            self.recur.clone(),
            self.tile.clone(),
            self.matching.clone(),
        ])
    }
}

/// The automaton program for one of the six reduction languages, named as
/// on the command line (`L0`, `L1_h`, ...).
pub fn language_program(family: Family, level: u8) -> Program {
    let id = LanguageId::new(family, level).expect("level is 0 or 1");
    Program::Automaton(AutomatonProgram::new(id.to_string(), build_automaton(id)))
}

fn letter(a: &str) -> Regex {
    Regex::letter(a)
}

fn pair_regex(l: u8) -> Regex {
    Regex::word(&pair(l))
}

/// `(a1 | a2 | b1 | b2 | c | d)*`.
pub fn any_word() -> Regex {
    Regex::star(Regex::any(LETTERS.iter().map(|a| letter(a))))
}

/// `(a1 b2)* d (a2 b1)* c`: one down-and-up sweep between two `c` markers.
pub fn sweep() -> Regex {
    Regex::seq([
        Regex::star(pair_regex(0)),
        letter(D),
        Regex::star(pair_regex(1)),
        letter(C),
    ])
}

/// The recurrence program: sweeps until `t0` is seen at a first-column
/// world, either just after a `c a1 b2` or just before a `c`.
pub fn recurrence(t0: &str) -> Regex {
    let test = || Regex::test(Formula::atom(t0));
    let top = Regex::seq([letter(A1), letter(B2), test(), sweep()]);
    let bottom = Regex::seq([
        Regex::star(pair_regex(0)),
        letter(D),
        Regex::star(pair_regex(1)),
        test(),
        letter(C),
    ]);
    Regex::seq([Regex::star(sweep()), Regex::union(top, bottom)])
}

fn snake(variant: SnakeVariant) -> Formula {
    let repeat = |l: u8| match variant {
        SnakeVariant::Star => Regex::star(pair_regex(l)),
        SnakeVariant::Plus => Regex::plus(pair_regex(l)),
    };
    let opening = Regex::seq([letter(C), pair_regex(0), letter(D), pair_regex(1).power(2), letter(C)]);
    let after_c = Formula::and(
        Formula::diamond(Regex::seq([repeat(0), letter(D)]).into(), Formula::True),
        Formula::boxed(language_program(Family::Plain, 0), Formula::falsity()),
    );
    let after_d = Formula::and(
        Formula::diamond(Regex::seq([repeat(1), letter(C)]).into(), Formula::True),
        Formula::boxed(language_program(Family::Plain, 1), Formula::falsity()),
    );
    Formula::conjunction([
        Formula::diamond(opening.into(), Formula::True),
        Formula::boxed(Regex::concat(any_word(), letter(C)).into(), after_c),
        Formula::boxed(Regex::concat(any_word(), letter(D)).into(), after_d),
    ])
}

fn recur(system: &TilingSystem) -> Formula {
    Formula::boxed(
        Regex::concat(any_word(), letter(C)).into(),
        Formula::diamond(recurrence(system.t0()).into(), Formula::True),
    )
}

fn tile(system: &TilingSystem) -> Formula {
    let exactly = |t: &String| {
        let others = system
            .tiles()
            .iter()
            .filter(|u| *u != t)
            .map(|u| Formula::not(Formula::and(Formula::atom(t), Formula::atom(u))));
        Formula::conjunction(std::iter::once(Formula::atom(t)).chain(others))
    };
    Formula::boxed(any_word().into(), Formula::disjunction(system.tiles().iter().map(exactly)))
}

fn matching_half(system: &TilingSystem, level: u8) -> Formula {
    let marker = if level == 0 { C } else { D };
    let reach = Regex::seq([any_word(), letter(marker), Regex::plus(pair_regex(level))]);
    let neighbours = |succ: Vec<&str>| Formula::disjunction(succ.into_iter().map(Formula::atom));
    let rules = system.tiles().iter().map(|t| {
        Formula::implies(
            Formula::atom(t),
            Formula::and(
                Formula::boxed(language_program(Family::Horizontal, level), neighbours(system.h_successors(t))),
                Formula::boxed(language_program(Family::Vertical, level), neighbours(system.v_successors(t))),
            ),
        )
    });
    Formula::boxed(reach.into(), Formula::conjunction(rules))
}

fn matching(system: &TilingSystem) -> Formula {
    Formula::and(matching_half(system, 0), matching_half(system, 1))
}

/// Compiles `system` into its reduction formula.
pub fn compile(system: &TilingSystem, variant: SnakeVariant) -> ReductionFormula {
    ReductionFormula {
        snake: snake(variant),
        recur: recur(system),
        tile: tile(system),
        matching: matching(system),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdl::syntax::print_formula;

    #[test]
    fn singleton_system() {
        let t = TilingSystem::singleton("t0");
        let phi = compile(&t, SnakeVariant::Star);
        assert_eq!(phi.tile, Formula::boxed(any_word().into(), Formula::atom("t0")));
        let text = print_formula(&phi.matching);
        assert!(text.contains("(box (mvpa L0_h) (prop t0))"), "{text}");
        assert!(text.contains("(box (mvpa L1_v) (prop t0))"), "{text}");
    }

    #[test]
    fn empty_h_gives_false() {
        let t = TilingSystem::new(["t0"], [], [("t0", "t0")], "t0").unwrap();
        let text = print_formula(&compile(&t, SnakeVariant::Star).matching);
        assert!(text.contains("(box (mvpa L0_h) (not true))"), "{text}");
    }

    #[test]
    fn automata_are_the_six_machines() {
        let t = TilingSystem::singleton("t0");
        let phi = compile(&t, SnakeVariant::Star).to_formula();
        let mut names: Vec<_> = phi.automata().iter().map(|a| a.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names, ["L0", "L0_h", "L0_v", "L1", "L1_h", "L1_v"]);
        for a in phi.automata() {
            assert_eq!(*a.machine, build_automaton(a.name.parse().unwrap()));
        }
        assert_eq!(phi.max_phase_bound(), Some(2));
    }

    #[test]
    fn snake_opening_and_variants() {
        let star = print_formula(&compile(&TilingSystem::singleton("t0"), SnakeVariant::Star).snake);
        assert!(star.starts_with("(and (and (dia (re \"c a1 b2 d a2 b1 a2 b1 c\") true)"), "{star}");
        assert!(star.contains("(dia (re \"(a1 b2)* d\") true)"));
        let plus = print_formula(&compile(&TilingSystem::singleton("t0"), SnakeVariant::Plus).snake);
        assert!(plus.contains("(dia (re \"a1 b2 (a1 b2)* d\") true)"), "{plus}");
        assert!(plus.contains("(dia (re \"a2 b1 (a2 b1)* c\") true)"), "{plus}");
    }
}
