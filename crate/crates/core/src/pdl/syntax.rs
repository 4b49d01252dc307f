//! Parenthesized prefix syntax for formulas.
//!
//! ```text
//! F    ::= true | false | (prop NAME) | (not F) | (or F F) | (and F F)
//!        | (dia PROG F) | (box PROG F)
//! PROG ::= (re "REGEX") | (mvpa NAME)
//! ```
//!
//! Inside `re` strings, letters are separated by whitespace or `.`,
//! `|` is union, postfix `*` and `+` are star and plus, `()` is the empty
//! word, parentheses group and `(? F)` is a test. `"` and `\` are escaped
//! with a backslash. Letter tokens cannot contain `( ) | * + . " \`.
//!
//! The printer writes `and` and `box` back for their encodings and never
//! writes `false` (it prints `(not true)`), so printing and re-parsing
//! reproduces the same tree.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::pdl::formula::{AutomatonProgram, Formula, Program, Regex};

/// Maps a name after `mvpa` to an automaton program.
pub type Resolver<'a> = dyn Fn(&str) -> Result<AutomatonProgram> + 'a;

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    write_program(&mut out, p);
    out
}

pub fn print_regex(r: &Regex) -> String {
    let mut out = String::new();
    write_regex(&mut out, r, 0);
    out
}

fn write_formula(out: &mut String, f: &Formula) {
    if let Some((a, b)) = f.as_and() {
        out.push_str("(and ");
        write_formula(out, a);
        out.push(' ');
        write_formula(out, b);
        out.push(')');
        return;
    }
    if let Some((p, body)) = f.as_box() {
        out.push_str("(box ");
        write_program(out, p);
        out.push(' ');
        write_formula(out, body);
        out.push(')');
        return;
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::Atom(p) => {
            let _ = write!(out, "(prop {p})");
        }
        Formula::Or(a, b) => {
            out.push_str("(or ");
            write_formula(out, a);
            out.push(' ');
            write_formula(out, b);
            out.push(')');
        }
        Formula::Not(a) => {
            out.push_str("(not ");
            write_formula(out, a);
            out.push(')');
        }
        Formula::Diamond(p, body) => {
            out.push_str("(dia ");
            write_program(out, p);
            out.push(' ');
            write_formula(out, body);
            out.push(')');
        }
    }
}

fn write_program(out: &mut String, p: &Program) {
    match p {
        Program::Regex(r) => {
            out.push_str("(re \"");
            for ch in print_regex(r).chars() {
                if ch == '"' || ch == '\\' {
                    out.push('\\');
                }
                out.push(ch);
            }
            out.push_str("\")");
        }
        Program::Automaton(a) => {
            let _ = write!(out, "(mvpa {})", a.name);
        }
    }
}

fn precedence(r: &Regex) -> u8 {
    match r {
        Regex::Union(..) => 0,
        Regex::Concat(..) => 1,
        Regex::Star(_) => 2,
        _ => 3,
    }
}

fn write_regex(out: &mut String, r: &Regex, min: u8) {
    let wrap = precedence(r) < min;
    if wrap {
        out.push('(');
    }
    match r {
        Regex::Epsilon => out.push_str("()"),
        Regex::Letter(a) => out.push_str(a),
        Regex::Test(f) => {
            out.push_str("(? ");
            write_formula(out, f);
            out.push(')');
        }
        Regex::Union(a, b) => {
            write_regex(out, a, 0);
            out.push_str(" | ");
            write_regex(out, b, 1);
        }
        Regex::Concat(a, b) => {
            write_regex(out, a, 1);
            out.push(' ');
            write_regex(out, b, 2);
        }
        Regex::Star(a) => {
            write_regex(out, a, 2);
            out.push('*');
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Parses a formula; `mvpa` names are handed to `resolve`.
pub fn parse_formula(text: &str, resolve: &Resolver<'_>) -> Result<Formula> {
    let mut p = Parser::new(text, resolve);
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

/// Parses the body of a `re` string.
pub fn parse_regex(text: &str, resolve: &Resolver<'_>) -> Result<Regex> {
    let mut p = Parser::new(text, resolve);
    let r = p.regex_union()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected input in expression"));
    }
    Ok(r)
}

/// Resolver that rejects every automaton name.
pub fn no_automata(name: &str) -> Result<AutomatonProgram> {
    Err(Error::format("mvpa", format!("no automaton named `{name}` is available")))
}

struct Parser<'r, 'a> {
    chars: Vec<char>,
    pos: usize,
    resolve: &'r Resolver<'a>,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '"')
}

fn is_letter_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '|' | '*' | '+' | '.' | '"' | '\\')
}

impl<'r, 'a> Parser<'r, 'a> {
    fn new(text: &str, resolve: &'r Resolver<'a>) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            resolve,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn word(&mut self, accept: fn(char) -> bool) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && accept(self.chars[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let head = self.word(is_name_char)?;
                let f = match head.as_str() {
                    "prop" => Formula::Atom(self.word(is_name_char)?),
                    "not" => Formula::not(self.formula()?),
                    "or" => {
                        let a = self.formula()?;
                        Formula::or(a, self.formula()?)
                    }
                    "and" => {
                        let a = self.formula()?;
                        Formula::and(a, self.formula()?)
                    }
                    "dia" => {
                        let p = self.program()?;
                        Formula::diamond(p, self.formula()?)
                    }
                    "box" => {
                        let p = self.program()?;
                        Formula::boxed(p, self.formula()?)
                    }
                    other => return Err(self.error(format!("unknown connective `{other}`"))),
                };
                self.expect(')')?;
                Ok(f)
            }
            Some(_) => match self.word(is_name_char)?.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::falsity()),
                other => Err(self.error(format!("unexpected `{other}`; atoms are written (prop NAME)"))),
            },
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn program(&mut self) -> Result<Program> {
        self.expect('(')?;
        let head = self.word(is_name_char)?;
        let p = match head.as_str() {
            "re" => {
                let body = self.string()?;
                let r = parse_regex(&body, self.resolve).map_err(|e| match e {
                    Error::Parse { position, message } => Error::Parse {
                        position: self.pos,
                        message: format!("in expression at offset {position}: {message}"),
                    },
                    other => other,
                })?;
                Program::Regex(r)
            }
            "mvpa" => {
                let name = self.word(is_name_char)?;
                Program::Automaton((self.resolve)(&name)?)
            }
            other => return Err(self.error(format!("unknown program kind `{other}`"))),
        };
        self.expect(')')?;
        Ok(p)
    }

    fn string(&mut self) -> Result<String> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            match self.chars.get(self.pos).copied() {
                None => return Err(self.error("unterminated string")),
                Some('"') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some('\\') => {
                    let c = self
                        .chars
                        .get(self.pos + 1)
                        .copied()
                        .ok_or_else(|| self.error("dangling escape"))?;
                    out.push(c);
                    self.pos += 2;
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
    }

    fn regex_union(&mut self) -> Result<Regex> {
        let mut r = self.regex_concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            r = Regex::union(r, self.regex_concat()?);
        }
        Ok(r)
    }

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some('(') => true,
            Some(c) => is_letter_char(c),
            None => false,
        }
    }

    fn regex_concat(&mut self) -> Result<Regex> {
        let mut r = self.regex_postfix()?;
        loop {
            if self.peek() == Some('.') {
                self.pos += 1;
                r = Regex::concat(r, self.regex_postfix()?);
            } else if self.starts_atom() {
                r = Regex::concat(r, self.regex_postfix()?);
            } else {
                return Ok(r);
            }
        }
    }

    fn regex_postfix(&mut self) -> Result<Regex> {
        let mut r = self.regex_atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    r = Regex::star(r);
                }
                Some('+') => {
                    self.pos += 1;
                    r = Regex::plus(r);
                }
                _ => return Ok(r),
            }
        }
    }

    fn regex_atom(&mut self) -> Result<Regex> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Regex::Epsilon);
                }
                if self.peek() == Some('?') {
                    self.pos += 1;
                    let f = self.formula()?;
                    self.expect(')')?;
                    return Ok(Regex::test(f));
                }
                let r = self.regex_union()?;
                self.expect(')')?;
                Ok(r)
            }
            Some(c) if is_letter_char(c) => Ok(Regex::Letter(self.word(is_letter_char)?)),
            Some(c) => Err(self.error(format!("unexpected `{c}` in expression"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::languages::build_automaton;

    fn builtin(name: &str) -> Result<AutomatonProgram> {
        let id = name.parse()?;
        Ok(AutomatonProgram::new(name, build_automaton(id)))
    }

    fn parse(s: &str) -> Formula {
        parse_formula(s, &builtin).unwrap()
    }

    #[test]
    fn round_trips_sugar() {
        for s in [
            "true",
            "(not true)",
            "(prop t0)",
            "(and (prop a) (or (prop b) (not (prop c))))",
            "(box (mvpa L0) (not true))",
            "(dia (re \"c a1 b2 d (a2 b1)* c\") true)",
            "(dia (re \"() | a1 (? (dia (re \\\"b2\\\") true)) b2*\") (prop x))",
        ] {
            let f = parse(s);
            assert_eq!(print_formula(&f), s);
            assert_eq!(parse(&print_formula(&f)), f);
        }
        assert_eq!(parse("false"), Formula::falsity());
    }

    #[test]
    fn regex_grammar() {
        let r = parse_regex("a.b | c*", &no_automata).unwrap();
        assert_eq!(
            r,
            Regex::union(
                Regex::concat(Regex::letter("a"), Regex::letter("b")),
                Regex::star(Regex::letter("c"))
            )
        );
        let plus = parse_regex("(a1 b2)+", &no_automata).unwrap();
        let pair = Regex::concat(Regex::letter("a1"), Regex::letter("b2"));
        assert_eq!(plus, Regex::plus(pair));
        // right-nested trees keep their shape through printing
        let nested = Regex::concat(Regex::letter("a"), Regex::concat(Regex::letter("b"), Regex::letter("c")));
        assert_eq!(parse_regex(&print_regex(&nested), &no_automata).unwrap(), nested);
        let stars = Regex::star(Regex::star(Regex::letter("a")));
        assert_eq!(print_regex(&stars), "a**");
        assert_eq!(parse_regex("a**", &no_automata).unwrap(), stars);
    }

    #[test]
    fn errors_name_the_problem() {
        assert!(matches!(parse_formula("(prop", &no_automata), Err(Error::Parse { .. })));
        assert!(matches!(parse_formula("p", &no_automata), Err(Error::Parse { .. })));
        assert!(matches!(parse_formula("(xor true true)", &no_automata), Err(Error::Parse { .. })));
        assert!(matches!(parse_formula("true true", &no_automata), Err(Error::Parse { .. })));
        assert!(parse_formula("(dia (mvpa L9) true)", &builtin).is_err());
        assert!(parse_formula("(dia (mvpa L0) true)", &no_automata).is_err());
        assert!(matches!(parse_formula("(dia (re \"a |\") true)", &no_automata), Err(Error::Parse { .. })));
    }
}
