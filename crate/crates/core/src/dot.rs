//! Graphviz export. Nodes and edges are emitted in sorted order so equal
//! inputs give byte-identical output.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::mvpa::{Mvpa, BOTTOM};
use crate::pdl::KripkeStructure;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' | '\\' => {
                out.push('\\');
                out.push(ch);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

fn symbol(g: &str) -> &str {
    if g == BOTTOM {
        "⊥"
    } else {
        g
    }
}

/// Accepting states are double circles, initial states bold.
pub fn mvpa_dot(m: &Mvpa) -> String {
    let mut out = String::from("digraph mvpa {\n  rankdir=LR;\n");
    let states: BTreeSet<&str> = m.states().iter().map(String::as_str).collect();
    for q in states {
        let shape = if m.final_states().contains(q) { "doublecircle" } else { "circle" };
        let style = if m.initial_states().contains(q) { ", style=bold" } else { "" };
        let _ = writeln!(out, "  {} [shape={shape}{style}];", quote(q));
    }
    let mut edges: BTreeSet<(&str, &str, String)> = BTreeSet::new();
    for t in m.call_transitions() {
        edges.insert((&t.from, &t.to, format!("{}/push {}", t.letter, symbol(&t.push))));
    }
    for t in m.return_transitions() {
        edges.insert((&t.from, &t.to, format!("{}/pop {}", t.letter, symbol(&t.pop))));
    }
    for t in m.internal_transitions() {
        edges.insert((&t.from, &t.to, t.letter.clone()));
    }
    for (from, to, label) in edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(from), quote(to), quote(&label));
    }
    out.push_str("}\n");
    out
}

/// Worlds are labelled with their id and propositions.
pub fn kripke_dot(k: &KripkeStructure) -> String {
    let mut out = String::from("digraph kripke {\n");
    let mut worlds: Vec<usize> = (0..k.world_count()).collect();
    worlds.sort_by(|&a, &b| k.world_name(a).cmp(k.world_name(b)));
    for w in worlds {
        let name = k.world_name(w);
        let props: Vec<&str> = k.props(w).iter().map(String::as_str).collect();
        let label = format!("{name}\n{{{}}}", props.join(", "));
        let _ = writeln!(out, "  {} [label={}];", quote(name), quote(&label));
    }
    let edges: BTreeSet<(&str, &str, &str)> = k
        .edges()
        .iter()
        .map(|&(x, a, y)| (k.world_name(x), k.letters()[a].as_str(), k.world_name(y)))
        .collect();
    for (from, a, to) in edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(from), quote(to), quote(a));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::languages::{build_automaton, Family, LanguageId};

    fn count(text: &str) -> (usize, usize) {
        let edges = text.lines().filter(|l| l.contains("->")).count();
        let nodes = text.lines().filter(|l| l.contains(" [") && !l.contains("->")).count();
        (nodes, edges)
    }

    #[test]
    fn horizontal_machine_shape() {
        let m = build_automaton(LanguageId::new(Family::Horizontal, 0).unwrap());
        let text = mvpa_dot(&m);
        assert_eq!(count(&text), (5, 6));
        assert!(text.contains("\"p\" [shape=doublecircle]"), "{text}");
        assert_eq!(text, mvpa_dot(&m.clone()));
    }

    #[test]
    fn empty_kripke() {
        let k = KripkeStructure::new(Vec::<String>::new()).unwrap();
        assert_eq!(kripke_dot(&k), "digraph kripke {\n}\n");
    }
}
