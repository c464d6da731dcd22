//! Text and Graphviz renderings of automata.

use std::fmt::Write;

use super::dfa::Dfa;
use super::monitor::MonitorDfa;
use super::nfa::SymbolicNfa;
use crate::vars::VarTable;

/// Line-oriented dump: vocabulary, initial states, then one line per edge.
pub fn dump_nfa(a: &SymbolicNfa, vars: &VarTable) -> String {
    let mut out = String::new();
    writeln!(out, "vocabulary: {}", vars.names_of(a.vocab()).join(" ")).unwrap();
    writeln!(out, "initial: {:?}", a.initial()).unwrap();
    for s in 0..a.num_states() {
        writeln!(out, "state {s}{}", if a.is_accepting(s) { " accepting" } else { "" }).unwrap();
        for (g, t) in a.edges(s) {
            writeln!(out, "  {} -> {t}", g.render(vars)).unwrap();
        }
    }
    out
}

pub fn dump_dfa(a: &Dfa, vars: &VarTable) -> String {
    dump_nfa(&a.to_nfa(), vars)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering; `highlight` states are drawn as double circles.
pub fn dot_nfa(a: &SymbolicNfa, vars: &VarTable, name: &str, highlight: &dyn Fn(usize) -> bool) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __init [shape=point];").unwrap();
    for s in 0..a.num_states() {
        let shape = if highlight(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  {s} [shape={shape}];").unwrap();
    }
    for s in a.initial() {
        writeln!(out, "  __init -> {s};").unwrap();
    }
    for s in 0..a.num_states() {
        for (g, t) in a.edges(s) {
            writeln!(out, "  {s} -> {t} [label=\"{}\"];", escape(&g.render(vars))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn dot_dfa(a: &Dfa, vars: &VarTable, name: &str) -> String {
    dot_nfa(&a.to_nfa(), vars, name, &|s| a.is_accepting(s))
}

/// Monitor rendering with dead states highlighted.
pub fn dot_monitor(m: &MonitorDfa, vars: &VarTable, name: &str) -> String {
    dot_dfa(m.dfa(), vars, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::monitor::ltl_to_monitor;
    use crate::ltl::parse;

    #[test]
    fn dump_lists_edges() {
        let t = VarTable::from_names(&["a"]).unwrap();
        let m = ltl_to_monitor(&parse("G a", &t).unwrap(), t.all()).unwrap();
        let text = dump_dfa(m.dfa(), &t);
        assert!(text.contains("vocabulary: a"));
        assert!(text.contains("  a -> 0"));
        assert!(text.contains("  !a -> 1"));
        let dot = dot_monitor(&m, &t, "G a");
        assert!(dot.starts_with("digraph \"G a\""));
        assert!(dot.contains("1 [shape=doublecircle]"));
    }
}
