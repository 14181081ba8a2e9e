use std::fmt::Write;

use super::{EdgeTag, ExclusivityGraph};

/// Graphviz source; A-side edges red, B-side blue, edges triggered by both
/// sides green. Vertices are labeled by their events when available.
pub fn to_dot(g: &ExclusivityGraph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", sanitize(name)).unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();
    for v in 0..g.n() {
        let label = match g.labels() {
            Some(l) => l[v].to_string(),
            None => v.to_string(),
        };
        writeln!(out, "  {v} [label=\"{label}\"];").unwrap();
    }
    for (u, v, tag) in g.edges() {
        let color = match tag {
            EdgeTag::AOnly => "red",
            EdgeTag::BOnly => "blue",
            EdgeTag::Both => "green",
        };
        writeln!(out, "  {u} -- {v} [color={color}];").unwrap();
    }
    out.push_str("}\n");
    out
}

fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
        format!("g_{s}")
    } else {
        s
    }
}
