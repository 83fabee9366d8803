use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::graph::LabeledGraph;
use crate::error::{Error, Result};

fn sorted(g: &LabeledGraph) -> LabeledGraph {
    let mut g = g.clone();
    g.canonicalize();
    g
}

/// DOT digraph, one line per labelled edge. For labels acting as involutions
/// the two directions of an edge are drawn once, undirected.
pub fn to_dot(g: &LabeledGraph) -> String {
    let g = sorted(g);
    let involutive = g.involutive_labels();
    let mut out = String::from("digraph schreier {\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let shape = if i == g.basepoint {
            " [shape=doublecircle]"
        } else {
            ""
        };
        let _ = writeln!(out, "  \"{v}\"{shape};");
    }
    for &(s, t, l) in &g.edges {
        if involutive[l] {
            if s > t {
                continue;
            }
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\", dir=none];",
                g.vertices[s], g.vertices[t], g.labels[l]
            );
        } else {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                g.vertices[s], g.vertices[t], g.labels[l]
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Number of edge lines [`to_dot`] writes.
pub fn dot_edge_count(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains(" -> ")).count()
}

/// `# basepoint,<v>` then `src,dst,label` rows, one per directed edge.
pub fn to_csv(g: &LabeledGraph) -> String {
    let g = sorted(g);
    let mut out = format!("# basepoint,{}\nsrc,dst,label\n", g.vertices[g.basepoint]);
    for &(s, t, l) in &g.edges {
        let _ = writeln!(out, "{},{},{}", g.vertices[s], g.vertices[t], g.labels[l]);
    }
    out
}

/// Inverse of [`to_csv`]. Without a basepoint line the first vertex in sorted
/// order is used.
pub fn from_csv(text: &str) -> Result<LabeledGraph> {
    let mut basepoint_name = None;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line == "src,dst,label" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(b) = rest.trim().strip_prefix("basepoint,") {
                basepoint_name = Some(b.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [s, t, l] = fields[..] else {
            return Err(Error::InvalidInput(format!(
                "line {}: expected src,dst,label",
                lineno + 1
            )));
        };
        rows.push((s.to_string(), t.to_string(), l.to_string()));
    }
    let vertices: Vec<String> = rows
        .iter()
        .flat_map(|r| [r.0.clone(), r.1.clone()])
        .chain(basepoint_name.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let labels: Vec<String> = rows
        .iter()
        .map(|r| r.2.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if vertices.is_empty() {
        return Err(Error::InvalidInput("graph has no vertices".into()));
    }
    let vi = |name: &str| {
        vertices
            .binary_search_by(|v| v.as_str().cmp(name))
            .expect("collected above")
    };
    let li = |name: &str| {
        labels
            .binary_search_by(|v| v.as_str().cmp(name))
            .expect("collected above")
    };
    let edges = rows.iter().map(|(s, t, l)| (vi(s), vi(t), li(l))).collect();
    let basepoint = basepoint_name.as_deref().map(vi).unwrap_or(0);
    let mut g = LabeledGraph {
        labels,
        vertices,
        edges,
        basepoint,
    };
    g.canonicalize();
    Ok(g)
}
