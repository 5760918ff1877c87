use std::fmt::Write as _;

use serde::Serialize;

use crate::kg::Iri;

use super::{FaultTree, NodeKind};

/// Placeholder probability for basic events in Galileo output. The trees
/// are built without any failure statistics; the value only makes the file
/// loadable by quantitative tools.
pub const DEFAULT_PROBABILITY: f64 = 0.5;

#[derive(Serialize)]
struct JsonTree<'a> {
    top: &'a str,
    nodes: Vec<JsonNode<'a>>,
}

#[derive(Serialize)]
struct JsonNode<'a> {
    id: &'a str,
    kind: NodeKind,
    label: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    component: Option<&'a Iri>,
    #[serde(skip_serializing_if = "Option::is_none")]
    resource: Option<&'a Iri>,
    children: Vec<&'a str>,
}

/// Canonical JSON: nodes sorted by id, children sorted, pretty-printed.
pub fn to_json(ft: &FaultTree) -> String {
    let doc = JsonTree {
        top: ft.top(),
        nodes: ft
            .nodes()
            .map(|n| {
                let mut children: Vec<&str> = n.children.iter().map(String::as_str).collect();
                children.sort_unstable();
                JsonNode {
                    id: &n.id,
                    kind: n.kind,
                    label: &n.label,
                    component: n.component.as_ref(),
                    resource: n.resource.as_ref(),
                    children,
                }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("fault tree is serializable");
    s.push('\n');
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz: basic events green, gates yellow with their kind in the label.
pub fn to_dot(ft: &FaultTree) -> String {
    let mut out = String::from("digraph fault_tree {\n    rankdir=TB;\n");
    for n in ft.nodes() {
        let (shape, color, label) = match n.kind {
            NodeKind::BasicEvent => ("ellipse", "green", n.label.clone()),
            NodeKind::OrGate => ("box", "yellow", format!("{}\\nOR", dot_escape(&n.label))),
            NodeKind::AndGate => ("box", "yellow", format!("{}\\nAND", dot_escape(&n.label))),
        };
        let label = if n.kind == NodeKind::BasicEvent {
            dot_escape(&label)
        } else {
            label
        };
        let _ = writeln!(
            out,
            "    \"{}\" [label=\"{}\", shape={}, style=filled, fillcolor={}];",
            dot_escape(&n.id),
            label,
            shape,
            color
        );
    }
    for n in ft.nodes() {
        for c in &n.children {
            let _ = writeln!(
                out,
                "    \"{}\" -> \"{}\";",
                dot_escape(&n.id),
                dot_escape(c)
            );
        }
    }
    out.push_str("}\n");
    out
}

/// Galileo: `toplevel`, then gates, then basic events with `prob=`.
pub fn to_galileo(ft: &FaultTree, probability: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "toplevel \"{}\";", ft.top());
    for n in ft.nodes().filter(|n| n.kind.is_gate()) {
        let _ = write!(out, "\"{}\" {}", n.id, n.kind);
        for c in &n.children {
            let _ = write!(out, " \"{c}\"");
        }
        out.push_str(";\n");
    }
    for n in ft.basic_events() {
        let _ = writeln!(out, "\"{}\" prob={};", n.id, probability);
    }
    out
}
