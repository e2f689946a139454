//! Graphviz export.

use std::fmt::Write as _;

use crate::graph::Network;
use crate::sets::{ArcSet, VertexSet};

/// Optional highlighting for [`export_dot`].
#[derive(Clone, Debug, Default)]
pub struct Highlight {
    pub arcs: Option<ArcSet>,
    pub vertices: Option<VertexSet>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT text: vertices and arcs in id order, arcs labelled with
/// name and capacity, terminals drawn as boxes, highlighted elements in red.
pub fn export_dot(net: &Network, highlight: &Highlight) -> String {
    let terminals = net.boundary();
    let mut out = String::from("digraph network {\n  rankdir=LR;\n");
    for v in net.vertices() {
        let mut attrs = vec![];
        if terminals.contains(v) {
            attrs.push("shape=box".to_string());
        }
        if highlight.vertices.as_ref().is_some_and(|s| s.contains(v)) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=\"#ffcccc\"".to_string());
        }
        write!(out, "  {}", quote(net.vertex_name(v))).unwrap();
        if !attrs.is_empty() {
            write!(out, " [{}]", attrs.join(", ")).unwrap();
        }
        out.push_str(";\n");
    }
    for a in net.arc_ids() {
        let mut attrs = vec![format!(
            "label={}",
            quote(&format!("{} ({})", net.arc_name(a), net.capacity(a)))
        )];
        if highlight.arcs.as_ref().is_some_and(|s| s.contains(a)) {
            attrs.push("color=red".to_string());
            attrs.push("penwidth=2".to_string());
        }
        writeln!(
            out,
            "  {} -> {} [{}];",
            quote(net.vertex_name(net.tail(a))),
            quote(net.vertex_name(net.head(a))),
            attrs.join(", ")
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn highlighted_arcs_are_marked() {
        let net = corpus::butterfly().network;
        let hl = Highlight {
            arcs: Some(net.arc_set(&["alpha", "beta", "gamma"]).unwrap()),
            vertices: None,
        };
        let dot = export_dot(&net, &hl);
        assert_eq!(dot.matches("color=red").count(), 3);
        assert!(dot.contains("\"a\" -> \"b\" [label=\"alpha (1)\", color=red, penwidth=2];"));
    }

    #[test]
    fn plain_export_has_no_highlight() {
        let net = corpus::butterfly().network;
        let dot = export_dot(&net, &Highlight::default());
        assert!(!dot.contains("color=red") && !dot.contains("filled"));
        assert_eq!(dot.matches(" -> ").count(), 11);
        assert_eq!(dot, export_dot(&net, &Highlight::default()));
    }

    #[test]
    fn cycle_arc_is_drawn() {
        let net = corpus::fig6().network;
        let u = net.vertex_set(&["sigma2", "u"]).unwrap();
        let dot = export_dot(
            &net,
            &Highlight {
                arcs: None,
                vertices: Some(u),
            },
        );
        assert!(dot.contains("\"v\" -> \"u\" [label=\"rho (1)\"];"));
        assert_eq!(dot.matches("filled").count(), 2);
    }
}
