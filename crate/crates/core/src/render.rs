//! DOT, ASCII and nested views of valuation trees, following the usual
//! drawing convention: boxes for terminating nodes, circles for unresolved
//! ones, `?` at the root and the branch residue on every edge.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::arith::Nat;
use crate::tree::{NodeId, NodeStatus, TreeNode, ValuationTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderStyle {
    pub terminating_shape: String,
    pub unresolved_shape: String,
    pub root_marker: String,
    /// Label unresolved nodes with the minimum valuation on their class
    /// instead of the generic bound `nu2 >= level`.
    pub refine_bounds: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            terminating_shape: "box".into(),
            unresolved_shape: "circle".into(),
            root_marker: "?".into(),
            refine_bounds: true,
        }
    }
}

impl RenderStyle {
    pub fn generic_bounds() -> Self {
        RenderStyle {
            refine_bounds: false,
            ..Self::default()
        }
    }

    pub fn label(&self, node: &TreeNode) -> String {
        if node.class.is_root() {
            return self.root_marker.clone();
        }
        match node.status {
            NodeStatus::Terminating { valuation } => valuation.to_string(),
            NodeStatus::Unresolved { lower_bound } if self.refine_bounds => lower_bound.to_string(),
            NodeStatus::Unresolved { .. } => node.class.level.to_string(),
        }
    }

    fn shape(&self, node: &TreeNode) -> &str {
        if node.status.is_terminating() {
            &self.terminating_shape
        } else {
            &self.unresolved_shape
        }
    }
}

fn preorder(tree: &ValuationTree) -> Vec<NodeId> {
    let mut order = Vec::with_capacity(tree.len());
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        order.push(id);
        if let Some([low, high]) = tree.node(id).children {
            stack.push(high);
            stack.push(low);
        }
    }
    order
}

fn class_text(node: &TreeNode) -> String {
    format!("x ≡ {} (mod {})", node.class.residue, node.class.modulus())
}

pub fn to_dot(tree: &ValuationTree, style: &RenderStyle) -> String {
    let mut out = String::new();
    let poly = tree.poly();
    writeln!(out, "digraph valtree {{").unwrap();
    writeln!(out, "  label=\"2-adic valuation tree of {poly}\";").unwrap();
    writeln!(out, "  node [fontname=\"Helvetica\"];").unwrap();
    let order = preorder(tree);
    for &id in &order {
        let node = tree.node(id);
        writeln!(
            out,
            "  n{} [shape={}, label=\"{}\", tooltip=\"{}\"];",
            id.0,
            style.shape(node),
            style.label(node),
            class_text(node)
        )
        .unwrap();
    }
    for &id in &order {
        if let Some(children) = tree.node(id).children {
            for child in children {
                writeln!(
                    out,
                    "  n{} -> n{} [label=\"{}\"];",
                    id.0,
                    child.0,
                    tree.node(child).class.residue
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// One line per node, indented by level:
/// `level l | x ≡ r (mod 2^l) | status`.
pub fn to_ascii(tree: &ValuationTree, style: &RenderStyle) -> String {
    let mut out = String::new();
    for id in preorder(tree) {
        let node = tree.node(id);
        let status = if node.class.is_root() {
            style.root_marker.clone()
        } else if node.status.is_terminating() {
            format!("ν = {}", style.label(node))
        } else {
            format!("ν ≥ {}", style.label(node))
        };
        writeln!(
            out,
            "{}level {} | {} | {}",
            "  ".repeat(node.class.level as usize),
            node.class.level,
            class_text(node),
            status
        )
        .unwrap();
    }
    out
}

/// Nested, serializable copy of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeView {
    pub residue: Nat,
    pub level: u32,
    pub label: String,
    pub status: NodeStatus,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<NodeView>,
}

pub fn to_view(tree: &ValuationTree, style: &RenderStyle) -> NodeView {
    fn build(tree: &ValuationTree, id: NodeId, style: &RenderStyle) -> NodeView {
        let node = tree.node(id);
        NodeView {
            residue: node.class.residue,
            level: node.class.level,
            label: style.label(node),
            status: node.status,
            children: node
                .children
                .map(|ids| ids.iter().map(|&c| build(tree, c, style)).collect())
                .unwrap_or_default(),
        }
    }
    build(tree, tree.root(), style)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;
    use crate::tree::Limits;

    fn tree(poly: Poly, depth: u32) -> ValuationTree {
        ValuationTree::build(poly, Limits::depth(depth)).unwrap()
    }

    #[test]
    fn dot_for_x2_plus_1() {
        let dot = to_dot(&tree(Poly::square(1).unwrap(), 1), &RenderStyle::default());
        assert!(dot.starts_with("digraph valtree {"));
        assert!(dot.contains("n0 [shape=circle, label=\"?\""));
        assert!(dot.contains("n1 [shape=box, label=\"0\""));
        assert!(dot.contains("n2 [shape=box, label=\"1\""));
        assert!(dot.contains("n0 -> n1 [label=\"0\"];"));
        assert!(dot.contains("n0 -> n2 [label=\"1\"];"));
    }

    #[test]
    fn dot_for_cubic_16() {
        let t = tree(Poly::cube(16).unwrap(), 2);
        let dot = to_dot(&t, &RenderStyle::default());
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(edges.len(), 4);
        // Circle 3 on edge 0, box 0 on edge 1, then boxes 4 and 3 on edges 0 and 2.
        let view = to_view(&t, &RenderStyle::default());
        let labels: Vec<(Nat, &str, bool)> = view
            .children
            .iter()
            .map(|c| (c.residue, c.label.as_str(), c.status.is_terminating()))
            .collect();
        assert_eq!(labels, vec![(0, "3", false), (1, "0", true)]);
        let grand: Vec<(Nat, &str)> = view.children[0]
            .children
            .iter()
            .map(|c| (c.residue, c.label.as_str()))
            .collect();
        assert_eq!(grand, vec![(0, "4"), (2, "3")]);
    }

    #[test]
    fn single_node_tree() {
        let t = ValuationTree::new(Poly::square(7).unwrap()).unwrap();
        let dot = to_dot(&t, &RenderStyle::default());
        assert_eq!(dot.lines().filter(|l| l.contains("shape=")).count(), 1);
        assert!(dot.contains("label=\"?\""));
        assert_eq!(to_ascii(&t, &RenderStyle::default()), "level 0 | x ≡ 0 (mod 1) | ?\n");
    }

    #[test]
    fn ascii_for_x2_plus_7() {
        let t = tree(Poly::square(7).unwrap(), 1);
        let text = to_ascii(&t, &RenderStyle::default());
        assert_eq!(
            text,
            "level 0 | x ≡ 0 (mod 1) | ?\n  level 1 | x ≡ 0 (mod 2) | ν = 0\n  level 1 | x ≡ 1 (mod 2) | ν ≥ 3\n"
        );
        let generic = to_ascii(&t, &RenderStyle::generic_bounds());
        assert!(generic.ends_with("| ν ≥ 1\n"));
    }

    #[test]
    fn ascii_for_x2_plus_3_uses_computed_values() {
        let text = to_ascii(&tree(Poly::square(3).unwrap(), 1), &RenderStyle::default());
        assert!(text.contains("x ≡ 0 (mod 2) | ν = 0"));
        assert!(text.contains("x ≡ 1 (mod 2) | ν = 2"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = tree(Poly::square(7).unwrap(), 10);
        let b = tree(Poly::square(7).unwrap(), 10);
        let style = RenderStyle::default();
        assert_eq!(to_dot(&a, &style), to_dot(&b, &style));
        assert_eq!(to_ascii(&a, &style), to_ascii(&b, &style));
    }
}
