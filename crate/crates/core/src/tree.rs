//! 2-adic valuation trees of `f(x) = x^e + D`.
//!
//! Level `l` of the tree holds residue classes `x ≡ r (mod 2^l)`. A node is
//! *terminating* when `nu2(f(x))` takes the same value on its whole class and
//! *unresolved* otherwise, in which case it carries the minimum valuation
//! attained on the class and splits into the two classes mod `2^(l+1)`.
//!
//! The node fate is decided exactly. Writing `H(t) = f(r + 2^l t)` in the
//! binomial basis, `H(t) = sum_i b_i * C(t, i)` with `b_i = Δ^i H(0)` and
//! `i <= e`. Binomial polynomials are integer valued and independent mod 2,
//! so the minimum of `nu2(H(t))` over all `t` is `min_i nu2(b_i)`, and the
//! valuation is constant exactly when every `b_i` with `i >= 1` is divisible
//! by `2^(nu2(b_0) + 1)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Nat, Poly};
use crate::error::{Error, Result};

/// Highest level a residue class may sit at. Cubic trees overflow `u128`
/// before this (around level 40) and report it as an error.
pub const MAX_LEVEL: u32 = 62;

/// `x ≡ residue (mod 2^level)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueClass {
    pub residue: Nat,
    pub level: u32,
}

impl ResidueClass {
    /// The class of all integers.
    pub const ROOT: ResidueClass = ResidueClass {
        residue: 0,
        level: 0,
    };

    pub fn new(residue: Nat, level: u32) -> Result<Self> {
        if level > MAX_LEVEL || residue >= 1u128 << level {
            return Err(Error::InvalidClass { residue, level });
        }
        Ok(ResidueClass { residue, level })
    }

    /// Class of `x` modulo `2^level`.
    pub fn of(x: Nat, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::InvalidClass { residue: x, level });
        }
        Ok(ResidueClass {
            residue: x & ((1u128 << level) - 1),
            level,
        })
    }

    pub fn modulus(&self) -> Nat {
        1u128 << self.level
    }

    pub fn contains(&self, x: Nat) -> bool {
        x & (self.modulus() - 1) == self.residue
    }

    /// The `t`-th nonnegative member, `residue + t * 2^level`.
    pub fn member(&self, t: Nat) -> Result<Nat> {
        t.checked_mul(self.modulus())
            .and_then(|m| m.checked_add(self.residue))
            .ok_or(Error::Overflow("class member"))
    }

    /// Smallest positive member of the class.
    pub fn min_positive(&self) -> Nat {
        if self.residue == 0 {
            self.modulus()
        } else {
            self.residue
        }
    }

    /// `(r, l+1)` and `(r + 2^l, l+1)`, smaller residue first.
    pub fn children(&self) -> Result<[ResidueClass; 2]> {
        let level = self.level + 1;
        if level > MAX_LEVEL {
            return Err(Error::InvalidClass {
                residue: self.residue,
                level,
            });
        }
        Ok([
            ResidueClass {
                residue: self.residue,
                level,
            },
            ResidueClass {
                residue: self.residue + self.modulus(),
                level,
            },
        ])
    }

    pub fn is_root(&self) -> bool {
        self.level == 0
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2^{}", self.residue, self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeStatus {
    /// `nu2(f(x)) == valuation` for every `x` in the class.
    Terminating { valuation: u32 },
    /// The valuation varies on the class; `lower_bound` is its minimum.
    Unresolved { lower_bound: u32 },
}

impl NodeStatus {
    pub fn is_terminating(&self) -> bool {
        matches!(self, NodeStatus::Terminating { .. })
    }

    pub fn value(&self) -> u32 {
        match *self {
            NodeStatus::Terminating { valuation } => valuation,
            NodeStatus::Unresolved { lower_bound } => lower_bound,
        }
    }
}

/// `b_0..=b_e`, the binomial-basis coefficients of `t -> f(r + 2^l t)`.
fn binomial_coefficients(poly: &Poly, class: &ResidueClass) -> Result<Vec<Nat>> {
    let degree = poly.exponent().value() as usize;
    let mut row = (0..=degree as Nat)
        .map(|t| class.member(t).and_then(|x| poly.eval(x)))
        .collect::<Result<Vec<_>>>()?;
    let mut coefficients = Vec::with_capacity(degree + 1);
    while let Some(&first) = row.first() {
        coefficients.push(first);
        row = row
            .windows(2)
            .map(|w| w[1].checked_sub(w[0]).ok_or(Error::Overflow("forward difference")))
            .collect::<Result<_>>()?;
    }
    Ok(coefficients)
}

/// Exact status of a residue class.
pub fn node_status(poly: &Poly, class: &ResidueClass) -> Result<NodeStatus> {
    if class.level > MAX_LEVEL || class.residue >= class.modulus() {
        return Err(Error::InvalidClass {
            residue: class.residue,
            level: class.level,
        });
    }
    let coefficients = binomial_coefficients(poly, class)?;
    // trailing_zeros(0) == 128 acts as an infinite valuation here.
    let base = coefficients[0].trailing_zeros();
    let spread = coefficients[1..]
        .iter()
        .map(|b| b.trailing_zeros())
        .min()
        .unwrap_or(u32::MAX);
    if spread > base {
        Ok(NodeStatus::Terminating { valuation: base })
    } else {
        Ok(NodeStatus::Unresolved {
            lower_bound: spread,
        })
    }
}

/// Minimum of `nu2(f(x))` over the class.
pub fn min_valuation(poly: &Poly, class: &ResidueClass) -> Result<u32> {
    node_status(poly, class).map(|s| s.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub class: ResidueClass,
    pub status: NodeStatus,
    pub children: Option<[NodeId; 2]>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// An unresolved node that has not been split yet.
    pub fn is_frontier(&self) -> bool {
        self.is_leaf() && !self.status.is_terminating()
    }
}

/// Expansion budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_depth: u32,
    pub max_nodes: usize,
}

impl Limits {
    pub const DEFAULT_MAX_DEPTH: u32 = 30;
    pub const DEFAULT_MAX_NODES: usize = 1_000_000;

    pub fn depth(max_depth: u32) -> Self {
        Limits {
            max_depth,
            ..Limits::default()
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: Self::DEFAULT_MAX_DEPTH,
            max_nodes: Self::DEFAULT_MAX_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationSet {
    pub achieved: BTreeSet<u32>,
    /// Unresolved leaves with their minimum valuation.
    pub frontier: Vec<(ResidueClass, u32)>,
}

impl ValuationSet {
    /// Every valuation below this value is decided by the tree: either it is
    /// in `achieved` or it never occurs.
    pub fn decided_below(&self) -> Option<u32> {
        self.frontier.iter().map(|&(_, b)| b).min()
    }

    pub fn is_finite(&self) -> bool {
        self.frontier.is_empty()
    }
}

/// Binary tree of residue classes, stored as an arena with the root at index 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationTree {
    poly: Poly,
    nodes: Vec<TreeNode>,
    depth: u32,
    truncated: bool,
}

impl ValuationTree {
    /// A tree holding only the root, rendered as `?`.
    pub fn new(poly: Poly) -> Result<Self> {
        let status = node_status(&poly, &ResidueClass::ROOT)?;
        Ok(ValuationTree {
            poly,
            nodes: vec![TreeNode {
                class: ResidueClass::ROOT,
                status,
                children: None,
            }],
            depth: 0,
            truncated: false,
        })
    }

    pub fn build(poly: Poly, limits: Limits) -> Result<Self> {
        let mut tree = Self::new(poly)?;
        tree.expand(limits)?;
        Ok(tree)
    }

    /// Splits every unresolved leaf above `limits.max_depth`, level by level.
    /// Running out of node budget stops early and marks the tree truncated.
    pub fn expand(&mut self, limits: Limits) -> Result<()> {
        let max_depth = limits.max_depth.min(MAX_LEVEL);
        let mut queue: VecDeque<NodeId> = self
            .frontier_ids()
            .filter(|&id| self.node(id).class.level < max_depth)
            .collect();
        queue.make_contiguous().sort_by_key(|&id| self.node(id).class);
        self.truncated = false;
        while let Some(id) = queue.pop_front() {
            if self.nodes.len() + 2 > limits.max_nodes {
                self.truncated = true;
                break;
            }
            let classes = self.node(id).class.children()?;
            let mut ids = [NodeId(0); 2];
            for (slot, class) in ids.iter_mut().zip(classes) {
                let status = node_status(&self.poly, &class)?;
                *slot = NodeId(self.nodes.len());
                self.nodes.push(TreeNode {
                    class,
                    status,
                    children: None,
                });
                self.depth = self.depth.max(class.level);
                if !status.is_terminating() && class.level < max_depth {
                    queue.push_back(*slot);
                }
            }
            self.nodes[id.0].children = Some(ids);
        }
        Ok(())
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &TreeNode)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    fn frontier_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.iter().filter(|(_, n)| n.is_frontier()).map(|(id, _)| id)
    }

    pub fn frontier(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.is_frontier())
    }

    /// No unresolved leaf remains: the tree is finite and fully drawn.
    pub fn is_resolved(&self) -> bool {
        self.frontier().next().is_none()
    }

    /// Nodes sitting at `level`, ordered by residue.
    pub fn level(&self, level: u32) -> Vec<&TreeNode> {
        let mut nodes: Vec<_> = self.nodes.iter().filter(|n| n.class.level == level).collect();
        nodes.sort_by_key(|n| n.class.residue);
        nodes
    }

    /// Leaf whose class contains `x`.
    pub fn locate(&self, x: Nat) -> NodeId {
        let mut id = self.root();
        while let Some(children) = self.node(id).children {
            let level = self.node(id).class.level;
            id = children[((x >> level) & 1) as usize];
        }
        id
    }

    pub fn find(&self, class: &ResidueClass) -> Option<NodeId> {
        if class.level > self.depth {
            return None;
        }
        let mut id = self.root();
        while self.node(id).class.level < class.level {
            let children = self.node(id).children?;
            let level = self.node(id).class.level;
            id = children[((class.residue >> level) & 1) as usize];
        }
        Some(id).filter(|&id| self.node(id).class == *class)
    }

    #[cfg(test)]
    pub(crate) fn replace_poly(&mut self, poly: Poly) {
        self.poly = poly;
    }

    /// Minimum valuation attained on an unresolved node's class.
    pub fn refine_lower_bound(&self, id: NodeId) -> Result<u32> {
        match self.node(id).status {
            NodeStatus::Unresolved { lower_bound } => Ok(lower_bound),
            NodeStatus::Terminating { .. } => Err(Error::NotUnresolved(self.node(id).class)),
        }
    }

    pub fn valuation_set(&self) -> ValuationSet {
        let achieved = self
            .leaves()
            .filter_map(|n| match n.status {
                NodeStatus::Terminating { valuation } => Some(valuation),
                NodeStatus::Unresolved { .. } => None,
            })
            .collect();
        let mut frontier: Vec<_> = self.frontier().map(|n| (n.class, n.status.value())).collect();
        frontier.sort();
        ValuationSet { achieved, frontier }
    }

    /// Terminating classes carrying exactly `valuation`, by level then residue.
    pub fn terminating_classes(&self, valuation: u32) -> Vec<ResidueClass> {
        let mut classes: Vec<_> = self
            .leaves()
            .filter(|n| n.status == NodeStatus::Terminating { valuation })
            .map(|n| n.class)
            .collect();
        classes.sort();
        classes
    }

    /// Smallest level at which the tree has no unresolved leaf, if any.
    pub fn resolution_level(&self) -> Option<u32> {
        self.is_resolved().then(|| {
            self.leaves().map(|n| n.class.level).max().unwrap_or(0)
        })
    }
}

/// Deepest level needed to see every terminating node of value `c`: a
/// terminating node at level `l` hangs below an unresolved node whose
/// minimum is at least `l - 1`, so its value is at least `l - 1`.
pub fn depth_deciding(c: u32) -> u32 {
    c + 1
}
