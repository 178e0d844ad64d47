//! Brute-force checks: recompute `nu2(f(x))` directly over a range of `x`
//! and confront trees and classifications with the result.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{Exponent, Nat, Poly};
use crate::classify::{tree_kind, TreeKind};
use crate::error::Result;
use crate::tree::{Limits, NodeStatus, ResidueClass, ValuationTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub count: u64,
    pub min_x: Nat,
}

/// Distribution of `nu2(f(x))` over `0 <= x <= x_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationCensus {
    pub poly: Poly,
    pub x_max: Nat,
    pub per_c: BTreeMap<u32, CensusEntry>,
}

impl ValuationCensus {
    pub fn values(&self) -> BTreeSet<u32> {
        self.per_c.keys().copied().collect()
    }

    pub fn total(&self) -> u64 {
        self.per_c.values().map(|e| e.count).sum()
    }

    pub fn min_witness(&self, c: u32) -> Option<Nat> {
        self.per_c.get(&c).map(|e| e.min_x)
    }
}

pub fn census(poly: &Poly, x_max: Nat) -> Result<ValuationCensus> {
    let mut per_c: BTreeMap<u32, CensusEntry> = BTreeMap::new();
    for x in 0..=x_max {
        let c = poly.valuation_at(x)?;
        per_c
            .entry(c)
            .and_modify(|e| e.count += 1)
            .or_insert(CensusEntry { count: 1, min_x: x });
    }
    Ok(ValuationCensus {
        poly: *poly,
        x_max,
        per_c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeViolation {
    pub x: Nat,
    pub class: ResidueClass,
    pub predicted: NodeStatus,
    pub actual: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    pub poly: Poly,
    pub depth: u32,
    pub x_max: Nat,
    pub checked: u64,
    pub violations: Vec<TreeViolation>,
    /// Exact valuations observed over the range.
    pub observed: BTreeSet<u32>,
}

impl TreeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every `x <= x_max` against the leaf containing it: exact value on
/// terminating leaves, lower bound on unresolved ones.
pub fn verify_tree(tree: &ValuationTree, x_max: Nat) -> Result<TreeReport> {
    let poly = tree.poly();
    let mut violations = Vec::new();
    let mut observed = BTreeSet::new();
    for x in 0..=x_max {
        let actual = poly.valuation_at(x)?;
        observed.insert(actual);
        let leaf = tree.node(tree.locate(x));
        let ok = match leaf.status {
            NodeStatus::Terminating { valuation } => actual == valuation,
            NodeStatus::Unresolved { lower_bound } => {
                actual >= lower_bound && actual >= leaf.class.level
            }
        };
        if !ok {
            violations.push(TreeViolation {
                x,
                class: leaf.class,
                predicted: leaf.status,
                actual,
            });
        }
    }
    Ok(TreeReport {
        poly: *poly,
        depth: tree.depth(),
        x_max,
        checked: (x_max as u64).saturating_add(1),
        violations,
        observed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub constant: Nat,
    pub predicted: TreeKind,
    /// Level at which the tree resolved, if it did within the depth.
    pub resolved_at: Option<u32>,
    pub frontier_size: usize,
}

impl ClassificationEntry {
    pub fn agrees(&self) -> bool {
        match self.predicted {
            TreeKind::Finite => self.resolved_at.is_some(),
            TreeKind::Infinite => self.resolved_at.is_none() && self.frontier_size > 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub exponent: Exponent,
    pub d_max: Nat,
    pub depth: u32,
    pub entries: Vec<ClassificationEntry>,
    pub mismatches: Vec<Nat>,
}

impl ClassificationReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For every `1 <= D <= d_max`: finite verdicts must resolve by `depth`,
/// infinite ones must still have a frontier there.
pub fn verify_classification(exponent: Exponent, d_max: Nat, depth: u32) -> Result<ClassificationReport> {
    let mut entries = Vec::new();
    for d in 1..=d_max {
        let poly = Poly::new(exponent, d)?;
        let tree = ValuationTree::build(poly, Limits::depth(depth))?;
        entries.push(ClassificationEntry {
            constant: d,
            predicted: tree_kind(&poly),
            resolved_at: tree.resolution_level(),
            frontier_size: tree.frontier().count(),
        });
    }
    let mismatches = entries.iter().filter(|e| !e.agrees()).map(|e| e.constant).collect();
    Ok(ClassificationReport {
        exponent,
        d_max,
        depth,
        entries,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_examples() {
        let c = census(&Poly::square(1).unwrap(), 10).unwrap();
        assert_eq!(c.values(), BTreeSet::from([0, 1]));
        assert_eq!(c.total(), 11);
        let c = census(&Poly::square(4).unwrap(), 100).unwrap();
        assert_eq!(c.values(), BTreeSet::from([0, 2, 3]));
        let c = census(&Poly::square(7).unwrap(), 1 << 12).unwrap();
        // 181 has valuation 15, so the smallest x with valuation exactly 10 is 331.
        assert_eq!(c.min_witness(10), Some(331));
        assert_eq!(c.min_witness(15), Some(181));
        assert_eq!(c.min_witness(0), Some(0));
    }

    #[test]
    fn verify_tree_examples() {
        let tree = ValuationTree::build(Poly::square(7).unwrap(), Limits::depth(6)).unwrap();
        assert!(verify_tree(&tree, 1 << 12).unwrap().is_clean());
        let tree = ValuationTree::build(Poly::cube(1).unwrap(), Limits::depth(8)).unwrap();
        assert!(verify_tree(&tree, 1 << 12).unwrap().is_clean());
        let tree = ValuationTree::build(Poly::cube(48).unwrap(), Limits::depth(10)).unwrap();
        let report = verify_tree(&tree, 1 << 12).unwrap();
        assert!(report.is_clean());
        assert!(tree.is_resolved());
        assert_eq!(report.observed, tree.valuation_set().achieved);
    }

    #[test]
    fn verify_tree_reports_a_wrong_tree() {
        // Statuses of x^2 + 7 checked against the values of x^2 + 3.
        let mut tree = ValuationTree::build(Poly::square(7).unwrap(), Limits::depth(3)).unwrap();
        tree.replace_poly(Poly::square(3).unwrap());
        let report = verify_tree(&tree, 64).unwrap();
        assert!(!report.is_clean());
        assert_eq!(report.violations[0].x, 1);
    }

    #[test]
    fn classification_sweeps() {
        let report = verify_classification(Exponent::Square, 60, 16).unwrap();
        assert!(report.is_clean(), "{:?}", report.mismatches);
        let entry = &report.entries[27];
        assert_eq!(entry.constant, 28);
        assert_eq!(entry.predicted, TreeKind::Infinite);
        assert!(entry.frontier_size > 0);
        let report = verify_classification(Exponent::Cube, 60, 16).unwrap();
        assert!(report.is_clean(), "{:?}", report.mismatches);
    }
}
