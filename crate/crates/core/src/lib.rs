//! 2-adic valuation trees of `x^2 + D` and `x^3 + D` and the Diophantine
//! equations `x^e + D = 2^c y` with `y` odd.
//!
//! A [`ValuationTree`] splits the integers into residue classes mod `2^l`
//! until `nu2(x^e + D)` is constant on each class. The values on the
//! terminating classes are exactly the exponents `c` for which the equation
//! has a solution, and each class is a family of solutions.
//!
//! ```
//! use valtree::{Limits, Poly, ValuationTree};
//!
//! let tree = ValuationTree::build(Poly::cube(16).unwrap(), Limits::default()).unwrap();
//! assert!(tree.is_resolved());
//! let c: Vec<u32> = tree.valuation_set().achieved.into_iter().collect();
//! assert_eq!(c, [0, 3, 4]);
//! ```

pub mod arith;
pub mod classify;
pub mod error;
pub mod oracle;
pub mod render;
pub mod solve;
pub mod tree;

pub use arith::{eval_poly, nu2, split2, Exponent, Nat, Poly, SplitForm};
pub use classify::{
    classify, classify_cubic, classify_quadratic, classify_with_depth, predicted_solution_form,
    tree_kind, CRange, Certainty, Classification, Form, TreeKind,
};
pub use error::{Error, Result};
pub use oracle::{census, verify_classification, verify_tree, ValuationCensus};
pub use render::{to_ascii, to_dot, RenderStyle};
pub use solve::{
    build_table, c_zero_family, ramanujan_recursion, solution_family, solve_exact, RecursionState,
    Solution, SolveOutcome, TableRow,
};
pub use tree::{node_status, Limits, NodeId, NodeStatus, ResidueClass, TreeNode, ValuationSet, ValuationTree};
