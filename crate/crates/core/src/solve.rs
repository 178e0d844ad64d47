//! Explicit solutions `(x, y, c)` of `x^e + D = 2^c y`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{pow2, Exponent, Nat, Poly};
use crate::classify::{tree_kind, zero_class, TreeKind};
use crate::error::{Error, Result};
use crate::tree::{depth_deciding, Limits, ResidueClass, ValuationTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: Nat) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// A witness `x^e + D = 2^c y`; every `x` in `family` gives the same `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub x: Nat,
    pub y: Nat,
    pub c: u32,
    pub family: ResidueClass,
    pub y_parity: Parity,
}

impl Solution {
    /// Builds the odd-`y` solution at `x`, reading `c` off `f(x)`.
    pub fn exact(poly: &Poly, x: Nat, family: ResidueClass) -> Result<Self> {
        let value = poly.eval(x)?;
        let c = value.trailing_zeros();
        Ok(Solution {
            x,
            y: value >> c,
            c,
            family,
            y_parity: Parity::Odd,
        })
    }

    pub fn satisfies(&self, poly: &Poly) -> bool {
        let lhs = poly.eval(self.x).ok();
        let rhs = pow2(self.c).ok().and_then(|p| p.checked_mul(self.y));
        lhs.is_some() && lhs == rhs
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SolveOutcome {
    Found(Solution),
    /// The tree shows that no `x` has `nu2(x^e + D) = c`.
    ProvenAbsent,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Found(s) => Some(s),
            SolveOutcome::ProvenAbsent => None,
        }
    }
}

/// One step of the `x^2 + 7` recursion: `x^2 + 7 = 2^c y`, `y` possibly even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionState {
    pub c: u32,
    pub x: Nat,
    pub y: Nat,
}

/// States for `c = 3..=c_max`, seeded at `(3, 1, 1)`.
///
/// `x_c = x_{c-1}` when `y_{c-1}` is even and `2^(c-2) - x_{c-1}` otherwise;
/// `y_c = (x_c^2 + 7) / 2^c`.
pub fn ramanujan_recursion(c_max: u32) -> Result<Vec<RecursionState>> {
    let poly = Poly::square(7)?;
    let mut states = vec![RecursionState { c: 3, x: 1, y: 1 }];
    for c in 4..=c_max {
        let prev = *states.last().expect("seeded");
        let x = if prev.y % 2 == 0 {
            prev.x
        } else {
            pow2(c - 2)?
                .checked_sub(prev.x)
                .ok_or(Error::Overflow("recursion step"))?
        };
        let value = poly.eval(x)?;
        let modulus = pow2(c)?;
        if value % modulus != 0 {
            return Err(Error::Inconclusive(format!(
                "recursion left the 2-adic root branch at c = {c}"
            )));
        }
        states.push(RecursionState {
            c,
            x,
            y: value / modulus,
        });
    }
    states.truncate(c_max.saturating_sub(2) as usize);
    Ok(states)
}

fn deciding_tree(poly: &Poly, c: u32, max_nodes: usize) -> Result<ValuationTree> {
    let tree = ValuationTree::build(
        *poly,
        Limits {
            max_depth: depth_deciding(c),
            max_nodes,
        },
    )?;
    if tree.is_truncated() {
        return Err(Error::Inconclusive(format!(
            "node budget of {max_nodes} exhausted before level {}",
            depth_deciding(c)
        )));
    }
    Ok(tree)
}

/// Smallest positive member of `classes`, with its class.
fn minimal_member(classes: &[ResidueClass]) -> Option<(Nat, ResidueClass)> {
    classes.iter().map(|cl| (cl.min_positive(), *cl)).min()
}

/// Minimal positive `x <= x_bound` with `nu2(x^e + D) = c`.
pub fn solve_exact(poly: &Poly, c: u32, x_bound: Nat) -> Result<SolveOutcome> {
    solve_exact_with_budget(poly, c, x_bound, Limits::DEFAULT_MAX_NODES)
}

pub fn solve_exact_with_budget(
    poly: &Poly,
    c: u32,
    x_bound: Nat,
    max_nodes: usize,
) -> Result<SolveOutcome> {
    let tree = deciding_tree(poly, c, max_nodes)?;
    let classes = tree.terminating_classes(c);
    match minimal_member(&classes) {
        None => Ok(SolveOutcome::ProvenAbsent),
        Some((x, family)) if x <= x_bound => Ok(SolveOutcome::Found(Solution::exact(poly, x, family)?)),
        Some(_) => Err(Error::Inconclusive(format!(
            "no x <= {x_bound} has 2-adic valuation {c} in {poly}"
        ))),
    }
}

/// `2^(c+2)`, saturating.
pub fn default_bound(c: u32) -> Nat {
    pow2(c + 2).unwrap_or(Nat::MAX)
}

/// A terminating class of value `c` in the tree expanded to `depth`, with its
/// minimal positive witness.
pub fn solution_family(poly: &Poly, c: u32, depth: u32) -> Result<SolveOutcome> {
    let tree = ValuationTree::build(*poly, Limits::depth(depth))?;
    let classes = tree.terminating_classes(c);
    if let Some((x, family)) = minimal_member(&classes) {
        return Ok(SolveOutcome::Found(Solution::exact(poly, x, family)?));
    }
    let decided = tree.valuation_set().decided_below().is_none_or(|b| c < b);
    if decided && !tree.is_truncated() {
        Ok(SolveOutcome::ProvenAbsent)
    } else {
        Err(Error::Inconclusive(format!(
            "depth {depth} does not decide c = {c} for {poly}"
        )))
    }
}

/// Every `x` of the right parity makes `f(x)` odd; `y = x^e + D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroFamily {
    pub class: ResidueClass,
    pub witness: Solution,
}

impl fmt::Display for ZeroFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ≡ {} (mod 2), y = x^e + D, c = 0", self.class.residue)
    }
}

pub fn c_zero_family(poly: &Poly) -> Result<ZeroFamily> {
    let class = zero_class(poly);
    Ok(ZeroFamily {
        class,
        witness: Solution::exact(poly, class.min_positive(), class)?,
    })
}

/// One row of a solutions table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub exponent: Exponent,
    pub constant: Nat,
    pub kind: TreeKind,
    /// Achieved exponents; for infinite trees only those below the frontier.
    pub c_values: BTreeSet<u32>,
    /// Whether `c_values` is the full set.
    pub complete: bool,
    /// Minimal witness for each `c`, in increasing `c`.
    pub solutions: Vec<Solution>,
}

impl TableRow {
    pub fn c_column(&self) -> String {
        let mut parts: Vec<String> = self.c_values.iter().map(u32::to_string).collect();
        if !self.complete {
            parts.push("...".into());
        }
        parts.join(", ")
    }

    pub fn solutions_column(&self, separator: &str) -> String {
        self.solutions
            .iter()
            .map(Solution::to_string)
            .collect::<Vec<_>>()
            .join(separator)
    }
}

/// Rows for every `D` in `constants`; infinite trees list the exponents
/// decided by a tree of depth `probe_depth`.
pub fn build_table(
    exponent: Exponent,
    constants: impl IntoIterator<Item = Nat>,
    probe_depth: u32,
) -> Result<Vec<TableRow>> {
    constants
        .into_iter()
        .map(|d| table_row(&Poly::new(exponent, d)?, probe_depth))
        .collect()
}

pub fn table_row(poly: &Poly, probe_depth: u32) -> Result<TableRow> {
    let tree = ValuationTree::build(*poly, Limits::depth(probe_depth))?;
    if tree.is_truncated() {
        return Err(Error::Inconclusive(format!("node budget exhausted for {poly}")));
    }
    let vs = tree.valuation_set();
    let complete = vs.is_finite();
    let c_values: BTreeSet<u32> = match vs.decided_below() {
        Some(bound) => vs.achieved.range(..bound).copied().collect(),
        None => vs.achieved,
    };
    let solutions = c_values
        .iter()
        .map(|&c| {
            let classes = tree.terminating_classes(c);
            let (x, family) = minimal_member(&classes).expect("achieved value has a class");
            Solution::exact(poly, x, family)
        })
        .collect::<Result<_>>()?;
    Ok(TableRow {
        exponent: poly.exponent(),
        constant: poly.constant(),
        kind: tree_kind(poly),
        c_values,
        complete,
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn found(outcome: SolveOutcome) -> Solution {
        *outcome.solution().expect("solution expected")
    }

    /// Minimal positive x with exact valuation c, by scanning.
    fn scan(poly: &Poly, c: u32, bound: Nat) -> Option<Nat> {
        (1..=bound).find(|&x| poly.valuation_at(x).unwrap() == c)
    }

    #[test]
    fn recursion_table_rows() {
        let states = ramanujan_recursion(26).unwrap();
        assert_eq!(states.len(), 24);
        let at = |c: u32| states[(c - 3) as usize];
        assert_eq!(at(6), RecursionState { c: 6, x: 11, y: 2 });
        assert_eq!(at(8), RecursionState { c: 8, x: 53, y: 11 });
        assert_eq!(at(26), RecursionState { c: 26, x: 10010805, y: 1493338 });
        assert_eq!(ramanujan_recursion(3).unwrap().len(), 1);
    }

    #[test]
    fn solve_exact_examples() {
        let p7 = Poly::square(7).unwrap();
        let s = found(solve_exact(&p7, 3, 100).unwrap());
        assert_eq!((s.x, s.y, s.c), (1, 1, 3));
        let s = found(solve_exact(&p7, 6, 100).unwrap());
        assert_eq!((s.x, s.y, s.c), (21, 7, 6));
        assert_eq!(Some(21), scan(&p7, 6, 100));
        let p1 = Poly::square(1).unwrap();
        assert_eq!(solve_exact(&p1, 3, 1000).unwrap(), SolveOutcome::ProvenAbsent);
    }

    #[test]
    fn solve_exact_bound_too_small_is_inconclusive() {
        let p7 = Poly::square(7).unwrap();
        assert!(matches!(solve_exact(&p7, 15, 100), Err(Error::Inconclusive(_))));
        let s = found(solve_exact(&p7, 15, default_bound(15)).unwrap());
        assert_eq!((s.x, s.y), (181, 1));
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let p7 = Poly::square(7).unwrap();
        assert!(matches!(
            solve_exact_with_budget(&p7, 20, 1 << 22, 5),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn family_examples() {
        let s = found(solution_family(&Poly::square(3).unwrap(), 2, 4).unwrap());
        assert_eq!(s.family, ResidueClass::new(1, 1).unwrap());
        assert_eq!((s.x, s.y, s.c), (1, 1, 2));

        let s = found(solution_family(&Poly::square(4).unwrap(), 3, 4).unwrap());
        assert_eq!(s.family, ResidueClass::new(2, 2).unwrap());
        assert_eq!((s.x, s.y, s.c), (2, 1, 3));

        let s = found(solution_family(&Poly::cube(1).unwrap(), 4, 6).unwrap());
        assert_eq!(s.family, ResidueClass::new(15, 5).unwrap());
        assert_eq!((s.x, s.y, s.c), (15, 3376 / 16, 4));

        assert_eq!(
            solution_family(&Poly::square(1).unwrap(), 5, 4).unwrap(),
            SolveOutcome::ProvenAbsent
        );
        assert!(solution_family(&Poly::square(7).unwrap(), 12, 5).is_err());
    }

    #[test]
    fn zero_families() {
        let z = c_zero_family(&Poly::square(7).unwrap()).unwrap();
        assert_eq!(z.class, ResidueClass::new(0, 1).unwrap());
        assert_eq!((z.witness.x, z.witness.y, z.witness.c), (2, 11, 0));
        let z = c_zero_family(&Poly::square(4).unwrap()).unwrap();
        assert_eq!(z.class, ResidueClass::new(1, 1).unwrap());
        let z = c_zero_family(&Poly::cube(2).unwrap()).unwrap();
        assert_eq!((z.witness.x, z.witness.y, z.witness.c), (1, 3, 0));
    }

    #[test]
    fn table_rows() {
        let row = table_row(&Poly::square(16).unwrap(), 20).unwrap();
        assert_eq!(row.c_column(), "0, 2, 4, 5");
        assert_eq!(row.solutions_column(", "), "(1,17,0), (2,5,2), (8,5,4), (4,1,5)");
        let row = table_row(&Poly::cube(16).unwrap(), 20).unwrap();
        assert_eq!(row.solutions_column(" "), "(1,17,0) (2,3,3) (4,5,4)");
        let row = table_row(&Poly::square(11).unwrap(), 20).unwrap();
        assert_eq!(row.solutions_column(" "), "(2,15,0) (1,3,2)");

        let row = table_row(&Poly::square(7).unwrap(), 8).unwrap();
        assert!(!row.complete);
        assert_eq!(row.c_column(), "0, 3, 4, 5, 6, 7, 8, ...");
    }

    #[test]
    fn solutions_are_minimal() {
        for d in 1..=40 {
            for poly in [Poly::square(d).unwrap(), Poly::cube(d).unwrap()] {
                for c in 0..8 {
                    let expected = scan(&poly, c, 1 << 12);
                    match solve_exact(&poly, c, default_bound(c)).unwrap() {
                        SolveOutcome::Found(s) => {
                            assert_eq!(Some(s.x), expected, "{poly} c={c}");
                            assert!(s.satisfies(&poly));
                            assert_eq!(s.y % 2, 1);
                        }
                        SolveOutcome::ProvenAbsent => assert_eq!(expected, None, "{poly} c={c}"),
                    }
                }
            }
        }
    }
}
