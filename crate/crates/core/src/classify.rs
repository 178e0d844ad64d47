//! Finite/infinite verdicts for valuation trees, read off the normal form
//! `D = 2^a * m` (`m` odd), together with the admissible exponents `c`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{split2, Exponent, Nat, Poly, SplitForm};
use crate::error::Result;
use crate::tree::{Limits, ResidueClass, ValuationTree};

/// Depth used when a c-range has to be read off an expanded tree.
pub const CLASSIFY_DEPTH: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeKind {
    Finite,
    Infinite,
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeKind::Finite => "finite",
            TreeKind::Infinite => "infinite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// Follows from a closed-form theorem.
    Proven,
    /// Read off a fully resolved tree.
    TreeComputed,
    /// Read off a truncated infinite tree; the tail is not certified.
    Partial,
}

/// Admissible exponents `c`: `explicit`, plus every `c >= tail_from` when set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CRange {
    pub explicit: BTreeSet<u32>,
    pub tail_from: Option<u32>,
    pub excluded: BTreeSet<u32>,
    pub certainty: Certainty,
    /// Tree depth the range was computed from, when it came from a tree.
    pub depth: Option<u32>,
}

impl CRange {
    fn proven(explicit: impl IntoIterator<Item = u32>) -> Self {
        let explicit: BTreeSet<u32> = explicit.into_iter().collect();
        let top = explicit.iter().max().copied().unwrap_or(0);
        let excluded = (0..top).filter(|c| !explicit.contains(c)).collect();
        CRange {
            explicit,
            tail_from: None,
            excluded,
            certainty: Certainty::Proven,
            depth: None,
        }
    }

    pub fn contains(&self, c: u32) -> bool {
        self.explicit.contains(&c) || self.tail_from.is_some_and(|t| c >= t)
    }
}

impl fmt::Display for CRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.explicit.iter().map(u32::to_string).collect();
        if let Some(t) = self.tail_from {
            parts.push(format!("{}", t));
            parts.push(format!("{}", t + 1));
            parts.push("...".into());
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Which closed-form family `D` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Form {
    /// `x^2 + D`, `D = 4^k (8j + 7)`.
    QuadraticInfinite { k: u32, j: Nat },
    QuadraticFinite,
    /// `x^3 + D`, `D = 8^k (2j + 1)`.
    CubicInfinite { k: u32, j: Nat },
    /// `D = 2 (2j + 1)`.
    CubicTwiceOdd { j: Nat },
    /// `D = 4 (2j + 1)`.
    CubicFourTimesOdd { j: Nat },
    /// `D = 2^(3k + i)`, `k >= 1`, `i ∈ {1, 2}`.
    CubicPurePower { k: u32, i: u32 },
    /// `D = 2^(3k + i) m` with `k >= 1` and odd `m > 1`; no closed form.
    CubicMixed { k: u32, i: u32, odd_part: Nat },
}

impl Form {
    /// `(k, j)` for the infinite families.
    pub fn parameters(&self) -> Option<(u32, Nat)> {
        match *self {
            Form::QuadraticInfinite { k, j } | Form::CubicInfinite { k, j } => Some((k, j)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub exponent: Exponent,
    pub constant: Nat,
    pub kind: TreeKind,
    pub normal_form: SplitForm,
    pub form: Form,
    pub c_range: CRange,
}

impl Classification {
    pub fn parameters(&self) -> Option<(u32, Nat)> {
        self.form.parameters()
    }
}

/// Closed-form family of `poly`, without touching the tree.
pub fn form_of(poly: &Poly) -> Form {
    let SplitForm {
        two_exponent: a,
        odd_part: m,
    } = split2(poly.constant()).expect("D >= 1");
    match poly.exponent() {
        Exponent::Square => {
            if a % 2 == 0 && m % 8 == 7 {
                Form::QuadraticInfinite { k: a / 2, j: m / 8 }
            } else {
                Form::QuadraticFinite
            }
        }
        Exponent::Cube => match (a / 3, a % 3) {
            (k, 0) => Form::CubicInfinite { k, j: m / 2 },
            (0, 1) => Form::CubicTwiceOdd { j: m / 2 },
            (0, _) => Form::CubicFourTimesOdd { j: m / 2 },
            (k, i) if m == 1 => Form::CubicPurePower { k, i },
            (k, i) => Form::CubicMixed { k, i, odd_part: m },
        },
    }
}

pub fn tree_kind(poly: &Poly) -> TreeKind {
    match form_of(poly) {
        Form::QuadraticInfinite { .. } | Form::CubicInfinite { .. } => TreeKind::Infinite,
        _ => TreeKind::Finite,
    }
}

/// c-range read off a tree expanded to `depth`.
fn tree_range(poly: &Poly, depth: u32) -> Result<CRange> {
    let tree = ValuationTree::build(*poly, Limits::depth(depth))?;
    let vs = tree.valuation_set();
    match vs.decided_below() {
        None => {
            let mut range = CRange::proven(vs.achieved);
            range.certainty = Certainty::TreeComputed;
            range.depth = Some(tree.depth());
            Ok(range)
        }
        Some(decided) => {
            // Longest run of achieved values ending just below the frontier.
            let mut tail = decided;
            while tail > 0 && vs.achieved.contains(&(tail - 1)) {
                tail -= 1;
            }
            Ok(CRange {
                explicit: vs.achieved.range(..tail).copied().collect(),
                tail_from: Some(tail),
                excluded: (0..tail).filter(|c| !vs.achieved.contains(c)).collect(),
                certainty: Certainty::Partial,
                depth: Some(tree.depth()),
            })
        }
    }
}

pub fn classify_quadratic(constant: Nat) -> Result<Classification> {
    classify_with_depth(&Poly::square(constant)?, CLASSIFY_DEPTH)
}

pub fn classify_cubic(constant: Nat) -> Result<Classification> {
    classify_with_depth(&Poly::cube(constant)?, CLASSIFY_DEPTH)
}

pub fn classify(poly: &Poly) -> Result<Classification> {
    classify_with_depth(poly, CLASSIFY_DEPTH)
}

/// Classification whose tree-derived ranges use a tree of the given depth.
pub fn classify_with_depth(poly: &Poly, depth: u32) -> Result<Classification> {
    let normal_form = split2(poly.constant())?;
    let form = form_of(poly);
    let c_range = match form {
        Form::QuadraticInfinite { k: 0, .. } => {
            let mut range = tree_range(poly, depth)?;
            // x odd gives x^2 + 8j + 7 = 8((x^2 - 1)/8 + j + 1).
            debug_assert!(range.excluded.is_superset(&BTreeSet::from([1, 2])));
            if poly.constant() == 7 {
                range.certainty = Certainty::Proven;
            }
            range
        }
        Form::QuadraticInfinite { .. } | Form::CubicInfinite { .. } => tree_range(poly, depth)?,
        Form::QuadraticFinite | Form::CubicMixed { .. } => tree_range(poly, depth)?,
        Form::CubicTwiceOdd { .. } => CRange::proven([0, 1]),
        Form::CubicFourTimesOdd { .. } => CRange::proven([0, 2]),
        Form::CubicPurePower { k, i } => {
            CRange::proven(std::iter::once(0).chain((1..=k).map(|l| 3 * l)).chain([3 * k + i]))
        }
    };
    Ok(Classification {
        exponent: poly.exponent(),
        constant: poly.constant(),
        kind: tree_kind(poly),
        normal_form,
        form,
        c_range,
    })
}

/// Parity class on which `f` is odd: `x^e + D` is odd iff `x` and `D`
/// have different parity.
pub fn zero_class(poly: &Poly) -> ResidueClass {
    ResidueClass {
        residue: (poly.constant() + 1) % 2,
        level: 1,
    }
}

/// The residue class carrying every solution with exponent `c`, when a
/// closed-form result pins it down.
pub fn predicted_solution_form(poly: &Poly, c: u32) -> Option<ResidueClass> {
    let class = |residue: Nat, level: u32| ResidueClass::new(residue, level).ok();
    if c == 0 {
        return Some(zero_class(poly));
    }
    match (poly.exponent(), poly.constant()) {
        (Exponent::Square, 1) if c == 1 => class(1, 1),
        (Exponent::Square, 3) if c == 2 => class(1, 1),
        (Exponent::Square, 4) if c == 2 => class(0, 2),
        (Exponent::Square, 4) if c == 3 => class(2, 2),
        // x ≡ 2^c - 1 (mod 2^(c+1)) for x^3 + 1.
        (Exponent::Cube, 1) => class((1u128 << c) - 1, c + 1),
        (Exponent::Cube, _) => match form_of(poly) {
            Form::CubicTwiceOdd { .. } if c == 1 => class(0, 1),
            Form::CubicFourTimesOdd { .. } if c == 2 => class(0, 1),
            Form::CubicPurePower { k, i } => {
                if c.is_multiple_of(3) && (1..=k).contains(&(c / 3)) {
                    let l = c / 3;
                    class(1u128 << l, l + 1)
                } else if c == 3 * k + i {
                    class(0, k + 1)
                } else {
                    None
                }
            }
            _ => None,
        },
        _ => None,
    }
}
