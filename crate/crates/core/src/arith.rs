//! Exact integer primitives: 2-adic valuation, power-of-two splitting and
//! evaluation of `x^e + D`.
//!
//! All arithmetic is on `u128` with checked operations. Every value the
//! library produces (tree residues below `2^40`, table witnesses around
//! `10^7`, census sweeps to `2^16` cubed) fits with a wide margin, and an
//! overflow is reported instead of wrapped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative integers handled by the library.
pub type Nat = u128;

/// Largest power of two dividing `n`.
pub fn nu2(n: Nat) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroValuation);
    }
    Ok(n.trailing_zeros())
}

/// `n = 2^two_exponent * odd_part` with `odd_part` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitForm {
    pub two_exponent: u32,
    pub odd_part: Nat,
}

impl SplitForm {
    pub fn reconstruct(&self) -> Option<Nat> {
        1u128
            .checked_shl(self.two_exponent)
            .filter(|_| self.two_exponent < 128)
            .and_then(|p| p.checked_mul(self.odd_part))
    }
}

pub fn split2(n: Nat) -> Result<SplitForm> {
    let two_exponent = nu2(n)?;
    Ok(SplitForm {
        two_exponent,
        odd_part: n >> two_exponent,
    })
}

/// Degree of the polynomial `x^e + D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Exponent {
    Square,
    Cube,
}

impl Exponent {
    pub fn value(self) -> u32 {
        match self {
            Exponent::Square => 2,
            Exponent::Cube => 3,
        }
    }
}

impl TryFrom<u32> for Exponent {
    type Error = Error;

    fn try_from(e: u32) -> Result<Self> {
        match e {
            2 => Ok(Exponent::Square),
            3 => Ok(Exponent::Cube),
            other => Err(Error::UnsupportedExponent(other)),
        }
    }
}

impl From<Exponent> for u32 {
    fn from(e: Exponent) -> u32 {
        e.value()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The polynomial `f(x) = x^e + D` with `D >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    exponent: Exponent,
    constant: Nat,
}

impl Poly {
    pub fn new(exponent: Exponent, constant: Nat) -> Result<Self> {
        if constant == 0 {
            return Err(Error::ZeroConstant);
        }
        Ok(Poly { exponent, constant })
    }

    pub fn square(constant: Nat) -> Result<Self> {
        Self::new(Exponent::Square, constant)
    }

    pub fn cube(constant: Nat) -> Result<Self> {
        Self::new(Exponent::Cube, constant)
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    pub fn constant(&self) -> Nat {
        self.constant
    }

    pub fn eval(&self, x: Nat) -> Result<Nat> {
        eval_poly(self.exponent, self.constant, x)
    }

    /// Exact valuation `nu2(f(x))`; never fails on the zero check since `f(x) >= 1`.
    pub fn valuation_at(&self, x: Nat) -> Result<u32> {
        Ok(self.eval(x)?.trailing_zeros())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} + {}", self.exponent, self.constant)
    }
}

pub fn eval_poly(exponent: Exponent, constant: Nat, x: Nat) -> Result<Nat> {
    if constant == 0 {
        return Err(Error::ZeroConstant);
    }
    x.checked_pow(exponent.value())
        .and_then(|p| p.checked_add(constant))
        .ok_or(Error::Overflow("x^e + D"))
}

/// `2^k` as a `Nat`, failing past 127.
pub fn pow2(k: u32) -> Result<Nat> {
    1u128.checked_shl(k).filter(|_| k < 128).ok_or(Error::Overflow("2^k"))
}
