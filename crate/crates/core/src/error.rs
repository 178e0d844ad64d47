use thiserror::Error;

use crate::tree::ResidueClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("2-adic valuation of 0 is undefined")]
    ZeroValuation,
    #[error("exponent must be 2 or 3, got {0}")]
    UnsupportedExponent(u32),
    #[error("constant term D must be at least 1")]
    ZeroConstant,
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid residue class {residue} mod 2^{level}")]
    InvalidClass { residue: u128, level: u32 },
    #[error("node {0} is not unresolved")]
    NotUnresolved(ResidueClass),
    #[error("no node for class {0} in the expanded tree")]
    UnknownClass(ResidueClass),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
