//! Exact analysis of rank-2 spectral curves on the projective line: curve
//! invariants, blow-up lattices, WKB expansions of the quantum curve and the
//! topological recursion that reproduces them.

pub mod algebra;
pub mod checks;
pub mod curves;
pub mod lattice;
pub mod oracles;
pub mod par;
pub mod spectral;
pub mod toprec;
pub mod wkb;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is a square in the base field")]
    SquareRadicand(String),
    #[error("antiderivative would need a logarithm")]
    LogObstruction,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("odd valuation {0} has no square root in this chart")]
    OddValuation(i64),
    #[error("supplied root does not square to the leading coefficient")]
    WrongRoot,
    #[error("series of valuation {0} is not invertible under composition")]
    NotInvertible(i64),
    #[error("requested order exceeds the guaranteed truncation")]
    TruncationExhausted,
}

pub type Result<T> = std::result::Result<T, Error>;
