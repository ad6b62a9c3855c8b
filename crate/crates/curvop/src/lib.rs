//! Exact-arithmetic calculus for curved operads over complete filtered
//! graded modules.
//!
//! Everything is computed at an explicit finite truncation window and
//! every result records the window it is valid in. Coefficients are exact
//! rationals throughout.

pub mod barcobar;
pub mod cooperadcore;
pub mod filtcomplex;
pub mod koszul;
pub mod operadcore;
pub mod par;
pub mod planartree;

pub use filtcomplex::lincomb::{q, LinComb, Q};

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Truncation parameters of a construction: arity, number of tree
/// vertices, and filtration weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Truncation {
    pub max_arity: usize,
    pub max_weight: usize,
    pub max_filtration: u32,
}

impl Truncation {
    pub fn new(max_arity: usize, max_weight: usize, max_filtration: u32) -> Self {
        Truncation { max_arity, max_weight, max_filtration }
    }
}

impl std::fmt::Display for Truncation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "max-arity={} max-weight={} max-filtration={}", self.max_arity, self.max_weight, self.max_filtration)
    }
}
