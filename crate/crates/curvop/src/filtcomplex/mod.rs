//! Exact-rational linear algebra over filtered graded modules with
//! predifferentials.

pub mod echelon;
pub mod lincomb;
mod module;
mod signs;
mod standard;

pub use module::*;
pub use signs::{koszul_sign, koszul_sign_of_order};
pub use standard::{make_standard_complex, phi_map, StdKind};
