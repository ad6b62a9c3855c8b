//! Koszul duality for `cAs`: the dual cooperad, its decomposition map,
//! the syzygy-degree homology of the bar construction, the dual operad
//! `cAs^!` and the curved A∞ relations.

mod ainfty;
mod dual;
mod dualop;
mod syzygy;

pub use ainfty::*;
pub use dual::*;
pub use dualop::*;
pub use syzygy::*;
