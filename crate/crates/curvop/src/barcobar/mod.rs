//! Bar and cobar constructions, the convolution curved Lie algebra,
//! twisting morphisms, and the bar-cobar counit.

mod bar;
mod cobar;
mod convolution;
mod counit;

pub use bar::*;
pub use cobar::*;
pub use convolution::*;
pub use counit::*;
