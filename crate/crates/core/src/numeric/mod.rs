//! Numerical building blocks shared by the analysis modules.

pub mod quad;
pub mod root;
pub mod special;

pub use quad::{integrate, QuadOptions, QuadResult};
pub use root::{brent, expand_bracket};
