// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characterize;
pub mod distributions;
pub mod error;
pub mod estimate;
pub mod fit;
pub mod gof;
pub mod grai;
pub mod numeric;
pub mod orders;
pub mod sample;
pub mod tsv;

pub use characterize::{Anchor, ConditionReport, ConditionStatus, ReconstructedCdf};
pub use distributions::{CustomLifetime, Lifetime, ParametricFamily, Reciprocal};
pub use error::{Error, Result};
pub use estimate::{GridSpec, KdeModel};
pub use fit::{FitConfig, FitReport, LsFit, ModelKind};
pub use gof::{ChiSquareConfig, GofReport, KsPValue};
pub use grai::{GraiCurve, TabulatedCurve};
pub use orders::{OrderCheckResult, OrderDirection};
pub use sample::Sample;
