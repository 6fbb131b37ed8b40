//! Pointwise estimate ratios `|error|(x) / RHS(x)` and q-monotonicity checks.

mod kind;
mod measure;
mod qmono;

pub use kind::{EstimateKind, EstimateTag};
pub use measure::{measure, measure_with, MeasureOptions, PointStatus, RatioReport};
pub use qmono::{qmonotone_test, QmonotoneReport};
