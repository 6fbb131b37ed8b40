//! Constructive Hermite-interpolating approximation on Chebyshev partitions.

mod assemble;
mod minimax;
mod piecewise;
mod sjet;
mod step;

pub use assemble::{assemble_pn, boolean_sum_endpoint, construct, ConstructMeta, ConstructOptions, ConstructedPn};
pub use minimax::{constrained_minimax, MinimaxResult};
pub use piecewise::{build_s, LocalFit, PiecewiseS, SOptions, SpecialInterval};
pub use step::{
    build_r_j, build_step_poly, kernel_power, DecayReport, Families, KernelFamily, RStep, StepApproximant, StepKernel,
    StepKind,
};
