//! Node multisets, divided differences with repeated nodes and Hermite interpolation.

mod divided;
mod nodes;
mod whitney;

pub use divided::{
    divided_difference, hermite_interpolant, hermite_interpolant_on, hermite_residual,
    newton_coefficients, remainder_identity_check, HermiteResidual, RemainderCheck,
    NEAR_COINCIDENT,
};
pub(crate) use divided::mul_root;
pub use nodes::NodeMultiset;
pub use whitney::{pad_nodes, whitney_local, WhitneyReport};
